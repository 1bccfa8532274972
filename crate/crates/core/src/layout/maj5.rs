use serde::{Deserialize, Serialize};

use super::{Cell, Layout, PITCH_NM};
use crate::error::{Error, Result};

/// Geometry of a 10-cell five-input majority gate in grid units relative to
/// the gate center, `+y` south.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Maj5Template {
    /// Input offsets, labelled `a`..`e` in this order.
    pub inputs: [(i32, i32); 5],
    pub devices: [(i32, i32); 4],
    pub output: (i32, i32),
}

impl Default for Maj5Template {
    /// A cross of device cells: the stem input on the axis, one input in
    /// each upper corner of the cross, one at each arm tip, output below.
    fn default() -> Self {
        Self {
            inputs: [(-2, 0), (-1, -1), (0, -2), (1, -1), (2, 0)],
            devices: [(0, -1), (-1, 0), (0, 0), (1, 0)],
            output: (0, 1),
        }
    }
}

pub const MAJ5_INPUT_LABELS: [&str; 5] = ["a", "b", "c", "d", "e"];

impl Maj5Template {
    fn all_cells(&self) -> Vec<(i32, i32)> {
        let mut v: Vec<_> = self.inputs.iter().chain(&self.devices).copied().collect();
        v.push(self.output);
        v
    }

    /// Offsets must be distinct and the cell set mirror-symmetric about
    /// `x = 0` with the output on the axis.
    pub fn validate(&self) -> Result<()> {
        let cells = self.all_cells();
        for (i, a) in cells.iter().enumerate() {
            if cells[..i].contains(a) {
                return Err(Error::InvalidLayout(format!("template offset {a:?} used twice")));
            }
        }
        if self.output.0 != 0 {
            return Err(Error::InvalidLayout("template output must sit on the axis".into()));
        }
        let mirrored = |set: &[(i32, i32)]| set.iter().all(|&(x, y)| set.contains(&(-x, y)));
        if !mirrored(&self.inputs) || !mirrored(&self.devices) {
            return Err(Error::InvalidLayout("template is not mirror-symmetric".into()));
        }
        Ok(())
    }

    /// Index of the input at the mirror position of input `k`.
    pub fn mirror_of(&self, k: usize) -> usize {
        let (x, y) = self.inputs[k];
        self.inputs.iter().position(|&p| p == (-x, y)).unwrap_or(k)
    }
}

fn at(center: (f64, f64), (gx, gy): (i32, i32)) -> (f64, f64) {
    (center.0 + gx as f64 * PITCH_NM, center.1 + gy as f64 * PITCH_NM)
}

/// Places the gate: inputs `a`..`e`, four device cells, output `out`.
pub fn gen_maj5(template: &Maj5Template, center: (f64, f64), clock_zone: u8) -> Result<Layout> {
    template.validate()?;
    let mut l = Layout::new("maj5");
    for (k, &off) in template.inputs.iter().enumerate() {
        let (x, y) = at(center, off);
        l.push(Cell::input(x, y, MAJ5_INPUT_LABELS[k]));
    }
    for &off in &template.devices {
        let (x, y) = at(center, off);
        l.push(Cell::new(x, y, clock_zone));
    }
    let (x, y) = at(center, template.output);
    l.push(Cell::output(x, y, clock_zone, "out"));
    Ok(l)
}

/// Three-input AND built from the gate by pinning two inputs to `-1`.
///
/// `pair` names a mirrored input pair that stays live as `A` (west) and
/// `C` (east); `b` is the third live input `B`. The other two inputs are
/// fixed.
pub fn and3_gate(template: &Maj5Template, pair: usize, b: usize) -> Result<Layout> {
    template.validate()?;
    let partner = template.mirror_of(pair);
    if partner == pair || pair == b || partner == b {
        return Err(Error::InvalidLayout("AND3 needs a mirrored live pair and a distinct third input".into()));
    }
    let (west, east) = if template.inputs[pair].0 < 0 { (pair, partner) } else { (partner, pair) };
    let mut l = gen_maj5(template, (0.0, 0.0), 0)?;
    l.name = "and3".into();
    for (k, cell) in l.cells.iter_mut().take(5).enumerate() {
        if k == west {
            cell.label = Some("A".into());
        } else if k == east {
            cell.label = Some("C".into());
        } else if k == b {
            cell.label = Some("B".into());
        } else {
            *cell = Cell::fixed(cell.x, cell.y, -1.0);
        }
    }
    Ok(l)
}

//! Geometric QCA cell model.
//!
//! Coordinates are cell centers in nanometres with `y` growing southward, so
//! "north" is `-y`. Generated layouts sit on a square grid of [`PITCH_NM`].

mod circuits;
mod maj5;
mod grid;
mod metrics;
mod primitives;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use circuits::{gen_circuit, gen_ripple, CircuitKind};
pub use maj5::{and3_gate, gen_maj5, Maj5Template, MAJ5_INPUT_LABELS};
pub use grid::{from_grid, Glyph};
pub use metrics::{layout_metrics, zone_timing, LayoutMetrics, ZoneTiming};
pub use primitives::{
    gen_inverter, gen_maj3, gen_multilayer_crossing, gen_coplanar_crossing, gen_wire, Direction,
};

/// Grid pitch for 18 nm cells with a 2 nm gap.
pub const PITCH_NM: f64 = 20.0;
pub const CELL_SIZE_NM: f64 = 18.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Normal,
    Input,
    Output,
    Fixed,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Rotation {
    #[default]
    Deg0,
    Deg45,
}

impl Serialize for Rotation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(match self {
            Rotation::Deg0 => 0,
            Rotation::Deg45 => 45,
        })
    }
}

impl<'de> Deserialize<'de> for Rotation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match u32::deserialize(d)? {
            0 => Ok(Rotation::Deg0),
            45 => Ok(Rotation::Deg45),
            other => Err(serde::de::Error::custom(format!("rotation must be 0 or 45, got {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub layer: u32,
    pub clock: u8,
    pub kind: CellKind,
    #[serde(default)]
    pub rotation: Rotation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Cell {
    pub fn new(x: f64, y: f64, clock: u8) -> Self {
        Self {
            x,
            y,
            layer: 0,
            clock,
            kind: CellKind::Normal,
            rotation: Rotation::Deg0,
            polarization: None,
            label: None,
        }
    }

    pub fn input(x: f64, y: f64, label: &str) -> Self {
        Self { kind: CellKind::Input, label: Some(label.to_string()), ..Self::new(x, y, 0) }
    }

    pub fn output(x: f64, y: f64, clock: u8, label: &str) -> Self {
        Self { kind: CellKind::Output, label: Some(label.to_string()), ..Self::new(x, y, clock) }
    }

    pub fn fixed(x: f64, y: f64, polarization: f64) -> Self {
        Self { kind: CellKind::Fixed, polarization: Some(polarization), ..Self::new(x, y, 0) }
    }

    pub fn rotated(mut self) -> Self {
        self.rotation = Rotation::Deg45;
        self
    }

    pub fn on_layer(mut self, layer: u32) -> Self {
        self.layer = layer;
        self
    }

    pub fn labeled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    /// Whether the simulator updates this cell.
    pub fn is_free(&self) -> bool {
        matches!(self.kind, CellKind::Normal | CellKind::Output)
    }

    pub fn planar_distance(&self, other: &Cell) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Layout {
    pub name: String,
    pub cells: Vec<Cell>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl Layout {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), ..Default::default() }
    }

    pub fn push(&mut self, cell: Cell) -> usize {
        self.cells.push(cell);
        self.cells.len() - 1
    }

    /// Appends every cell of `other`, shifted by `(dx, dy)`.
    pub fn extend_shifted(&mut self, other: &Layout, dx: f64, dy: f64) {
        self.cells.extend(other.cells.iter().map(|c| Cell { x: c.x + dx, y: c.y + dy, ..c.clone() }));
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.label.as_deref() == Some(label))
    }

    pub fn labels_of(&self, kind: CellKind) -> Vec<String> {
        self.cells
            .iter()
            .filter(|c| c.kind == kind)
            .filter_map(|c| c.label.clone())
            .collect()
    }

    pub fn layer_count(&self) -> usize {
        self.cells.iter().map(|c| c.layer).collect::<HashSet<_>>().len()
    }

    /// Reflection about the vertical line `x = axis_x`.
    pub fn mirrored(&self, axis_x: f64) -> Layout {
        let mut out = self.clone();
        for c in &mut out.cells {
            c.x = 2.0 * axis_x - c.x;
        }
        out
    }

    /// Checks the structural invariants.
    ///
    /// Same-layer centers must be at least one cell width apart; labels are
    /// unique; clock zones in use form `0..k`; fixed cells carry `+-1`.
    pub fn validate(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(Error::InvalidLayout("layout has no cells".into()));
        }
        let mut labels = HashSet::new();
        for (i, c) in self.cells.iter().enumerate() {
            if c.clock > 3 {
                return Err(Error::InvalidLayout(format!("cell {i} has clock zone {}", c.clock)));
            }
            match c.kind {
                CellKind::Fixed => match c.polarization {
                    Some(p) if p == 1.0 || p == -1.0 => {}
                    _ => return Err(Error::InvalidLayout(format!("fixed cell {i} needs polarization +-1"))),
                },
                CellKind::Input | CellKind::Output if c.label.is_none() => {
                    return Err(Error::InvalidLayout(format!("I/O cell {i} has no label")));
                }
                _ => {}
            }
            if let Some(l) = &c.label {
                if !labels.insert(l.as_str()) {
                    return Err(Error::InvalidLayout(format!("duplicate label `{l}`")));
                }
            }
        }
        if let Some((i, j)) = self.first_overlap() {
            return Err(Error::InvalidLayout(format!("cells {i} and {j} overlap")));
        }
        let zones: HashSet<u8> = self.cells.iter().filter(|c| c.is_free()).map(|c| c.clock).collect();
        if let Some(&max) = zones.iter().max() {
            if (0..=max).any(|z| !zones.contains(&z)) {
                return Err(Error::InvalidLayout(format!("clock zones {zones:?} are not contiguous from 0")));
            }
        }
        Ok(())
    }

    /// First pair of same-layer cells whose centers are closer than a cell width.
    pub fn first_overlap(&self) -> Option<(usize, usize)> {
        let limit = CELL_SIZE_NM - 1e-9;
        for i in 0..self.cells.len() {
            for j in (i + 1)..self.cells.len() {
                let (a, b) = (&self.cells[i], &self.cells[j]);
                if a.layer == b.layer && a.planar_distance(b) < limit {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_rejected() {
        let mut l = Layout::new("dup");
        l.push(Cell::input(0.0, 0.0, "a"));
        l.push(Cell::output(20.0, 0.0, 0, "a"));
        assert!(l.validate().is_err());
    }

    #[test]
    fn overlap_rejected() {
        let mut l = Layout::new("ov");
        l.push(Cell::input(0.0, 0.0, "a"));
        l.push(Cell::new(10.0, 0.0, 0));
        assert!(l.validate().is_err());
        l.cells[1].layer = 2;
        assert!(l.validate().is_ok());
    }

    #[test]
    fn zone_gap_rejected() {
        let mut l = Layout::new("gap");
        l.push(Cell::input(0.0, 0.0, "a"));
        l.push(Cell::new(20.0, 0.0, 0));
        l.push(Cell::new(40.0, 0.0, 2));
        assert!(l.validate().is_err());
    }

    #[test]
    fn fixed_needs_polarization() {
        let mut l = Layout::new("fx");
        let mut c = Cell::fixed(0.0, 0.0, 1.0);
        c.polarization = Some(0.3);
        l.push(c);
        assert!(l.validate().is_err());
    }

    #[test]
    fn json_field_order_is_stable() {
        let mut l = Layout::new("one");
        l.push(Cell::input(0.0, 0.0, "a"));
        let text = l.to_json().unwrap();
        let x = text.find("\"x\"").unwrap();
        let kind = text.find("\"kind\"").unwrap();
        let label = text.find("\"label\"").unwrap();
        assert!(x < kind && kind < label);
        assert!(text.contains("\"clock\": 0"));
        assert_eq!(Layout::from_json(&text).unwrap(), l);
    }

    #[test]
    fn rotation_serializes_as_degrees() {
        let c = Cell::new(0.0, 0.0, 0).rotated();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["rotation"], 45);
        let bad = r#"{"x":0,"y":0,"layer":0,"clock":0,"kind":"normal","rotation":30}"#;
        assert!(serde_json::from_str::<Cell>(bad).is_err());
    }
}

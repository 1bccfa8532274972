use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{CellKind, Layout, CELL_SIZE_NM, PITCH_NM};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutMetrics {
    pub cell_count: usize,
    pub area_um2: f64,
    pub delay_zones: usize,
    pub layer_count: usize,
}

/// Pipeline position of every cell.
///
/// A cell's index counts clock zones along the signal path: entering from
/// an input at zone `k` gives index `k`, and each step into the next zone
/// adds one. The index is always congruent to the cell's zone mod 4.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneTiming {
    /// Latest arrival over all inputs (`None` if no input reaches the cell).
    pub index: Vec<Option<usize>>,
    /// Output label with its index, in cell order.
    pub outputs: Vec<(String, usize)>,
    pub delay_zones: usize,
    /// Clock cycles an input vector must be held so every cell that reads a
    /// neighbor from an earlier wave still sees the same vector.
    pub hold_cycles: usize,
}

fn neighbors(layout: &Layout) -> Vec<Vec<usize>> {
    let reach = 1.5 * PITCH_NM;
    let n = layout.cells.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&layout.cells[i], &layout.cells[j]);
            let d = a.planar_distance(b);
            let linked = if a.layer == b.layer {
                d <= reach
            } else {
                d < 1.0 && a.layer.abs_diff(b.layer) == 1
            };
            if linked {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

pub fn zone_timing(layout: &Layout) -> ZoneTiming {
    let cells = &layout.cells;
    let adj = neighbors(layout);
    let mut index: Vec<Option<usize>> = vec![None; cells.len()];
    let inputs: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].kind == CellKind::Input).collect();
    for &src in &inputs {
        let mut dist = vec![usize::MAX; cells.len()];
        let mut heap = BinaryHeap::new();
        for &n in &adj[src] {
            if cells[n].is_free() {
                let d = cells[n].clock as usize;
                if d < dist[n] {
                    dist[n] = d;
                    heap.push(Reverse((d, n)));
                }
            }
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &v in &adj[u] {
                if !cells[v].is_free() {
                    continue;
                }
                let (cu, cv) = (cells[u].clock, cells[v].clock);
                let step = if cv == cu {
                    0
                } else if cv == (cu + 1) % 4 {
                    1
                } else {
                    continue;
                };
                if d + step < dist[v] {
                    dist[v] = d + step;
                    heap.push(Reverse((d + step, v)));
                }
            }
        }
        for (slot, &d) in index.iter_mut().zip(&dist) {
            if d != usize::MAX {
                *slot = Some(slot.map_or(d, |old| old.max(d)));
            }
        }
    }
    let outputs: Vec<(String, usize)> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == CellKind::Output)
        .filter_map(|(i, c)| Some((c.label.clone()?, index[i]?)))
        .collect();
    let delay_zones = outputs.iter().map(|(_, k)| k + 1).max().unwrap_or(0);
    // A cell whose index exceeds what a predecessor delivers reads that
    // predecessor on a later wave, so the vector must still be applied then.
    let mut latest_stale = 0;
    for (c, cell) in cells.iter().enumerate() {
        let Some(k) = index[c] else { continue };
        if !cell.is_free() {
            continue;
        }
        for &r in &adj[c] {
            let delivered = if cells[r].kind == CellKind::Input {
                Some(cell.clock as usize)
            } else if !cells[r].is_free() {
                None
            } else {
                let (cr, cc) = (cells[r].clock, cell.clock);
                let step = if cc == cr { Some(0) } else if cc == (cr + 1) % 4 { Some(1) } else { None };
                step.and_then(|s| index[r].map(|i| i + s))
            };
            if delivered.is_some_and(|d| d < k) {
                latest_stale = latest_stale.max(k);
            }
        }
    }
    let hold_cycles = 1 + latest_stale / 4;
    ZoneTiming { index, outputs, delay_zones, hold_cycles }
}

pub fn layout_metrics(layout: &Layout) -> Result<LayoutMetrics> {
    if layout.cells.is_empty() {
        return Err(Error::InvalidLayout("empty layout has no metrics".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for c in &layout.cells {
        x0 = x0.min(c.x);
        x1 = x1.max(c.x);
        y0 = y0.min(c.y);
        y1 = y1.max(c.y);
    }
    let area_nm2 = (x1 - x0 + CELL_SIZE_NM) * (y1 - y0 + CELL_SIZE_NM);
    Ok(LayoutMetrics {
        cell_count: layout.cells.len(),
        area_um2: area_nm2 * 1e-6,
        delay_zones: zone_timing(layout).delay_zones,
        layer_count: layout.layer_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{gen_maj3, gen_wire, Cell, Direction, Rotation};
    use super::*;

    #[test]
    fn single_cell_area() {
        let mut l = Layout::new("one");
        l.push(Cell::input(0.0, 0.0, "a"));
        let m = layout_metrics(&l).unwrap();
        assert_eq!(m.cell_count, 1);
        assert!((m.area_um2 - 3.24e-4).abs() < 1e-12);
    }

    #[test]
    fn empty_layout_errors() {
        assert!(layout_metrics(&Layout::new("none")).is_err());
    }

    #[test]
    fn uniform_maj3_has_one_zone() {
        let m = layout_metrics(&gen_maj3((0.0, 0.0), 0)).unwrap();
        assert_eq!(m.delay_zones, 1);
        assert_eq!(m.cell_count, 5);
    }

    #[test]
    fn zoned_wire_counts_transitions() {
        let w = gen_wire((0.0, 0.0), Direction::E, 9, Rotation::Deg0, &[0, 0, 0, 1, 1, 2, 2, 3, 0]).unwrap();
        let t = zone_timing(&w);
        assert_eq!(t.outputs, vec![("out".to_string(), 4)]);
        assert_eq!(t.delay_zones, 5);
        assert_eq!(t.hold_cycles, 1);
    }

    #[test]
    fn late_reader_extends_hold() {
        // `b` joins a wire whose head has already crossed four zones
        let mut w = gen_wire((0.0, 0.0), Direction::E, 7, Rotation::Deg0, &[0, 1, 2, 3, 0, 0, 0]).unwrap();
        w.push(Cell::input(100.0, 20.0, "b"));
        let t = zone_timing(&w);
        assert_eq!(t.hold_cycles, 2);
    }

    #[test]
    fn backward_zones_do_not_propagate() {
        let w = gen_wire((0.0, 0.0), Direction::E, 4, Rotation::Deg0, &[0, 2, 1, 0]).unwrap();
        let t = zone_timing(&w);
        // 2 -> 1 is not a forward step, so `out` is unreachable
        assert!(t.outputs.is_empty());
    }
}

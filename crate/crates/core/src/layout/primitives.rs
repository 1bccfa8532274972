use serde::{Deserialize, Serialize};

use super::{Cell, Layout, Rotation, PITCH_NM};
use crate::error::{Error, Result};

/// Compass direction on the layout plane (north is `-y`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    N,
    S,
    E,
    W,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::N, Direction::S, Direction::E, Direction::W];

    /// Unit step `(dx, dy)`.
    pub fn unit(self) -> (f64, f64) {
        match self {
            Direction::N => (0.0, -1.0),
            Direction::S => (0.0, 1.0),
            Direction::E => (1.0, 0.0),
            Direction::W => (-1.0, 0.0),
        }
    }

    /// Reflection about a vertical axis.
    pub fn mirrored(self) -> Direction {
        match self {
            Direction::E => Direction::W,
            Direction::W => Direction::E,
            d => d,
        }
    }

    pub fn from_char(c: char) -> Option<Direction> {
        match c.to_ascii_uppercase() {
            'N' => Some(Direction::N),
            'S' => Some(Direction::S),
            'E' => Some(Direction::E),
            'W' => Some(Direction::W),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Direction::N => 'N',
            Direction::S => 'S',
            Direction::E => 'E',
            Direction::W => 'W',
        }
    }
}

/// A straight wire of `length` cells; the first is an `Input` labelled
/// `in`, the last an `Output` labelled `out`. `clock_zones[k]` is the zone
/// of cell `k`; a short schedule repeats its last entry.
pub fn gen_wire(
    start: (f64, f64),
    direction: Direction,
    length: usize,
    rotation: Rotation,
    clock_zones: &[u8],
) -> Result<Layout> {
    if length < 2 {
        return Err(Error::InvalidLayout(format!("a wire needs at least 2 cells, got {length}")));
    }
    let (ux, uy) = direction.unit();
    let zone = |k: usize| clock_zones.get(k).or(clock_zones.last()).copied().unwrap_or(0);
    let mut layout = Layout::new(match rotation {
        Rotation::Deg0 => "wire90",
        Rotation::Deg45 => "wire45",
    });
    for k in 0..length {
        let (x, y) = (start.0 + ux * PITCH_NM * k as f64, start.1 + uy * PITCH_NM * k as f64);
        let mut cell = if k == 0 {
            Cell::input(x, y, "in")
        } else if k + 1 == length {
            Cell::output(x, y, zone(k), "out")
        } else {
            Cell::new(x, y, zone(k))
        };
        cell.rotation = rotation;
        layout.push(cell);
    }
    Ok(layout)
}

/// Five-cell majority cross: inputs `a` (N), `b` (W), `c` (S), device cell
/// at `center`, output `out` (E).
pub fn gen_maj3(center: (f64, f64), clock_zone: u8) -> Layout {
    let (x, y) = center;
    let p = PITCH_NM;
    let mut l = Layout::new("maj3");
    l.push(Cell::input(x, y - p, "a"));
    l.push(Cell::input(x - p, y, "b"));
    l.push(Cell::input(x, y + p, "c"));
    l.push(Cell::new(x, y, clock_zone));
    l.push(Cell::output(x + p, y, clock_zone, "out"));
    l
}

/// Forked inverter: the input wire splits into two arms whose ends couple
/// diagonally onto the output wire.
pub fn gen_inverter(origin: (f64, f64), clock_zone: u8) -> Layout {
    let (x, y) = origin;
    let p = PITCH_NM;
    let mut l = Layout::new("inverter");
    l.push(Cell::input(x, y, "in"));
    for (dx, dy) in [(1.0, 0.0), (2.0, 0.0), (2.0, -1.0), (2.0, 1.0), (3.0, -1.0), (3.0, 1.0), (4.0, 0.0)] {
        l.push(Cell::new(x + dx * p, y + dy * p, clock_zone));
    }
    l.push(Cell::output(x + 5.0 * p, y, clock_zone, "out"));
    l
}

/// Two crossing wires, the vertical one lifted to layer 2 through layer-1
/// vias. Horizontal: `h_in` to `h_out`; vertical: `v_in` to `v_out`.
pub fn gen_multilayer_crossing(clock_zone: u8) -> Layout {
    let p = PITCH_NM;
    let mut l = Layout::new("crossing_multilayer");
    l.push(Cell::input(-3.0 * p, 0.0, "h_in"));
    for k in -2..=2 {
        l.push(Cell::new(k as f64 * p, 0.0, clock_zone));
    }
    l.push(Cell::output(3.0 * p, 0.0, clock_zone, "h_out"));

    l.push(Cell::input(0.0, -4.0 * p, "v_in"));
    l.push(Cell::new(0.0, -3.0 * p, clock_zone));
    for layer in 1..=2 {
        l.push(Cell::new(0.0, -3.0 * p, clock_zone).on_layer(layer));
    }
    for k in -2..=2 {
        l.push(Cell::new(0.0, k as f64 * p, clock_zone).on_layer(2));
    }
    for layer in (1..=2).rev() {
        l.push(Cell::new(0.0, 3.0 * p, clock_zone).on_layer(layer));
    }
    l.push(Cell::new(0.0, 3.0 * p, clock_zone));
    l.push(Cell::output(0.0, 4.0 * p, clock_zone, "v_out"));
    l
}

/// Coplanar crossing: a rotated vertical wire passes through a gap in a
/// horizontal 90-degree wire, sharing the crossing site.
pub fn gen_coplanar_crossing(clock_zone: u8) -> Layout {
    let p = PITCH_NM;
    let mut l = Layout::new("crossing_coplanar");
    l.push(Cell::input(-4.0 * p, 0.0, "h_in"));
    for k in [-3, -2, -1, 1, 2, 3] {
        l.push(Cell::new(k as f64 * p, 0.0, clock_zone));
    }
    l.push(Cell::output(4.0 * p, 0.0, clock_zone, "h_out"));
    l.push(Cell::input(0.0, -4.0 * p, "v_in").rotated());
    for k in -3..=3 {
        l.push(Cell::new(0.0, k as f64 * p, clock_zone).rotated());
    }
    l.push(Cell::output(0.0, 4.0 * p, clock_zone, "v_out").rotated());
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_shape() {
        let w = gen_wire((0.0, 0.0), Direction::E, 5, Rotation::Deg0, &[0]).unwrap();
        assert_eq!(w.cells.len(), 5);
        assert_eq!(w.layer_count(), 1);
        assert_eq!(w.cells[4].x, 80.0);
        w.validate().unwrap();
    }

    #[test]
    fn wire_zone_schedule_repeats_last() {
        let w = gen_wire((0.0, 0.0), Direction::S, 4, Rotation::Deg0, &[0, 1]).unwrap();
        let zones: Vec<u8> = w.cells.iter().map(|c| c.clock).collect();
        assert_eq!(zones, vec![0, 1, 1, 1]);
        assert_eq!(w.cells[3].y, 60.0);
    }

    #[test]
    fn zero_length_wire_rejected() {
        assert!(gen_wire((0.0, 0.0), Direction::E, 0, Rotation::Deg0, &[0]).is_err());
    }

    #[test]
    fn crossings_validate() {
        let m = gen_multilayer_crossing(0);
        m.validate().unwrap();
        assert_eq!(m.layer_count(), 3);
        let c = gen_coplanar_crossing(0);
        c.validate().unwrap();
        assert_eq!(c.layer_count(), 1);
    }

    #[test]
    fn maj3_and_inverter_validate() {
        gen_maj3((0.0, 0.0), 0).validate().unwrap();
        gen_inverter((0.0, 0.0), 0).validate().unwrap();
    }

    #[test]
    fn direction_mirror_is_involution() {
        for d in Direction::ALL {
            assert_eq!(d.mirrored().mirrored(), d);
            assert_eq!(Direction::from_char(d.as_char()), Some(d));
        }
    }
}

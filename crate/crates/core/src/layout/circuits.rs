//! Full-adder layouts and ripple chains built from them.
//!
//! Single-stage layouts are planar and span three clock zones: input rails
//! in zone 0, the first gates in zone 1, the last gate and outputs in zone
//! 2. A cell reading a rail always sits one zone after the rail, so rails
//! never get driven backwards by the gates they feed.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{from_grid, Cell, Glyph, Layout, PITCH_NM};
use crate::adders::{RippleKind, MAX_RIPPLE_WIDTH};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitKind {
    Fa,
    Fas,
    Fa5,
    Ripple8,
    Ripple8Sub,
}

impl CircuitKind {
    pub const ALL: [CircuitKind; 5] =
        [CircuitKind::Fa, CircuitKind::Fas, CircuitKind::Fa5, CircuitKind::Ripple8, CircuitKind::Ripple8Sub];

    pub fn name(self) -> &'static str {
        match self {
            CircuitKind::Fa => "fa",
            CircuitKind::Fas => "fas",
            CircuitKind::Fa5 => "fa5",
            CircuitKind::Ripple8 => "ripple8",
            CircuitKind::Ripple8Sub => "ripple8-sub",
        }
    }

    pub fn is_ripple(self) -> bool {
        matches!(self, CircuitKind::Ripple8 | CircuitKind::Ripple8Sub)
    }
}

impl FromStr for CircuitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fa" => Ok(CircuitKind::Fa),
            "fas" => Ok(CircuitKind::Fas),
            "fa5" => Ok(CircuitKind::Fa5),
            "ripple8" => Ok(CircuitKind::Ripple8),
            "ripple8-sub" | "ripple8_sub" => Ok(CircuitKind::Ripple8Sub),
            other => Err(Error::UnknownName(format!("circuit `{other}` (expected fa, fas, fa5, ripple8, ripple8-sub)"))),
        }
    }
}

impl std::fmt::Display for CircuitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `Cout = M(a, b, c)` on the left, `M(a', b, c)` on the right, the sum gate
/// `M(Cout', a, M(a', b, c))` between them. `b` runs over the top, `c_in`
/// under the bottom.
const FA_GRID: [&str; 15] = [
    "0000000b0000000",
    "0.............0",
    "0.C....S......0",
    "0.2.11.2......0",
    "0.111.1211111.0",
    "0.1.11.1....1.0",
    "0.1....1....1.0",
    "0.1....1.00.1.0",
    "0010000a00.0100",
    "..0....0.00.0..",
    "..0....G....0..",
    "..0.........0..",
    "..00000c00000..",
    ".......0.......",
    ".......H.......",
];

/// The full adder with `M(a', b, c)` also brought out as the borrow.
const FAS_GRID: [&str; 15] = [
    "0000000b0000000",
    "0.............0",
    "0.C....S....B.0",
    "0.2.11.2....1.0",
    "0.111.1211111.0",
    "0.1.11.1....1.0",
    "0.1....1....1.0",
    "0.1....1.00.1.0",
    "0010000a00.0100",
    "..0......00.0..",
    "..0.........0..",
    "..0.........0..",
    "..00000c00000..",
    ".......0.......",
    ".......G.......",
];

/// Five-input sum gate `M(Cout', Cout', a, b, c)` at the top. Its device
/// block is a 3x2 rectangle with a stem, which leaves every input a clear
/// approach in one layer. `Cout = M(a, b, c)` sits under it with the three
/// input cells against its device; a ring carries `Cout` round to the two
/// arm inputs, which pick it up inverted across a diagonal.
const FA5_GRID: [&str; 14] = [
    "11111.....11111",
    "1....1.S.1....1",
    "1....1.2.1....1",
    "1....12221....1",
    "1.....222.....1",
    "1...1112111...1",
    "1...1..1..1...1",
    "1..G0..1..0H..1",
    "1...0..b..0...1",
    "1...00a0c00...1",
    "1......1......1",
    "1....C11......1",
    "1......1......1",
    "111111111111111",
];

fn single_stage(kind: CircuitKind) -> Result<Layout> {
    let (rows, legend): (&[&str], Vec<(char, Glyph)>) = match kind {
        CircuitKind::Fa => (
            &FA_GRID,
            vec![
                ('C', Glyph::Output("Cout", 2)),
                ('S', Glyph::Output("Sum", 2)),
                ('G', Glyph::Output("Gar1", 0)),
                ('H', Glyph::Output("Gar2", 0)),
            ],
        ),
        CircuitKind::Fas => (
            &FAS_GRID,
            vec![
                ('C', Glyph::Output("Cout", 2)),
                ('S', Glyph::Output("Sum/Sub", 2)),
                ('B', Glyph::Output("Bout", 1)),
                ('G', Glyph::Output("Gar1", 0)),
            ],
        ),
        CircuitKind::Fa5 => (
            &FA5_GRID,
            vec![
                ('C', Glyph::Output("Cout", 1)),
                ('S', Glyph::Output("Sum", 2)),
                ('G', Glyph::Output("Gar1", 0)),
                ('H', Glyph::Output("Gar2", 0)),
            ],
        ),
        _ => unreachable!("ripple layouts are composed"),
    };
    let mut legend = legend;
    legend.extend([('a', Glyph::Input("a")), ('b', Glyph::Input("b")), ('c', Glyph::Input("c_in"))]);
    from_grid(kind.name(), (0.0, 0.0), rows, &legend)
}

/// Ripple chain of `width` stages, inputs and outputs named as in
/// [`crate::adders::ripple`].
pub fn gen_ripple(kind: RippleKind, width: usize) -> Result<Layout> {
    if width == 0 || width > MAX_RIPPLE_WIDTH {
        return Err(Error::InvalidWidth(width));
    }
    let layout = match kind {
        RippleKind::Adder => ripple::adder(width)?,
        RippleKind::AdderSubtractor => ripple::adder_subtractor(width)?,
    };
    layout.validate()?;
    Ok(layout)
}

/// Generates the layout for `kind`.
pub fn gen_circuit(kind: CircuitKind) -> Result<Layout> {
    let mut layout = match kind {
        CircuitKind::Ripple8 => gen_ripple(RippleKind::Adder, 8)?,
        CircuitKind::Ripple8Sub => gen_ripple(RippleKind::AdderSubtractor, 8)?,
        _ => single_stage(kind)?,
    };
    layout.name = kind.name().to_string();
    layout.metadata.insert("circuit".into(), kind.name().into());
    layout.validate()?;
    Ok(layout)
}

mod ripple {
    use super::*;

    /// Ripple stage: the full adder without garbage taps. `C` is the carry
    /// tap, `c` the carry-in site.
    const STAGE: [&str; 13] = [
        "0000000b0000000",
        "0.............0",
        "0.C....S......0",
        "0.2.11.2......0",
        "0.111.1211111.0",
        "0.1.11.1....1.0",
        "0.1....1....1.0",
        "0.1....1.00.1.0",
        "0010000a00.0100",
        "..0......00.0..",
        "..0.........0..",
        "..0.........0..",
        "..00000c00000..",
    ];
    /// Adder/subtractor stage: the borrow leaves through the top of column 12.
    const SUB_STAGE: [&str; 13] = [
        "0000000b0000000",
        "0.............0",
        "0......S......0",
        "0.2.11.2....1.0",
        "0.111.1211111.0",
        "0.1.11.1....1.0",
        "0.1....1....1.0",
        "0.1....1.00.1.0",
        "0010000a00.0100",
        "..0......00.0..",
        "..0.........0..",
        "..0.........0..",
        "..00000c00000..",
    ];
    /// Stage pitch in grid units. The carry drops down a column four pitches
    /// clear of both neighbours, past the coupling radius.
    const STAGE_PITCH: i32 = 22;
    /// Carry tap column and carry-in site inside a stage.
    const TAP: (i32, i32) = (2, 2);
    const CARRY_IN: (i32, i32) = (2, 12);
    /// First column of the carry's second zone along the top run.
    const SPLIT: i32 = 10;

    struct Placer<'a> {
        layout: &'a mut Layout,
        origin: i32,
        shift: u8,
    }

    impl Placer<'_> {
        fn at(&self, gx: i32, gy: i32) -> (f64, f64) {
            ((self.origin + gx) as f64 * PITCH_NM, gy as f64 * PITCH_NM)
        }

        fn zone(&self, z: u8) -> u8 {
            (z + self.shift) % 4
        }

        fn normal(&mut self, gx: i32, gy: i32, z: u8, layer: u32) {
            let (x, y) = self.at(gx, gy);
            let zone = self.zone(z);
            self.layout.push(Cell::new(x, y, zone).on_layer(layer));
        }

        /// Stamps `rows`; `resolve` maps a non-digit character to a cell or
        /// `None` to leave the site empty.
        fn stamp(&mut self, rows: &[&str], mut resolve: impl FnMut(char, f64, f64, &Self) -> Option<Cell>) {
            for (r, line) in rows.iter().enumerate() {
                for (c, ch) in line.chars().enumerate() {
                    let (x, y) = self.at(c as i32, r as i32);
                    let cell = match ch {
                        '.' => None,
                        '0'..='3' => Some(Cell::new(x, y, self.zone(ch as u8 - b'0'))),
                        _ => resolve(ch, x, y, self),
                    };
                    if let Some(cell) = cell {
                        self.layout.push(cell);
                    }
                }
            }
        }

        /// Lifts the carry from the tap over the `b` rail on layer 2 and
        /// runs it down the gap to the next stage's carry-in. The run is
        /// split across two zones so neither half is left without a held
        /// driver, and the next stage's rails sit one zone after the second.
        fn carry_route(&mut self) {
            let (tx, _) = TAP;
            let via_low = 3;
            let via_high = -3;
            for layer in 1..=2 {
                self.normal(tx, via_low, 2, layer);
            }
            for gy in (via_high + 1..via_low).rev() {
                self.normal(tx, gy, 2, 2);
            }
            for layer in (0..=2).rev() {
                self.normal(tx, via_high, 2, layer);
            }
            let top = via_high - 1;
            let gap = STAGE_PITCH - 4;
            for gx in tx..=gap {
                self.normal(gx, top, if gx < SPLIT { 2 } else { 3 }, 0);
            }
            for gy in top + 1..=CARRY_IN.1 {
                self.normal(gap, gy, 3, 0);
            }
            for gx in gap + 1..STAGE_PITCH + CARRY_IN.0 {
                self.normal(gx, CARRY_IN.1, 3, 0);
            }
        }
    }

    pub fn adder(width: usize) -> Result<Layout> {
        let mut layout = Layout::new("ripple");
        for i in 0..width {
            let last = i + 1 == width;
            let mut p = Placer { layout: &mut layout, origin: i as i32 * STAGE_PITCH, shift: 0 };
            p.stamp(&STAGE, |ch, x, y, p| match ch {
                'a' => Some(Cell::input(x, y, &format!("a{i}"))),
                'b' => Some(Cell::input(x, y, &format!("b{i}"))),
                'c' if i == 0 => Some(Cell::input(x, y, "cin")),
                'c' => Some(Cell::new(x, y, p.zone(0))),
                'S' => Some(Cell::output(x, y, p.zone(2), &format!("s{i}"))),
                'C' if last => Some(Cell::output(x, y, p.zone(2), "cout")),
                _ => None,
            });
            if !last {
                p.carry_route();
            }
        }
        Ok(layout)
    }

    /// Sel line row, above every stage.
    const SEL_ROW: i32 = -12;
    /// Stage-local columns covered by one stage's share of the sel line.
    const SEL_SPAN: (i32, i32) = (-4, STAGE_PITCH - 4);

    impl Placer<'_> {
        fn fixed(&mut self, gx: i32, gy: i32, p: f64) {
            let (x, y) = self.at(gx, gy);
            self.layout.push(Cell::fixed(x, y, p));
        }

        /// Vertical run on layer 2 from `(gx, from)` to `(gx, to)` with vias
        /// down to layer 0 at both ends; the bottom end sits over an
        /// existing layer-0 cell.
        fn overpass(&mut self, gx: i32, from: i32, to: i32, z: u8) {
            for layer in 1..=2 {
                self.normal(gx, from, z, layer);
            }
            for gy in (to + 1..from).rev() {
                self.normal(gx, gy, z, 2);
            }
            for layer in (0..=2).rev() {
                self.normal(gx, to, z, layer);
            }
        }
    }

    /// Zone of the sel line over a stage: three segments, so the line steps
    /// one zone at a time while the stages step three.
    fn sel_zone(gx: i32) -> u8 {
        match gx {
            ..4 => 1,
            4..11 => 2,
            _ => 3,
        }
    }

    /// Adder/subtractor chain. Each stage is the full adder with its borrow
    /// brought out, followed by `chain = sel ? Bout : Cout` built as
    /// `M(M(Cout, sel', 0), M(Bout, sel, 0), 1)` above the `b` rail. The
    /// `sel` line runs over all stages, its zones stepping along with them.
    pub fn adder_subtractor(width: usize) -> Result<Layout> {
        let mut layout = Layout::new("ripple_sub");
        for i in 0..width {
            let last = i + 1 == width;
            let mut p = Placer { layout: &mut layout, origin: i as i32 * STAGE_PITCH, shift: (3 * i % 4) as u8 };
            p.stamp(&SUB_STAGE, |ch, x, y, p| match ch {
                'a' => Some(Cell::input(x, y, &format!("a{i}"))),
                'b' => Some(Cell::input(x, y, &format!("b{i}"))),
                'c' if i == 0 => Some(Cell::input(x, y, "cin")),
                'c' => Some(Cell::new(x, y, p.zone(0))),
                'S' => Some(Cell::output(x, y, p.zone(2), &format!("s{i}"))),
                _ => None,
            });

            // sel line, with the input cell ahead of the first stage
            if i == 0 {
                let (x, y) = p.at(SEL_SPAN.0 - 1, SEL_ROW);
                p.layout.push(Cell::input(x, y, "sel"));
            }
            let end = if last { 13 } else { SEL_SPAN.1 };
            for gx in SEL_SPAN.0..end {
                p.normal(gx, SEL_ROW, sel_zone(gx), 0);
            }

            // Cout over the b rail into M(Cout, sel', 0); the constant sits
            // beside the output so the two signals face each other
            p.overpass(2, 3, -3, 2);
            p.normal(2, -4, 3, 0);
            p.normal(2, -5, 3, 0);
            p.fixed(2, -6, -1.0);
            // sel' by a forked diagonal handoff, down column 0 into the west leg
            p.normal(-1, SEL_ROW + 1, 1, 0);
            p.normal(1, SEL_ROW + 1, 1, 0);
            for gy in SEL_ROW + 2..=-5 {
                p.normal(0, gy, 2, 0);
            }
            p.normal(1, -5, 3, 0);
            for gx in 3..=6 {
                p.normal(gx, -5, if gx == 6 { 5 } else { 4 }, 0);
            }

            // Bout over the b rail and the chain row into M(Bout, sel, 0)
            p.overpass(12, 3, -9, 2);
            for gx in 8..=11 {
                p.normal(gx, -9, if gx == 8 { 3 } else { 2 }, 0);
            }
            p.normal(7, -9, 3, 0);
            p.fixed(6, -9, -1.0);
            for gy in SEL_ROW + 1..=-10 {
                p.normal(7, gy, if gy == -10 { 3 } else { 2 }, 0);
            }
            for gy in -8..=-6 {
                p.normal(7, gy, if gy == -6 { 5 } else { 4 }, 0);
            }

            // M(X, Y, 1), the chain out
            p.normal(7, -5, 5, 0);
            p.fixed(7, -4, 1.0);
            if last {
                // a short chain holds the value once the gate's inputs release
                for gx in 8..=10 {
                    p.normal(gx, -5, 6, 0);
                }
                let (x, y) = p.at(11, -5);
                let z = p.zone(6);
                p.layout.push(Cell::output(x, y, z, "cout"));
                continue;
            }
            let gap = STAGE_PITCH - 4;
            for gx in 8..=gap {
                p.normal(gx, -5, 6, 0);
            }
            for gy in -4..=CARRY_IN.1 {
                p.normal(gap, gy, 6, 0);
            }
            for gx in gap + 1..STAGE_PITCH + CARRY_IN.0 {
                p.normal(gx, CARRY_IN.1, 6, 0);
            }
        }
        Ok(layout)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in CircuitKind::ALL {
            assert_eq!(k.name().parse::<CircuitKind>().unwrap(), k);
        }
        assert!("fa7".parse::<CircuitKind>().is_err());
    }

    #[test]
    fn single_stages_are_planar_three_zone() {
        for k in [CircuitKind::Fa, CircuitKind::Fas, CircuitKind::Fa5] {
            let l = gen_circuit(k).unwrap();
            let m = crate::layout::layout_metrics(&l).unwrap();
            assert_eq!(m.layer_count, 1, "{k}");
            assert_eq!(m.delay_zones, 3, "{k}");
        }
    }

    #[test]
    fn ripple_layouts_validate() {
        for k in [CircuitKind::Ripple8, CircuitKind::Ripple8Sub] {
            let l = gen_circuit(k).unwrap();
            let net = crate::adders::ripple(crate::adders::RippleConfig {
                kind: if k == CircuitKind::Ripple8 { RippleKind::Adder } else { RippleKind::AdderSubtractor },
                ..Default::default()
            })
            .unwrap();
            let mut inputs = l.labels_of(crate::layout::CellKind::Input);
            let mut names = net.input_names().to_vec();
            inputs.sort();
            names.sort();
            assert_eq!(inputs, names, "{k}");
            let mut outputs = l.labels_of(crate::layout::CellKind::Output);
            let mut out_names = net.output_names();
            outputs.sort();
            out_names.sort();
            assert_eq!(outputs, out_names, "{k}");
        }
        assert!(gen_ripple(RippleKind::Adder, 0).is_err());
        assert!(gen_ripple(RippleKind::Adder, MAX_RIPPLE_WIDTH + 1).is_err());
    }

    #[test]
    fn grid_cells_sit_on_pitch() {
        for k in CircuitKind::ALL {
            for c in gen_circuit(k).unwrap().cells {
                assert_eq!((c.x / PITCH_NM).fract(), 0.0);
                assert_eq!((c.y / PITCH_NM).fract(), 0.0);
            }
        }
    }
}

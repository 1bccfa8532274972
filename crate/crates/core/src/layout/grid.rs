//! Layouts drawn as character grids.
//!
//! Each character is one grid site: `.` or space is empty, a digit `0`-`3`
//! is a normal cell in that clock zone, and any other character is looked
//! up in the legend.

use super::{Cell, Layout, PITCH_NM};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Glyph<'a> {
    Input(&'a str),
    Output(&'a str, u8),
    Fixed(f64),
    /// Normal cell rotated by 45 degrees.
    Rotated(u8),
}

/// Parses `rows` into a layout with the top-left site at `origin`.
pub fn from_grid(name: &str, origin: (f64, f64), rows: &[&str], legend: &[(char, Glyph)]) -> Result<Layout> {
    let mut l = Layout::new(name);
    for (r, line) in rows.iter().enumerate() {
        for (c, ch) in line.chars().enumerate() {
            let (x, y) = (origin.0 + c as f64 * PITCH_NM, origin.1 + r as f64 * PITCH_NM);
            let cell = match ch {
                '.' | ' ' => continue,
                '0'..='3' => Cell::new(x, y, ch as u8 - b'0'),
                _ => match legend.iter().find(|(k, _)| *k == ch).map(|(_, g)| *g) {
                    Some(Glyph::Input(label)) => Cell::input(x, y, label),
                    Some(Glyph::Output(label, zone)) => Cell::output(x, y, zone, label),
                    Some(Glyph::Fixed(p)) => Cell::fixed(x, y, p),
                    Some(Glyph::Rotated(zone)) => Cell::new(x, y, zone).rotated(),
                    None => {
                        return Err(Error::InvalidLayout(format!("unknown grid character `{ch}` at row {r}, column {c}")))
                    }
                },
            };
            l.push(cell);
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::CellKind;

    #[test]
    fn parses_wire() {
        let l = from_grid("w", (0.0, 0.0), &["i001o"], &[('i', Glyph::Input("in")), ('o', Glyph::Output("out", 1))]).unwrap();
        assert_eq!(l.cells.len(), 5);
        assert_eq!(l.cells[0].kind, CellKind::Input);
        assert_eq!(l.cells[3].clock, 1);
        assert_eq!(l.cells[4].x, 80.0);
        l.validate().unwrap();
    }

    #[test]
    fn unknown_character_rejected() {
        assert!(from_grid("w", (0.0, 0.0), &["0?0"], &[]).is_err());
    }
}

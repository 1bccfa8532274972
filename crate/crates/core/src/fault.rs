//! Single-cell displacement faults.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{Direction, Layout, CELL_SIZE_NM};
use crate::scalar::Real;
use crate::sim::{verify_layout, ClockScheme, SimConfig};
use crate::truth::TruthSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum Displaced {
    Moved(Layout),
    /// The moved cell would overlap cell `blocker`.
    NotPossible { blocker: usize },
}

/// Moves the cell labelled `label` by `(dx, dy)` nm.
pub fn displace(layout: &Layout, label: &str, dx: f64, dy: f64) -> Result<Displaced> {
    let i = layout.find_label(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    let mut out = layout.clone();
    out.cells[i].x += dx;
    out.cells[i].y += dy;
    let moved = &out.cells[i];
    let limit = CELL_SIZE_NM - 1e-9;
    for (j, c) in out.cells.iter().enumerate() {
        if j != i && c.layer == moved.layer && c.planar_distance(moved) < limit {
            return Ok(Displaced::NotPossible { blocker: j });
        }
    }
    Ok(Displaced::Moved(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaultSweepConfig {
    pub target_label: String,
    pub directions: Vec<Direction>,
    pub step_nm: f64,
    pub max_nm: f64,
    pub spec: TruthSpec,
    pub sim: SimConfig,
    pub scheme: ClockScheme,
}

impl FaultSweepConfig {
    pub fn new(target_label: &str, spec: TruthSpec) -> Self {
        Self {
            target_label: target_label.to_string(),
            directions: Direction::ALL.to_vec(),
            step_nm: 1.0,
            max_nm: 20.0,
            spec,
            sim: SimConfig::default(),
            scheme: ClockScheme::Landauer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_nm > 0.0) || !(self.max_nm >= self.step_nm) {
            return Err(Error::FaultSweep(format!(
                "need step > 0 and max >= step, got step {} max {}",
                self.step_nm, self.max_nm
            )));
        }
        if self.directions.is_empty() {
            return Err(Error::FaultSweep("no directions to sweep".into()));
        }
        Ok(())
    }

    fn distances(&self) -> Vec<f64> {
        let n = (self.max_nm / self.step_nm + 1e-9).floor() as usize;
        (0..=n).map(|k| k as f64 * self.step_nm).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointVerdict {
    Normal,
    Faulty,
    NotPossible,
}

impl PointVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PointVerdict::Normal => "normal",
            PointVerdict::Faulty => "faulty",
            PointVerdict::NotPossible => "not_possible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub direction: Direction,
    pub points: Vec<(f64, PointVerdict)>,
    /// Largest `d` such that every swept point up to `d` is normal.
    pub max_normal_nm: f64,
    /// The first non-normal point is geometrically blocked.
    pub not_possible: bool,
}

impl DirectionReport {
    pub fn from_points(direction: Direction, points: Vec<(f64, PointVerdict)>) -> Self {
        let (max_normal_nm, not_possible) = prefix_extent(&points);
        Self { direction, points, max_normal_nm, not_possible }
    }
}

/// Extent of the leading run of normal points and whether the run ended
/// on a blocked displacement. Passing points after the first failure do
/// not count.
pub fn prefix_extent(points: &[(f64, PointVerdict)]) -> (f64, bool) {
    let mut best = 0.0;
    for &(d, v) in points {
        match v {
            PointVerdict::Normal => best = d,
            PointVerdict::NotPossible => return (best, true),
            PointVerdict::Faulty => return (best, false),
        }
    }
    (best, false)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultReport {
    pub label: String,
    pub step_nm: f64,
    pub max_nm: f64,
    pub directions: Vec<DirectionReport>,
}

#[derive(Serialize)]
struct SummaryEntry {
    direction: char,
    max_normal_nm: f64,
    not_possible: bool,
}

impl FaultReport {
    pub fn get(&self, direction: Direction) -> Option<&DirectionReport> {
        self.directions.iter().find(|r| r.direction == direction)
    }

    /// CSV rows `label,direction,d_nm,verdict`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,direction,d_nm,verdict\n");
        for r in &self.directions {
            for (d, v) in &r.points {
                out.push_str(&format!("{},{},{},{}\n", self.label, r.direction.as_char(), d, v.as_str()));
            }
        }
        out
    }

    pub fn summary_json(&self) -> Result<String> {
        let dirs: Vec<SummaryEntry> = self
            .directions
            .iter()
            .map(|r| SummaryEntry {
                direction: r.direction.as_char(),
                max_normal_nm: r.max_normal_nm,
                not_possible: r.not_possible,
            })
            .collect();
        let v = serde_json::json!({ "label": self.label, "step_nm": self.step_nm, "max_nm": self.max_nm, "directions": dirs });
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// Sweeps the target cell outward in each direction and records whether
/// the layout still computes `spec` at every distance.
pub fn sweep<T: Real>(layout: &Layout, config: &FaultSweepConfig) -> Result<FaultReport> {
    config.validate()?;
    let base = verify_layout::<T>(layout, &config.spec, &config.sim, config.scheme)?;
    if !base.passed {
        return Err(Error::FaultSweep(format!(
            "baseline layout fails: {} mismatching vectors, {} weak outputs, margin {:.3}",
            base.mismatches.len(),
            base.weak.len(),
            base.min_margin
        )));
    }
    layout
        .find_label(&config.target_label)
        .ok_or_else(|| Error::UnknownLabel(config.target_label.clone()))?;
    let distances = config.distances();
    let jobs: Vec<(usize, f64)> =
        (0..config.directions.len()).flat_map(|k| distances.iter().map(move |&d| (k, d))).collect();
    let verdicts: Vec<PointVerdict> = jobs
        .par_iter()
        .map(|&(k, d)| -> Result<PointVerdict> {
            let (ux, uy) = config.directions[k].unit();
            match displace(layout, &config.target_label, ux * d, uy * d)? {
                Displaced::NotPossible { .. } => Ok(PointVerdict::NotPossible),
                Displaced::Moved(l) => {
                    let v = verify_layout::<T>(&l, &config.spec, &config.sim, config.scheme)?;
                    Ok(if v.passed { PointVerdict::Normal } else { PointVerdict::Faulty })
                }
            }
        })
        .collect::<Result<_>>()?;
    let per_dir = distances.len();
    let directions = config
        .directions
        .iter()
        .enumerate()
        .map(|(k, &dir)| {
            let points = distances.iter().copied().zip(verdicts[k * per_dir..(k + 1) * per_dir].iter().copied()).collect();
            DirectionReport::from_points(dir, points)
        })
        .collect();
    Ok(FaultReport { label: config.target_label.clone(), step_nm: config.step_nm, max_nm: config.max_nm, directions })
}

/// Whether report `c` is the mirror image of report `a`: equal extents
/// north and south, east and west exchanged.
pub fn mirror_check(a: &FaultReport, c: &FaultReport) -> Result<bool> {
    let dirs = |r: &FaultReport| {
        let mut v: Vec<Direction> = r.directions.iter().map(|d| d.direction).collect();
        v.sort();
        v
    };
    let mirrored: Vec<Direction> = {
        let mut v: Vec<Direction> = dirs(a).into_iter().map(Direction::mirrored).collect();
        v.sort();
        v
    };
    if mirrored != dirs(c) {
        return Err(Error::FaultSweep("reports cover different directions".into()));
    }
    Ok(a.directions.iter().all(|ra| {
        let rc = c.get(ra.direction.mirrored()).expect("direction present");
        ra.max_normal_nm == rc.max_normal_nm && ra.not_possible == rc.not_possible
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{Cell, Direction};

    fn pts(v: &[PointVerdict]) -> Vec<(f64, PointVerdict)> {
        v.iter().enumerate().map(|(k, &p)| (k as f64, p)).collect()
    }

    #[test]
    fn prefix_stops_at_first_failure() {
        use PointVerdict::*;
        assert_eq!(prefix_extent(&pts(&[Normal, Normal, Faulty, Normal, Normal])), (1.0, false));
        assert_eq!(prefix_extent(&pts(&[Normal, Normal, NotPossible])), (1.0, true));
        assert_eq!(prefix_extent(&pts(&[Normal, Normal, Normal])), (2.0, false));
    }

    #[test]
    fn displace_identity_and_block() {
        let mut l = Layout::new("two");
        l.push(Cell::input(0.0, 0.0, "a"));
        l.push(Cell::new(20.0, 0.0, 0));
        assert_eq!(displace(&l, "a", 0.0, 0.0).unwrap(), Displaced::Moved(l.clone()));
        match displace(&l, "a", 0.0, -3.0).unwrap() {
            Displaced::Moved(m) => assert_eq!(m.cells[0].y, -3.0),
            other => panic!("{other:?}"),
        }
        assert_eq!(displace(&l, "a", 3.0, 0.0).unwrap(), Displaced::NotPossible { blocker: 1 });
        assert!(displace(&l, "zz", 1.0, 0.0).is_err());
    }

    fn report(label: &str, extents: [(Direction, f64); 4]) -> FaultReport {
        FaultReport {
            label: label.into(),
            step_nm: 1.0,
            max_nm: 20.0,
            directions: extents
                .iter()
                .map(|&(direction, d)| DirectionReport { direction, points: vec![], max_normal_nm: d, not_possible: false })
                .collect(),
        }
    }

    #[test]
    fn mirror_swaps_east_and_west() {
        use Direction::*;
        let a = report("A", [(N, 5.0), (S, 8.0), (W, 6.0), (E, 10.0)]);
        let c = report("C", [(N, 5.0), (S, 8.0), (W, 10.0), (E, 6.0)]);
        assert!(mirror_check(&a, &c).unwrap());
        assert!(!mirror_check(&a, &a).unwrap());
        let mut partial = c.clone();
        partial.directions.pop();
        assert!(mirror_check(&a, &partial).is_err());
    }

    #[test]
    fn bad_sweep_config_rejected() {
        let spec = TruthSpec::from_fn(&["a"], &["out"], |r| vec![r[0]]).unwrap();
        let mut cfg = FaultSweepConfig::new("a", spec);
        cfg.step_nm = 0.0;
        assert!(cfg.validate().is_err());
    }
}

//! Greedy conversion of irreversible multi-output functions into injective
//! ones by appending copies of input columns as garbage outputs.
//!
//! Collisions are measured as unordered pairs of input rows that share an
//! output vector. Each step appends the not-yet-used input column whose
//! extension leaves the fewest colliding pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::truth::{self, TruthSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionReport {
    /// Row indices grouped by identical outputs; only groups of size >= 2,
    /// ordered by their smallest member.
    pub classes: Vec<Vec<usize>>,
    pub colliding_pair_count: usize,
    pub max_class_size: usize,
}

impl CollisionReport {
    pub fn is_injective(&self) -> bool {
        self.colliding_pair_count == 0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    #[default]
    Lowest,
    Highest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversibilizeResult {
    pub augmented: TruthSpec,
    /// Input columns appended, in order.
    pub garbage_sources: Vec<usize>,
    /// Pair count remaining after each append.
    pub step_pair_counts: Vec<usize>,
}

impl ReversibilizeResult {
    /// Step log as CSV: `step,column,name,remaining_pairs`.
    pub fn step_log_csv(&self) -> String {
        let mut out = String::from("step,column,name,remaining_pairs\n");
        for (k, (&col, &pairs)) in self.garbage_sources.iter().zip(&self.step_pair_counts).enumerate() {
            let name = &self.augmented.input_names()[col];
            out.push_str(&format!("{},{},{},{}\n", k + 1, col, name, pairs));
        }
        out
    }
}

fn classes_of(rows: impl Iterator<Item = u128>) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<u128, Vec<usize>> = BTreeMap::new();
    for (i, key) in rows.enumerate() {
        groups.entry(key).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() >= 2).collect();
    classes.sort_by_key(|g| g[0]);
    classes
}

fn pair_count(sizes: impl Iterator<Item = usize>) -> usize {
    sizes.map(|s| s * (s - 1) / 2).sum()
}

fn pairs_for(rows: impl Iterator<Item = u128>) -> usize {
    let mut groups: BTreeMap<u128, usize> = BTreeMap::new();
    for key in rows {
        *groups.entry(key).or_default() += 1;
    }
    pair_count(groups.into_values())
}

pub fn collision_report(spec: &TruthSpec) -> CollisionReport {
    let classes = classes_of(spec.rows().iter().map(|&r| r as u128));
    CollisionReport {
        colliding_pair_count: pair_count(classes.iter().map(Vec::len)),
        max_class_size: classes.iter().map(Vec::len).max().unwrap_or(1),
        classes,
    }
}

pub fn is_reversible(spec: &TruthSpec) -> bool {
    collision_report(spec).is_injective()
}

/// `ceil(log2(max class size))`: no column set smaller than this can split
/// the largest class.
pub fn garbage_lower_bound(spec: &TruthSpec) -> usize {
    let m = collision_report(spec).max_class_size;
    if m <= 1 {
        0
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}

pub fn reversibilize(spec: &TruthSpec, tie_break: TieBreak) -> Result<ReversibilizeResult> {
    let n = spec.num_inputs();
    // extended row keys: output bits shifted above the chosen input bits
    let mut keys: Vec<u128> = spec.rows().iter().map(|&r| r as u128).collect();
    let mut remaining = pairs_for(keys.iter().copied());
    let mut chosen: Vec<usize> = Vec::new();
    let mut counts = Vec::new();
    while remaining > 0 {
        let scored: Vec<(usize, usize)> = (0..n)
            .filter(|c| !chosen.contains(c))
            .map(|c| {
                let ext = keys
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| (k << 1) | truth::input_bit(i, c, n) as u128);
                (c, pairs_for(ext))
            })
            .collect();
        let best = scored.iter().map(|&(_, p)| p).min().expect("an unused column separates any colliding pair");
        let col = match tie_break {
            TieBreak::Lowest => scored.iter().find(|&&(_, p)| p == best),
            TieBreak::Highest => scored.iter().rev().find(|&&(_, p)| p == best),
        }
        .map(|&(c, _)| c)
        .expect("best score present");
        for (i, k) in keys.iter_mut().enumerate() {
            *k = (*k << 1) | truth::input_bit(i, col, n) as u128;
        }
        chosen.push(col);
        counts.push(best);
        remaining = best;
    }
    let mut augmented = spec.clone();
    for (g, &col) in chosen.iter().enumerate() {
        augmented = augmented.with_input_column(col, &format!("Gar{}", g + 1))?;
    }
    Ok(ReversibilizeResult { augmented, garbage_sources: chosen, step_pair_counts: counts })
}

//! Reading logic values back out of a trace.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{simulate, ClockScheme, SimConfig, SimTrace, Stimulus};
use crate::error::{Error, Result};
use crate::layout::{CellKind, Layout};
use crate::scalar::Real;
use crate::truth::{assignment_index, bit_string, pack, TruthSpec};

/// Outputs held below this `|P|` are flagged as weak.
pub const WEAK_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakOutput {
    pub vector: usize,
    pub label: String,
    pub polarization: f64,
}

/// Logic values sampled at the end of each output's hold phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub input_labels: Vec<String>,
    pub output_labels: Vec<String>,
    pub vectors: Vec<Vec<bool>>,
    /// Output bits per vector, output `k` at bit `k`.
    pub rows: Vec<u64>,
    /// Sampled polarization per vector and output.
    pub levels: Vec<Vec<f64>>,
    pub weak: Vec<WeakOutput>,
}

impl Decoded {
    /// The decoded table as a spec; needs the exhaustive vector order.
    pub fn to_truth_spec(&self) -> Result<TruthSpec> {
        let n = self.input_labels.len();
        let exhaustive = self.vectors.len() == 1 << n
            && self.vectors.iter().enumerate().all(|(i, v)| assignment_index(v) == i);
        if !exhaustive {
            return Err(Error::Simulation("decoded vectors are not an exhaustive sweep".into()));
        }
        TruthSpec::new(self.input_labels.clone(), self.output_labels.clone(), self.rows.clone())
    }
}

pub fn decode<T: Real>(trace: &SimTrace<T>) -> Result<Decoded> {
    let mut outputs = Vec::new();
    for (label, index) in &trace.output_latency {
        let k = trace
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        outputs.push((label.clone(), k, *index));
    }
    let mut rows = Vec::with_capacity(trace.vectors.len());
    let mut levels = Vec::with_capacity(trace.vectors.len());
    let mut weak = Vec::new();
    for v in 0..trace.vectors.len() {
        let mut bits = Vec::with_capacity(outputs.len());
        let mut level = Vec::with_capacity(outputs.len());
        for (label, k, index) in &outputs {
            let s = trace.readout_sample(v, *index);
            let p = trace.polarization[*k]
                .get(s)
                .ok_or_else(|| Error::Simulation(format!("readout sample {s} lies past the trace")))?
                .to_f64()
                .unwrap_or(0.0);
            if p.abs() < WEAK_THRESHOLD {
                weak.push(WeakOutput { vector: v, label: label.clone(), polarization: p });
            }
            bits.push(p > 0.0);
            level.push(p);
        }
        rows.push(pack(&bits));
        levels.push(level);
    }
    Ok(Decoded {
        input_labels: trace.input_labels.clone(),
        output_labels: outputs.into_iter().map(|(l, _, _)| l).collect(),
        vectors: trace.vectors.clone(),
        rows,
        levels,
        weak,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub vector: usize,
    /// Output bits in the expected spec's column order.
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutVerdict {
    pub passed: bool,
    pub vectors: usize,
    pub mismatches: Vec<Mismatch>,
    pub weak: Vec<WeakOutput>,
    /// Outputs with no clock-ordered path from an input.
    pub unclocked: Vec<String>,
    /// Smallest `P` in the direction of the expected bit over all readouts.
    pub min_margin: f64,
    pub unconverged_samples: usize,
}

impl LayoutVerdict {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Simulates every input assignment and compares the decoded outputs with
/// `expected`. Weak or unclocked outputs fail the verdict.
pub fn verify_layout<T: Real>(
    layout: &Layout,
    expected: &TruthSpec,
    config: &SimConfig,
    scheme: ClockScheme,
) -> Result<LayoutVerdict> {
    let labels = |kind| layout.labels_of(kind).into_iter().collect::<BTreeSet<_>>();
    let names = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
    if labels(CellKind::Input) != names(expected.input_names()) {
        return Err(Error::LabelMismatch(format!(
            "layout inputs {:?} vs spec inputs {:?}",
            labels(CellKind::Input),
            expected.input_names()
        )));
    }
    if labels(CellKind::Output) != names(expected.output_names()) {
        return Err(Error::LabelMismatch(format!(
            "layout outputs {:?} vs spec outputs {:?}",
            labels(CellKind::Output),
            expected.output_names()
        )));
    }
    let trace: SimTrace<T> = simulate(layout, &Stimulus::exhaustive(expected.input_names()), config, scheme)?;
    verify_trace(&trace, expected.output_names(), expected.rows())
}

/// Compares a trace with expected output rows, one per driven vector, bit
/// `k` of a row being `outputs[k]`. Weak or unclocked outputs fail the
/// verdict.
pub fn verify_trace<T: Real>(trace: &SimTrace<T>, outputs: &[String], expected: &[u64]) -> Result<LayoutVerdict> {
    if expected.len() != trace.vectors.len() {
        return Err(Error::Simulation(format!(
            "{} expected rows for {} simulated vectors",
            expected.len(),
            trace.vectors.len()
        )));
    }
    let decoded = decode(trace)?;
    let column = outputs
        .iter()
        .map(|n| {
            decoded.output_labels.iter().position(|l| l == n).ok_or_else(|| Error::UnknownLabel(n.clone()))
        })
        .collect::<Result<Vec<usize>>>()?;
    let m = outputs.len();
    let mut mismatches = Vec::new();
    let mut min_margin = f64::INFINITY;
    for (v, &want_row) in expected.iter().enumerate() {
        let mut got = 0u64;
        for (k, &c) in column.iter().enumerate() {
            let p = decoded.levels[v][c];
            let want = (want_row >> k) & 1 == 1;
            min_margin = min_margin.min(if want { p } else { -p });
            got |= ((p > 0.0) as u64) << k;
        }
        if got != want_row {
            mismatches.push(Mismatch { vector: v, expected: bit_string(want_row, m), got: bit_string(got, m) });
        }
    }
    let weak: Vec<WeakOutput> =
        decoded.weak.into_iter().filter(|w| outputs.contains(&w.label)).collect();
    let unclocked: Vec<String> =
        trace.unclocked_outputs.iter().filter(|l| outputs.contains(l)).cloned().collect();
    Ok(LayoutVerdict {
        passed: mismatches.is_empty() && weak.is_empty() && unclocked.is_empty(),
        vectors: expected.len(),
        mismatches,
        weak,
        unclocked,
        min_margin,
        unconverged_samples: trace.unconverged_samples.len(),
    })
}

//! Bistable-approximation simulation of clocked QCA layouts.
//!
//! Each free cell relaxes to `P = x / sqrt(1 + x^2)` with
//! `x = sum_j E_k(i, j) P_j / (2 gamma)`, where `gamma` follows the cell's
//! clock zone between `clock_low_j` and `clock_high_j`. Cells are swept in
//! index order (Gauss-Seidel) until the largest change in one sweep falls
//! below the tolerance.

mod clock;
mod decode;
mod physics;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::layout::{zone_timing, CellKind, Layout, ZoneTiming};
use crate::scalar::Real;

pub use clock::{bennett_schedule, ClockProgram, ClockScheme, Phase, BENNETT_MAX_ZONE, BENNETT_SLOTS};
pub use decode::{decode, verify_layout, verify_trace, Decoded, LayoutVerdict, Mismatch, WeakOutput, WEAK_THRESHOLD};
pub use physics::{kink_energy, SimConfig};

/// Smallest usable cycle length.
pub const MIN_SAMPLES_PER_CYCLE: usize = 64;

/// Input vectors to drive, one bit per label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    pub labels: Vec<String>,
    pub vectors: Vec<Vec<bool>>,
}

impl Stimulus {
    pub fn new(labels: Vec<String>, vectors: Vec<Vec<bool>>) -> Self {
        Self { labels, vectors }
    }

    /// Every assignment of `labels` in ascending binary order, first label
    /// most significant.
    pub fn exhaustive(labels: &[String]) -> Self {
        let n = labels.len();
        let vectors = (0..1usize << n).map(|i| crate::truth::assignment_bits(i, n)).collect();
        Self { labels: labels.to_vec(), vectors }
    }
}

/// Sample positions chosen for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimingPlan {
    pub samples_per_cycle: usize,
    /// Cycles each vector is applied for.
    pub hold_cycles: usize,
    /// Extra cycles after the last vector so deep outputs can settle.
    pub drain_cycles: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace<T> {
    pub scheme: ClockScheme,
    pub plan: TimingPlan,
    pub input_labels: Vec<String>,
    pub vectors: Vec<Vec<bool>>,
    /// Labelled cells in layout order.
    pub labels: Vec<String>,
    pub kinds: Vec<CellKind>,
    /// `polarization[k][s]` is label `k` at sample `s`.
    pub polarization: Vec<Vec<T>>,
    /// Clock level of zones 0..3 at every sample.
    pub clock: Vec<[T; 4]>,
    /// Output label with its pipeline index.
    pub output_latency: Vec<(String, usize)>,
    /// Outputs no input reaches in clock order.
    pub unclocked_outputs: Vec<String>,
    /// Samples that hit the iteration cap.
    pub unconverged_samples: Vec<usize>,
    /// Largest `|P|` any free cell reached.
    pub peak_polarization: T,
}

impl<T: Real> SimTrace<T> {
    pub fn len(&self) -> usize {
        self.clock.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clock.is_empty()
    }

    pub fn series(&self, label: &str) -> Option<&[T]> {
        self.labels.iter().position(|l| l == label).map(|k| self.polarization[k].as_slice())
    }

    /// Sample at which an output at pipeline `index` shows vector `v`.
    pub fn readout_sample(&self, vector: usize, index: usize) -> usize {
        let program = ClockProgram::new(self.scheme, self.plan.samples_per_cycle, 1.0);
        vector * self.plan.hold_cycles * self.plan.samples_per_cycle + program.hold_end(index)
    }

    /// CSV with header `sample,clock0,..,clock3,<label>...`.
    pub fn waveform_csv(&self) -> String {
        let mut out = String::from("sample,clock0,clock1,clock2,clock3");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for s in 0..self.len() {
            out.push_str(&s.to_string());
            for v in self.clock[s].iter().chain(self.polarization.iter().map(|p| &p[s])) {
                out.push_str(&format!(",{:.6}", v.to_f64().unwrap_or(f64::NAN)));
            }
            out.push('\n');
        }
        out
    }
}

struct Coupling<T> {
    cell: usize,
    zone: usize,
    links: Vec<(usize, T)>,
}

fn couplings<T: Real>(layout: &Layout, config: &SimConfig) -> Result<Vec<Coupling<T>>> {
    let cells = &layout.cells;
    let reach = config.radius_of_effect_nm;
    let mut out = Vec::new();
    for (i, ci) in cells.iter().enumerate() {
        if !ci.is_free() {
            continue;
        }
        let mut links = Vec::new();
        for (j, cj) in cells.iter().enumerate() {
            if i == j || (cj.x - ci.x).abs() > reach || (cj.y - ci.y).abs() > reach {
                continue;
            }
            let e: T = kink_energy(ci, cj, config)?;
            if e != T::zero() {
                links.push((j, e));
            }
        }
        out.push(Coupling { cell: i, zone: ci.clock as usize, links });
    }
    Ok(out)
}

/// Hold and drain cycles: each vector is held `hold` cycles, and `drain`
/// extra cycles flush the deepest output after the last vector.
fn cycle_plan(timing: &ZoneTiming, deepest: usize, scheme: ClockScheme) -> Result<(usize, usize)> {
    match scheme {
        ClockScheme::Landauer => {
            let h = timing.hold_cycles;
            Ok((h, ((deepest + 2).div_ceil(4)).saturating_sub(h)))
        }
        ClockScheme::Bennett => {
            let max_index = timing.index.iter().flatten().max().copied().unwrap_or(0);
            if max_index > BENNETT_MAX_ZONE as usize {
                return Err(Error::Simulation(format!(
                    "Bennett clocking latches at most 4 zones per cycle, layout spans {}",
                    max_index + 1
                )));
            }
            Ok((1, 0))
        }
    }
}

/// Clock cycles a run of `vectors` input rows takes; multiply by the
/// samples per cycle to size [`SimConfig::samples`].
pub fn clock_cycles(layout: &Layout, vectors: usize, scheme: ClockScheme) -> Result<usize> {
    let timing = zone_timing(layout);
    let deepest = layout
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == CellKind::Output)
        .map(|(i, c)| timing.index[i].unwrap_or(c.clock as usize))
        .max()
        .unwrap_or(0);
    let (hold, drain) = cycle_plan(&timing, deepest, scheme)?;
    Ok(vectors * hold + drain)
}

/// Runs the layout through `stimulus`, one vector window per input row.
pub fn simulate<T: Real>(
    layout: &Layout,
    stimulus: &Stimulus,
    config: &SimConfig,
    scheme: ClockScheme,
) -> Result<SimTrace<T>> {
    config.validate()?;
    layout.validate()?;
    if stimulus.vectors.is_empty() {
        return Err(Error::Simulation("no input vectors".into()));
    }
    if let Some(v) = stimulus.vectors.iter().position(|v| v.len() != stimulus.labels.len()) {
        return Err(Error::InputArity { expected: stimulus.labels.len(), got: stimulus.vectors[v].len() });
    }
    let slot: HashMap<&str, usize> =
        stimulus.labels.iter().enumerate().map(|(k, l)| (l.as_str(), k)).collect();
    let mut drivers = Vec::new();
    for (i, c) in layout.cells.iter().enumerate() {
        if c.kind == CellKind::Input {
            let label = c.label.as_deref().unwrap_or_default();
            let k = *slot.get(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            drivers.push((i, k));
        }
    }
    for l in &stimulus.labels {
        if !drivers.iter().any(|&(i, _)| layout.cells[i].label.as_deref() == Some(l.as_str())) {
            return Err(Error::LabelMismatch(format!("stimulus drives `{l}`, which is not an input cell")));
        }
    }

    let timing = zone_timing(layout);
    // an output no input reaches in clock order is read in its own zone's
    // first hold, where a broken data path shows up as a wrong or weak bit
    let output_latency: Vec<(String, usize)> = layout
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == CellKind::Output)
        .filter_map(|(i, c)| Some((c.label.clone()?, timing.index[i].unwrap_or(c.clock as usize))))
        .collect();
    let unclocked_outputs: Vec<String> = layout
        .cells
        .iter()
        .enumerate()
        .filter(|(i, c)| c.kind == CellKind::Output && timing.index[*i].is_none())
        .filter_map(|(_, c)| c.label.clone())
        .collect();
    let n_vec = stimulus.vectors.len();
    let deepest = output_latency.iter().map(|(_, k)| *k).max().unwrap_or(0);
    let (hold_cycles, drain_cycles) = cycle_plan(&timing, deepest, scheme)?;
    let cycles = n_vec * hold_cycles + drain_cycles;
    let spc = config.samples / cycles;
    if spc < MIN_SAMPLES_PER_CYCLE {
        return Err(Error::Simulation(format!(
            "{} samples over {cycles} clock cycles leaves {spc} per cycle (need {MIN_SAMPLES_PER_CYCLE})",
            config.samples
        )));
    }
    let plan = TimingPlan { samples_per_cycle: spc, hold_cycles, drain_cycles };
    let program = ClockProgram::new(scheme, spc, config.clock_amplitude_factor);

    let cells = &layout.cells;
    let mut pol: Vec<T> = cells
        .iter()
        .map(|c| match c.kind {
            CellKind::Fixed => T::of(c.polarization.unwrap_or(0.0)),
            _ => T::zero(),
        })
        .collect();
    let links = couplings::<T>(layout, config)?;
    let labelled: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].label.is_some()).collect();
    let mut series: Vec<Vec<T>> = vec![Vec::with_capacity(config.samples); labelled.len()];
    let mut clock = Vec::with_capacity(config.samples);
    let mut unconverged = Vec::new();
    let mut peak = T::zero();
    let (low, high) = (config.clock_low_j, config.clock_high_j);
    let tol = T::of(config.convergence_tolerance);
    let one = T::one();
    let window = hold_cycles * spc;

    for s in 0..config.samples {
        let vector = &stimulus.vectors[(s / window).min(n_vec - 1)];
        for &(i, k) in &drivers {
            pol[i] = if vector[k] { one } else { -one };
        }
        let mut levels = [T::zero(); 4];
        let mut inv_2gamma = [T::zero(); 4];
        for z in 0..4 {
            let level = program.level(z as u8, s);
            levels[z] = T::of(level);
            inv_2gamma[z] = T::of(1.0 / (2.0 * (low + level * (high - low))));
        }
        let mut settled = false;
        for _ in 0..config.max_iterations_per_sample {
            let mut delta = T::zero();
            for c in &links {
                let mut x = T::zero();
                for &(j, e) in &c.links {
                    x = x + e * pol[j];
                }
                x = x * inv_2gamma[c.zone];
                let p = x / (one + x * x).sqrt();
                delta = delta.max((p - pol[c.cell]).abs());
                pol[c.cell] = p;
            }
            if delta < tol {
                settled = true;
                break;
            }
        }
        if !settled {
            unconverged.push(s);
        }
        for c in &links {
            let a = pol[c.cell].abs();
            if !(a < one) {
                return Err(Error::Simulation(format!("cell {} saturated at sample {s}", c.cell)));
            }
            peak = peak.max(a);
        }
        for (k, &i) in labelled.iter().enumerate() {
            series[k].push(pol[i]);
        }
        clock.push(levels);
    }

    Ok(SimTrace {
        scheme,
        plan,
        input_labels: stimulus.labels.clone(),
        vectors: stimulus.vectors.clone(),
        labels: labelled.iter().map(|&i| cells[i].label.clone().unwrap_or_default()).collect(),
        kinds: labelled.iter().map(|&i| cells[i].kind).collect(),
        polarization: series,
        clock,
        output_latency,
        unclocked_outputs,
        unconverged_samples: unconverged,
        peak_polarization: peak,
    })
}

//! Named designs: the network, layout and reference table behind each circuit.

use anyhow::{bail, Result};
use qca_core::adders::{adder_subtractor, full_adder, ripple, verify_ripple, AdderForm, RippleConfig, RippleKind};
use qca_core::equiv::{equivalent, Verdict};
use qca_core::layout::{gen_circuit, CircuitKind, Layout};
use qca_core::network::MajNetwork;
use qca_core::truth::TruthSpec;

pub const RIPPLE_WIDTH: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct Design {
    pub kind: CircuitKind,
    pub form: AdderForm,
}

impl Design {
    /// `form` defaults to the one each layout was drawn for.
    pub fn new(kind: CircuitKind, form: Option<AdderForm>) -> Self {
        let default = if kind == CircuitKind::Fa5 { AdderForm::Maj5 } else { AdderForm::Standard };
        Self { kind, form: form.unwrap_or(default) }
    }

    pub fn ripple_config(&self) -> Option<RippleConfig> {
        let kind = match self.kind {
            CircuitKind::Ripple8 => RippleKind::Adder,
            CircuitKind::Ripple8Sub => RippleKind::AdderSubtractor,
            _ => return None,
        };
        Some(RippleConfig { width: RIPPLE_WIDTH, kind, form: self.form })
    }

    pub fn network(&self) -> Result<MajNetwork> {
        Ok(match self.kind {
            CircuitKind::Fa | CircuitKind::Fa5 => full_adder(self.form),
            CircuitKind::Fas => adder_subtractor(self.form),
            _ => ripple(self.ripple_config().expect("ripple kind"))?,
        })
    }

    pub fn layout(&self) -> Result<Layout> {
        Ok(gen_circuit(self.kind)?)
    }

    /// Exhaustive check of the network against integer arithmetic.
    pub fn check_logic(&self, net: &MajNetwork) -> Result<()> {
        if let Some(config) = self.ripple_config() {
            if let Some(row) = verify_ripple(net, config)? {
                bail!("network disagrees with integer arithmetic at row {row}");
            }
            return Ok(());
        }
        let reference = single_stage_reference(self.kind)?;
        if let Verdict::Counterexample { row, lhs, rhs, .. } = equivalent(net, &reference)? {
            bail!("network disagrees with the reference table at row {row}: {lhs:?} vs {rhs:?}");
        }
        Ok(())
    }
}

/// Cout, Sum and the two garbage copies for the adder; Cout, Sum/Sub, Bout
/// and one garbage copy for the adder/subtractor.
pub fn single_stage_reference(kind: CircuitKind) -> Result<TruthSpec> {
    let ones = |r: &[bool]| r.iter().filter(|&&b| b).count();
    Ok(match kind {
        CircuitKind::Fa | CircuitKind::Fa5 => {
            TruthSpec::from_fn(&["a", "b", "c_in"], &["Cout", "Sum", "Gar1", "Gar2"], |r| {
                vec![ones(r) >= 2, ones(r) % 2 == 1, r[0], r[2]]
            })?
        }
        CircuitKind::Fas => TruthSpec::from_fn(&["a", "b", "c_in"], &["Cout", "Sum/Sub", "Bout", "Gar1"], |r| {
            let borrow = (!r[0] as u8 + r[1] as u8 + r[2] as u8) >= 2;
            vec![ones(r) >= 2, ones(r) % 2 == 1, borrow, r[2]]
        })?,
        other => bail!("{other} has no single-stage reference table"),
    })
}

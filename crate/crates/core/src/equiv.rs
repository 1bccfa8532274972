//! Exhaustive equivalence checking between networks and truth tables.

use crate::error::{Error, Result};
use crate::network::MajNetwork;
use crate::truth::{self, TruthSpec};

/// Anything that can produce a full packed truth table.
pub trait TruthSource {
    fn input_arity(&self) -> usize;
    fn output_arity(&self) -> usize;
    fn truth_rows(&self) -> Result<Vec<u64>>;
}

impl TruthSource for TruthSpec {
    fn input_arity(&self) -> usize {
        self.num_inputs()
    }

    fn output_arity(&self) -> usize {
        self.num_outputs()
    }

    fn truth_rows(&self) -> Result<Vec<u64>> {
        Ok(self.rows().to_vec())
    }
}

impl TruthSource for MajNetwork {
    fn input_arity(&self) -> usize {
        self.num_inputs()
    }

    fn output_arity(&self) -> usize {
        self.num_outputs()
    }

    fn truth_rows(&self) -> Result<Vec<u64>> {
        self.eval_all_rows()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Counterexample {
        /// Smallest disagreeing assignment index.
        row: usize,
        /// Assignment bits, MSB-first in input order.
        assignment: Vec<bool>,
        lhs: Vec<bool>,
        rhs: Vec<bool>,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

pub fn equivalent(lhs: &dyn TruthSource, rhs: &dyn TruthSource) -> Result<Verdict> {
    if lhs.input_arity() != rhs.input_arity() {
        return Err(Error::InputArity { expected: lhs.input_arity(), got: rhs.input_arity() });
    }
    if lhs.output_arity() != rhs.output_arity() {
        return Err(Error::OutputArity { lhs: lhs.output_arity(), rhs: rhs.output_arity() });
    }
    let (l, r) = (lhs.truth_rows()?, rhs.truth_rows()?);
    let m = lhs.output_arity();
    Ok(match l.iter().zip(&r).position(|(a, b)| a != b) {
        None => Verdict::Equal,
        Some(row) => Verdict::Counterexample {
            row,
            assignment: truth::assignment_bits(row, lhs.input_arity()),
            lhs: truth::unpack(l[row], m),
            rhs: truth::unpack(r[row], m),
        },
    })
}

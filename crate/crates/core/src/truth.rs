//! Exhaustive multi-output truth tables.
//!
//! Row `i` holds the outputs for the assignment whose bits, read MSB-first in
//! input declaration order, spell `i`. Output `j` of a row lives in bit `j` of
//! the packed row word.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on input count for exhaustive representations.
pub const MAX_INPUTS: usize = 24;
/// Outputs are packed into a `u64` per row.
pub const MAX_OUTPUTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthSpec {
    input_names: Vec<String>,
    output_names: Vec<String>,
    rows: Vec<u64>,
}

impl TruthSpec {
    pub fn new(input_names: Vec<String>, output_names: Vec<String>, rows: Vec<u64>) -> Result<Self> {
        let n = input_names.len();
        if n > MAX_INPUTS {
            return Err(Error::Capacity { inputs: n, limit: MAX_INPUTS });
        }
        if output_names.len() > MAX_OUTPUTS {
            return Err(Error::InvalidSpec(format!(
                "{} outputs exceed the limit of {MAX_OUTPUTS}",
                output_names.len()
            )));
        }
        if rows.len() != 1usize << n {
            return Err(Error::InvalidSpec(format!(
                "expected {} rows for {n} inputs, got {}",
                1usize << n,
                rows.len()
            )));
        }
        let mask = output_mask(output_names.len());
        if let Some(i) = rows.iter().position(|r| r & !mask != 0) {
            return Err(Error::InvalidSpec(format!("row {i} has bits beyond the output count")));
        }
        Ok(Self { input_names, output_names, rows })
    }

    /// Builds a spec by evaluating `f` on every assignment.
    pub fn from_fn<F>(input_names: &[&str], output_names: &[&str], mut f: F) -> Result<Self>
    where
        F: FnMut(&[bool]) -> Vec<bool>,
    {
        let n = input_names.len();
        if n > MAX_INPUTS {
            return Err(Error::Capacity { inputs: n, limit: MAX_INPUTS });
        }
        let mut rows = Vec::with_capacity(1 << n);
        for i in 0..(1usize << n) {
            let bits = assignment_bits(i, n);
            let out = f(&bits);
            if out.len() != output_names.len() {
                return Err(Error::OutputArity { lhs: out.len(), rhs: output_names.len() });
            }
            rows.push(pack(&out));
        }
        Self::new(
            input_names.iter().map(|s| s.to_string()).collect(),
            output_names.iter().map(|s| s.to_string()).collect(),
            rows,
        )
    }

    /// Parses rows given as bit-strings, first character = first output.
    pub fn from_bit_strings(input_names: &[&str], output_names: &[&str], rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| parse_bit_string(s, output_names.len()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            input_names.iter().map(|s| s.to_string()).collect(),
            output_names.iter().map(|s| s.to_string()).collect(),
            rows,
        )
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.output_names.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> u64 {
        self.rows[index]
    }

    pub fn output_bit(&self, row: usize, output: usize) -> bool {
        (self.rows[row] >> output) & 1 == 1
    }

    /// Column of one output, one bit per row.
    pub fn column(&self, output: usize) -> Vec<bool> {
        (0..self.rows.len()).map(|r| self.output_bit(r, output)).collect()
    }

    /// Keeps only the listed outputs, in the listed order.
    pub fn select_outputs(&self, outputs: &[usize]) -> Result<Self> {
        if let Some(&bad) = outputs.iter().find(|&&o| o >= self.num_outputs()) {
            return Err(Error::InvalidSpec(format!("no output column {bad}")));
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                outputs
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (k, &o)| acc | (((r >> o) & 1) << k))
            })
            .collect();
        Self::new(
            self.input_names.clone(),
            outputs.iter().map(|&o| self.output_names[o].clone()).collect(),
            rows,
        )
    }

    /// Appends a copy of input column `input` as a new output named `name`.
    pub fn with_input_column(&self, input: usize, name: &str) -> Result<Self> {
        let n = self.num_inputs();
        if input >= n {
            return Err(Error::InvalidSpec(format!("no input column {input}")));
        }
        let m = self.num_outputs();
        if m >= MAX_OUTPUTS {
            return Err(Error::InvalidSpec("output limit reached".into()));
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &r)| r | ((input_bit(i, input, n) as u64) << m))
            .collect();
        let mut output_names = self.output_names.clone();
        output_names.push(name.to_string());
        Self::new(self.input_names.clone(), output_names, rows)
    }

    pub fn row_bit_string(&self, row: usize) -> String {
        bit_string(self.rows[row], self.num_outputs())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&TruthSpecFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TruthSpecFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// Value of input `input` (declaration index) in assignment `row`.
pub fn input_bit(row: usize, input: usize, num_inputs: usize) -> bool {
    (row >> (num_inputs - 1 - input)) & 1 == 1
}

/// Expands an assignment index into per-input bits, MSB-first.
pub fn assignment_bits(row: usize, num_inputs: usize) -> Vec<bool> {
    (0..num_inputs).map(|k| input_bit(row, k, num_inputs)).collect()
}

/// Inverse of [`assignment_bits`].
pub fn assignment_index(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

pub fn pack(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0u64, |acc, (k, &b)| acc | ((b as u64) << k))
}

pub fn unpack(word: u64, len: usize) -> Vec<bool> {
    (0..len).map(|k| (word >> k) & 1 == 1).collect()
}

pub(crate) fn output_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

pub fn bit_string(word: u64, len: usize) -> String {
    (0..len).map(|k| if (word >> k) & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_bit_string(s: &str, len: usize) -> Result<u64> {
    if s.chars().count() != len {
        return Err(Error::InvalidSpec(format!("row `{s}` should have {len} bits")));
    }
    s.chars().enumerate().try_fold(0u64, |acc, (k, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << k)),
        other => Err(Error::InvalidSpec(format!("bad bit character `{other}`"))),
    })
}

/// On-disk form: `{"inputs":[..],"outputs":[..],"rows":["01",..]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TruthSpecFile {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rows: Vec<String>,
}

impl From<&TruthSpec> for TruthSpecFile {
    fn from(spec: &TruthSpec) -> Self {
        Self {
            inputs: spec.input_names.clone(),
            outputs: spec.output_names.clone(),
            rows: (0..spec.rows.len()).map(|r| spec.row_bit_string(r)).collect(),
        }
    }
}

impl TryFrom<TruthSpecFile> for TruthSpec {
    type Error = Error;

    fn try_from(file: TruthSpecFile) -> Result<Self> {
        let m = file.outputs.len();
        let rows = file
            .rows
            .iter()
            .map(|s| parse_bit_string(s, m))
            .collect::<Result<Vec<_>>>()?;
        TruthSpec::new(file.inputs, file.outputs, rows)
    }
}

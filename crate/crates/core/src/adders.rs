//! Majority-logic full adders, adder/subtractors and ripple compositions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{MajNetwork, NetworkBuilder, NodeId};
use crate::truth;

/// Sum constructions. `Cout` is always `M(a, b, c)`; primes denote NOT.
///
/// Several forms are kept only as regression subjects: `CoutB`, `PairA`,
/// `PairB` and `PairC` are *not* equivalent to `a ^ b ^ c`, and the
/// equivalence checker reports a counterexample for each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdderForm {
    /// `M(Cout', a, M(a', b, c))`.
    Standard,
    /// `M(Cout', b, M(a, b', c'))`, not a valid sum.
    CoutB,
    /// `M(Cout', c, M(a, b, c'))`.
    CoutC,
    /// `M(M(a, b, c'), M(a, b', c'), a')`, not a valid sum.
    PairA,
    /// `M(M(a, b, c'), M(a', b, c'), b')`, not a valid sum.
    PairB,
    /// `M(M(a', b, c'), M(a, b', c'), c')`, not a valid sum.
    PairC,
    /// `M(Cout', b, M(a, b', c))`.
    CoutBFixed,
    /// `M(M(a, b, c'), M(a, b', c), a')`.
    PairAFixed,
    /// `M5(Cout', Cout', a, b, c)`.
    Maj5,
}

impl AdderForm {
    pub const ALL: [AdderForm; 9] = [
        AdderForm::Standard,
        AdderForm::CoutB,
        AdderForm::CoutC,
        AdderForm::PairA,
        AdderForm::PairB,
        AdderForm::PairC,
        AdderForm::CoutBFixed,
        AdderForm::PairAFixed,
        AdderForm::Maj5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdderForm::Standard => "standard",
            AdderForm::CoutB => "cout-b",
            AdderForm::CoutC => "cout-c",
            AdderForm::PairA => "pair-a",
            AdderForm::PairB => "pair-b",
            AdderForm::PairC => "pair-c",
            AdderForm::CoutBFixed => "cout-b-fixed",
            AdderForm::PairAFixed => "pair-a-fixed",
            AdderForm::Maj5 => "maj5",
        }
    }
}

impl fmt::Display for AdderForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdderForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AdderForm::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownName(format!("adder form `{s}`")))
    }
}

/// Emits the sum node for one bit slice; `cout` must be `M(a, b, c)`.
pub fn sum_node(bld: &mut NetworkBuilder, form: AdderForm, a: NodeId, b: NodeId, c: NodeId, cout: NodeId) -> NodeId {
    match form {
        AdderForm::Standard => {
            let na = bld.not(a);
            let inner = bld.maj3(na, b, c);
            let ncout = bld.not(cout);
            bld.maj3(ncout, a, inner)
        }
        AdderForm::CoutB => {
            let (nb, nc) = (bld.not(b), bld.not(c));
            let inner = bld.maj3(a, nb, nc);
            let ncout = bld.not(cout);
            bld.maj3(ncout, b, inner)
        }
        AdderForm::CoutC => {
            let nc = bld.not(c);
            let inner = bld.maj3(a, b, nc);
            let ncout = bld.not(cout);
            bld.maj3(ncout, c, inner)
        }
        AdderForm::CoutBFixed => {
            let nb = bld.not(b);
            let inner = bld.maj3(a, nb, c);
            let ncout = bld.not(cout);
            bld.maj3(ncout, b, inner)
        }
        AdderForm::PairA => {
            let (na, nb, nc) = (bld.not(a), bld.not(b), bld.not(c));
            let p = bld.maj3(a, b, nc);
            let q = bld.maj3(a, nb, nc);
            bld.maj3(p, q, na)
        }
        AdderForm::PairB => {
            let (na, nb, nc) = (bld.not(a), bld.not(b), bld.not(c));
            let p = bld.maj3(a, b, nc);
            let q = bld.maj3(na, b, nc);
            bld.maj3(p, q, nb)
        }
        AdderForm::PairC => {
            let (na, nb, nc) = (bld.not(a), bld.not(b), bld.not(c));
            let p = bld.maj3(na, b, nc);
            let q = bld.maj3(a, nb, nc);
            bld.maj3(p, q, nc)
        }
        AdderForm::PairAFixed => {
            let (na, nb, nc) = (bld.not(a), bld.not(b), bld.not(c));
            let p = bld.maj3(a, b, nc);
            let q = bld.maj3(a, nb, c);
            bld.maj3(p, q, na)
        }
        AdderForm::Maj5 => {
            let ncout = bld.not(cout);
            bld.maj5(ncout, ncout, a, b, c)
        }
    }
}

/// Reversible full adder: outputs `(Cout, Sum, Gar1 = a, Gar2 = c_in)`,
/// two of them main. The garbage outputs are plain wires from the inputs.
pub fn full_adder(form: AdderForm) -> MajNetwork {
    let mut bld = NetworkBuilder::new();
    let (a, b, c) = (bld.input("a"), bld.input("b"), bld.input("c_in"));
    let cout = bld.maj3(a, b, c);
    let sum = sum_node(&mut bld, form, a, b, c, cout);
    bld.output("Cout", cout).output("Sum", sum).output("Gar1", a).output("Gar2", c);
    bld.finish(2).expect("static construction")
}

/// Reversible adder/subtractor: outputs `(Cout, Sum/Sub, Bout, Gar1 = c_in)`.
/// `Bout = M(a', b, c_in)`, which the standard form shares with the sum.
pub fn adder_subtractor(form: AdderForm) -> MajNetwork {
    let mut bld = NetworkBuilder::new();
    let (a, b, c) = (bld.input("a"), bld.input("b"), bld.input("c_in"));
    let (cout, sum, bout) = add_sub_slice(&mut bld, form, a, b, c);
    bld.output("Cout", cout).output("Sum/Sub", sum).output("Bout", bout).output("Gar1", c);
    bld.finish(3).expect("static construction")
}

fn add_sub_slice(bld: &mut NetworkBuilder, form: AdderForm, a: NodeId, b: NodeId, c: NodeId) -> (NodeId, NodeId, NodeId) {
    let cout = bld.maj3(a, b, c);
    let sum = sum_node(bld, form, a, b, c, cout);
    let na = bld.not(a);
    let bout = bld.maj3(na, b, c);
    (cout, sum, bout)
}

/// 2:1 multiplexer `sel' x + sel y` as `M(M(x, sel', 0), M(y, sel, 0), 1)`.
pub fn mux2(bld: &mut NetworkBuilder, sel: NodeId, x: NodeId, y: NodeId) -> NodeId {
    let nsel = bld.not(sel);
    let zero_x = bld.constant(false);
    let px = bld.maj3(x, nsel, zero_x);
    let zero_y = bld.constant(false);
    let py = bld.maj3(y, sel, zero_y);
    let one = bld.constant(true);
    bld.maj3(px, py, one)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RippleKind {
    Adder,
    AdderSubtractor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RippleConfig {
    pub width: usize,
    pub kind: RippleKind,
    pub form: AdderForm,
}

impl Default for RippleConfig {
    fn default() -> Self {
        Self { width: 8, kind: RippleKind::Adder, form: AdderForm::Standard }
    }
}

pub const MAX_RIPPLE_WIDTH: usize = 16;

/// Ripple-chained adder (or adder/subtractor with a per-stage chain mux).
///
/// Inputs: `a{w-1}..a0`, `b{w-1}..b0`, `cin`, then `sel` for the
/// adder/subtractor. Outputs: `s{w-1}..s0`, then the chain-out `cout`.
pub fn ripple(config: RippleConfig) -> Result<MajNetwork> {
    let w = config.width;
    if w == 0 || w > MAX_RIPPLE_WIDTH {
        return Err(Error::InvalidWidth(w));
    }
    let mut bld = NetworkBuilder::new();
    let a: Vec<NodeId> = (0..w).rev().map(|i| bld.input(&format!("a{i}"))).collect();
    let b: Vec<NodeId> = (0..w).rev().map(|i| bld.input(&format!("b{i}"))).collect();
    let mut chain = bld.input("cin");
    let sel = match config.kind {
        RippleKind::Adder => None,
        RippleKind::AdderSubtractor => Some(bld.input("sel")),
    };
    let mut sums = Vec::with_capacity(w);
    // a[k] holds bit w-1-k, so walk from the LSB end
    for i in 0..w {
        let (ai, bi) = (a[w - 1 - i], b[w - 1 - i]);
        match sel {
            None => {
                let cout = bld.maj3(ai, bi, chain);
                sums.push(sum_node(&mut bld, config.form, ai, bi, chain, cout));
                chain = cout;
            }
            Some(s) => {
                let (cout, sum, bout) = add_sub_slice(&mut bld, config.form, ai, bi, chain);
                sums.push(sum);
                chain = mux2(&mut bld, s, cout, bout);
            }
        }
    }
    for i in (0..w).rev() {
        bld.output(&format!("s{i}"), sums[i]);
    }
    bld.output("cout", chain);
    bld.finish(w + 1)
}

/// Integer reference: `sel = 0` adds with carry, `sel = 1` subtracts with borrow.
pub fn arithmetic_oracle(a: u64, b: u64, chain_in: bool, sel: bool, width: usize) -> Result<(u64, bool)> {
    if width == 0 || width > 63 {
        return Err(Error::InvalidWidth(width));
    }
    let modulus = 1u64 << width;
    if a >= modulus || b >= modulus {
        return Err(Error::OutOfRange(format!("operands {a}, {b} do not fit in {width} bits")));
    }
    let cin = chain_in as u64;
    Ok(if sel {
        let diff = a as i128 - b as i128 - cin as i128;
        (diff.rem_euclid(modulus as i128) as u64, diff < 0)
    } else {
        let total = a + b + cin;
        (total % modulus, total >= modulus)
    })
}

/// Decodes a ripple row into `(a, b, cin, sel)`.
pub fn ripple_operands(row: usize, config: RippleConfig) -> (u64, u64, bool, bool) {
    let w = config.width;
    let has_sel = config.kind == RippleKind::AdderSubtractor;
    let low = if has_sel { 2 } else { 1 };
    let sel = has_sel && row & 1 == 1;
    let cin = (row >> (low - 1)) & 1 == 1;
    let b = ((row >> low) & ((1 << w) - 1)) as u64;
    let a = ((row >> (low + w)) & ((1 << w) - 1)) as u64;
    (a, b, cin, sel)
}

/// Packs `(result, chain_out)` into a row word matching [`ripple`]'s outputs.
pub fn ripple_row(result: u64, chain_out: bool, width: usize) -> u64 {
    let bits: Vec<bool> = (0..width)
        .rev()
        .map(|i| (result >> i) & 1 == 1)
        .chain(std::iter::once(chain_out))
        .collect();
    truth::pack(&bits)
}

/// Exhaustively compares a ripple network against the integer oracle;
/// returns the first failing row, if any.
pub fn verify_ripple(net: &MajNetwork, config: RippleConfig) -> Result<Option<usize>> {
    let rows = net.eval_all_rows()?;
    let sub = config.kind == RippleKind::AdderSubtractor;
    for (row, &got) in rows.iter().enumerate() {
        let (a, b, cin, sel) = ripple_operands(row, config);
        let (res, out) = arithmetic_oracle(a, b, cin, sel && sub, config.width)?;
        if got != ripple_row(res, out, config.width) {
            return Ok(Some(row));
        }
    }
    Ok(None)
}

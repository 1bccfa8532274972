//! Majority/inverter networks: the synthesis IR.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::truth::{self, TruthSpec, MAX_INPUTS};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MajNode {
    Input(usize),
    Const(bool),
    Not(NodeId),
    Maj3([NodeId; 3]),
    Maj5([NodeId; 5]),
}

impl MajNode {
    pub fn operands(&self) -> &[NodeId] {
        match self {
            MajNode::Input(_) | MajNode::Const(_) => &[],
            MajNode::Not(x) => std::slice::from_ref(x),
            MajNode::Maj3(args) => args,
            MajNode::Maj5(args) => args,
        }
    }

    fn is_gate(&self) -> bool {
        matches!(self, MajNode::Not(_) | MajNode::Maj3(_) | MajNode::Maj5(_))
    }
}

/// Three-input majority on 64 lanes at once.
#[inline]
pub fn maj3_word(a: u64, b: u64, c: u64) -> u64 {
    (a & b) | (b & c) | (a & c)
}

/// Five-input majority on 64 lanes: the ten three-literal products.
#[inline]
pub fn maj5_word(a: u64, b: u64, c: u64, d: u64, e: u64) -> u64 {
    (a & b & c)
        | (a & b & d)
        | (a & b & e)
        | (a & c & d)
        | (a & c & e)
        | (a & d & e)
        | (b & c & d)
        | (b & c & e)
        | (b & d & e)
        | (c & d & e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedOutput {
    pub name: String,
    pub node: NodeId,
}

/// A topologically ordered DAG of MAJ3/MAJ5/NOT/constant nodes.
///
/// The first `main_output_count` outputs are functional; any remaining ones
/// are garbage outputs kept only for reversibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajNetwork {
    input_names: Vec<String>,
    nodes: Vec<MajNode>,
    outputs: Vec<NamedOutput>,
    main_output_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkMetrics {
    pub maj3_count: usize,
    pub maj5_count: usize,
    pub not_count: usize,
    pub constant_input_count: usize,
    pub garbage_output_count: usize,
    pub logic_depth: usize,
}

impl NetworkMetrics {
    pub fn majority_count(&self) -> usize {
        self.maj3_count + self.maj5_count
    }
}

impl MajNetwork {
    pub fn new(
        input_names: Vec<String>,
        nodes: Vec<MajNode>,
        outputs: Vec<NamedOutput>,
        main_output_count: usize,
    ) -> Result<Self> {
        let n = input_names.len();
        if n == 0 {
            return Err(Error::InvalidNetwork("at least one input is required".into()));
        }
        let mut seen_input = vec![false; n];
        for (id, node) in nodes.iter().enumerate() {
            if let MajNode::Input(k) = node {
                if *k >= n {
                    return Err(Error::InvalidNetwork(format!("node {id} reads input {k} of {n}")));
                }
                seen_input[*k] = true;
            }
            if let Some(&bad) = node.operands().iter().find(|&&op| op >= id) {
                return Err(Error::InvalidNetwork(format!(
                    "node {id} references node {bad}, which is not earlier"
                )));
            }
        }
        if !seen_input.iter().any(|&s| s) {
            return Err(Error::InvalidNetwork("no input node".into()));
        }
        if let Some(o) = outputs.iter().find(|o| o.node >= nodes.len()) {
            return Err(Error::InvalidNetwork(format!("output {} references missing node {}", o.name, o.node)));
        }
        if main_output_count > outputs.len() {
            return Err(Error::InvalidNetwork(format!(
                "{main_output_count} main outputs declared but only {} outputs exist",
                outputs.len()
            )));
        }
        Ok(Self { input_names, nodes, outputs, main_output_count })
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn nodes(&self) -> &[MajNode] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[NamedOutput] {
        &self.outputs
    }

    pub fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|o| o.name.clone()).collect()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn main_output_count(&self) -> usize {
        self.main_output_count
    }

    /// Same network with the garbage outputs dropped.
    pub fn without_garbage(&self) -> Self {
        let mut net = self.clone();
        net.outputs.truncate(self.main_output_count);
        net
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<Vec<bool>> {
        if assignment.len() != self.num_inputs() {
            return Err(Error::InputArity { expected: self.num_inputs(), got: assignment.len() });
        }
        let words: Vec<u64> = assignment.iter().map(|&b| if b { !0 } else { 0 }).collect();
        Ok(self.eval_words(&words).into_iter().map(|w| w & 1 == 1).collect())
    }

    /// Bit-parallel evaluation: lane `l` of every word is one assignment.
    ///
    /// Panics if `inputs.len()` differs from the input count.
    pub fn eval_words(&self, inputs: &[u64]) -> Vec<u64> {
        assert_eq!(inputs.len(), self.num_inputs(), "input word count");
        let mut values: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                MajNode::Input(k) => inputs[k],
                MajNode::Const(b) => {
                    if b {
                        !0
                    } else {
                        0
                    }
                }
                MajNode::Not(x) => !values[x],
                MajNode::Maj3([a, b, c]) => maj3_word(values[a], values[b], values[c]),
                MajNode::Maj5([a, b, c, d, e]) => {
                    maj5_word(values[a], values[b], values[c], values[d], values[e])
                }
            };
            values.push(v);
        }
        self.outputs.iter().map(|o| values[o.node]).collect()
    }

    /// Evaluates every assignment; returns packed output rows in index order.
    pub fn eval_all_rows(&self) -> Result<Vec<u64>> {
        let n = self.num_inputs();
        if n > MAX_INPUTS {
            return Err(Error::Capacity { inputs: n, limit: MAX_INPUTS });
        }
        if self.num_outputs() > truth::MAX_OUTPUTS {
            return Err(Error::InvalidNetwork("too many outputs for packed rows".into()));
        }
        let total = 1usize << n;
        let mut rows = vec![0u64; total];
        let mut base = 0usize;
        while base < total {
            let words = lane_inputs(base, n);
            let outs = self.eval_words(&words);
            let lanes = (total - base).min(64);
            for (j, w) in outs.iter().enumerate() {
                for l in 0..lanes {
                    rows[base + l] |= ((w >> l) & 1) << j;
                }
            }
            base += 64;
        }
        Ok(rows)
    }

    pub fn to_truth_spec(&self) -> Result<TruthSpec> {
        let rows = self.eval_all_rows()?;
        TruthSpec::new(self.input_names.clone(), self.output_names(), rows)
    }

    fn live_nodes(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        for o in &self.outputs {
            live[o.node] = true;
        }
        for id in (0..self.nodes.len()).rev() {
            if live[id] {
                for &op in self.nodes[id].operands() {
                    live[op] = true;
                }
            }
        }
        live
    }

    /// Structural gate counts over the nodes reachable from the outputs.
    pub fn metrics(&self) -> NetworkMetrics {
        let live = self.live_nodes();
        let mut m = NetworkMetrics {
            maj3_count: 0,
            maj5_count: 0,
            not_count: 0,
            constant_input_count: 0,
            garbage_output_count: self.outputs.len() - self.main_output_count,
            logic_depth: 0,
        };
        let mut feeds_gate = vec![false; self.nodes.len()];
        let mut depth = vec![0usize; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                continue;
            }
            match node {
                MajNode::Maj3(_) => m.maj3_count += 1,
                MajNode::Maj5(_) => m.maj5_count += 1,
                MajNode::Not(_) => m.not_count += 1,
                _ => {}
            }
            if node.is_gate() {
                for &op in node.operands() {
                    feeds_gate[op] = true;
                }
                depth[id] = 1 + node.operands().iter().map(|&op| depth[op]).max().unwrap_or(0);
            }
        }
        m.constant_input_count = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(id, n)| matches!(n, MajNode::Const(_)) && feeds_gate[*id])
            .count();
        m.logic_depth = self.outputs.iter().map(|o| depth[o.node]).max().unwrap_or(0);
        m
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&NetworkFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// Input words for the 64 assignments starting at `base` (a multiple of 64).
pub(crate) fn lane_inputs(base: usize, n: usize) -> Vec<u64> {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    (0..n)
        .map(|k| {
            let p = n - 1 - k;
            if p < 6 {
                PATTERNS[p]
            } else if (base >> p) & 1 == 1 {
                !0
            } else {
                0
            }
        })
        .collect()
}

/// Incremental constructor with structural hashing of NOT and MAJ nodes.
///
/// `not(not(x))` collapses to `x`. Constants are never shared: each call to
/// [`NetworkBuilder::constant`] is its own polarization-fixed driver.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    input_names: Vec<String>,
    nodes: Vec<MajNode>,
    outputs: Vec<NamedOutput>,
    strash: HashMap<MajNode, NodeId>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: MajNode) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn hashed(&mut self, node: MajNode) -> NodeId {
        if let Some(&id) = self.strash.get(&node) {
            return id;
        }
        let id = self.push(node);
        self.strash.insert(node, id);
        id
    }

    pub fn input(&mut self, name: &str) -> NodeId {
        let k = self.input_names.len();
        self.input_names.push(name.to_string());
        self.push(MajNode::Input(k))
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.push(MajNode::Const(value))
    }

    pub fn not(&mut self, x: NodeId) -> NodeId {
        if let MajNode::Not(inner) = self.nodes[x] {
            return inner;
        }
        self.hashed(MajNode::Not(x))
    }

    pub fn maj3(&mut self, a: NodeId, b: NodeId, c: NodeId) -> NodeId {
        let mut args = [a, b, c];
        args.sort_unstable();
        self.hashed(MajNode::Maj3(args))
    }

    pub fn maj5(&mut self, a: NodeId, b: NodeId, c: NodeId, d: NodeId, e: NodeId) -> NodeId {
        let mut args = [a, b, c, d, e];
        args.sort_unstable();
        self.hashed(MajNode::Maj5(args))
    }

    /// `x AND y` as `M(x, y, 0)`.
    pub fn and2(&mut self, x: NodeId, y: NodeId) -> NodeId {
        let zero = self.constant(false);
        self.maj3(x, y, zero)
    }

    /// `x OR y` as `M(x, y, 1)`.
    pub fn or2(&mut self, x: NodeId, y: NodeId) -> NodeId {
        let one = self.constant(true);
        self.maj3(x, y, one)
    }

    pub fn output(&mut self, name: &str, node: NodeId) -> &mut Self {
        self.outputs.push(NamedOutput { name: name.to_string(), node });
        self
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Finishes the network; the first `main_output_count` outputs are functional.
    pub fn finish(self, main_output_count: usize) -> Result<MajNetwork> {
        MajNetwork::new(self.input_names, self.nodes, self.outputs, main_output_count)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum NodeEntry {
    Input { index: usize },
    Const { value: u8 },
    Not { args: [usize; 1] },
    Maj3 { args: [usize; 3] },
    Maj5 { args: [usize; 5] },
}

#[derive(Debug, Serialize, Deserialize)]
struct OutputEntry {
    name: String,
    node: usize,
}

/// On-disk network form, see the README for the schema.
#[derive(Debug, Serialize, Deserialize)]
struct NetworkFile {
    inputs: Vec<String>,
    nodes: Vec<NodeEntry>,
    outputs: Vec<OutputEntry>,
    main_outputs: usize,
}

impl From<&MajNetwork> for NetworkFile {
    fn from(net: &MajNetwork) -> Self {
        let nodes = net
            .nodes
            .iter()
            .map(|n| match *n {
                MajNode::Input(index) => NodeEntry::Input { index },
                MajNode::Const(b) => NodeEntry::Const { value: b as u8 },
                MajNode::Not(x) => NodeEntry::Not { args: [x] },
                MajNode::Maj3(args) => NodeEntry::Maj3 { args },
                MajNode::Maj5(args) => NodeEntry::Maj5 { args },
            })
            .collect();
        Self {
            inputs: net.input_names.clone(),
            nodes,
            outputs: net
                .outputs
                .iter()
                .map(|o| OutputEntry { name: o.name.clone(), node: o.node })
                .collect(),
            main_outputs: net.main_output_count,
        }
    }
}

impl TryFrom<NetworkFile> for MajNetwork {
    type Error = Error;

    fn try_from(file: NetworkFile) -> Result<Self> {
        let nodes = file
            .nodes
            .into_iter()
            .map(|e| match e {
                NodeEntry::Input { index } => Ok(MajNode::Input(index)),
                NodeEntry::Const { value: 0 } => Ok(MajNode::Const(false)),
                NodeEntry::Const { value: 1 } => Ok(MajNode::Const(true)),
                NodeEntry::Const { value } => Err(Error::InvalidNetwork(format!("constant {value}"))),
                NodeEntry::Not { args: [x] } => Ok(MajNode::Not(x)),
                NodeEntry::Maj3 { args } => Ok(MajNode::Maj3(args)),
                NodeEntry::Maj5 { args } => Ok(MajNode::Maj5(args)),
            })
            .collect::<Result<Vec<_>>>()?;
        let outputs = file
            .outputs
            .into_iter()
            .map(|o| NamedOutput { name: o.name, node: o.node })
            .collect();
        MajNetwork::new(file.inputs, nodes, outputs, file.main_outputs)
    }
}

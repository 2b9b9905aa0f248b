//! Gate-level synthesis and simulation of both decoders.
//!
//! Check-sums become balanced trees of two-input XOR gates (an N-input
//! even parity generator costs N-1 gates at depth ceil(log2 N)); each
//! majority vote is a single atomic MAJ gate. The wiring permutations
//! between stages are pure reordering and contribute no gates and no
//! depth. The resulting netlists are acyclic and evaluated topologically.

use crate::decode_chen::ChenPlan;
use crate::decode_new::DecoderPlan;
use crate::gf2::Word;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("netlist contains a cycle or dangling fan-in")]
    Malformed,
    #[error("input length {got} does not match input count {expected}")]
    InputLength { expected: usize, got: usize },
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateKind {
    Input,
    Output,
    Xor2,
    Maj(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: usize,
    pub kind: GateKind,
    pub fanin: Vec<usize>,
}

/// A directed acyclic gate graph with ordered input and output ports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    pub r: u32,
    pub m: u32,
    pub gates: Vec<Gate>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl Netlist {
    fn new(r: u32, m: u32) -> Self {
        Self {
            r,
            m,
            gates: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn push(&mut self, kind: GateKind, fanin: Vec<usize>) -> usize {
        let id = self.gates.len();
        self.gates.push(Gate { id, kind, fanin });
        id
    }

    fn input(&mut self) -> usize {
        let id = self.push(GateKind::Input, vec![]);
        self.inputs.push(id);
        id
    }

    fn output(&mut self, src: usize) -> usize {
        let id = self.push(GateKind::Output, vec![src]);
        self.outputs.push(id);
        id
    }

    fn xor2(&mut self, a: usize, b: usize) -> usize {
        self.push(GateKind::Xor2, vec![a, b])
    }

    fn maj(&mut self, fanin: Vec<usize>) -> usize {
        let s = fanin.len();
        self.push(GateKind::Maj(s), fanin)
    }

    /// Balanced even-parity tree over the given wires (N-1 XOR2 gates).
    fn parity_tree(&mut self, wires: &[usize]) -> usize {
        match wires.len() {
            0 => unreachable!("parity over no wires"),
            1 => wires[0],
            n => {
                let (lo, hi) = wires.split_at(n / 2);
                let a = self.parity_tree(lo);
                let b = self.parity_tree(hi);
                self.xor2(a, b)
            }
        }
    }

    /// An identity netlist: each output wired straight to its input.
    pub fn passthrough(r: u32, m: u32, width: usize) -> Self {
        let mut nl = Self::new(r, m);
        let ins: Vec<usize> = (0..width).map(|_| nl.input()).collect();
        for id in ins {
            nl.output(id);
        }
        nl
    }
}

/// Netlist of the improved decoder: one parity-majority block per spread
/// row, then the per-position majority and correction stage.
pub fn synthesize_new(plan: &DecoderPlan) -> Netlist {
    let p = plan.params();
    let mut nl = Netlist::new(p.r, p.m);
    let z: Vec<usize> = (0..p.n).map(|_| nl.input()).collect();
    let rows = plan.flat_masks().len();
    let mut sigma_bar = vec![Vec::new(); rows];
    for (l, masks) in plan.flat_masks().iter().enumerate() {
        // parity trees per coset, inputs in psi order within the flat
        let sigma: Vec<usize> = masks
            .iter()
            .map(|mask| {
                let leaves: Vec<usize> = mask.support().iter().map(|&i| z[i]).collect();
                nl.parity_tree(&leaves)
            })
            .collect();
        let mu = nl.maj(sigma.clone());
        sigma_bar[l] = sigma.into_iter().map(|s| nl.xor2(s, mu)).collect();
    }
    for i in 0..p.n {
        let votes: Vec<usize> = (0..rows)
            .map(|l| sigma_bar[l][plan.maps().phi[l][i]])
            .collect();
        let eta = nl.maj(votes);
        let corrected = nl.xor2(z[i], eta);
        nl.output(corrected);
    }
    nl
}

/// Netlist of Chen's decoder: per-call-site parity trees over the
/// (r+1)-flats, two majority layers, correction.
pub fn synthesize_chen(plan: &ChenPlan) -> Netlist {
    let p = plan.params();
    let mut nl = Netlist::new(p.r, p.m);
    let z: Vec<usize> = (0..p.n).map(|_| nl.input()).collect();
    for (i, supers_i) in plan.superflat_masks().iter().enumerate() {
        let mu_wires: Vec<usize> = supers_i
            .iter()
            .map(|supers| {
                let sums: Vec<usize> = supers
                    .iter()
                    .map(|mask| {
                        let leaves: Vec<usize> = mask.support().iter().map(|&j| z[j]).collect();
                        nl.parity_tree(&leaves)
                    })
                    .collect();
                nl.maj(sums)
            })
            .collect();
        let eta = nl.maj(mu_wires);
        let corrected = nl.xor2(z[i], eta);
        nl.output(corrected);
    }
    nl
}

/// Topological evaluation with the strict-majority gate semantics.
pub fn evaluate(netlist: &Netlist, input: &Word) -> Result<Word, CircuitError> {
    if input.len() != netlist.inputs.len() {
        return Err(CircuitError::InputLength {
            expected: netlist.inputs.len(),
            got: input.len(),
        });
    }
    let order = topo_order(netlist)?;
    let mut values = vec![false; netlist.gates.len()];
    for &id in &order {
        let gate = &netlist.gates[id];
        values[id] = match &gate.kind {
            GateKind::Input => {
                // inputs carry word positions in port order
                let pos = netlist
                    .inputs
                    .iter()
                    .position(|&g| g == id)
                    .ok_or(CircuitError::Malformed)?;
                input.get(pos)
            }
            GateKind::Output => values[gate.fanin[0]],
            GateKind::Xor2 => values[gate.fanin[0]] ^ values[gate.fanin[1]],
            GateKind::Maj(s) => {
                let ones = gate.fanin.iter().filter(|&&f| values[f]).count();
                ones > s / 2
            }
        };
    }
    let mut out = Word::zeros(netlist.outputs.len());
    for (i, &id) in netlist.outputs.iter().enumerate() {
        out.set(i, values[id]);
    }
    Ok(out)
}

fn topo_order(netlist: &Netlist) -> Result<Vec<usize>, CircuitError> {
    let count = netlist.gates.len();
    let mut indegree = vec![0usize; count];
    let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); count];
    for gate in &netlist.gates {
        for &src in &gate.fanin {
            if src >= count {
                return Err(CircuitError::Malformed);
            }
            indegree[gate.id] += 1;
            fanout[src].push(gate.id);
        }
    }
    let mut queue: Vec<usize> = (0..count).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(count);
    while let Some(id) = queue.pop() {
        order.push(id);
        for &next in &fanout[id] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                queue.push(next);
            }
        }
    }
    if order.len() != count {
        return Err(CircuitError::Malformed);
    }
    Ok(order)
}

/// Exact gate census and logic depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitMetrics {
    pub inputs: usize,
    pub outputs: usize,
    pub xor2: usize,
    /// MAJ gate counts keyed by arity.
    pub maj: BTreeMap<usize, usize>,
    /// Longest INPUT-to-OUTPUT path in logic-gate levels (at least 1).
    pub depth: usize,
}

impl CircuitMetrics {
    pub fn total_gates(&self) -> usize {
        self.inputs + self.outputs + self.xor2 + self.maj.values().sum::<usize>()
    }
}

pub fn metrics(netlist: &Netlist) -> Result<CircuitMetrics, CircuitError> {
    let order = topo_order(netlist)?;
    let mut level = vec![0usize; netlist.gates.len()];
    let mut m = CircuitMetrics {
        inputs: 0,
        outputs: 0,
        xor2: 0,
        maj: BTreeMap::new(),
        depth: 1,
    };
    for &id in &order {
        let gate = &netlist.gates[id];
        let fanin_level = gate.fanin.iter().map(|&f| level[f]).max().unwrap_or(0);
        match &gate.kind {
            GateKind::Input => {
                m.inputs += 1;
                level[id] = 0;
            }
            GateKind::Output => {
                m.outputs += 1;
                level[id] = fanin_level;
                m.depth = m.depth.max(fanin_level.max(1));
            }
            GateKind::Xor2 => {
                m.xor2 += 1;
                level[id] = fanin_level + 1;
            }
            GateKind::Maj(s) => {
                *m.maj.entry(*s).or_insert(0) += 1;
                level[id] = fanin_level + 1;
            }
        }
    }
    Ok(m)
}

// --- serialization --------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    StructuralJson,
}

impl std::str::FromStr for ExportFormat {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Self::Dot),
            "json" | "structural-json" => Ok(Self::StructuralJson),
            other => Err(CircuitError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    r: u32,
    m: u32,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    id: usize,
    kind: String,
    arity: usize,
    fanin: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct NetlistJson {
    params: ParamsJson,
    gates: Vec<GateJson>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

fn kind_name(kind: &GateKind) -> &'static str {
    match kind {
        GateKind::Input => "INPUT",
        GateKind::Output => "OUTPUT",
        GateKind::Xor2 => "XOR2",
        GateKind::Maj(_) => "MAJ",
    }
}

fn kind_arity(kind: &GateKind) -> usize {
    match kind {
        GateKind::Input => 0,
        GateKind::Output => 1,
        GateKind::Xor2 => 2,
        GateKind::Maj(s) => *s,
    }
}

pub fn export(netlist: &Netlist, format: ExportFormat) -> String {
    match format {
        ExportFormat::StructuralJson => export_json(netlist),
        ExportFormat::Dot => export_dot(netlist),
    }
}

fn export_json(netlist: &Netlist) -> String {
    let doc = NetlistJson {
        params: ParamsJson {
            r: netlist.r,
            m: netlist.m,
        },
        gates: netlist
            .gates
            .iter()
            .map(|g| GateJson {
                id: g.id,
                kind: kind_name(&g.kind).to_string(),
                arity: kind_arity(&g.kind),
                fanin: g.fanin.clone(),
            })
            .collect(),
        inputs: netlist.inputs.clone(),
        outputs: netlist.outputs.clone(),
    };
    let mut s = serde_json::to_string(&doc).expect("netlist serialization cannot fail");
    s.push('\n');
    s
}

/// DOT digraph: one node per gate with a `kind` attribute, one edge per
/// fan-in wire with its pin index. Port order follows gate-id order.
fn export_dot(netlist: &Netlist) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph netlist {{");
    let _ = writeln!(s, "  graph [r={}, m={}];", netlist.r, netlist.m);
    for gate in &netlist.gates {
        let _ = writeln!(s, "  g{} [kind=\"{}\"];", gate.id, kind_name(&gate.kind));
    }
    for gate in &netlist.gates {
        for (pin, &src) in gate.fanin.iter().enumerate() {
            let _ = writeln!(s, "  g{} -> g{} [pin={}];", src, gate.id, pin);
        }
    }
    let _ = writeln!(s, "}}");
    s
}

pub fn import(data: &str, format: ExportFormat) -> Result<Netlist, CircuitError> {
    match format {
        ExportFormat::StructuralJson => import_json(data),
        ExportFormat::Dot => import_dot(data),
    }
}

fn import_json(data: &str) -> Result<Netlist, CircuitError> {
    let doc: NetlistJson =
        serde_json::from_str(data).map_err(|e| CircuitError::Parse(e.to_string()))?;
    let gates = doc
        .gates
        .into_iter()
        .map(|g| {
            let kind = match g.kind.as_str() {
                "INPUT" => GateKind::Input,
                "OUTPUT" => GateKind::Output,
                "XOR2" => GateKind::Xor2,
                "MAJ" => GateKind::Maj(g.arity),
                other => return Err(CircuitError::Parse(format!("unknown gate kind {other}"))),
            };
            if g.fanin.len() != kind_arity(&kind) {
                return Err(CircuitError::Parse(format!(
                    "gate {} arity mismatch",
                    g.id
                )));
            }
            Ok(Gate {
                id: g.id,
                kind,
                fanin: g.fanin,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (i, g) in gates.iter().enumerate() {
        if g.id != i {
            return Err(CircuitError::Parse("gate ids must be dense".into()));
        }
    }
    Ok(Netlist {
        r: doc.params.r,
        m: doc.params.m,
        gates,
        inputs: doc.inputs,
        outputs: doc.outputs,
    })
}

/// Parses the DOT subset produced by `export`; ports are recovered from
/// gate-id order of the INPUT and OUTPUT nodes.
fn import_dot(data: &str) -> Result<Netlist, CircuitError> {
    let mut r = 0u32;
    let mut m = 0u32;
    let mut kinds: BTreeMap<usize, String> = BTreeMap::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (src, dst, pin)
    for line in data.lines() {
        let line = line.trim().trim_end_matches(';');
        if line.is_empty() || line.starts_with("digraph") || line == "}" {
            continue;
        }
        if let Some(rest) = line.strip_prefix("graph [") {
            let rest = rest.trim_end_matches(']');
            for part in rest.split(',') {
                let mut kv = part.trim().splitn(2, '=');
                let key = kv.next().unwrap_or("");
                let val = kv.next().unwrap_or("");
                let val: u32 = val
                    .parse()
                    .map_err(|_| CircuitError::Parse(format!("bad graph attr {part}")))?;
                match key {
                    "r" => r = val,
                    "m" => m = val,
                    _ => {}
                }
            }
        } else if let Some((from, rest)) = line.split_once(" -> ") {
            let src = parse_node(from)?;
            let (to, attrs) = rest
                .split_once(" [")
                .ok_or_else(|| CircuitError::Parse(format!("edge without pin: {line}")))?;
            let dst = parse_node(to)?;
            let pin: usize = attrs
                .trim_end_matches(']')
                .strip_prefix("pin=")
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| CircuitError::Parse(format!("bad pin attr: {line}")))?;
            edges.push((src, dst, pin));
        } else if let Some((node, attrs)) = line.split_once(" [") {
            let id = parse_node(node)?;
            let kind = attrs
                .trim_end_matches(']')
                .strip_prefix("kind=\"")
                .and_then(|k| k.strip_suffix('"'))
                .ok_or_else(|| CircuitError::Parse(format!("bad kind attr: {line}")))?;
            kinds.insert(id, kind.to_string());
        } else {
            return Err(CircuitError::Parse(format!("unrecognized line: {line}")));
        }
    }
    let count = kinds.len();
    let mut fanin: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    for (src, dst, pin) in edges {
        if dst >= count || src >= count {
            return Err(CircuitError::Parse("edge endpoint out of range".into()));
        }
        fanin[dst].push((pin, src));
    }
    let mut gates = Vec::with_capacity(count);
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (id, kind_str) in kinds {
        if id != gates.len() {
            return Err(CircuitError::Parse("gate ids must be dense".into()));
        }
        let mut pins = std::mem::take(&mut fanin[id]);
        pins.sort_unstable();
        let fanin_ids: Vec<usize> = pins.into_iter().map(|(_, src)| src).collect();
        let kind = match kind_str.as_str() {
            "INPUT" => {
                inputs.push(id);
                GateKind::Input
            }
            "OUTPUT" => {
                outputs.push(id);
                GateKind::Output
            }
            "XOR2" => GateKind::Xor2,
            "MAJ" => GateKind::Maj(fanin_ids.len()),
            other => return Err(CircuitError::Parse(format!("unknown gate kind {other}"))),
        };
        gates.push(Gate {
            id,
            kind,
            fanin: fanin_ids,
        });
    }
    Ok(Netlist {
        r,
        m,
        gates,
        inputs,
        outputs,
    })
}

fn parse_node(s: &str) -> Result<usize, CircuitError> {
    s.trim()
        .strip_prefix('g')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| CircuitError::Parse(format!("bad node name: {s}")))
}

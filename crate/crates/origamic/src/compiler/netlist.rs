//! JSON netlist format.
//!
//! ```json
//! {
//!   "nets": ["A", "B", "Y"],
//!   "gates": [
//!     {"id": "A", "kind": "INPUT", "out": "A"},
//!     {"id": "B", "kind": "INPUT", "out": "B"},
//!     {"id": "g", "kind": "NAND", "in": ["A", "B"], "out": "Y"},
//!     {"id": "Y", "kind": "OUTPUT", "in": ["Y"]}
//!   ]
//! }
//! ```
//!
//! `nets` is optional; when present every referenced net must be listed.
//! Designs with a `DFF` name their clock net in `"clock"`; that net is
//! driven from outside and may not have another driver.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::logic_layer::{GateKind, LogicCircuit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetGateKind {
    Nand,
    Not,
    Dff,
    Input,
    Output,
    Const0,
}

impl NetGateKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "NAND" => NetGateKind::Nand,
            "NOT" => NetGateKind::Not,
            "DFF" => NetGateKind::Dff,
            "INPUT" => NetGateKind::Input,
            "OUTPUT" => NetGateKind::Output,
            "CONST0" => NetGateKind::Const0,
            _ => return None,
        })
    }

    /// `(inputs, outputs)`.
    pub fn arity(self) -> (usize, usize) {
        match self {
            NetGateKind::Nand => (2, 1),
            NetGateKind::Not | NetGateKind::Dff => (1, 1),
            NetGateKind::Input | NetGateKind::Const0 => (0, 1),
            NetGateKind::Output => (1, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetGate {
    pub id: String,
    pub kind: NetGateKind,
    pub inputs: Vec<String>,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CircuitNetlist {
    pub gates: Vec<NetGate>,
    pub nets: Vec<String>,
    pub clock: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetlistError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("net {0} has more than one driver")]
    MultipleDrivers(String),
    #[error("gate {gate}: {kind} takes {expected} inputs and {expected_out} outputs")]
    ArityMismatch { gate: String, kind: String, expected: usize, expected_out: usize },
    #[error("gate {gate}: unknown kind {kind}")]
    UnknownGateKind { gate: String, kind: String },
    #[error("the design has flip-flops but no clock net")]
    MissingClock,
    #[error("net {0} is not declared")]
    UndeclaredNet(String),
    #[error("net {0} has no driver")]
    UndrivenNet(String),
    #[error("gate id {0} is used twice")]
    DuplicateId(String),
    #[error("loop through NOT gates at net {0}")]
    InverterLoop(String),
}

#[derive(Deserialize)]
struct RawGate {
    id: String,
    kind: String,
    #[serde(default, rename = "in")]
    inputs: Vec<String>,
    #[serde(default)]
    out: Option<String>,
}

#[derive(Deserialize)]
struct RawNetlist {
    gates: Vec<RawGate>,
    #[serde(default)]
    nets: Option<Vec<String>>,
    #[serde(default)]
    clock: Option<String>,
}

pub fn parse_netlist(bytes: &[u8]) -> Result<CircuitNetlist, NetlistError> {
    let raw: RawNetlist = serde_json::from_slice(bytes)
        .map_err(|e| NetlistError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
    let mut gates = Vec::new();
    let mut ids = BTreeSet::new();
    for g in raw.gates {
        let kind = NetGateKind::parse(&g.kind)
            .ok_or_else(|| NetlistError::UnknownGateKind { gate: g.id.clone(), kind: g.kind.clone() })?;
        let (ni, no) = kind.arity();
        if g.inputs.len() != ni || g.out.is_some() as usize != no {
            return Err(NetlistError::ArityMismatch { gate: g.id, kind: g.kind, expected: ni, expected_out: no });
        }
        if !ids.insert(g.id.clone()) {
            return Err(NetlistError::DuplicateId(g.id));
        }
        gates.push(NetGate { id: g.id, kind, inputs: g.inputs, output: g.out });
    }
    let mut nets: Vec<String> = Vec::new();
    let declared = raw.nets.is_some();
    if let Some(n) = raw.nets {
        nets = n;
    }
    let mut drivers: BTreeSet<&str> = BTreeSet::new();
    if let Some(c) = &raw.clock {
        drivers.insert(c);
    }
    for g in &gates {
        if let Some(o) = &g.output {
            if !drivers.insert(o) {
                return Err(NetlistError::MultipleDrivers(o.clone()));
            }
        }
    }
    let mut referenced: Vec<&String> = Vec::new();
    for g in &gates {
        referenced.extend(g.inputs.iter());
        referenced.extend(g.output.iter());
    }
    if declared {
        let known: BTreeSet<&String> = nets.iter().collect();
        if let Some(n) = referenced.iter().find(|n| !known.contains(*n)) {
            return Err(NetlistError::UndeclaredNet((*n).clone()));
        }
    } else {
        let mut seen = BTreeSet::new();
        for n in referenced.iter().chain(raw.clock.iter().collect::<Vec<_>>().iter()) {
            if seen.insert(*n) {
                nets.push((*n).clone());
            }
        }
    }
    for g in &gates {
        if let Some(n) = g.inputs.iter().find(|n| !drivers.contains(n.as_str())) {
            return Err(NetlistError::UndrivenNet(n.clone()));
        }
    }
    if gates.iter().any(|g| g.kind == NetGateKind::Dff) && raw.clock.is_none() {
        return Err(NetlistError::MissingClock);
    }
    Ok(CircuitNetlist { gates, nets, clock: raw.clock })
}

impl CircuitNetlist {
    pub fn count(&self, kind: NetGateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Logic level of each gate: inputs, constants and flip-flop outputs
    /// start at 0 and every other gate sits one past its latest input.
    pub fn levels(&self) -> Result<Vec<usize>, NetlistError> {
        let driver: BTreeMap<&str, usize> =
            self.gates.iter().enumerate().filter_map(|(i, g)| g.output.as_deref().map(|o| (o, i))).collect();
        let mut level: Vec<Option<usize>> = vec![None; self.gates.len()];
        let mut on_stack = vec![false; self.gates.len()];
        fn visit(
            i: usize,
            nl: &CircuitNetlist,
            driver: &BTreeMap<&str, usize>,
            level: &mut [Option<usize>],
            on_stack: &mut [bool],
        ) -> Result<usize, NetlistError> {
            if let Some(l) = level[i] {
                return Ok(l);
            }
            let g = &nl.gates[i];
            if matches!(g.kind, NetGateKind::Input | NetGateKind::Const0 | NetGateKind::Dff) {
                level[i] = Some(0);
                return Ok(0);
            }
            if on_stack[i] {
                return Err(NetlistError::InverterLoop(g.output.clone().unwrap_or_else(|| g.id.clone())));
            }
            on_stack[i] = true;
            let mut l = 0;
            for n in &g.inputs {
                if let Some(&d) = driver.get(n.as_str()) {
                    l = l.max(visit(d, nl, driver, level, on_stack)? + 1);
                } else {
                    l = l.max(1);
                }
            }
            on_stack[i] = false;
            level[i] = Some(l);
            Ok(l)
        }
        (0..self.gates.len()).map(|i| visit(i, self, &driver, &mut level, &mut on_stack)).collect()
    }

    /// Gate-level circuit with flip-flops expanded into NAND latches. Gates
    /// are emitted by level so in-place settling converges quickly. Input
    /// and output ports are named by gate id.
    pub fn to_circuit(&self) -> Result<LogicCircuit, NetlistError> {
        let levels = self.levels()?;
        let mut order: Vec<usize> = (0..self.gates.len()).collect();
        order.sort_by_key(|&i| (levels[i], i));
        let mut c = LogicCircuit::default();
        for n in &self.nets {
            c.net(n);
        }
        let clk = self.clock.as_ref().map(|k| c.clock_input(k));
        for &i in &order {
            let g = &self.gates[i];
            let ins: Vec<usize> = g.inputs.iter().map(|n| c.net(n)).collect();
            let out = g.output.as_ref().map(|n| c.net(n));
            match g.kind {
                NetGateKind::Input => c.inputs.push((g.id.clone(), out.expect("arity"))),
                NetGateKind::Output => c.output(&g.id, ins[0]),
                NetGateKind::Nand => c.gate(GateKind::Nand, &ins, out.expect("arity")),
                NetGateKind::Not => c.gate(GateKind::Not, &ins, out.expect("arity")),
                NetGateKind::Const0 => c.gate(GateKind::Const0, &[], out.expect("arity")),
                NetGateKind::Dff => c.dff_into(ins[0], clk.ok_or(NetlistError::MissingClock)?, out.expect("arity")),
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_nand() {
        let n = parse_netlist(
            br#"{"gates":[{"id":"a","kind":"INPUT","out":"A"},{"id":"b","kind":"INPUT","out":"B"},
                {"id":"g","kind":"NAND","in":["A","B"],"out":"Y"},{"id":"y","kind":"OUTPUT","in":["Y"]}]}"#,
        )
        .unwrap();
        assert_eq!(n.count(NetGateKind::Nand), 1);
        assert_eq!(n.nets.len(), 3);
    }

    #[test]
    fn errors() {
        let two = br#"{"gates":[{"id":"a","kind":"INPUT","out":"A"},{"id":"b","kind":"INPUT","out":"A"}]}"#;
        assert_eq!(parse_netlist(two), Err(NetlistError::MultipleDrivers("A".into())));
        let arity = br#"{"gates":[{"id":"a","kind":"NAND","in":["A"],"out":"B"}]}"#;
        assert!(matches!(parse_netlist(arity), Err(NetlistError::ArityMismatch { .. })));
        let kind = br#"{"gates":[{"id":"a","kind":"XNOR","in":["A"],"out":"B"}]}"#;
        assert!(matches!(parse_netlist(kind), Err(NetlistError::UnknownGateKind { .. })));
        let clk = br#"{"gates":[{"id":"d","kind":"INPUT","out":"D"},{"id":"f","kind":"DFF","in":["D"],"out":"Q"}]}"#;
        assert_eq!(parse_netlist(clk), Err(NetlistError::MissingClock));
        assert!(matches!(parse_netlist(b"{\n\"gates\": [,]}"), Err(NetlistError::Json { line: 2, .. })));
    }
}

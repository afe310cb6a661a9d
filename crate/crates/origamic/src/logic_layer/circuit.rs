use std::collections::BTreeMap;

use super::{build_nand_macro, nand_output, GadgetGraph};
use crate::crease_pattern::ColorTag;
use crate::gadgets::GadgetKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Nand,
    /// The two-tile negation gadget.
    Not,
    Const0,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<usize>,
    pub output: usize,
    /// Flip-flop the gate belongs to; only these may form feedback loops.
    pub flipflop: Option<usize>,
}

/// Gate-level circuit over NAND macros, with master-slave flip-flops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogicCircuit {
    pub nets: Vec<String>,
    /// Power-up value of each net.
    pub init: Vec<u8>,
    pub gates: Vec<Gate>,
    pub inputs: Vec<(String, usize)>,
    pub outputs: Vec<(String, usize)>,
    pub clock: Option<usize>,
    pub flipflops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("combinational loop through net {0}")]
    CombinationalLoop(String),
    #[error("nets still changing after {iterations} sweeps in cycle {cycle}")]
    NoFixpoint { cycle: usize, iterations: usize },
    #[error("no waveform for input {0}")]
    MissingWaveform(String),
    #[error("waveform for {0} is shorter than the run")]
    ShortWaveform(String),
}

impl LogicCircuit {
    pub fn net(&mut self, name: &str) -> usize {
        match self.nets.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.nets.push(name.into());
                self.init.push(0);
                self.nets.len() - 1
            }
        }
    }

    fn fresh(&mut self, hint: &str) -> usize {
        let name = format!("{hint}#{}", self.nets.len());
        self.net(&name)
    }

    pub fn input(&mut self, name: &str) -> usize {
        let n = self.net(name);
        self.inputs.push((name.into(), n));
        n
    }

    pub fn clock_input(&mut self, name: &str) -> usize {
        let n = self.net(name);
        self.clock = Some(n);
        n
    }

    pub fn output(&mut self, name: &str, net: usize) {
        self.outputs.push((name.into(), net));
    }

    pub fn gate(&mut self, kind: GateKind, inputs: &[usize], output: usize) {
        self.gates.push(Gate { kind, inputs: inputs.to_vec(), output, flipflop: None });
    }

    pub fn nand(&mut self, a: usize, b: usize) -> usize {
        let o = self.fresh("nand");
        self.gate(GateKind::Nand, &[a, b], o);
        o
    }

    pub fn not(&mut self, a: usize) -> usize {
        let o = self.fresh("not");
        self.gate(GateKind::Not, &[a], o);
        o
    }

    pub fn const0(&mut self) -> usize {
        let o = self.fresh("zero");
        self.gate(GateKind::Const0, &[], o);
        o
    }

    /// Gated D latch from four NANDs driving `q`; returns `q̄`.
    fn d_latch(&mut self, d: usize, en: usize, q: usize) -> usize {
        let s = self.nand(d, en);
        let r = self.nand(s, en);
        let qb = self.fresh("qb");
        self.gate(GateKind::Nand, &[s, qb], q);
        self.gate(GateKind::Nand, &[r, q], qb);
        self.init[qb] = 1;
        qb
    }

    /// Rising-edge D flip-flop: a master latch open while the clock is low
    /// feeding a slave open while it is high. Returns `q`.
    pub fn dff(&mut self, d: usize, clk: usize) -> usize {
        let q = self.fresh("q");
        self.dff_into(d, clk, q);
        q
    }

    /// As [`LogicCircuit::dff`], driving an existing net.
    pub fn dff_into(&mut self, d: usize, clk: usize, q: usize) {
        let first = self.gates.len();
        let clk_n = self.nand(clk, clk);
        let m = self.fresh("m");
        self.d_latch(d, clk_n, m);
        self.d_latch(m, clk, q);
        let id = self.flipflops;
        self.flipflops += 1;
        for g in &mut self.gates[first..] {
            g.flipflop = Some(id);
        }
    }

    pub fn nand_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Nand).count()
    }

    /// Gate graph with every NAND expanded to its gadget macro, every NOT to
    /// the negation gadget and every fan-out to a chain of duplicators. The
    /// constant source is the exposed net `P`; outputs are exposed by name.
    pub fn to_gadget_graph(&self) -> GadgetGraph {
        let nn = self.nets.len();
        let mut readers = vec![0usize; nn];
        for g in &self.gates {
            for &i in &g.inputs {
                readers[i] += 1;
            }
        }
        for (_, n) in &self.outputs {
            readers[*n] += 1;
        }
        let p_count = self.gates.iter().filter(|g| g.kind != GateKind::Not).count();
        let p_uses = use_names("P", p_count);
        let mut head: Vec<String> = self.nets.clone();
        let mut p_local = vec![String::new(); self.gates.len()];
        let mut k = 0;
        for (gi, g) in self.gates.iter().enumerate() {
            match g.kind {
                GateKind::Nand => p_local[gi] = p_uses[k].clone(),
                GateKind::Const0 => head[g.output] = p_uses[k].clone(),
                GateKind::Not => continue,
            }
            k += 1;
        }
        let is_input = |n: usize| self.inputs.iter().any(|(_, x)| *x == n);
        for (name, n) in &self.outputs {
            if readers[*n] == 1 && head[*n] == self.nets[*n] && !is_input(*n) {
                head[*n] = name.clone();
            }
        }
        let mut uses: Vec<Vec<String>> = (0..nn).map(|n| use_names(&head[n], readers[n])).collect();
        for (name, n) in &self.outputs {
            if readers[*n] > 1 {
                // Claim a use slot for the output under its own name.
                let slot = uses[*n].iter().position(|u| u.contains('@')).expect("free slot");
                uses[*n][slot] = name.clone();
                uses[*n].swap(slot, readers[*n] - 1);
            }
        }
        let mut cursor = vec![0usize; nn];
        let mut take = |n: usize| {
            let u = uses[n][cursor[n]].clone();
            cursor[n] += 1;
            u
        };

        let mut g = GadgetGraph::default();
        for (name, _) in &self.inputs {
            g.expose(name);
        }
        g.expose("P");
        g.p_net = g.net_id("P");
        let nand = build_nand_macro();
        for (gi, gate) in self.gates.iter().enumerate() {
            match gate.kind {
                GateKind::Nand => {
                    let a = take(gate.inputs[0]);
                    let b = take(gate.inputs[1]);
                    let map = |x: &str| match x {
                        "A" => a.clone(),
                        "B" => b.clone(),
                        "O" => head[gate.output].clone(),
                        "P" => p_local[gi].clone(),
                        other => format!("g{gi}/{other}"),
                    };
                    for inst in &nand.instances {
                        let conns: Vec<String> = inst
                            .nets
                            .iter()
                            .map(|&n| {
                                let open = nand.external.iter().any(|e| e.net == n && e.role == ColorTag::Extraneous);
                                if open {
                                    String::new()
                                } else {
                                    map(&nand.nets[n])
                                }
                            })
                            .collect();
                        let refs: Vec<&str> = conns.iter().map(|s| s.as_str()).collect();
                        g.add(inst.kind, &format!("g{gi}/{}", inst.name), &refs);
                    }
                }
                GateKind::Not => {
                    let i = take(gate.inputs[0]);
                    g.add(GadgetKind::Not, &format!("g{gi}/not"), &[&i, &head[gate.output], "", "", "", ""]);
                }
                GateKind::Const0 => {}
            }
        }
        for (_, n) in &self.outputs {
            let u = take(*n);
            g.expose(&u);
        }
        for (n, _) in self.nets.iter().enumerate() {
            fan_out(&mut g, &head[n], &uses[n]);
        }
        fan_out(&mut g, "P", &p_uses);
        g
    }
}

/// Names for `count` readers of a net: the net itself when there is one reader.
fn use_names(head: &str, count: usize) -> Vec<String> {
    if count == 1 {
        vec![head.to_string()]
    } else {
        (0..count).map(|i| format!("{head}@{i}")).collect()
    }
}

/// Duplicator chain copying `head` onto each of `uses`.
fn fan_out(g: &mut GadgetGraph, head: &str, uses: &[String]) {
    let r = uses.len();
    if r < 2 {
        return;
    }
    for k in 0..r - 1 {
        let src = if k == 0 { head.to_string() } else { format!("{head}~{k}") };
        let rest = if k == r - 2 { uses[r - 1].clone() } else { format!("{head}~{}", k + 1) };
        g.add(GadgetKind::Duplicator, &format!("fan:{head}:{k}"), &[&src, &uses[k], &rest, ""]);
    }
}

/// Combinational gate order, or the net closing a loop that is not inside
/// a single flip-flop.
fn check_loops(c: &LogicCircuit) -> Result<(), SimError> {
    // Tarjan-free check: Kahn's algorithm ignoring edges internal to a flip-flop's
    // latch pairs, then any remaining gates must each sit in one flip-flop.
    let n = c.gates.len();
    let mut driver = vec![None; c.nets.len()];
    for (i, g) in c.gates.iter().enumerate() {
        driver[g.output] = Some(i);
    }
    let mut indeg = vec![0usize; n];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, g) in c.gates.iter().enumerate() {
        for &inp in &g.inputs {
            if let Some(d) = driver[inp] {
                let internal = g.flipflop.is_some() && g.flipflop == c.gates[d].flipflop;
                if !internal {
                    indeg[i] += 1;
                    users[d].push(i);
                }
            }
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop() {
        seen += 1;
        for &u in &users[i] {
            indeg[u] -= 1;
            if indeg[u] == 0 {
                queue.push(u);
            }
        }
    }
    if seen == n {
        return Ok(());
    }
    let stuck = (0..n).find(|&i| indeg[i] > 0).expect("some gate remains");
    Err(SimError::CombinationalLoop(c.nets[c.gates[stuck].output].clone()))
}

fn eval(g: &Gate, v: &[u8]) -> u8 {
    match g.kind {
        GateKind::Nand => nand_output(v[g.inputs[0]], v[g.inputs[1]]).expect("NAND clauses have one solution"),
        GateKind::Not => 1 - v[g.inputs[0]],
        GateKind::Const0 => 0,
    }
}

/// Sweeps the gates in order, updating in place, until nothing changes.
fn settle(c: &LogicCircuit, v: &mut [u8], cycle: usize) -> Result<(), SimError> {
    let bound = 4 * c.gates.len().max(1);
    for _ in 0..bound {
        let mut changed = false;
        for g in &c.gates {
            let x = eval(g, v);
            if v[g.output] != x {
                v[g.output] = x;
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
    Err(SimError::NoFixpoint { cycle, iterations: bound })
}

/// Runs `cycles` clock periods. Each period applies the inputs, settles with
/// the clock low, then raises the clock and settles again; outputs are
/// sampled at the end of the period. Without a clock each period is one settle.
pub fn simulate(
    circuit: &LogicCircuit,
    waveforms: &BTreeMap<String, Vec<u8>>,
    cycles: usize,
) -> Result<BTreeMap<String, Vec<u8>>, SimError> {
    check_loops(circuit)?;
    for (name, _) in &circuit.inputs {
        let w = waveforms.get(name).ok_or_else(|| SimError::MissingWaveform(name.clone()))?;
        if w.len() < cycles {
            return Err(SimError::ShortWaveform(name.clone()));
        }
    }
    let mut v = circuit.init.clone();
    let mut out: BTreeMap<String, Vec<u8>> = circuit.outputs.iter().map(|(n, _)| (n.clone(), Vec::new())).collect();
    for t in 0..cycles {
        for (name, net) in &circuit.inputs {
            v[*net] = waveforms[name][t];
        }
        if let Some(clk) = circuit.clock {
            v[clk] = 0;
            settle(circuit, &mut v, t)?;
            v[clk] = 1;
        }
        settle(circuit, &mut v, t)?;
        for (name, net) in &circuit.outputs {
            out.get_mut(name).expect("output listed").push(v[*net]);
        }
    }
    Ok(out)
}

/// A single flip-flop with input `D`, clock `CLK` and output `Q`.
pub fn build_flipflop() -> LogicCircuit {
    let mut c = LogicCircuit::default();
    let d = c.input("D");
    let clk = c.clock_input("CLK");
    let q = c.dff(d, clk);
    c.output("Q", q);
    c
}

/// Half-adder from five NANDs: `S = A xor B`, `C = A and B`.
pub fn build_half_adder() -> LogicCircuit {
    let mut c = LogicCircuit::default();
    let a = c.input("A");
    let b = c.input("B");
    let n1 = c.nand(a, b);
    let n2 = c.nand(a, n1);
    let n3 = c.nand(b, n1);
    let s = c.nand(n2, n3);
    let carry = c.nand(n1, n1);
    c.output("S", s);
    c.output("C", carry);
    c
}

/// Two flip-flops sharing a clock, each reloading its own data input when
/// `LOAD` is high and holding otherwise.
pub fn build_register2() -> LogicCircuit {
    let mut c = LogicCircuit::default();
    let load = c.input("LOAD");
    let d = [c.input("D0"), c.input("D1")];
    let clk = c.clock_input("CLK");
    for (i, &di) in d.iter().enumerate() {
        // q' = load ? d : q, as NAND(NAND(d, load), NAND(q, ¬load)).
        let q = c.fresh("q");
        let load_n = c.nand(load, load);
        let x = c.nand(di, load);
        let y = c.nand(q, load_n);
        let next = c.nand(x, y);
        c.dff_into(next, clk, q);
        c.output(&format!("Q{i}"), q);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(p: &[(&str, &[u8])]) -> BTreeMap<String, Vec<u8>> {
        p.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect()
    }

    #[test]
    fn half_adder_truth_table() {
        let c = build_half_adder();
        assert_eq!(c.nand_count(), 5);
        let out = simulate(&c, &wave(&[("A", &[0, 0, 1, 1]), ("B", &[0, 1, 0, 1])]), 4).unwrap();
        assert_eq!(out["S"], vec![0, 1, 1, 0]);
        assert_eq!(out["C"], vec![0, 0, 0, 1]);
    }

    #[test]
    fn flipflop_latches_on_edge() {
        let c = build_flipflop();
        let out = simulate(&c, &wave(&[("D", &[1, 1, 0, 0, 1])]), 5).unwrap();
        assert_eq!(out["Q"], vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn register_holds_without_load() {
        let c = build_register2();
        let w = wave(&[("LOAD", &[1, 0, 0, 1]), ("D0", &[1, 0, 0, 0]), ("D1", &[0, 1, 1, 1])]);
        let out = simulate(&c, &w, 4).unwrap();
        assert_eq!(out["Q0"], vec![1, 1, 1, 0]);
        assert_eq!(out["Q1"], vec![0, 0, 0, 1]);
    }

    #[test]
    fn ring_is_a_loop() {
        let mut c = LogicCircuit::default();
        let a = c.net("a");
        let b = c.not(a);
        c.gate(GateKind::Not, &[b], a);
        assert!(matches!(simulate(&c, &BTreeMap::new(), 1), Err(SimError::CombinationalLoop(_))));
    }

    #[test]
    fn half_adder_graph_matches_behaviour() {
        let c = build_half_adder();
        let g = c.to_gadget_graph();
        g.validate().unwrap();
        g.check_p_parity().unwrap();
        for a in 0..2u8 {
            for b in 0..2u8 {
                let pins: BTreeMap<String, u8> =
                    [("A".to_string(), a), ("B".to_string(), b), ("P".to_string(), 0)].into_iter().collect();
                let m = super::super::check_satisfiable(&g, &pins);
                let m = m.model().unwrap();
                assert_eq!(m["S"], a ^ b);
                assert_eq!(m["C"], a & b);
            }
        }
    }
}

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::crease_pattern::ColorTag;
use crate::gadgets::{self, GadgetInstance, GadgetKind, LogicalRelation, Polarity, Pose};

/// Port names, polarities, roles and relation of a gadget kind.
#[derive(Debug, Clone)]
pub struct Template {
    pub kind: GadgetKind,
    pub ports: Vec<String>,
    pub polarities: Vec<Polarity>,
    pub roles: Vec<ColorTag>,
    pub relation: LogicalRelation,
}

impl Template {
    fn of(g: &GadgetInstance) -> Self {
        Template {
            kind: g.kind,
            ports: g.ports.iter().map(|p| p.name.clone()).collect(),
            polarities: g.ports.iter().map(|p| p.polarity).collect(),
            roles: g.ports.iter().map(|p| p.role).collect(),
            relation: g.relation.clone(),
        }
    }
}

/// Canonical templates for the kinds used in gadget graphs.
pub fn template(kind: GadgetKind) -> &'static Template {
    static CACHE: OnceLock<BTreeMap<GadgetKind, Template>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let o = Pose::default();
        let built = [
            gadgets::make_nae(&o, 60),
            gadgets::make_reflector(&o, 120),
            gadgets::make_rotator(&o),
            gadgets::make_duplicator(&o),
            gadgets::make_combiner(&o),
            gadgets::make_not(&o),
        ];
        built.into_iter().map(|g| g.expect("canonical gadget builds")).map(|g| (g.kind, Template::of(&g))).collect()
    });
    cache.get(&kind).unwrap_or_else(|| panic!("no logical template for {}", kind.name()))
}

#[derive(Debug, Clone)]
pub struct GraphInstance {
    pub name: String,
    pub kind: GadgetKind,
    /// Net of each port, in template port order.
    pub nets: Vec<usize>,
}

/// Externally visible net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalPort {
    pub name: String,
    pub net: usize,
    pub role: ColorTag,
}

#[derive(Debug, Clone, Default)]
pub struct GadgetGraph {
    pub instances: Vec<GraphInstance>,
    pub nets: Vec<String>,
    pub external: Vec<ExternalPort>,
    /// Constant-zero net.
    pub p_net: Option<usize>,
    pub clk_net: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("net {0} joins {1} ports")]
    Overconnected(String, usize),
    #[error("net {0} joins two ports of the same polarity")]
    PolarityClash(String),
    #[error("P reaches {0} through an odd number of inversions")]
    InvertedP(String),
}

impl GadgetGraph {
    pub fn net(&mut self, name: &str) -> usize {
        match self.nets.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.nets.push(name.into());
                self.nets.len() - 1
            }
        }
    }

    pub fn net_id(&self, name: &str) -> Option<usize> {
        self.nets.iter().position(|n| n == name)
    }

    /// Adds an instance. `conns` names the net of each port; an empty name
    /// leaves the port open and exposes it as an extraneous external port.
    pub fn add(&mut self, kind: GadgetKind, name: &str, conns: &[&str]) -> usize {
        let t = template(kind);
        assert_eq!(conns.len(), t.ports.len(), "{} has {} ports", kind.name(), t.ports.len());
        let mut nets = Vec::new();
        for (i, c) in conns.iter().enumerate() {
            if c.is_empty() {
                let n = format!("{name}.{}", t.ports[i]);
                let id = self.net(&n);
                self.external.push(ExternalPort { name: n, net: id, role: ColorTag::Extraneous });
                nets.push(id);
            } else {
                nets.push(self.net(c));
            }
        }
        self.instances.push(GraphInstance { name: name.into(), kind, nets });
        self.instances.len() - 1
    }

    pub fn expose(&mut self, name: &str) {
        let net = self.net(name);
        self.external.push(ExternalPort { name: name.into(), net, role: ColorTag::Tracked });
    }

    pub fn count(&self, kind: GadgetKind) -> usize {
        self.instances.iter().filter(|i| i.kind == kind).count()
    }

    pub fn extraneous_ports(&self) -> usize {
        self.external.iter().filter(|e| e.role == ColorTag::Extraneous).count()
    }

    /// Every net joins at most two ports, and two ports of opposite polarity.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut ends: Vec<Vec<Polarity>> = vec![Vec::new(); self.nets.len()];
        for inst in &self.instances {
            let t = template(inst.kind);
            for (i, &n) in inst.nets.iter().enumerate() {
                ends[n].push(t.polarities[i]);
            }
        }
        for (n, e) in ends.iter().enumerate() {
            if e.len() > 2 {
                return Err(GraphError::Overconnected(self.nets[n].clone(), e.len()));
            }
            if e.len() == 2 && e[0] == e[1] {
                return Err(GraphError::PolarityClash(self.nets[n].clone()));
            }
        }
        Ok(())
    }

    /// Follows P through copying and negating gadgets and checks that every
    /// NAE port it reaches sees it uninverted.
    pub fn check_p_parity(&self) -> Result<(), GraphError> {
        let Some(p) = self.p_net else { return Ok(()) };
        let mut parity: BTreeMap<usize, u8> = BTreeMap::from([(p, 0)]);
        let mut stack = vec![p];
        while let Some(n) = stack.pop() {
            let par = parity[&n];
            for inst in &self.instances {
                let Some(at) = inst.nets.iter().position(|&x| x == n) else { continue };
                let t = template(inst.kind);
                if inst.kind == GadgetKind::Nae {
                    if par != 0 {
                        return Err(GraphError::InvertedP(inst.name.clone()));
                    }
                    continue;
                }
                // Each other port's value is a fixed function of this one; find it from the relation.
                let rows: Vec<&Vec<u8>> = t.relation.allowed.iter().collect();
                for (j, &m) in inst.nets.iter().enumerate() {
                    if j == at || parity.contains_key(&m) {
                        continue;
                    }
                    let flip = rows.iter().all(|r| r[j] != r[at]);
                    let same = rows.iter().all(|r| r[j] == r[at]);
                    if flip || same {
                        parity.insert(m, par ^ flip as u8);
                        stack.push(m);
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatDecision {
    /// Value of every net, by name.
    Sat(BTreeMap<String, u8>),
    Unsat,
}

impl SatDecision {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatDecision::Sat(_))
    }

    pub fn model(&self) -> Option<&BTreeMap<String, u8>> {
        match self {
            SatDecision::Sat(m) => Some(m),
            SatDecision::Unsat => None,
        }
    }
}

/// Exhaustive search over unpinned nets in index order, trying 0 first, so
/// the model returned is the lexicographically smallest.
pub fn check_satisfiable(graph: &GadgetGraph, partial: &BTreeMap<String, u8>) -> SatDecision {
    let n = graph.nets.len();
    let mut value: Vec<Option<u8>> = vec![None; n];
    for (k, &v) in partial {
        if let Some(i) = graph.net_id(k) {
            value[i] = Some(v);
        }
    }
    // Instances to recheck once a net is set: those whose last net (in search order) it is.
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let order: Vec<usize> = (0..n).filter(|&i| value[i].is_none()).collect();
    let mut pos = vec![0usize; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k + 1;
    }
    for (ii, inst) in graph.instances.iter().enumerate() {
        let last = inst.nets.iter().map(|&x| pos[x]).max().unwrap_or(0);
        watch[last].push(ii);
    }
    let ok = |value: &[Option<u8>], ii: usize| {
        let inst = &graph.instances[ii];
        let t: Vec<u8> = inst.nets.iter().map(|&x| value[x].expect("assigned")).collect();
        template(inst.kind).relation.contains(&t)
    };
    if !watch[0].iter().all(|&ii| ok(&value, ii)) {
        return SatDecision::Unsat;
    }
    fn go(
        k: usize,
        order: &[usize],
        value: &mut Vec<Option<u8>>,
        watch: &[Vec<usize>],
        ok: &dyn Fn(&[Option<u8>], usize) -> bool,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        for v in 0..2 {
            value[order[k]] = Some(v);
            if watch[k + 1].iter().all(|&ii| ok(value, ii)) && go(k + 1, order, value, watch, ok) {
                return true;
            }
        }
        value[order[k]] = None;
        false
    }
    if go(0, &order, &mut value, &watch, &ok) {
        SatDecision::Sat(graph.nets.iter().cloned().zip(value.into_iter().map(|v| v.expect("complete"))).collect())
    } else {
        SatDecision::Unsat
    }
}

/// NAND from three NAE gadgets on the clauses `(A, B, O)`, `(A, P, O)`,
/// `(B, P, O)`. Duplicators fan out A, B and P; each NAE yields `¬O`, which
/// a NOT restores before two combiners merge the three copies.
pub fn build_nand_macro() -> GadgetGraph {
    let mut g = GadgetGraph::default();
    for x in ["A", "B", "P"] {
        g.expose(x);
    }
    use GadgetKind::*;
    g.add(Duplicator, "dupA", &["A", "A1", "A2", ""]);
    g.add(Duplicator, "dupB", &["B", "B1", "B2", ""]);
    g.add(Duplicator, "dupP", &["P", "P1", "P2", ""]);
    g.add(Nae, "nae1", &["A1", "B1", "n1"]);
    g.add(Nae, "nae2", &["A2", "P1", "n2"]);
    g.add(Nae, "nae3", &["B2", "P2", "n3"]);
    for i in 1..=3 {
        g.add(Not, &format!("not{i}"), &[&format!("n{i}"), &format!("o{i}"), "", "", "", ""]);
    }
    g.add(Combiner, "comb1", &["o1", "o2", "o12", ""]);
    g.add(Combiner, "comb2", &["o12", "o3", "O", ""]);
    g.expose("O");
    g.p_net = g.net_id("P");
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pins(p: &[(&str, u8)]) -> BTreeMap<String, u8> {
        p.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn nand_macro_shape() {
        let g = build_nand_macro();
        assert_eq!(g.count(GadgetKind::Nae), 3);
        g.validate().unwrap();
        g.check_p_parity().unwrap();
    }

    #[test]
    fn nand_macro_is_nand() {
        let g = build_nand_macro();
        for a in 0..2 {
            for b in 0..2 {
                for o in 0..2 {
                    let d = check_satisfiable(&g, &pins(&[("A", a), ("B", b), ("P", 0), ("O", o)]));
                    assert_eq!(d.is_sat(), o == 1 - (a & b), "{a} {b} {o}");
                }
            }
        }
        let d = check_satisfiable(&g, &pins(&[("A", 1), ("B", 1)]));
        assert_eq!(d.model().unwrap()["O"], 0);
    }

    #[test]
    fn combiner_rejects_unequal_inputs() {
        let mut g = GadgetGraph::default();
        g.add(GadgetKind::Combiner, "c", &["x", "y", "z", ""]);
        assert!(!check_satisfiable(&g, &pins(&[("x", 0), ("y", 1)])).is_sat());
        assert!(check_satisfiable(&g, &pins(&[("x", 1), ("y", 1)])).is_sat());
    }

    #[test]
    fn inverted_p_is_caught() {
        let mut g = GadgetGraph::default();
        g.add(GadgetKind::Not, "inv", &["P", "Pn", "", "", "", ""]);
        g.add(GadgetKind::Nae, "n", &["a", "Pn", "o"]);
        g.p_net = g.net_id("P");
        assert_eq!(g.check_p_parity(), Err(GraphError::InvertedP("n".into())));
    }
}

//! Reads the logic back out of a placed design.
//!
//! Nothing here looks at the source circuit: lanes are merged through every
//! tile whose relation forces two arms equal or opposite, and whatever
//! tiles remain are grouped by the block they sit in. Each group must pin
//! down its block's output row given everything else.

use std::collections::{BTreeMap, BTreeSet};

use super::layout::{Axis, PlacedDesign};
use super::tiles::{model, E};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("tiles force lane {0} to equal its own complement")]
    Contradiction(usize),
    #[error("tile at row {row}, column {col} constrains lanes outside any block")]
    Unattributed { row: usize, col: usize },
    #[error("combinational loop through block {0}")]
    CombinationalLoop(usize),
    #[error("block {block} has {count} consistent outputs")]
    NoUniqueOutput { block: usize, count: usize },
    #[error("block {block} reads a lane nothing drives")]
    Floating { block: usize },
    #[error("values still changing after {iterations} sweeps in cycle {cycle}")]
    NoFixpoint { cycle: usize, iterations: usize },
    #[error("no waveform for input {0}")]
    MissingWaveform(String),
    #[error("waveform for {0} is shorter than the run")]
    ShortWaveform(String),
}

/// Tiles of one block that are not plain wiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub block: usize,
    pub tiles: Vec<(usize, usize)>,
    pub output: usize,
    pub init: u8,
    pub flipflop: Option<usize>,
    /// Classes read by the cell.
    pub reads: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    /// Class and parity of each lane.
    pub lane_class: Vec<(usize, u8)>,
    pub classes: usize,
    pub cells: Vec<Cell>,
    /// Externally driven classes by port name: inputs, the spine and the clock.
    pub sources: BTreeMap<String, (usize, u8)>,
    pub spine: Option<String>,
    pub clock: Option<String>,
    /// Output ports and the lane each is read from.
    pub outputs: Vec<(String, usize)>,
}

struct Parity {
    parent: Vec<usize>,
    flip: Vec<u8>,
}

impl Parity {
    fn find(&mut self, x: usize) -> (usize, u8) {
        let mut path = Vec::new();
        let mut r = x;
        let mut p = 0;
        while self.parent[r] != r {
            path.push(r);
            p ^= self.flip[r];
            r = self.parent[r];
        }
        // Compress: each node on the path now points at the root.
        let mut acc = p;
        for n in path {
            let f = self.flip[n];
            self.parent[n] = r;
            self.flip[n] = acc;
            acc ^= f;
        }
        (r, p)
    }

    fn union(&mut self, a: usize, b: usize, parity: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == parity;
        }
        self.parent[rb] = ra;
        self.flip[rb] = pa ^ pb ^ parity;
        true
    }
}

pub fn extract(d: &PlacedDesign) -> Result<Extracted, ExtractError> {
    let n = d.lanes.len();
    let mut uf = Parity { parent: (0..n).collect(), flip: vec![0; n] };
    for (&at, kind) in &d.tiles {
        let lanes = d.tile_lanes[&at];
        let rel = &model(*kind).canonical;
        for i in 0..4 {
            for j in i + 1..4 {
                let same = rel.iter().all(|t| t[i] == t[j]);
                let diff = rel.iter().all(|t| t[i] != t[j]);
                if (same || diff) && !uf.union(lanes[i], lanes[j], diff as u8) {
                    return Err(ExtractError::Contradiction(lanes[j]));
                }
            }
        }
    }
    let mut ids = BTreeMap::new();
    let mut lane_class = Vec::with_capacity(n);
    for l in 0..n {
        let (r, p) = uf.find(l);
        let next = ids.len();
        lane_class.push((*ids.entry(r).or_insert(next), p));
    }

    let blocks = &d.placement.blocks;
    let mut cells: Vec<Cell> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| Cell {
            block: i,
            tiles: Vec::new(),
            output: lane_class[d.tile_lanes[&(b.output_row(), b.cols[1])][E]].0,
            init: b.init,
            flipflop: b.flipflop,
            reads: Vec::new(),
        })
        .collect();
    for (&(r, c), kind) in &d.tiles {
        let lanes = d.tile_lanes[&(r, c)];
        let classes: BTreeSet<usize> = lanes.iter().map(|&l| lane_class[l].0).collect();
        if model(*kind).canonical.len() == 1 << classes.len() {
            continue;
        }
        let Some(b) = blocks.iter().position(|b| b.rows.contains(&r)) else {
            return Err(ExtractError::Unattributed { row: r, col: c });
        };
        let cell = &mut cells[b];
        cell.tiles.push((r, c));
        for k in classes {
            if k != cell.output && !cell.reads.contains(&k) {
                cell.reads.push(k);
            }
        }
    }

    let p = &d.placement;
    let west = |row: usize| {
        d.lanes.iter().position(|l| l.axis == Axis::Row && l.strip == row && l.from.is_none()).expect("west lane")
    };
    let mut sources = BTreeMap::new();
    for (name, row) in &p.input_rows {
        sources.insert(name.clone(), lane_class[west(*row)]);
    }
    let spine = p.p_row.map(|r| {
        let name = p.rows[r].port.clone().expect("spine port");
        sources.insert(name.clone(), lane_class[west(r)]);
        name
    });
    let clock = p.clk_row.map(|r| {
        let name = p.rows[r].port.clone().expect("clock port");
        sources.insert(name.clone(), lane_class[west(r)]);
        name
    });
    let outputs = p
        .output_cols
        .iter()
        .map(|(name, col)| {
            let lane = d
                .lanes
                .iter()
                .position(|l| l.axis == Axis::Col && l.strip == *col && l.to.is_none())
                .expect("south lane");
            (name.clone(), lane)
        })
        .collect();
    Ok(Extracted { lane_class, classes: ids.len(), cells, sources, spine, clock, outputs })
}

impl Extracted {
    pub fn lane_value(&self, values: &[u8], lane: usize) -> u8 {
        let (k, p) = self.lane_class[lane];
        values[k] ^ p
    }

    fn check_loops(&self) -> Result<(), ExtractError> {
        let driver: BTreeMap<usize, usize> = self.cells.iter().enumerate().map(|(i, c)| (c.output, i)).collect();
        let n = self.cells.len();
        let mut indeg = vec![0usize; n];
        let mut users = vec![Vec::new(); n];
        for (i, c) in self.cells.iter().enumerate() {
            for k in &c.reads {
                if let Some(&j) = driver.get(k) {
                    if c.flipflop.is_some() && c.flipflop == self.cells[j].flipflop {
                        continue;
                    }
                    indeg[i] += 1;
                    users[j].push(i);
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
        match (0..n).find(|&i| indeg[i] > 0) {
            Some(i) if seen < n => Err(ExtractError::CombinationalLoop(self.cells[i].block)),
            _ => Ok(()),
        }
    }

    /// Power-up values: block outputs at their initial state, all else 0.
    pub fn initial(&self) -> Vec<u8> {
        let mut v = vec![0u8; self.classes];
        for c in &self.cells {
            v[c.output] = c.init;
        }
        v
    }

    fn driven(&self) -> Vec<bool> {
        let mut d = vec![false; self.classes];
        for (k, _) in self.sources.values() {
            d[*k] = true;
        }
        for c in &self.cells {
            d[c.output] = true;
        }
        d
    }

    /// The output value consistent with every tile of `cell`.
    fn eval(&self, d: &PlacedDesign, cell: &Cell, v: &mut [u8]) -> Result<u8, ExtractError> {
        let old = v[cell.output];
        let mut found = Vec::new();
        for x in [0u8, 1] {
            v[cell.output] = x;
            let ok = cell.tiles.iter().all(|at| {
                let lanes = d.tile_lanes[at];
                let t = lanes.map(|l| self.lane_value(v, l));
                model(d.tiles[at]).canonical.contains(&t)
            });
            if ok {
                found.push(x);
            }
        }
        v[cell.output] = old;
        match found.as_slice() {
            [x] => Ok(*x),
            _ => Err(ExtractError::NoUniqueOutput { block: cell.block, count: found.len() }),
        }
    }

    fn settle(&self, d: &PlacedDesign, v: &mut [u8], cycle: usize) -> Result<(), ExtractError> {
        let bound = 4 * self.cells.len().max(1);
        for _ in 0..bound {
            let mut changed = false;
            for c in &self.cells {
                let x = self.eval(d, c, v)?;
                if v[c.output] != x {
                    v[c.output] = x;
                    changed = true;
                }
            }
            if !changed {
                return Ok(());
            }
        }
        Err(ExtractError::NoFixpoint { cycle, iterations: bound })
    }

    fn set(&self, v: &mut [u8], port: &str, x: u8) {
        let (k, p) = self.sources[port];
        v[k] = x ^ p;
    }

    fn validate(&self) -> Result<(), ExtractError> {
        let driven = self.driven();
        for c in &self.cells {
            if c.reads.iter().any(|&k| !driven[k]) {
                return Err(ExtractError::Floating { block: c.block });
            }
        }
        self.check_loops()
    }

    /// Runs the design under the same clock protocol as the gate-level
    /// simulator. Class values after the last cycle are returned too.
    pub fn simulate(
        &self,
        d: &PlacedDesign,
        waveforms: &BTreeMap<String, Vec<u8>>,
        cycles: usize,
    ) -> Result<(BTreeMap<String, Vec<u8>>, Vec<u8>), ExtractError> {
        self.validate()?;
        let inputs: Vec<&String> = d.placement.input_rows.iter().map(|(n, _)| n).collect();
        for name in &inputs {
            let w = waveforms.get(*name).ok_or_else(|| ExtractError::MissingWaveform((*name).clone()))?;
            if w.len() < cycles {
                return Err(ExtractError::ShortWaveform((*name).clone()));
            }
        }
        let mut v = self.initial();
        let mut out: BTreeMap<String, Vec<u8>> = self.outputs.iter().map(|(n, _)| (n.clone(), Vec::new())).collect();
        for t in 0..cycles {
            if let Some(s) = &self.spine {
                self.set(&mut v, s, 0);
            }
            for name in &inputs {
                self.set(&mut v, name, waveforms[*name][t]);
            }
            if let Some(clk) = &self.clock {
                self.set(&mut v, clk, 0);
                self.settle(d, &mut v, t)?;
                self.set(&mut v, clk, 1);
            }
            self.settle(d, &mut v, t)?;
            for (name, lane) in &self.outputs {
                let x = self.lane_value(&v, *lane);
                out.get_mut(name).expect("output listed").push(x);
            }
        }
        Ok((out, v))
    }

    /// Settled class values for one input vector with the clock low.
    /// Missing inputs read as 0.
    pub fn settle_vector(&self, d: &PlacedDesign, inputs: &BTreeMap<String, u8>) -> Result<Vec<u8>, ExtractError> {
        self.validate()?;
        let mut v = self.initial();
        for name in self.sources.keys() {
            let x = if Some(name) == self.spine.as_ref() { 0 } else { inputs.get(name).copied().unwrap_or(0) };
            self.set(&mut v, name, x);
        }
        self.settle(d, &mut v, 0)?;
        Ok(v)
    }

    /// Canonical state of every lane.
    pub fn lane_states(&self, values: &[u8]) -> Vec<u8> {
        (0..self.lane_class.len()).map(|l| self.lane_value(values, l)).collect()
    }
}

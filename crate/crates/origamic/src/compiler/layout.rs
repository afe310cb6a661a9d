//! Crossbar placement and routing.
//!
//! Every signal lives on a full-length strip: rows run west to east across
//! the whole sheet and columns north to south. Gadget tiles sit at some
//! row/column intersections; every other intersection is a plain crossing.
//! A NAND is a block of four rows and six columns holding three NAE-hubs
//! and the hubs that copy its inputs, output and the `P` spine into them.
//! A connection is one hub where the driver's row meets the consumer's
//! column, plain to copy and mirrored to negate.

use std::collections::BTreeMap;

use super::tiles::{self, model, TileKind, E, N, S, W};
use super::CompileError;
use crate::crease_pattern::{ColorTag, Rect};
use crate::gadgets::{Chirality, NaeHubVariant};
use crate::geometry::{ExactPoint, ExactScalar};
use crate::logic_layer::{GateKind, LogicCircuit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Row,
    Col,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    pub name: String,
    /// Port at the west end of a row or the south end of a column.
    pub port: Option<String>,
}

/// One NAND. Rows are `[out, nae1, nae2, nae3]`; columns are
/// `[a, nae1, nae2, b, nae3, p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub gate: usize,
    pub rows: [usize; 4],
    pub cols: [usize; 6],
    pub init: u8,
    pub flipflop: Option<usize>,
}

impl Block {
    pub fn output_row(&self) -> usize {
        self.rows[0]
    }
}

#[derive(Debug, Clone)]
pub struct Placement {
    pub circuit: LogicCircuit,
    pub rows: Vec<Strip>,
    pub cols: Vec<Strip>,
    pub tiles: BTreeMap<(usize, usize), TileKind>,
    pub blocks: Vec<Block>,
    pub p_row: Option<usize>,
    pub clk_row: Option<usize>,
    pub input_rows: Vec<(String, usize)>,
    pub output_cols: Vec<(String, usize)>,
    /// Clear space between strips, in lane units.
    pub gap: ExactScalar,
}

pub const P_PORT: &str = "P";

fn block_tiles() -> [((usize, usize), TileKind); 12] {
    let plain = TileKind::Hub(Chirality::Plain);
    let mirrored = TileKind::Hub(Chirality::Mirrored);
    let nae = TileKind::NaeHub(NaeHubVariant::Base);
    [
        ((0, 1), plain),
        ((0, 2), plain),
        ((0, 4), plain),
        ((1, 0), plain),
        ((1, 1), nae),
        ((1, 3), mirrored),
        ((2, 0), plain),
        ((2, 2), nae),
        ((2, 5), mirrored),
        ((3, 3), plain),
        ((3, 4), nae),
        ((3, 5), mirrored),
    ]
}

/// Assigns strips and the tiles inside each NAND block. `gap` is in lane units.
pub fn place(circuit: &LogicCircuit, gap: ExactScalar) -> Placement {
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let mut input_rows = Vec::new();
    for (name, _) in &circuit.inputs {
        input_rows.push((name.clone(), rows.len()));
        rows.push(Strip { name: format!("in:{name}"), port: Some(name.clone()) });
    }
    let nands: Vec<usize> = (0..circuit.gates.len()).filter(|&i| circuit.gates[i].kind == GateKind::Nand).collect();
    let needs_p = !nands.is_empty() || circuit.gates.iter().any(|g| g.kind == GateKind::Const0);
    let p_row = needs_p.then(|| {
        rows.push(Strip { name: "spine".into(), port: Some(P_PORT.into()) });
        rows.len() - 1
    });
    let clk_row = circuit.clock.map(|n| {
        let name = circuit.nets[n].clone();
        rows.push(Strip { name: format!("clk:{name}"), port: Some(name) });
        rows.len() - 1
    });
    let mut tiles = BTreeMap::new();
    let mut blocks = Vec::new();
    for (k, &g) in nands.iter().enumerate() {
        let gate = &circuit.gates[g];
        let r0 = rows.len();
        let c0 = cols.len();
        let net = &circuit.nets[gate.output];
        for role in ["out", "nae1", "nae2", "nae3"] {
            rows.push(Strip { name: format!("b{k}:{role}:{net}"), port: None });
        }
        for role in ["a", "nae1", "nae2", "b", "nae3", "p"] {
            cols.push(Strip { name: format!("b{k}:{role}"), port: None });
        }
        for ((dr, dc), kind) in block_tiles() {
            tiles.insert((r0 + dr, c0 + dc), kind);
        }
        blocks.push(Block {
            gate: g,
            rows: [r0, r0 + 1, r0 + 2, r0 + 3],
            cols: [c0, c0 + 1, c0 + 2, c0 + 3, c0 + 4, c0 + 5],
            init: circuit.init[gate.output],
            flipflop: gate.flipflop,
        });
    }
    let mut output_cols = Vec::new();
    for (name, _) in &circuit.outputs {
        output_cols.push((name.clone(), cols.len()));
        cols.push(Strip { name: format!("out:{name}"), port: Some(name.clone()) });
    }
    Placement { circuit: circuit.clone(), rows, cols, tiles, blocks, p_row, clk_row, input_rows, output_cols, gap }
}

/// A straight run of one strip between two tiles or a tile and the border.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lane {
    pub axis: Axis,
    pub strip: usize,
    /// Tile at the west/north end, or the border.
    pub from: Option<(usize, usize)>,
    /// Tile at the east/south end, or the border.
    pub to: Option<(usize, usize)>,
    /// Lower edge (rows) or left edge (columns) of the band.
    pub lo: ExactScalar,
    pub width: ExactScalar,
    /// Extent along the strip of the lower/left and upper/right creases.
    pub lines: [(ExactScalar, ExactScalar); 2],
    pub role: ColorTag,
    pub port: Option<String>,
}

impl Lane {
    /// Border ends of this lane that are not ports.
    pub fn extraneous_ends(&self) -> usize {
        let west_port = self.axis == Axis::Row && self.port.is_some();
        let south_port = self.axis == Axis::Col && self.port.is_some();
        (self.from.is_none() && !west_port) as usize + (self.to.is_none() && !south_port) as usize
    }

    /// Centre line from the west/north end to the east/south end.
    pub fn centre(&self) -> (ExactPoint, ExactPoint) {
        let mid = &self.lo + &self.width.half();
        let [(s0, e0), (s1, e1)] = &self.lines;
        match self.axis {
            Axis::Row => (ExactPoint::new(s0.min(s1).clone(), mid.clone()), ExactPoint::new(e0.max(e1).clone(), mid)),
            Axis::Col => (ExactPoint::new(mid.clone(), s0.max(s1).clone()), ExactPoint::new(mid, e0.min(e1).clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Junction {
    pub net: String,
    pub row: usize,
    pub col: usize,
    pub negate: bool,
}

/// Placed and routed design in lane units.
#[derive(Debug, Clone)]
pub struct PlacedDesign {
    pub placement: Placement,
    /// Every non-crossing tile, block tiles and junctions alike.
    pub tiles: BTreeMap<(usize, usize), TileKind>,
    pub junctions: Vec<Junction>,
    /// Tile origins for every intersection, crossings included.
    pub origins: Vec<Vec<ExactPoint>>,
    /// Column band left edge entering each row, per column.
    pub col_band: Vec<Vec<ExactScalar>>,
    pub border: Rect,
    pub lanes: Vec<Lane>,
    /// Lanes on the `W, N, E, S` arms of each tile.
    pub tile_lanes: BTreeMap<(usize, usize), [usize; 4]>,
}

impl PlacedDesign {
    pub fn kind_at(&self, r: usize, c: usize) -> TileKind {
        self.tiles.get(&(r, c)).copied().unwrap_or(TileKind::Crossing)
    }
}

/// Row carrying `net` and whether the consumer sees its complement.
fn resolve(p: &Placement, net: usize) -> Result<(usize, bool), CompileError> {
    let c = &p.circuit;
    let mut net = net;
    let mut negate = false;
    for _ in 0..=c.gates.len() {
        if let Some(i) = c.inputs.iter().position(|(_, n)| *n == net) {
            return Ok((p.input_rows[i].1, negate));
        }
        if c.clock == Some(net) {
            return Ok((p.clk_row.expect("clock row"), negate));
        }
        let Some(g) = c.gates.iter().position(|g| g.output == net) else {
            return Err(CompileError::UndrivenNet(c.nets[net].clone()));
        };
        match c.gates[g].kind {
            GateKind::Nand => {
                let b = p.blocks.iter().find(|b| b.gate == g).expect("block per NAND");
                return Ok((b.output_row(), negate));
            }
            GateKind::Const0 => return Ok((p.p_row.expect("spine row"), negate)),
            GateKind::Not => {
                negate = !negate;
                net = c.gates[g].inputs[0];
            }
        }
    }
    Err(CompileError::InverterLoop(c.nets[net].clone()))
}

/// Adds a hub for every connection, then fixes all coordinates.
pub fn route(p: &Placement) -> Result<PlacedDesign, CompileError> {
    let c = &p.circuit;
    let mut tiles = p.tiles.clone();
    let mut junctions = Vec::new();
    let mut wants: Vec<(usize, usize)> = Vec::new();
    for b in &p.blocks {
        let g = &c.gates[b.gate];
        wants.push((g.inputs[0], b.cols[0]));
        wants.push((g.inputs[1], b.cols[3]));
    }
    for (i, (_, net)) in c.outputs.iter().enumerate() {
        wants.push((*net, p.output_cols[i].1));
    }
    for (net, col) in wants {
        let (row, negate) = resolve(p, net)?;
        add_junction(&mut tiles, &mut junctions, c.nets[net].clone(), row, col, negate)?;
    }
    if let Some(pr) = p.p_row {
        for b in &p.blocks {
            add_junction(&mut tiles, &mut junctions, P_PORT.into(), pr, b.cols[5], false)?;
        }
    }
    Ok(geometry(p, tiles, junctions))
}

fn add_junction(
    tiles: &mut BTreeMap<(usize, usize), TileKind>,
    junctions: &mut Vec<Junction>,
    net: String,
    row: usize,
    col: usize,
    negate: bool,
) -> Result<(), CompileError> {
    let ch = if negate { Chirality::Mirrored } else { Chirality::Plain };
    if tiles.insert((row, col), TileKind::Hub(ch)).is_some() {
        return Err(CompileError::RoutingCongestion { row, col });
    }
    junctions.push(Junction { net, row, col, negate });
    Ok(())
}

/// Relative band positions along a strip and the strip's extent across it.
struct StripShape {
    /// Band edge entering each intersection, plus one past the last.
    band: Vec<ExactScalar>,
    /// Tile offset across the strip at each intersection.
    offset: Vec<ExactScalar>,
    min: ExactScalar,
    max: ExactScalar,
}

fn strip_shape(kinds: impl Iterator<Item = TileKind>, axis: Axis) -> StripShape {
    let (enter, leave) = if axis == Axis::Row { (W, E) } else { (N, S) };
    let width = if axis == Axis::Row { tiles::row_width() } else { tiles::col_width() };
    let mut lo = ExactScalar::zero();
    let mut min = lo.clone();
    let mut max = width.clone();
    let mut band = Vec::new();
    let mut offset = Vec::new();
    for k in kinds {
        let m = model(k);
        let off = &lo - &m.band_lo[enter];
        let (cmin, cmax) = match axis {
            Axis::Row => (&m.core_min.y, &m.core_max.y),
            Axis::Col => (&m.core_min.x, &m.core_max.x),
        };
        min = min.min(&off + cmin);
        max = max.max(&off + cmax);
        band.push(lo);
        lo = &off + &m.band_lo[leave];
        min = min.min(lo.clone());
        max = max.max(&lo + &width);
        offset.push(off);
    }
    band.push(lo);
    StripShape { band, offset, min, max }
}

fn geometry(p: &Placement, tiles: BTreeMap<(usize, usize), TileKind>, junctions: Vec<Junction>) -> PlacedDesign {
    let (nr, nc) = (p.rows.len(), p.cols.len());
    let kind = |r: usize, c: usize| tiles.get(&(r, c)).copied().unwrap_or(TileKind::Crossing);
    let rows: Vec<StripShape> = (0..nr).map(|r| strip_shape((0..nc).map(|c| kind(r, c)), Axis::Row)).collect();
    let cols: Vec<StripShape> = (0..nc).map(|c| strip_shape((0..nr).map(|r| kind(r, c)), Axis::Col)).collect();
    let gap = &p.gap;

    // Rows stack downward from y = 0, columns rightward from x = 0.
    let mut row_base = Vec::with_capacity(nr);
    for (r, s) in rows.iter().enumerate() {
        let base = if r == 0 { -&s.max } else { &(&row_base[r - 1] + &rows[r - 1].min) - &(gap + &s.max) };
        row_base.push(base);
    }
    let mut col_base: Vec<ExactScalar> = Vec::with_capacity(nc);
    for (c, s) in cols.iter().enumerate() {
        let base = if c == 0 { -&s.min } else { &(&col_base[c - 1] + &cols[c - 1].max) + &(gap - &s.min) };
        col_base.push(base);
    }
    let right = cols.last().map(|s| &col_base[nc - 1] + &s.max).unwrap_or_else(ExactScalar::zero);
    let bottom = rows.last().map(|s| &row_base[nr - 1] + &s.min).unwrap_or_else(ExactScalar::zero);
    let border = Rect::new(ExactPoint::new(-gap, &bottom - gap), ExactPoint::new(&right + gap, gap.clone()));

    let origins: Vec<Vec<ExactPoint>> = (0..nr)
        .map(|r| {
            (0..nc)
                .map(|c| ExactPoint::new(&col_base[c] + &cols[c].offset[r], &row_base[r] + &rows[r].offset[c]))
                .collect()
        })
        .collect();
    let col_band: Vec<Vec<ExactScalar>> =
        (0..nc).map(|c| cols[c].band.iter().map(|b| &col_base[c] + b).collect()).collect();

    let mut lanes = Vec::new();
    let mut tile_lanes: BTreeMap<(usize, usize), [usize; 4]> =
        tiles.keys().map(|&k| (k, [usize::MAX; 4])).collect();
    for (axis, strips, n_across) in [(Axis::Row, &p.rows, nc), (Axis::Col, &p.cols, nr)] {
        for (s, strip) in strips.iter().enumerate() {
            let at = |i: usize| if axis == Axis::Row { (s, i) } else { (i, s) };
            let stops: Vec<usize> = (0..n_across).filter(|&i| tiles.contains_key(&at(i))).collect();
            let mut ends: Vec<Option<usize>> = vec![None];
            ends.extend(stops.iter().map(|&i| Some(i)));
            ends.push(None);
            for w in ends.windows(2) {
                let (a, b) = (w[0], w[1]);
                let band_index = a.map(|i| i + 1).unwrap_or(0);
                let (lo, width) = match axis {
                    Axis::Row => (&row_base[s] + &rows[s].band[band_index], tiles::row_width()),
                    Axis::Col => (col_band[s][band_index].clone(), tiles::col_width()),
                };
                let (leave, enter) = if axis == Axis::Row { (E, W) } else { (S, N) };
                let along = |pt: &ExactPoint| if axis == Axis::Row { pt.x.clone() } else { pt.y.clone() };
                let arm = |i: usize, arm: usize, k: usize| {
                    let (r, c) = at(i);
                    along(&(&origins[r][c] + &model(kind(r, c)).arm_origins[arm][k]))
                };
                let (start_border, end_border) = match axis {
                    Axis::Row => (border.min.x.clone(), border.max.x.clone()),
                    Axis::Col => (border.max.y.clone(), border.min.y.clone()),
                };
                let line = |k: usize| {
                    let start = a.map(|i| arm(i, leave, k)).unwrap_or_else(|| start_border.clone());
                    let end = b.map(|i| arm(i, enter, k)).unwrap_or_else(|| end_border.clone());
                    (start, end)
                };
                let port_end = match axis {
                    Axis::Row => a.is_none(),
                    Axis::Col => b.is_none(),
                };
                let port = if port_end { strip.port.clone() } else { None };
                let end_ok = |e: Option<usize>, is_port_end: bool| e.is_some() || (is_port_end && port.is_some());
                let tracked = match axis {
                    Axis::Row => end_ok(a, true) && end_ok(b, false),
                    Axis::Col => end_ok(a, false) && end_ok(b, true),
                };
                let id = lanes.len();
                if let Some(i) = a {
                    tile_lanes.get_mut(&at(i)).expect("tile")[leave] = id;
                }
                if let Some(i) = b {
                    tile_lanes.get_mut(&at(i)).expect("tile")[enter] = id;
                }
                lanes.push(Lane {
                    axis,
                    strip: s,
                    from: a.map(at),
                    to: b.map(at),
                    lo,
                    width,
                    lines: [line(0), line(1)],
                    role: if tracked { ColorTag::Tracked } else { ColorTag::Extraneous },
                    port,
                });
            }
        }
    }
    PlacedDesign { placement: p.clone(), tiles, junctions, origins, col_band, border, lanes, tile_lanes }
}

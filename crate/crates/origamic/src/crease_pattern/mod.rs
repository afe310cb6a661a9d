//! Crease-pattern data model, local flat-foldability checks and serialization.

mod builder;
mod fold;
mod svg;

pub use builder::{merge, PatternBuilder, Rect};
pub use fold::{export_fold, import_fold, FoldError};
pub use svg::{export_svg, SvgStyle};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::geometry::{Direction, ExactPoint, ExactScalar};
use crate::spatial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CreaseAssignment {
    Mountain,
    Valley,
    Border,
    Unassigned,
}

impl CreaseAssignment {
    pub fn fold_letter(self) -> &'static str {
        match self {
            CreaseAssignment::Mountain => "M",
            CreaseAssignment::Valley => "V",
            CreaseAssignment::Border => "B",
            CreaseAssignment::Unassigned => "U",
        }
    }

    pub fn from_fold_letter(s: &str) -> Option<Self> {
        Some(match s {
            "M" => CreaseAssignment::Mountain,
            "V" => CreaseAssignment::Valley,
            "B" => CreaseAssignment::Border,
            "U" | "F" => CreaseAssignment::Unassigned,
            _ => return None,
        })
    }

    pub fn flipped(self) -> Self {
        match self {
            CreaseAssignment::Mountain => CreaseAssignment::Valley,
            CreaseAssignment::Valley => CreaseAssignment::Mountain,
            other => other,
        }
    }

    pub fn is_fold(self) -> bool {
        matches!(self, CreaseAssignment::Mountain | CreaseAssignment::Valley)
    }
}

/// Drawing role of a crease.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ColorTag {
    #[default]
    Tracked,
    Intermediate,
    Extraneous,
}

impl ColorTag {
    pub fn name(self) -> &'static str {
        match self {
            ColorTag::Tracked => "tracked",
            ColorTag::Intermediate => "intermediate",
            ColorTag::Extraneous => "extraneous",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "tracked" => ColorTag::Tracked,
            "intermediate" => ColorTag::Intermediate,
            "extraneous" => ColorTag::Extraneous,
            _ => return None,
        })
    }

    /// When two fragments draw the same segment the more important tag wins.
    pub fn precedence(self) -> u8 {
        match self {
            ColorTag::Tracked => 2,
            ColorTag::Intermediate => 1,
            ColorTag::Extraneous => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crease {
    pub v: [usize; 2],
    pub assignment: CreaseAssignment,
    pub tag: ColorTag,
}

impl Crease {
    pub fn new(a: usize, b: usize, assignment: CreaseAssignment) -> Self {
        Crease { v: [a, b], assignment, tag: ColorTag::Tracked }
    }

    pub fn tagged(mut self, tag: ColorTag) -> Self {
        self.tag = tag;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("creases {0} and {1} intersect away from a shared vertex")]
    CrossingCreases(usize, usize),
    #[error("crease {0} has an endpoint that matches no vertex or ends inside the paper")]
    DanglingCrease(usize),
    #[error("crease {0} has zero length")]
    DegenerateCrease(usize),
    #[error("crease {0} is not on the 30-degree grid")]
    OffGridCrease(usize),
    #[error("vertices {0} and {1} coincide")]
    CoincidentVertices(usize, usize),
    #[error("pattern is not connected")]
    Disconnected,
    #[error("border creases do not form the outer boundary")]
    BorderMismatch,
    #[error("Euler check failed: V={v} E={e} F={f}")]
    EulerMismatch { v: usize, e: usize, f: usize },
    #[error("vertex {0} is on the border")]
    BorderVertex(usize),
    #[error("vertex {0} has an unassigned incident crease")]
    UnassignedIncidentCrease(usize),
    #[error("segment assigned both {0:?} and {1:?}")]
    ConflictingAssignment(CreaseAssignment, CreaseAssignment),
    #[error("fragments {0} and {1} overlap")]
    IllegalOverlap(usize, usize),
}

/// An interior face, counter-clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    /// `creases[i]` joins `vertices[i]` and `vertices[i + 1]`.
    pub creases: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CreasePattern {
    vertices: Vec<ExactPoint>,
    creases: Vec<Crease>,
    directions: Vec<Direction>,
    faces: Vec<Face>,
    /// Faces left and right of each crease traversed `v[0] → v[1]`.
    crease_faces: Vec<[Option<usize>; 2]>,
    /// Per vertex, outgoing `(direction, crease)` sorted counter-clockwise.
    around: Vec<Vec<(Direction, usize)>>,
    on_border: Vec<bool>,
}

/// Heading from `p` to `q` if it lies on the 30° grid.
pub fn grid_direction(p: &ExactPoint, q: &ExactPoint) -> Option<Direction> {
    let d = q - p;
    let (fx, fy) = d.to_f64();
    let guess = (fy.atan2(fx).to_degrees() / 30.0).round() as i64;
    [guess, guess - 1, guess + 1].into_iter().map(Direction::new).find(|dir| {
        let u = dir.unit();
        d.cross(&u).is_zero() && d.dot(&u).signum() > 0
    })
}

/// Alternating sum `α0 − α1 + α2 − …` of a cyclic angle sequence.
pub fn alternating_angle_sum(angles: &[i64]) -> i64 {
    angles.iter().enumerate().map(|(i, a)| if i % 2 == 0 { *a } else { -*a }).sum()
}

fn segments_conflict(p: &ExactPoint, q: &ExactPoint, r: &ExactPoint, s: &ExactPoint) -> bool {
    let d1 = q - p;
    let d2 = s - r;
    let denom = d1.cross(&d2);
    let rp = r - p;
    if denom.is_zero() {
        if !rp.cross(&d1).is_zero() {
            return false;
        }
        // Collinear: overlap of positive length?
        let len = d1.dot(&d1);
        let tr = rp.dot(&d1);
        let ts = (s - p).dot(&d1);
        let (lo, hi) = if tr < ts { (tr, ts) } else { (ts, tr) };
        let zero = ExactScalar::zero();
        let ov_lo = if lo > zero { lo } else { zero };
        let ov_hi = if hi < len { hi } else { len };
        return ov_lo < ov_hi;
    }
    let t = rp.cross(&d2) / &denom;
    let u = rp.cross(&d1) / &denom;
    let zero = ExactScalar::zero();
    let one = ExactScalar::one();
    if t < zero || t > one || u < zero || u > one {
        return false;
    }
    let t_end = t.is_zero() || t == one;
    let u_end = u.is_zero() || u == one;
    // Meeting at a shared endpoint is fine; coordinates are unique so this
    // means the same vertex.
    !(t_end && u_end)
}

/// Validates a straight-line crease graph and computes its faces.
pub fn build_pattern(vertices: Vec<ExactPoint>, creases: Vec<Crease>) -> Result<CreasePattern, PatternError> {
    let nv = vertices.len();
    for (i, c) in creases.iter().enumerate() {
        if c.v[0] >= nv || c.v[1] >= nv {
            return Err(PatternError::DanglingCrease(i));
        }
        if c.v[0] == c.v[1] {
            return Err(PatternError::DegenerateCrease(i));
        }
    }
    {
        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        for w in order.windows(2) {
            if vertices[w[0]] == vertices[w[1]] {
                return Err(PatternError::CoincidentVertices(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
    }
    let mut directions = Vec::with_capacity(creases.len());
    for (i, c) in creases.iter().enumerate() {
        match grid_direction(&vertices[c.v[0]], &vertices[c.v[1]]) {
            Some(d) => directions.push(d),
            None => return Err(PatternError::OffGridCrease(i)),
        }
    }

    let floats: Vec<(f64, f64)> = vertices.iter().map(|p| p.to_f64()).collect();
    let boxes: Vec<spatial::BBox> =
        creases.iter().map(|c| spatial::segment_bbox(floats[c.v[0]], floats[c.v[1]])).collect();
    let pairs = spatial::candidate_pairs(&boxes);
    let bad = exec::find_first(&pairs, |&(i, j)| {
        let (a, b) = (&creases[i], &creases[j]);
        segments_conflict(&vertices[a.v[0]], &vertices[a.v[1]], &vertices[b.v[0]], &vertices[b.v[1]])
            .then_some((i, j))
    });
    if let Some((i, j)) = bad {
        return Err(PatternError::CrossingCreases(i, j));
    }

    let mut around: Vec<Vec<(Direction, usize)>> = vec![Vec::new(); nv];
    for (i, c) in creases.iter().enumerate() {
        around[c.v[0]].push((directions[i], i));
        around[c.v[1]].push((directions[i].reverse(), i));
    }
    for list in &mut around {
        list.sort();
    }
    let mut on_border = vec![false; nv];
    for c in creases.iter().filter(|c| c.assignment == CreaseAssignment::Border) {
        on_border[c.v[0]] = true;
        on_border[c.v[1]] = true;
    }

    if nv == 0 {
        return Ok(CreasePattern::default());
    }

    for (v, list) in around.iter().enumerate() {
        if list.len() == 1 && !on_border[v] {
            return Err(PatternError::DanglingCrease(list[0].1));
        }
    }

    // Connectivity.
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(_, c) in &around[v] {
            let w = other_end(&creases[c], v);
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(PatternError::Disconnected);
    }

    // Half-edge `2c` runs v[0] → v[1], `2c + 1` the reverse. The face on the
    // left of `u → v` continues along the clockwise neighbour of `v → u`.
    let tail = |h: usize| creases[h / 2].v[h % 2];
    let head = |h: usize| creases[h / 2].v[1 - h % 2];
    let slot: Vec<Vec<usize>> = around
        .iter()
        .enumerate()
        .map(|(v, list)| list.iter().map(|&(_, c)| 2 * c + usize::from(creases[c].v[0] != v)).collect())
        .collect();
    let next = |h: usize| -> usize {
        let v = head(h);
        let back = h ^ 1;
        let list = &slot[v];
        let pos = list.iter().position(|&x| x == back).expect("half-edge registered at its tail");
        list[(pos + list.len() - 1) % list.len()]
    };

    let mut face_of = vec![usize::MAX; 2 * creases.len()];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..2 * creases.len() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = start;
        loop {
            face_of[h] = cycles.len();
            cyc.push(h);
            h = next(h);
            if h == start {
                break;
            }
        }
        cycles.push(cyc);
    }

    let area_sign = |cyc: &Vec<usize>| -> i32 {
        let mut acc = ExactScalar::zero();
        for &h in cyc {
            acc = acc + vertices[tail(h)].cross(&vertices[head(h)]);
        }
        acc.signum()
    };
    let signs = exec::map(&cycles, area_sign);
    let outer: Vec<usize> = (0..cycles.len()).filter(|&i| signs[i] <= 0).collect();
    let e = creases.len();
    let f = cycles.len();
    if outer.len() != 1 || nv + f != e + 2 {
        return Err(PatternError::EulerMismatch { v: nv, e, f });
    }
    let outer = outer[0];

    let border_count = creases.iter().filter(|c| c.assignment == CreaseAssignment::Border).count();
    let outer_all_border = cycles[outer].iter().all(|&h| creases[h / 2].assignment == CreaseAssignment::Border);
    if !outer_all_border || border_count != cycles[outer].len() {
        return Err(PatternError::BorderMismatch);
    }

    let mut index = vec![usize::MAX; cycles.len()];
    let mut faces = Vec::with_capacity(f - 1);
    for (ci, cyc) in cycles.iter().enumerate() {
        if ci == outer {
            continue;
        }
        index[ci] = faces.len();
        faces.push(Face { vertices: cyc.iter().map(|&h| tail(h)).collect(), creases: cyc.iter().map(|&h| h / 2).collect() });
    }
    let crease_faces = (0..e)
        .map(|c| {
            let l = index[face_of[2 * c]];
            let r = index[face_of[2 * c + 1]];
            [(l != usize::MAX).then_some(l), (r != usize::MAX).then_some(r)]
        })
        .collect();

    Ok(CreasePattern { vertices, creases, directions, faces, crease_faces, around, on_border })
}

fn other_end(c: &Crease, v: usize) -> usize {
    if c.v[0] == v {
        c.v[1]
    } else {
        c.v[0]
    }
}

impl CreasePattern {
    /// Axis-aligned square `[0, side]²` with no creases.
    pub fn square(side: i64) -> CreasePattern {
        PatternBuilder::new(Rect::new(ExactPoint::int(0, 0), ExactPoint::int(side, side)))
            .build()
            .expect("plain square is valid")
    }

    pub fn vertices(&self) -> &[ExactPoint] {
        &self.vertices
    }

    pub fn creases(&self) -> &[Crease] {
        &self.creases
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn direction(&self, crease: usize) -> Direction {
        self.directions[crease]
    }

    /// Faces `[left, right]` of the crease traversed from `v[0]` to `v[1]`.
    pub fn crease_faces(&self, crease: usize) -> [Option<usize>; 2] {
        self.crease_faces[crease]
    }

    /// Outgoing creases at `v`, counter-clockwise by heading.
    pub fn around(&self, v: usize) -> &[(Direction, usize)] {
        &self.around[v]
    }

    pub fn is_border_vertex(&self, v: usize) -> bool {
        self.on_border[v]
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| !self.on_border[v])
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Non-border creases.
    pub fn fold_creases(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.creases.len()).filter(|&c| self.creases[c].assignment != CreaseAssignment::Border)
    }

    pub fn segment(&self, crease: usize) -> (&ExactPoint, &ExactPoint) {
        let c = &self.creases[crease];
        (&self.vertices[c.v[0]], &self.vertices[c.v[1]])
    }

    /// Bounding box `(min, max)` of all vertices.
    pub fn bounds(&self) -> Option<(ExactPoint, ExactPoint)> {
        let first = self.vertices.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for p in &self.vertices[1..] {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        Some((lo, hi))
    }

    /// Same structure with some crease assignments replaced.
    pub fn with_assignments(&self, changes: &[(usize, CreaseAssignment)]) -> CreasePattern {
        let mut out = self.clone();
        for &(c, a) in changes {
            out.creases[c].assignment = a;
        }
        out
    }

    /// Decomposes back into build inputs.
    pub fn into_parts(self) -> (Vec<ExactPoint>, Vec<Crease>) {
        (self.vertices, self.creases)
    }

    /// Sector angles in degrees around an interior vertex, counter-clockwise
    /// from the lowest heading.
    pub fn sector_angles(&self, v: usize) -> Vec<i64> {
        let list = &self.around[v];
        (0..list.len())
            .map(|i| {
                let a = list[i].0.k();
                let b = list[(i + 1) % list.len()].0.k();
                let mut d = (b - a).rem_euclid(12);
                if d == 0 {
                    d = 12;
                }
                d * 30
            })
            .collect()
    }
}

/// Alternating sum of sector angles at an interior vertex, in degrees.
pub fn kawasaki_residual(pattern: &CreasePattern, vertex: usize) -> Result<ExactScalar, PatternError> {
    if pattern.is_border_vertex(vertex) {
        return Err(PatternError::BorderVertex(vertex));
    }
    Ok(ExactScalar::int(alternating_angle_sum(&pattern.sector_angles(vertex))))
}

/// Mountain count minus valley count at an interior vertex.
pub fn maekawa_delta(pattern: &CreasePattern, vertex: usize) -> Result<i64, PatternError> {
    if pattern.is_border_vertex(vertex) {
        return Err(PatternError::BorderVertex(vertex));
    }
    let mut delta = 0;
    for &(_, c) in pattern.around(vertex) {
        match pattern.creases()[c].assignment {
            CreaseAssignment::Mountain => delta += 1,
            CreaseAssignment::Valley => delta -= 1,
            _ => return Err(PatternError::UnassignedIncidentCrease(vertex)),
        }
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_direction_detects_headings() {
        let o = ExactPoint::origin();
        assert_eq!(grid_direction(&o, &Direction::new(5).unit()), Some(Direction::new(5)));
        assert_eq!(grid_direction(&o, &ExactPoint::int(2, 1)), None);
    }

    #[test]
    fn touching_is_a_conflict_but_shared_endpoints_are_not() {
        let p = |x, y| ExactPoint::int(x, y);
        assert!(segments_conflict(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 1)));
        assert!(!segments_conflict(&p(0, 0), &p(2, 0), &p(2, 0), &p(2, 1)));
        assert!(segments_conflict(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)));
        assert!(!segments_conflict(&p(0, 0), &p(1, 0), &p(1, 0), &p(3, 0)));
    }
}

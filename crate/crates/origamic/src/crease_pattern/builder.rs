//! Segment soup to planar crease pattern: clipping, collinear merging and
//! splitting at every intersection.

use std::collections::{BTreeMap, HashMap};

use super::{build_pattern, grid_direction, ColorTag, Crease, CreaseAssignment, CreasePattern, PatternError};
use crate::exec;
use crate::geometry::{Direction, ExactPoint, ExactScalar, Isometry};
use crate::polygon;
use crate::spatial;

/// Axis-aligned rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub min: ExactPoint,
    pub max: ExactPoint,
}

impl Rect {
    pub fn new(min: ExactPoint, max: ExactPoint) -> Self {
        Rect { min, max }
    }

    /// Square of half-side `h` around `c`.
    pub fn around(c: &ExactPoint, h: &ExactScalar) -> Self {
        let d = ExactPoint::new(h.clone(), h.clone());
        Rect { min: c - &d, max: c + &d }
    }

    pub fn corners(&self) -> [ExactPoint; 4] {
        [
            self.min.clone(),
            ExactPoint::new(self.max.x.clone(), self.min.y.clone()),
            self.max.clone(),
            ExactPoint::new(self.min.x.clone(), self.max.y.clone()),
        ]
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Clips `p → q` to the rectangle; `None` if nothing of positive length remains.
    fn clip(&self, p: &ExactPoint, q: &ExactPoint) -> Option<(ExactPoint, ExactPoint)> {
        let d = q - p;
        let mut lo = ExactScalar::zero();
        let mut hi = ExactScalar::one();
        let checks = [
            (&d.x, &p.x, &self.min.x, true),
            (&d.x, &p.x, &self.max.x, false),
            (&d.y, &p.y, &self.min.y, true),
            (&d.y, &p.y, &self.max.y, false),
        ];
        for (dv, pv, bound, is_min) in checks {
            // Need pv + s·dv >= bound (min side) or <= bound (max side).
            let gap = bound - pv;
            if dv.is_zero() {
                let ok = if is_min { gap.signum() <= 0 } else { gap.signum() >= 0 };
                if !ok {
                    return None;
                }
                continue;
            }
            let s = gap / dv;
            let lower = is_min == (dv.signum() > 0);
            if lower {
                if s > lo {
                    lo = s;
                }
            } else if s < hi {
                hi = s;
            }
        }
        if lo >= hi {
            return None;
        }
        Some((p + &d.scale(&lo), p + &d.scale(&hi)))
    }
}

#[derive(Debug, Clone)]
struct Seg {
    p: ExactPoint,
    q: ExactPoint,
    assignment: CreaseAssignment,
    tag: ColorTag,
}

/// Accumulates crease segments, then resolves them into a valid pattern.
#[derive(Debug, Clone, Default)]
pub struct PatternBuilder {
    border: Option<Rect>,
    segs: Vec<Seg>,
}

/// A maximal segment on one grid line, in line coordinates.
#[derive(Debug, Clone)]
struct LineSeg {
    class: Direction,
    offset: ExactScalar,
    lo: ExactScalar,
    hi: ExactScalar,
    assignment: CreaseAssignment,
    tag: ColorTag,
}

impl LineSeg {
    fn point(&self, t: &ExactScalar) -> ExactPoint {
        let u = self.class.unit();
        &u.scale(t) + &u.perp().scale(&self.offset)
    }
}

impl PatternBuilder {
    /// Builder whose segments are clipped to `border`, which becomes the boundary.
    pub fn new(border: Rect) -> Self {
        PatternBuilder { border: Some(border), segs: Vec::new() }
    }

    /// Builder with no clipping; the caller supplies border segments.
    pub fn free() -> Self {
        PatternBuilder::default()
    }

    pub fn border(&self) -> Option<&Rect> {
        self.border.as_ref()
    }

    pub fn add_segment(&mut self, p: ExactPoint, q: ExactPoint, assignment: CreaseAssignment, tag: ColorTag) {
        self.segs.push(Seg { p, q, assignment, tag });
    }

    /// Segment from `p` heading `dir` far enough to leave the border.
    pub fn add_ray(&mut self, p: ExactPoint, dir: Direction, assignment: CreaseAssignment, tag: ColorTag) {
        let reach = self.reach(&p);
        let q = &p + &dir.unit().scale(&reach);
        self.add_segment(p, q, assignment, tag);
    }

    /// Full line through `p` at heading `dir`, clipped to the border.
    pub fn add_line(&mut self, p: ExactPoint, dir: Direction, assignment: CreaseAssignment, tag: ColorTag) {
        let reach = self.reach(&p);
        let a = &p - &dir.unit().scale(&reach);
        let b = &p + &dir.unit().scale(&reach);
        self.add_segment(a, b, assignment, tag);
    }

    fn reach(&self, p: &ExactPoint) -> ExactScalar {
        let r = self.border.as_ref().expect("rays need a border to end at");
        let w = &r.max.x - &r.min.x;
        let h = &r.max.y - &r.min.y;
        w + h + (&p.x - &r.min.x).abs() + (&p.y - &r.min.y).abs() + ExactScalar::one()
    }

    pub fn len(&self) -> usize {
        self.segs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    /// Resolves the segments and validates the result.
    pub fn build(&self) -> Result<CreasePattern, PatternError> {
        let (vertices, creases) = self.resolve()?;
        build_pattern(vertices, creases)
    }

    /// Planar vertices and creases, canonically ordered, without validation.
    pub fn resolve(&self) -> Result<(Vec<ExactPoint>, Vec<Crease>), PatternError> {
        let mut segs: Vec<Seg> = Vec::with_capacity(self.segs.len() + 4);
        if let Some(rect) = &self.border {
            let c = rect.corners();
            for i in 0..4 {
                segs.push(Seg {
                    p: c[i].clone(),
                    q: c[(i + 1) % 4].clone(),
                    assignment: CreaseAssignment::Border,
                    tag: ColorTag::Tracked,
                });
            }
            let clipped = exec::map(&self.segs, |s| {
                rect.clip(&s.p, &s.q).map(|(p, q)| Seg { p, q, assignment: s.assignment, tag: s.tag })
            });
            segs.extend(clipped.into_iter().flatten());
        } else {
            segs.extend(self.segs.iter().filter(|s| s.p != s.q).cloned());
        }

        let lines = merge_collinear(&segs)?;
        let splits = split_points(&lines);

        let mut pieces: Vec<(ExactPoint, ExactPoint, CreaseAssignment, ColorTag)> = Vec::new();
        for (ls, mut ts) in lines.iter().zip(splits) {
            ts.push(ls.lo.clone());
            ts.push(ls.hi.clone());
            ts.sort();
            ts.dedup();
            for w in ts.windows(2) {
                pieces.push((ls.point(&w[0]), ls.point(&w[1]), ls.assignment, ls.tag));
            }
        }

        let mut verts: Vec<ExactPoint> = pieces.iter().flat_map(|(p, q, _, _)| [p.clone(), q.clone()]).collect();
        verts.sort();
        verts.dedup();
        let index: HashMap<&ExactPoint, usize> = verts.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut creases: Vec<Crease> = pieces
            .iter()
            .map(|(p, q, a, t)| {
                let (i, j) = (index[p], index[q]);
                Crease { v: [i.min(j), i.max(j)], assignment: *a, tag: *t }
            })
            .collect();
        creases.sort_by_key(|c| c.v);
        Ok((verts, creases))
    }
}

/// Groups segments by grid line and merges overlapping or touching pieces
/// with identical attributes.
fn merge_collinear(segs: &[Seg]) -> Result<Vec<LineSeg>, PatternError> {
    let mut groups: BTreeMap<(Direction, ExactScalar), Vec<(ExactScalar, ExactScalar, CreaseAssignment, ColorTag)>> =
        BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        let d = grid_direction(&s.p, &s.q).ok_or(PatternError::OffGridCrease(i))?;
        let class = Direction::new(d.line_class() as i64);
        let u = class.unit();
        let offset = u.cross(&s.p);
        let (a, b) = (u.dot(&s.p), u.dot(&s.q));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        groups.entry((class, offset)).or_default().push((lo, hi, s.assignment, s.tag));
    }

    let mut out = Vec::new();
    for ((class, offset), items) in groups {
        let mut bounds: Vec<ExactScalar> = items.iter().flat_map(|(lo, hi, _, _)| [lo.clone(), hi.clone()]).collect();
        bounds.sort();
        bounds.dedup();
        let n = bounds.len() - 1;
        // Difference arrays over elementary intervals, per assignment and tag.
        let mut acount = vec![[0i32; 4]; n + 1];
        let mut tcount = vec![[0i32; 3]; n + 1];
        for (lo, hi, a, t) in &items {
            let i0 = bounds.binary_search(lo).expect("bound present");
            let i1 = bounds.binary_search(hi).expect("bound present");
            acount[i0][*a as usize] += 1;
            acount[i1][*a as usize] -= 1;
            tcount[i0][tag_slot(*t)] += 1;
            tcount[i1][tag_slot(*t)] -= 1;
        }
        let mut run_a = [0i32; 4];
        let mut run_t = [0i32; 3];
        let mut current: Option<LineSeg> = None;
        for i in 0..n {
            for k in 0..4 {
                run_a[k] += acount[i][k];
            }
            for k in 0..3 {
                run_t[k] += tcount[i][k];
            }
            let present: Vec<usize> = (0..4).filter(|&k| run_a[k] > 0).collect();
            let attrs = match present.as_slice() {
                [] => None,
                [k] => {
                    let tag = [ColorTag::Tracked, ColorTag::Intermediate, ColorTag::Extraneous]
                        .into_iter()
                        .filter(|t| run_t[tag_slot(*t)] > 0)
                        .max_by_key(|t| t.precedence())
                        .unwrap_or_default();
                    Some((ASSIGNMENTS[*k], tag))
                }
                [k1, k2, ..] => return Err(PatternError::ConflictingAssignment(ASSIGNMENTS[*k1], ASSIGNMENTS[*k2])),
            };
            match (attrs, current.as_mut()) {
                (Some((a, t)), Some(cur)) if cur.assignment == a && cur.tag == t && cur.hi == bounds[i] => {
                    cur.hi = bounds[i + 1].clone();
                }
                (Some((a, t)), _) => {
                    if let Some(done) = current.take() {
                        out.push(done);
                    }
                    current = Some(LineSeg {
                        class,
                        offset: offset.clone(),
                        lo: bounds[i].clone(),
                        hi: bounds[i + 1].clone(),
                        assignment: a,
                        tag: t,
                    });
                }
                (None, _) => {
                    if let Some(done) = current.take() {
                        out.push(done);
                    }
                }
            }
        }
        if let Some(done) = current {
            out.push(done);
        }
    }
    Ok(out)
}

const ASSIGNMENTS: [CreaseAssignment; 4] =
    [CreaseAssignment::Mountain, CreaseAssignment::Valley, CreaseAssignment::Border, CreaseAssignment::Unassigned];

fn tag_slot(t: ColorTag) -> usize {
    match t {
        ColorTag::Tracked => 0,
        ColorTag::Intermediate => 1,
        ColorTag::Extraneous => 2,
    }
}

/// Per line segment, the parameters where other segments meet it.
fn split_points(lines: &[LineSeg]) -> Vec<Vec<ExactScalar>> {
    let ends: Vec<(ExactPoint, ExactPoint)> = lines.iter().map(|l| (l.point(&l.lo), l.point(&l.hi))).collect();
    let boxes: Vec<spatial::BBox> = ends.iter().map(|(p, q)| spatial::segment_bbox(p.to_f64(), q.to_f64())).collect();
    let pairs = spatial::candidate_pairs(&boxes);
    let hits = exec::filter_map(&pairs, |&(i, j)| {
        let (a, b) = (&lines[i], &lines[j]);
        if a.class == b.class {
            return None;
        }
        let p = line_intersection(a, b);
        let ta = a.class.unit().dot(&p);
        let tb = b.class.unit().dot(&p);
        (ta >= a.lo && ta <= a.hi && tb >= b.lo && tb <= b.hi).then_some((i, ta, j, tb))
    });
    let mut out = vec![Vec::new(); lines.len()];
    for (i, ta, j, tb) in hits {
        out[i].push(ta);
        out[j].push(tb);
    }
    out
}

fn line_intersection(a: &LineSeg, b: &LineSeg) -> ExactPoint {
    // Solve n_a·p = c_a, n_b·p = c_b.
    let na = a.class.unit().perp();
    let nb = b.class.unit().perp();
    let det = na.cross(&nb);
    let x = (&a.offset * &nb.y - &b.offset * &na.y) / &det;
    let y = (&na.x * &b.offset - &nb.x * &a.offset) / &det;
    ExactPoint::new(x, y)
}

/// Places fragments by their poses and fuses them into one pattern. Border
/// edges shared by two fragments disappear; creases that continue across the
/// seam become single creases. Fragment outlines are assumed convex.
pub fn merge(patterns: &[CreasePattern], poses: &[Isometry]) -> Result<CreasePattern, PatternError> {
    assert_eq!(patterns.len(), poses.len(), "one pose per pattern");
    let posed: Vec<(usize, &CreasePattern, &Isometry)> =
        patterns.iter().zip(poses).enumerate().filter(|(_, (p, _))| !p.is_empty()).map(|(i, (p, m))| (i, p, m)).collect();
    if posed.is_empty() {
        return Ok(CreasePattern::default());
    }
    if posed.len() == 1 && poses[posed[0].0] == Isometry::identity() {
        return Ok(posed[0].1.clone());
    }

    let outlines: Vec<Vec<ExactPoint>> = posed.iter().map(|(_, p, m)| polygon::ccw(outline(p).iter().map(|v| m.apply(v)).collect())).collect();
    for a in 0..outlines.len() {
        for b in a + 1..outlines.len() {
            if polygon::convex_overlap(&outlines[a], &outlines[b]) {
                return Err(PatternError::IllegalOverlap(posed[a].0, posed[b].0));
            }
        }
    }

    let mut builder = PatternBuilder::free();
    let mut border = PatternBuilder::free();
    for (_, p, m) in &posed {
        for c in p.creases() {
            let (a, b) = (m.apply(&p.vertices()[c.v[0]]), m.apply(&p.vertices()[c.v[1]]));
            if c.assignment == CreaseAssignment::Border {
                border.add_segment(a, b, CreaseAssignment::Border, c.tag);
            } else {
                builder.add_segment(a, b, c.assignment, c.tag);
            }
        }
    }
    for (p, q) in border_after_seams(&border.segs)? {
        builder.add_segment(p, q, CreaseAssignment::Border, ColorTag::Tracked);
    }
    builder.build()
}

/// Boundary polygon of a pattern, from its border creases.
fn outline(p: &CreasePattern) -> Vec<ExactPoint> {
    let mut next: HashMap<usize, Vec<usize>> = HashMap::new();
    for c in p.creases().iter().filter(|c| c.assignment == CreaseAssignment::Border) {
        next.entry(c.v[0]).or_default().push(c.v[1]);
        next.entry(c.v[1]).or_default().push(c.v[0]);
    }
    let Some(&start) = next.keys().min() else { return Vec::new() };
    let mut ring = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let n = next[&cur].iter().copied().find(|&w| w != prev).expect("border is a cycle");
        if n == start {
            break;
        }
        ring.push(n);
        prev = cur;
        cur = n;
    }
    ring.into_iter().map(|v| p.vertices()[v].clone()).collect()
}

/// Keeps border pieces covered once; pieces covered twice are interior seams.
fn border_after_seams(segs: &[Seg]) -> Result<Vec<(ExactPoint, ExactPoint)>, PatternError> {
    let mut groups: BTreeMap<(Direction, ExactScalar), Vec<(ExactScalar, ExactScalar)>> = BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        let d = grid_direction(&s.p, &s.q).ok_or(PatternError::OffGridCrease(i))?;
        let class = Direction::new(d.line_class() as i64);
        let u = class.unit();
        let (a, b) = (u.dot(&s.p), u.dot(&s.q));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        groups.entry((class, u.cross(&s.p))).or_default().push((lo, hi));
    }
    let mut out = Vec::new();
    for ((class, offset), items) in groups {
        let mut bounds: Vec<ExactScalar> = items.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
        bounds.sort();
        bounds.dedup();
        let line = LineSeg {
            class,
            offset,
            lo: ExactScalar::zero(),
            hi: ExactScalar::zero(),
            assignment: CreaseAssignment::Border,
            tag: ColorTag::Tracked,
        };
        for w in bounds.windows(2) {
            let cover = items.iter().filter(|(lo, hi)| *lo <= w[0] && *hi >= w[1]).count();
            match cover {
                0 | 2 => {}
                1 => out.push((line.point(&w[0]), line.point(&w[1]))),
                _ => return Err(PatternError::IllegalOverlap(0, 0)),
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(s: i64) -> Rect {
        Rect::new(ExactPoint::int(0, 0), ExactPoint::int(s, s))
    }

    #[test]
    fn crossing_lines_get_a_vertex() {
        let mut b = PatternBuilder::new(square(4));
        b.add_line(ExactPoint::int(2, 2), Direction::EAST, CreaseAssignment::Mountain, ColorTag::Tracked);
        b.add_line(ExactPoint::int(2, 2), Direction::NORTH, CreaseAssignment::Valley, ColorTag::Tracked);
        let p = b.build().unwrap();
        assert_eq!(p.faces().len(), 4);
        assert_eq!(p.vertices().len(), 9);
    }

    #[test]
    fn overlapping_conflict_is_reported() {
        let mut b = PatternBuilder::new(square(4));
        b.add_segment(ExactPoint::int(0, 1), ExactPoint::int(3, 1), CreaseAssignment::Mountain, ColorTag::Tracked);
        b.add_segment(ExactPoint::int(2, 1), ExactPoint::int(4, 1), CreaseAssignment::Valley, ColorTag::Tracked);
        assert!(matches!(b.build(), Err(PatternError::ConflictingAssignment(..))));
    }

    #[test]
    fn touching_pieces_fuse() {
        let mut b = PatternBuilder::new(square(4));
        b.add_segment(ExactPoint::int(0, 1), ExactPoint::int(2, 1), CreaseAssignment::Mountain, ColorTag::Tracked);
        b.add_segment(ExactPoint::int(2, 1), ExactPoint::int(4, 1), CreaseAssignment::Mountain, ColorTag::Tracked);
        let p = b.build().unwrap();
        assert_eq!(p.fold_creases().count(), 1);
    }
}

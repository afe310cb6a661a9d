//! Overlap structure of a folded pattern and the layer conditions it implies.

use std::collections::{BTreeMap, BTreeSet};

use super::sat::{self, Cnf};
use super::{Decision, FaceMaps, FoldedState, LayerOrder};
use crate::crease_pattern::{grid_direction, CreaseAssignment, CreasePattern};
use crate::exec;
use crate::geometry::{Direction, ExactPoint, ExactScalar};
use crate::polygon;
use crate::spatial;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Constraint {
    /// Faces joined by a crease: `g` lies above `f` iff valley xor `f` flipped.
    Crease { crease: usize, f: usize, g: usize, f_flipped: bool },
    /// Three faces with common overlap cannot form a cycle.
    Transitive(usize, usize, usize),
    /// Face `t` covers both sides of the hinge joining `f` and `g`, so it
    /// cannot sit between them.
    Tortilla { f: usize, g: usize, t: usize },
    /// Two hinges folded onto the same segment and side cannot interleave.
    TacoTaco { a: (usize, usize), b: (usize, usize) },
}

/// Folded faces plus every layer condition, independent of M/V choices.
#[derive(Debug, Clone)]
pub struct FoldedGeometry {
    pub face_maps: FaceMaps,
    /// Folded face outlines, counter-clockwise.
    pub polygons: Vec<Vec<ExactPoint>>,
    /// Face pairs `(a, b)`, `a < b`, whose folded interiors meet.
    pub overlaps: Vec<(usize, usize)>,
    pub constraints: Vec<Constraint>,
    num_creases: usize,
}

fn covers(poly: &[ExactPoint], m: &ExactPoint, n: &ExactPoint) -> bool {
    // Does `m + εn` lie inside `poly` for all small ε > 0?
    for i in 0..poly.len() {
        let a = &poly[i];
        let e = &poly[(i + 1) % poly.len()] - a;
        match e.cross(&(m - a)).signum() {
            1 => continue,
            -1 => return false,
            _ => {
                if e.cross(n).signum() <= 0 {
                    return false;
                }
            }
        }
    }
    true
}

impl FoldedGeometry {
    pub fn new(pattern: &CreasePattern, face_maps: FaceMaps) -> Self {
        let nf = pattern.faces().len();
        let polygons: Vec<Vec<ExactPoint>> = exec::map_range(nf, |f| {
            let pts = pattern.faces()[f].vertices.iter().map(|&v| face_maps.maps[f].apply(&pattern.vertices()[v])).collect();
            polygon::ccw(pts)
        });

        let boxes: Vec<spatial::BBox> = polygons.iter().map(|p| poly_bbox(p)).collect();
        let candidates = spatial::candidate_pairs(&boxes);
        let clipped: Vec<((usize, usize), Vec<ExactPoint>)> = exec::filter_map(&candidates, |&(a, b)| {
            let c = polygon::convex_clip(&polygons[a], &polygons[b]);
            (c.len() >= 3 && polygon::signed_area2(&c).signum() > 0).then_some(((a, b), c))
        });
        let overlaps: Vec<(usize, usize)> = clipped.iter().map(|(k, _)| *k).collect();
        let pair_clip: BTreeMap<(usize, usize), Vec<ExactPoint>> = clipped.into_iter().collect();

        let mut neighbours: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nf];
        for &(a, b) in &overlaps {
            neighbours[a].insert(b);
            neighbours[b].insert(a);
        }
        let mut triple_candidates = Vec::new();
        for &(a, b) in &overlaps {
            for &c in neighbours[a].intersection(&neighbours[b]) {
                if c > b {
                    triple_candidates.push((a, b, c));
                }
            }
        }
        let triples = exec::filter_map(&triple_candidates, |&(a, b, c)| {
            let t = polygon::convex_clip(&pair_clip[&(a, b)], &polygons[c]);
            (t.len() >= 3 && polygon::signed_area2(&t).signum() > 0).then_some((a, b, c))
        });

        let mut constraints: BTreeSet<Constraint> = BTreeSet::new();
        for c in pattern.fold_creases() {
            if let [Some(f), Some(g)] = pattern.crease_faces(c) {
                constraints.insert(Constraint::Crease { crease: c, f, g, f_flipped: face_maps.flipped(f) });
            }
        }
        for (a, b, c) in triples {
            constraints.insert(Constraint::Transitive(a, b, c));
        }
        for k in hinge_constraints(pattern, &face_maps, &polygons) {
            constraints.insert(k);
        }

        FoldedGeometry {
            face_maps,
            polygons,
            overlaps,
            constraints: constraints.into_iter().collect(),
            num_creases: pattern.creases().len(),
        }
    }

    /// CNF over pair variables (first, in `overlaps` order) then one variable
    /// per unassigned crease (true = mountain).
    pub fn encode(&self, assignments: &[CreaseAssignment]) -> (Cnf, Vec<usize>) {
        let index: BTreeMap<(usize, usize), i32> =
            self.overlaps.iter().enumerate().map(|(i, &k)| (k, i as i32 + 1)).collect();
        let above = |a: usize, b: usize| -> i32 {
            let v = *index.get(&(a.min(b), a.max(b))).expect("constraint refers to overlapping faces");
            if a < b {
                v
            } else {
                -v
            }
        };
        let free: Vec<usize> = self
            .constraints
            .iter()
            .filter_map(|k| match k {
                Constraint::Crease { crease, .. } if assignments[*crease] == CreaseAssignment::Unassigned => Some(*crease),
                _ => None,
            })
            .collect();
        let mv_var: BTreeMap<usize, i32> =
            free.iter().enumerate().map(|(i, &c)| (c, (self.overlaps.len() + i + 1) as i32)).collect();
        let mut cnf = Cnf::new(self.overlaps.len() + free.len());

        for k in &self.constraints {
            match *k {
                Constraint::Crease { crease, f, g, f_flipped } => {
                    let lit = above(g, f);
                    match assignments[crease] {
                        CreaseAssignment::Unassigned => {
                            let m = mv_var[&crease];
                            // valley = ¬m, and lit ⇔ valley xor flipped.
                            if f_flipped {
                                cnf.add(vec![-lit, m]);
                                cnf.add(vec![lit, -m]);
                            } else {
                                cnf.add(vec![-lit, -m]);
                                cnf.add(vec![lit, m]);
                            }
                        }
                        a => {
                            let want = (a == CreaseAssignment::Valley) != f_flipped;
                            cnf.add(vec![if want { lit } else { -lit }]);
                        }
                    }
                }
                Constraint::Transitive(a, b, c) => {
                    cnf.add(vec![-above(a, b), -above(b, c), -above(c, a)]);
                    cnf.add(vec![-above(a, c), -above(c, b), -above(b, a)]);
                }
                Constraint::Tortilla { f, g, t } => {
                    cnf.add(vec![-above(f, t), -above(t, g)]);
                    cnf.add(vec![-above(g, t), -above(t, f)]);
                }
                Constraint::TacoTaco { a, b } => {
                    for (p, q) in [(a, b), (b, a)] {
                        for (x, z) in [p, (p.1, p.0)] {
                            for (y, w) in [q, (q.1, q.0)] {
                                cnf.add(vec![-above(x, y), -above(y, z), -above(z, w)]);
                            }
                        }
                    }
                }
            }
        }
        (cnf, free)
    }

    pub fn decide(&self, pattern: &CreasePattern, fixed: &[(usize, CreaseAssignment)]) -> Decision {
        let mut assignments: Vec<CreaseAssignment> = pattern.creases().iter().map(|c| c.assignment).collect();
        for &(c, a) in fixed {
            assignments[c] = a;
        }
        let (cnf, free) = self.encode(&assignments);
        let Some(model) = sat::solve(&cnf) else { return Decision::Unfoldable };
        let mut order = LayerOrder::default();
        for (i, &(a, b)) in self.overlaps.iter().enumerate() {
            order.set(a, b, model[i + 1]);
        }
        let mut mv_completion = Vec::with_capacity(free.len());
        for (i, &c) in free.iter().enumerate() {
            let a = if model[self.overlaps.len() + i + 1] { CreaseAssignment::Mountain } else { CreaseAssignment::Valley };
            assignments[c] = a;
            mv_completion.push((c, a));
        }
        Decision::Foldable(Box::new(FoldedState {
            face_maps: self.face_maps.clone(),
            layer_order: order,
            mv_completion,
            assignments,
        }))
    }

    /// Direct evaluation of every condition on a concrete order and assignment.
    pub fn check(&self, order: &LayerOrder, mv: &[CreaseAssignment]) -> bool {
        if mv.len() != self.num_creases {
            return false;
        }
        let above = |a: usize, b: usize| order.above(a, b);
        self.constraints.iter().all(|k| match *k {
            Constraint::Crease { crease, f, g, f_flipped } => {
                let want = match mv[crease] {
                    CreaseAssignment::Valley => !f_flipped,
                    CreaseAssignment::Mountain => f_flipped,
                    _ => return false,
                };
                above(g, f) == Some(want)
            }
            Constraint::Transitive(a, b, c) => match (above(a, b), above(b, c), above(c, a)) {
                (Some(x), Some(y), Some(z)) => !(x == y && y == z),
                _ => false,
            },
            Constraint::Tortilla { f, g, t } => match (above(f, t), above(t, g)) {
                (Some(x), Some(y)) => x != y,
                _ => false,
            },
            Constraint::TacoTaco { a, b } => {
                // Interleaving means exactly one face of `b` lies between the faces of `a`.
                let between = |p: (usize, usize), h: usize| -> Option<bool> {
                    Some(above(p.0, h)? == above(h, p.1)?)
                };
                match (between(a, b.0), between(a, b.1)) {
                    (Some(x), Some(y)) => x == y,
                    _ => false,
                }
            }
        })
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }
}

fn poly_bbox(p: &[ExactPoint]) -> spatial::BBox {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for q in p {
        let (x, y) = q.to_f64();
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    b
}

/// Tortilla and taco-taco conditions along every folded crease.
fn hinge_constraints(pattern: &CreasePattern, maps: &FaceMaps, polygons: &[Vec<ExactPoint>]) -> Vec<Constraint> {
    // Folded crease images grouped by grid line.
    let mut lines: BTreeMap<(Direction, ExactScalar), Vec<(ExactScalar, ExactScalar, usize, usize)>> = BTreeMap::new();
    for c in pattern.fold_creases() {
        let [Some(f), Some(g)] = pattern.crease_faces(c) else { continue };
        let (p, q) = pattern.segment(c);
        let (p, q) = (maps.maps[f].apply(p), maps.maps[f].apply(q));
        let d = grid_direction(&p, &q).expect("isometries keep the grid");
        let class = Direction::new(d.line_class() as i64);
        let u = class.unit();
        let (a, b) = (u.dot(&p), u.dot(&q));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lines.entry((class, u.cross(&p))).or_default().push((lo, hi, f, g));
    }
    let groups: Vec<_> = lines.into_iter().collect();
    let per_line = exec::map(&groups, |((class, offset), hinges)| line_constraints(*class, offset, hinges, polygons));
    per_line.into_iter().flatten().collect()
}

fn line_constraints(
    class: Direction,
    offset: &ExactScalar,
    hinges: &[(ExactScalar, ExactScalar, usize, usize)],
    polygons: &[Vec<ExactPoint>],
) -> Vec<Constraint> {
    let u = class.unit();
    let n = u.perp();
    let at = |t: &ExactScalar| &u.scale(t) + &n.scale(offset);
    let height = |p: &ExactPoint| n.dot(p) - offset;

    let mut cuts: Vec<ExactScalar> = hinges.iter().flat_map(|(lo, hi, _, _)| [lo.clone(), hi.clone()]).collect();
    for poly in polygons {
        for i in 0..poly.len() {
            let p = &poly[i];
            let q = &poly[(i + 1) % poly.len()];
            let (hp, hq) = (height(p), height(q));
            let (sp, sq) = (hp.signum(), hq.signum());
            if sp == 0 {
                cuts.push(u.dot(p));
            }
            if sq == 0 {
                cuts.push(u.dot(q));
            }
            if sp * sq < 0 {
                let s = &hp / &(&hp - &hq);
                let x = p + &(q - p).scale(&s);
                cuts.push(u.dot(&x));
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let active: Vec<(usize, usize)> =
            hinges.iter().filter(|(lo, hi, _, _)| *lo <= w[0] && *hi >= w[1]).map(|h| (h.2, h.3)).collect();
        if active.is_empty() {
            continue;
        }
        let m = at(&(&w[0] + &w[1]).half());
        let neg = -&n;
        let sides: [BTreeSet<usize>; 2] = [
            (0..polygons.len()).filter(|&f| covers(&polygons[f], &m, &n)).collect(),
            (0..polygons.len()).filter(|&f| covers(&polygons[f], &m, &neg)).collect(),
        ];
        let tortillas: Vec<usize> = sides[0].intersection(&sides[1]).copied().collect();
        for side in &sides {
            let here: Vec<(usize, usize)> =
                active.iter().copied().filter(|(f, g)| side.contains(f) && side.contains(g)).collect();
            for &(f, g) in &here {
                for &t in &tortillas {
                    out.push(Constraint::Tortilla { f, g, t });
                }
            }
            for (i, &a) in here.iter().enumerate() {
                for &b in &here[i + 1..] {
                    if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                        continue;
                    }
                    out.push(Constraint::TacoTaco { a, b });
                }
            }
        }
    }
    out
}

//! Exact flat-foldability decision for small crease patterns.
//!
//! Faces are folded by composing reflections, overlaps are computed exactly,
//! and the layer-order conditions (crease consistency, transitivity,
//! taco-tortilla, taco-taco) are handed to a small deterministic solver.
//! Every crease is folded, so the tortilla-tortilla case reduces to
//! transitivity on shared overlap.

mod constraints;
pub mod sat;

use std::collections::{BTreeMap, VecDeque};

use crate::crease_pattern::{CreaseAssignment, CreasePattern};
use crate::geometry::{ExactPoint, Isometry};

pub use constraints::{Constraint, FoldedGeometry};

pub const DEFAULT_FACE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub face_limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { face_limit: DEFAULT_FACE_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("face maps disagree across crease {0}")]
    KawasakiViolation(usize),
    #[error("{faces} faces exceeds the oracle limit of {limit}")]
    TooLarge { faces: usize, limit: usize },
    #[error("pattern has no faces")]
    Empty,
}

/// Per-face folding isometry; face 0 stays put.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceMaps {
    pub maps: Vec<Isometry>,
}

impl FaceMaps {
    pub fn flipped(&self, face: usize) -> bool {
        self.maps[face].is_orientation_reversing()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

pub fn folded_geometry(pattern: &CreasePattern) -> Result<FaceMaps, OracleError> {
    let nf = pattern.faces().len();
    if nf == 0 {
        return Err(OracleError::Empty);
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    for c in pattern.fold_creases() {
        if let [Some(l), Some(r)] = pattern.crease_faces(c) {
            adj[l].push((r, c));
            adj[r].push((l, c));
        }
    }
    let reflection = |c: usize| {
        let (p, _) = pattern.segment(c);
        Isometry::reflection(p, pattern.direction(c))
    };
    let mut maps: Vec<Option<Isometry>> = vec![None; nf];
    maps[0] = Some(Isometry::identity());
    let mut queue = VecDeque::from([0usize]);
    let mut non_tree = Vec::new();
    while let Some(f) = queue.pop_front() {
        for &(g, c) in &adj[f] {
            if maps[g].is_none() {
                let m = maps[f].as_ref().expect("visited").compose(&reflection(c));
                maps[g] = Some(m);
                queue.push_back(g);
            } else {
                non_tree.push((f, g, c));
            }
        }
    }
    let maps: Vec<Isometry> = maps.into_iter().map(|m| m.expect("pattern is connected")).collect();
    for (f, g, c) in non_tree {
        if maps[g] != maps[f].compose(&reflection(c)) {
            return Err(OracleError::KawasakiViolation(c));
        }
    }
    Ok(FaceMaps { maps })
}

/// Stacking relation between overlapping faces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayerOrder {
    /// Keyed by `(a, b)` with `a < b`; true when `a` lies above `b`.
    above: BTreeMap<(usize, usize), bool>,
}

impl LayerOrder {
    /// Order induced by a single top-to-bottom stack.
    pub fn from_stack(top_to_bottom: &[usize]) -> Self {
        let mut above = BTreeMap::new();
        for (i, &a) in top_to_bottom.iter().enumerate() {
            for &b in &top_to_bottom[i + 1..] {
                above.insert((a.min(b), a.max(b)), a < b);
            }
        }
        LayerOrder { above }
    }

    pub fn set(&mut self, a: usize, b: usize, a_above_b: bool) {
        self.above.insert((a.min(b), a.max(b)), if a < b { a_above_b } else { !a_above_b });
    }

    /// Whether `a` is above `b`, if the pair is recorded.
    pub fn above(&self, a: usize, b: usize) -> Option<bool> {
        let v = *self.above.get(&(a.min(b), a.max(b)))?;
        Some(if a < b { v } else { !v })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        self.above.iter().map(|(&(a, b), &v)| (a, b, v))
    }
}

/// Foldability witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedState {
    pub face_maps: FaceMaps,
    pub layer_order: LayerOrder,
    /// Choices made for creases that were unassigned.
    pub mv_completion: Vec<(usize, CreaseAssignment)>,
    /// Full assignment used, indexed by crease.
    pub assignments: Vec<CreaseAssignment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Foldable(Box<FoldedState>),
    Unfoldable,
}

impl Decision {
    pub fn is_foldable(&self) -> bool {
        matches!(self, Decision::Foldable(_))
    }

    pub fn witness(&self) -> Option<&FoldedState> {
        match self {
            Decision::Foldable(w) => Some(w),
            Decision::Unfoldable => None,
        }
    }
}

/// Decides flat foldability with the default face limit. `fixed` overrides
/// the pattern's own assignments.
pub fn is_flat_foldable(
    pattern: &CreasePattern,
    fixed: &[(usize, CreaseAssignment)],
) -> Result<Decision, OracleError> {
    is_flat_foldable_with(pattern, fixed, &OracleConfig::default())
}

pub fn is_flat_foldable_with(
    pattern: &CreasePattern,
    fixed: &[(usize, CreaseAssignment)],
    config: &OracleConfig,
) -> Result<Decision, OracleError> {
    let geom = analyze(pattern, config)?;
    Ok(geom.decide(pattern, fixed))
}

/// Folds and computes the overlap structure once, so many assignments can be tried.
pub fn analyze(pattern: &CreasePattern, config: &OracleConfig) -> Result<FoldedGeometry, OracleError> {
    let nf = pattern.faces().len();
    if nf > config.face_limit {
        return Err(OracleError::TooLarge { faces: nf, limit: config.face_limit });
    }
    let maps = folded_geometry(pattern)?;
    Ok(FoldedGeometry::new(pattern, maps))
}

/// True iff `order` and `mv` satisfy every layer condition of `geometry`.
pub fn check_layer_order(geometry: &FoldedGeometry, order: &LayerOrder, mv: &[CreaseAssignment]) -> bool {
    geometry.check(order, mv)
}

/// Folded image of a point of `face`.
pub fn fold_point(maps: &FaceMaps, face: usize, p: &ExactPoint) -> ExactPoint {
    maps.maps[face].apply(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crease_pattern::{ColorTag, PatternBuilder, Rect};
    use crate::geometry::Direction;

    fn strip(creases: &[(i64, CreaseAssignment)]) -> CreasePattern {
        let mut b = PatternBuilder::new(Rect::new(ExactPoint::int(0, 0), ExactPoint::int(6, 2)));
        for &(x, a) in creases {
            b.add_line(ExactPoint::int(x, 0), Direction::NORTH, a, ColorTag::Tracked);
        }
        b.build().unwrap()
    }

    #[test]
    fn flat_sheet_maps_to_identity() {
        let p = CreasePattern::square(1);
        let m = folded_geometry(&p).unwrap();
        assert_eq!(m.maps, vec![Isometry::identity()]);
    }

    #[test]
    fn single_fold_reflects_half() {
        let p = strip(&[(3, CreaseAssignment::Mountain)]);
        let m = folded_geometry(&p).unwrap();
        let right = (0..2).find(|&f| p.faces()[f].vertices.iter().any(|&v| p.vertices()[v].x == 6.into())).unwrap();
        let left = 1 - right;
        assert_eq!(m.maps[right].apply(&ExactPoint::int(6, 0)), m.maps[left].apply(&ExactPoint::int(0, 0)));
        assert_ne!(m.flipped(left), m.flipped(right));
    }

    #[test]
    fn mountain_fold_admits_one_stack() {
        for a in [CreaseAssignment::Mountain, CreaseAssignment::Valley] {
            let p = strip(&[(3, a)]);
            let g = analyze(&p, &OracleConfig::default()).unwrap();
            let mv: Vec<_> = p.creases().iter().map(|c| c.assignment).collect();
            let ok: Vec<bool> = [[0, 1], [1, 0]].iter().map(|s| check_layer_order(&g, &LayerOrder::from_stack(s), &mv)).collect();
            assert_eq!(ok.iter().filter(|x| **x).count(), 1);
        }
    }

    #[test]
    fn unassigned_pleat_is_foldable_and_witness_checks() {
        let p = strip(&[(2, CreaseAssignment::Unassigned), (4, CreaseAssignment::Unassigned)]);
        let g = analyze(&p, &OracleConfig::default()).unwrap();
        let d = g.decide(&p, &[]);
        let w = d.witness().expect("pleat folds");
        assert!(check_layer_order(&g, &w.layer_order, &w.assignments));
        assert_eq!(w.mv_completion.len(), 2);
    }

    #[test]
    fn too_many_faces_is_reported() {
        let p = strip(&[(1, CreaseAssignment::Mountain), (2, CreaseAssignment::Valley), (3, CreaseAssignment::Mountain)]);
        let err = analyze(&p, &OracleConfig { face_limit: 3 }).unwrap_err();
        assert_eq!(err, OracleError::TooLarge { faces: 4, limit: 3 });
    }
}

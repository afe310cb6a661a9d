//! Layout audit: pleat angles, overlaps and efficiency.

use std::collections::BTreeMap;

use super::layout::PlacedDesign;
use crate::crease_pattern::{grid_direction, ColorTag};
use crate::geometry::{angle_between, ExactPoint, ExactScalar};
use crate::spatial;

/// A pleat as a centre segment and width, independent of how it was laid out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneGeom {
    pub p: ExactPoint,
    pub q: ExactPoint,
    pub width: ExactScalar,
    pub role: ColorTag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two pleats cross at something other than a right angle.
    Angle { a: usize, b: usize, degrees: i64 },
    /// A pleat that is off the 30-degree grid.
    OffGrid(usize),
    /// Parallel pleats whose bands overlap.
    Overlap { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub useful: usize,
    pub extraneous: usize,
    pub crossings: usize,
    pub tiles: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Efficiency {
    pub useful: usize,
    pub extraneous: usize,
    /// Useful over extraneous; `None` without extraneous pleats.
    pub per_extraneous: Option<f64>,
    /// Useful over all border pleats; `None` for an empty design.
    pub useful_fraction: Option<f64>,
}

fn segments_meet(a: &(ExactPoint, ExactPoint), b: &(ExactPoint, ExactPoint)) -> bool {
    let side = |p: &ExactPoint, q: &ExactPoint, r: &ExactPoint| (q - p).cross(&(r - p)).signum();
    let d1 = side(&a.0, &a.1, &b.0);
    let d2 = side(&a.0, &a.1, &b.1);
    let d3 = side(&b.0, &b.1, &a.0);
    let d4 = side(&b.0, &b.1, &a.1);
    // Collinear pairs are handled as overlaps, not crossings.
    d1 * d2 <= 0 && d3 * d4 <= 0 && !(d1 == 0 && d2 == 0)
}

/// Checks every pair of pleats that come near each other.
pub fn audit_lanes(lanes: &[LaneGeom]) -> (Vec<Violation>, usize) {
    let mut out = Vec::new();
    let dirs: Vec<_> = lanes.iter().map(|l| grid_direction(&l.p, &l.q)).collect();
    for (i, d) in dirs.iter().enumerate() {
        if d.is_none() {
            out.push(Violation::OffGrid(i));
        }
    }
    let boxes: Vec<_> = lanes
        .iter()
        .map(|l| {
            let w = l.width.to_f64() / 2.0;
            let b = spatial::segment_bbox(l.p.to_f64(), l.q.to_f64());
            [b[0] - w, b[1] - w, b[2] + w, b[3] + w]
        })
        .collect();
    let mut crossings = 0;
    for (i, j) in spatial::candidate_pairs(&boxes) {
        let (Some(di), Some(dj)) = (dirs[i], dirs[j]) else { continue };
        let (a, b) = (&lanes[i], &lanes[j]);
        if di.line_class() == dj.line_class() {
            // Parallel: bands overlap if the centre lines are closer than
            // half the summed widths and the extents overlap.
            let d = &a.q - &a.p;
            let len2 = d.dot(&d);
            let off = d.cross(&(&b.p - &a.p));
            let reach = (&a.width + &b.width).half();
            let near = &off * &off < &(&reach * &reach) * &len2;
            let t0 = d.dot(&(&b.p - &a.p));
            let t1 = d.dot(&(&b.q - &a.p));
            let zero = ExactScalar::zero();
            let overlap = t0.clone().max(t1.clone()) > zero && t0.min(t1) < len2;
            if near && overlap {
                out.push(Violation::Overlap { a: i, b: j });
            }
        } else if segments_meet(&(a.p.clone(), a.q.clone()), &(b.p.clone(), b.q.clone())) {
            crossings += 1;
            let deg = angle_between(di, dj).rem_euclid(180);
            if deg != 90 {
                out.push(Violation::Angle { a: i, b: j, degrees: deg.min(180 - deg) });
            }
        }
    }
    (out, crossings)
}

pub fn lane_geoms(d: &PlacedDesign) -> Vec<LaneGeom> {
    d.lanes
        .iter()
        .map(|l| {
            let (p, q) = l.centre();
            LaneGeom { p, q, width: l.width.clone(), role: l.role }
        })
        .collect()
}

pub fn audit(d: &PlacedDesign) -> AuditReport {
    let (violations, crossings) = audit_lanes(&lane_geoms(d));
    let useful = d.lanes.iter().filter(|l| l.port.is_some()).count();
    let extraneous = d.lanes.iter().map(|l| l.extraneous_ends()).sum();
    let mut tiles = BTreeMap::new();
    for k in d.tiles.values() {
        *tiles.entry(k.name()).or_insert(0) += 1;
    }
    AuditReport { useful, extraneous, crossings, tiles, violations }
}

pub fn efficiency_report(a: &AuditReport) -> Efficiency {
    let total = a.useful + a.extraneous;
    Efficiency {
        useful: a.useful,
        extraneous: a.extraneous,
        per_extraneous: (a.extraneous > 0).then(|| a.useful as f64 / a.extraneous as f64),
        useful_fraction: (total > 0).then(|| a.useful as f64 / total as f64),
    }
}

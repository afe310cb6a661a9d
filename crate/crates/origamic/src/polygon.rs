//! Exact convex-polygon helpers.

use crate::geometry::{ExactPoint, ExactScalar};

/// Twice the signed area; positive for counter-clockwise polygons.
pub fn signed_area2(poly: &[ExactPoint]) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for i in 0..poly.len() {
        acc = acc + poly[i].cross(&poly[(i + 1) % poly.len()]);
    }
    acc
}

/// Counter-clockwise copy of `poly`.
pub fn ccw(mut poly: Vec<ExactPoint>) -> Vec<ExactPoint> {
    if signed_area2(&poly).signum() < 0 {
        poly.reverse();
    }
    poly
}

/// Which side of the directed line `a → b` the point lies on: `+1` left.
pub fn orient(a: &ExactPoint, b: &ExactPoint, p: &ExactPoint) -> i32 {
    (b - a).cross(&(p - a)).signum()
}

/// Intersection of `subject` with the convex counter-clockwise `clip`.
/// The result may be degenerate (fewer than three points or zero area).
pub fn convex_clip(subject: &[ExactPoint], clip: &[ExactPoint]) -> Vec<ExactPoint> {
    let mut out: Vec<ExactPoint> = subject.to_vec();
    for i in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let a = &clip[i];
        let b = &clip[(i + 1) % clip.len()];
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let p = &input[j];
            let q = &input[(j + 1) % input.len()];
            let sp = orient(a, b, p);
            let sq = orient(a, b, q);
            if sp >= 0 {
                out.push(p.clone());
            }
            if (sp > 0 && sq < 0) || (sp < 0 && sq > 0) {
                out.push(line_hit(a, b, p, q));
            }
        }
    }
    out
}

/// Intersection of line `a b` with segment `p q` (assumed to cross it).
fn line_hit(a: &ExactPoint, b: &ExactPoint, p: &ExactPoint, q: &ExactPoint) -> ExactPoint {
    let d = b - a;
    let num = d.cross(&(p - a));
    let den = d.cross(&(p - q));
    let t = num / den;
    p + &(q - p).scale(&t)
}

/// True when the interiors of two convex counter-clockwise polygons meet.
pub fn convex_overlap(a: &[ExactPoint], b: &[ExactPoint]) -> bool {
    let c = convex_clip(a, b);
    c.len() >= 3 && signed_area2(&c).signum() > 0
}

/// Arithmetic mean of the vertices; interior for convex polygons of positive area.
pub fn centroid(poly: &[ExactPoint]) -> ExactPoint {
    let n = ExactScalar::int(poly.len() as i64);
    let mut sx = ExactScalar::zero();
    let mut sy = ExactScalar::zero();
    for p in poly {
        sx = sx + &p.x;
        sy = sy + &p.y;
    }
    ExactPoint::new(sx / &n, sy / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: i64, y0: i64, s: i64) -> Vec<ExactPoint> {
        vec![
            ExactPoint::int(x0, y0),
            ExactPoint::int(x0 + s, y0),
            ExactPoint::int(x0 + s, y0 + s),
            ExactPoint::int(x0, y0 + s),
        ]
    }

    #[test]
    fn squares_overlap_only_with_area() {
        assert!(convex_overlap(&sq(0, 0, 2), &sq(1, 1, 2)));
        assert!(!convex_overlap(&sq(0, 0, 2), &sq(2, 0, 2)));
        assert_eq!(signed_area2(&convex_clip(&sq(0, 0, 2), &sq(1, 1, 2))), ExactScalar::int(2));
    }
}

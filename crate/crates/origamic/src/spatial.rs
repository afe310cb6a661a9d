//! Uniform-grid broad phase over floating bounding boxes. Only used to prune
//! candidate pairs; every decision downstream is exact.

use std::collections::HashMap;

pub type BBox = [f64; 4];

pub fn segment_bbox(a: (f64, f64), b: (f64, f64)) -> BBox {
    [a.0.min(b.0), a.1.min(b.1), a.0.max(b.0), a.1.max(b.1)]
}

fn overlaps(a: &BBox, b: &BBox, pad: f64) -> bool {
    a[0] <= b[2] + pad && b[0] <= a[2] + pad && a[1] <= b[3] + pad && b[1] <= a[3] + pad
}

/// All pairs `(i, j)`, `i < j`, whose padded boxes overlap. Sorted.
pub fn candidate_pairs(boxes: &[BBox]) -> Vec<(usize, usize)> {
    let n = boxes.len();
    if n < 2 {
        return Vec::new();
    }
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for b in boxes {
        lo = (lo.0.min(b[0]), lo.1.min(b[1]));
        hi = (hi.0.max(b[2]), hi.1.max(b[3]));
    }
    let extent = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
    let pad = extent * 1e-9;
    let cells_per_side = ((n as f64).sqrt().ceil() as usize).clamp(1, 1024);
    let cell = extent / cells_per_side as f64;
    let cell_of = |x: f64, y: f64| -> (i64, i64) {
        (((x - lo.0) / cell).floor() as i64, ((y - lo.1) / cell).floor() as i64)
    };

    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, b) in boxes.iter().enumerate() {
        let (x0, y0) = cell_of(b[0] - pad, b[1] - pad);
        let (x1, y1) = cell_of(b[2] + pad, b[3] + pad);
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                grid.entry((cx, cy)).or_default().push(i);
            }
        }
    }

    let mut out = Vec::new();
    for (&key, members) in &grid {
        for (ai, &i) in members.iter().enumerate() {
            for &j in &members[ai + 1..] {
                let (a, b) = (&boxes[i], &boxes[j]);
                if !overlaps(a, b, pad) {
                    continue;
                }
                // Report each pair once: in the cell holding the low corner of the overlap.
                let corner = cell_of(a[0].max(b[0]) - pad, a[1].max(b[1]) - pad);
                let (x0, y0) = cell_of(a[0] - pad, a[1] - pad);
                let (x0b, y0b) = cell_of(b[0] - pad, b[1] - pad);
                let owner = (corner.0.max(x0).max(x0b), corner.1.max(y0).max(y0b));
                if owner == key {
                    out.push((i.min(j), i.max(j)));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_brute_force() {
        let boxes: Vec<BBox> = (0..40)
            .map(|i| {
                let x = (i * 7 % 13) as f64;
                let y = (i * 5 % 11) as f64;
                [x, y, x + (i % 4) as f64, y + (i % 3) as f64]
            })
            .collect();
        let mut brute = Vec::new();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if overlaps(&boxes[i], &boxes[j], 1e-6) {
                    brute.push((i, j));
                }
            }
        }
        assert_eq!(candidate_pairs(&boxes), brute);
    }
}

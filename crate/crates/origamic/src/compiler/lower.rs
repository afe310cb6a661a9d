//! Placed design to crease pattern.

use std::collections::BTreeMap;

use super::layout::{Axis, PlacedDesign};
use super::tiles::{model, TileKind};
use super::CompileError;
use crate::crease_pattern::{ColorTag, CreaseAssignment, CreasePattern, PatternBuilder, Rect};
use crate::geometry::{ExactPoint, ExactScalar};

/// Lane crease assignment for canonical state `s`, `k` = 0 for the
/// lower/left crease. State 0 puts the mountain on the left of travel,
/// which is north for rows and east for columns.
fn lane_mv(s: u8, k: usize) -> CreaseAssignment {
    if (k == 1) == (s == 0) {
        CreaseAssignment::Mountain
    } else {
        CreaseAssignment::Valley
    }
}

/// Emits every crease of `d` with lanes in canonical `states`, scaled by
/// `scale`. Tile interiors take the assignment of a fold witness for the
/// lane states they see.
pub fn lower_to_creases(d: &PlacedDesign, states: &[u8], scale: &ExactScalar) -> Result<CreasePattern, CompileError> {
    let s = |p: &ExactPoint| p.scale(scale);
    let border = Rect::new(s(&d.border.min), s(&d.border.max));
    let mut b = PatternBuilder::new(border);
    let (nr, nc) = (d.placement.rows.len(), d.placement.cols.len());

    // Which lane passes each intersection along each axis.
    let mut row_lane = vec![vec![usize::MAX; nc]; nr];
    let mut col_lane = vec![vec![usize::MAX; nc]; nr];
    for (id, l) in d.lanes.iter().enumerate() {
        let (first, last) = match l.axis {
            Axis::Row => (l.from.map(|t| t.1 + 1).unwrap_or(0), l.to.map(|t| t.1).unwrap_or(nc)),
            Axis::Col => (l.from.map(|t| t.0 + 1).unwrap_or(0), l.to.map(|t| t.0).unwrap_or(nr)),
        };
        for i in first..last {
            match l.axis {
                Axis::Row => row_lane[l.strip][i] = id,
                Axis::Col => col_lane[i][l.strip] = id,
            }
        }
    }

    for r in 0..nr {
        for c in 0..nc {
            let kind = d.kind_at(r, c);
            let canonical = match d.tile_lanes.get(&(r, c)) {
                Some(lanes) => lanes.map(|l| states[l]),
                None => {
                    let (h, v) = (states[row_lane[r][c]], states[col_lane[r][c]]);
                    [h, v, h, v]
                }
            };
            let core = model(kind).witness(&canonical).ok_or(CompileError::InconsistentTile { row: r, col: c })?;
            let o = &d.origins[r][c];
            for (p, q, a) in core {
                let tag = if kind == TileKind::Crossing {
                    let lane = if p.y == q.y { row_lane[r][c] } else { col_lane[r][c] };
                    d.lanes[lane].role
                } else {
                    ColorTag::Intermediate
                };
                b.add_segment(s(&(o + p)), s(&(o + q)), *a, tag);
            }
        }
    }

    for (id, l) in d.lanes.iter().enumerate() {
        // Crossing squares along the lane, as intervals along travel.
        let mut gaps: Vec<(ExactScalar, ExactScalar)> = Vec::new();
        let crossings: Vec<(usize, usize)> = match l.axis {
            Axis::Row => (0..nc).map(|c| (l.strip, c)).filter(|&(r, c)| row_lane[r][c] == id).collect(),
            Axis::Col => (0..nr).map(|r| (r, l.strip)).filter(|&(r, c)| col_lane[r][c] == id).collect(),
        };
        for (r, c) in crossings {
            if d.tiles.contains_key(&(r, c)) {
                continue;
            }
            if l.axis == Axis::Row {
                let lo = d.col_band[c][r].clone();
                let hi = &lo + &col_width();
                gaps.push((lo, hi));
            } else {
                let y = &d.origins[r][c].y;
                let h = row_width().half();
                gaps.push((y + &h, y - &h));
            }
        }
        for k in 0..2 {
            let offset = &l.lo + &if k == 0 { ExactScalar::zero() } else { l.width.clone() };
            let point = |t: &ExactScalar| match l.axis {
                Axis::Row => ExactPoint::new(t.clone(), offset.clone()),
                Axis::Col => ExactPoint::new(offset.clone(), t.clone()),
            };
            let mv = lane_mv(states[id], k);
            let (start, end) = &l.lines[k];
            let mut at = start.clone();
            for (g0, g1) in &gaps {
                b.add_segment(s(&point(&at)), s(&point(g0)), mv, l.role);
                at = g1.clone();
            }
            b.add_segment(s(&point(&at)), s(&point(end)), mv, l.role);
        }
    }
    Ok(b.build()?)
}

fn col_width() -> ExactScalar {
    super::tiles::col_width()
}

fn row_width() -> ExactScalar {
    super::tiles::row_width()
}

/// Total crease length per tag, in paper units.
pub fn length_by_tag(p: &CreasePattern) -> BTreeMap<ColorTag, f64> {
    let mut out = BTreeMap::new();
    for (i, cr) in p.creases().iter().enumerate() {
        if cr.assignment == CreaseAssignment::Border {
            continue;
        }
        let (a, b) = p.segment(i);
        let (ax, ay) = a.to_f64();
        let (bx, by) = b.to_f64();
        *out.entry(cr.tag).or_insert(0.0) += (bx - ax).hypot(by - ay);
    }
    out
}

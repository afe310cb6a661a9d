//! Gadget outlines before they become crease patterns: finite creases, rays
//! that run off to the border, and the arms (pleat pairs) that form ports.

use crate::crease_pattern::{ColorTag, CreaseAssignment, CreasePattern, PatternBuilder, PatternError, Rect};
use crate::geometry::{Direction, ExactPoint, ExactScalar, Isometry};

use super::{Polarity, Port};

#[derive(Debug, Clone)]
pub struct Arm {
    pub name: String,
    /// Origins of the two parallel rays bounding the pleat.
    pub origins: [ExactPoint; 2],
    /// Heading pointing away from the gadget.
    pub outward: Direction,
    pub polarity: Polarity,
    pub role: ColorTag,
}

#[derive(Debug, Clone, Default)]
pub struct Sketch {
    pub segments: Vec<(ExactPoint, ExactPoint, CreaseAssignment, ColorTag)>,
    pub arms: Vec<Arm>,
}

impl Sketch {
    pub fn segment(&mut self, a: ExactPoint, b: ExactPoint) {
        self.segments.push((a, b, CreaseAssignment::Unassigned, ColorTag::Intermediate));
    }

    /// Closed polygon of intermediate creases.
    pub fn polygon(&mut self, pts: &[ExactPoint]) {
        for i in 0..pts.len() {
            self.segment(pts[i].clone(), pts[(i + 1) % pts.len()].clone());
        }
    }

    pub fn arm(&mut self, name: &str, a: ExactPoint, b: ExactPoint, outward: Direction, polarity: Polarity, role: ColorTag) {
        self.arms.push(Arm { name: name.into(), origins: [a, b], outward, polarity, role });
    }

    pub fn transform(&self, m: &Isometry) -> Sketch {
        let dir = |d: Direction| m.map_direction(d).expect("poses keep the 30-degree grid");
        Sketch {
            segments: self.segments.iter().map(|(a, b, x, t)| (m.apply(a), m.apply(b), *x, *t)).collect(),
            arms: self
                .arms
                .iter()
                .map(|a| Arm {
                    name: a.name.clone(),
                    origins: [m.apply(&a.origins[0]), m.apply(&a.origins[1])],
                    outward: dir(a.outward),
                    polarity: a.polarity,
                    role: a.role,
                })
                .collect(),
        }
    }

    pub fn extend(&mut self, other: Sketch) {
        self.segments.extend(other.segments);
        self.arms.extend(other.arms);
    }

    fn core_points(&self) -> Vec<ExactPoint> {
        let mut pts: Vec<ExactPoint> = self.segments.iter().flat_map(|(a, b, _, _)| [a.clone(), b.clone()]).collect();
        pts.extend(self.arms.iter().flat_map(|a| a.origins.iter().cloned()));
        pts
    }

    /// Builds the fragment inside the bounding box of the core grown by
    /// `margin`, growing further until every arm leaves through one side.
    pub fn realize(&self, margin: i64) -> Result<(CreasePattern, Vec<Port>), PatternError> {
        let pts = self.core_points();
        let mut lo = pts[0].clone();
        let mut hi = pts[0].clone();
        for p in &pts {
            lo.x = lo.x.clone().min(p.x.clone());
            lo.y = lo.y.clone().min(p.y.clone());
            hi.x = hi.x.clone().max(p.x.clone());
            hi.y = hi.y.clone().max(p.y.clone());
        }
        let mut grow = margin;
        loop {
            let g = ExactScalar::int(grow);
            let pad = ExactPoint::new(g.clone(), g);
            let rect = Rect::new(&lo - &pad, &hi + &pad);
            if let Some(exits) = self.arm_exits(&rect) {
                return self.build_in(rect, exits);
            }
            grow += 1;
        }
    }

    /// Exit points of each arm's two rays, if every pair leaves through one side.
    fn arm_exits(&self, rect: &Rect) -> Option<Vec<[ExactPoint; 2]>> {
        self.arms
            .iter()
            .map(|a| {
                let e0 = exit(rect, &a.origins[0], a.outward);
                let e1 = exit(rect, &a.origins[1], a.outward);
                (side(rect, &e0) == side(rect, &e1) && side(rect, &e0).is_some()).then_some([e0, e1])
            })
            .collect()
    }

    fn build_in(&self, rect: Rect, exits: Vec<[ExactPoint; 2]>) -> Result<(CreasePattern, Vec<Port>), PatternError> {
        let mut b = PatternBuilder::new(rect);
        for (p, q, a, t) in &self.segments {
            b.add_segment(p.clone(), q.clone(), *a, *t);
        }
        for (arm, ex) in self.arms.iter().zip(&exits) {
            for (o, e) in arm.origins.iter().zip(ex) {
                b.add_segment(o.clone(), e.clone(), CreaseAssignment::Unassigned, arm.role);
            }
        }
        let pattern = b.build()?;
        let ports = self.arms.iter().zip(&exits).map(|(arm, ex)| make_port(&pattern, arm, ex)).collect();
        Ok((pattern, ports))
    }
}

fn exit(rect: &Rect, from: &ExactPoint, d: Direction) -> ExactPoint {
    let u = d.unit();
    // Smallest positive parameter reaching a side.
    let mut best: Option<ExactScalar> = None;
    let tries = [(&u.x, &from.x, &rect.min.x), (&u.x, &from.x, &rect.max.x), (&u.y, &from.y, &rect.min.y), (&u.y, &from.y, &rect.max.y)];
    for (du, f, bound) in tries {
        if du.is_zero() {
            continue;
        }
        let s = (bound - f) / du;
        if s.signum() > 0 && best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
    }
    from + &u.scale(&best.expect("origin inside the border"))
}

/// Border side index 0..4 (bottom, right, top, left) for a point strictly
/// inside one side, `None` at corners.
fn side(rect: &Rect, p: &ExactPoint) -> Option<u8> {
    let on = [p.y == rect.min.y, p.x == rect.max.x, p.y == rect.max.y, p.x == rect.min.x];
    let hits: Vec<u8> = (0..4).filter(|&i| on[i as usize]).collect();
    (hits.len() == 1).then(|| hits[0])
}

fn make_port(pattern: &CreasePattern, arm: &Arm, exits: &[ExactPoint; 2]) -> Port {
    let direction = match arm.polarity {
        Polarity::Input => arm.outward.reverse(),
        Polarity::Output => arm.outward,
    };
    let anchor = exits[0].midpoint(&exits[1]);
    let u = arm.outward.unit();
    let width = u.cross(&(&arm.origins[1] - &arm.origins[0])).abs();
    let left_normal = direction.unit().perp();
    let find = |p: &ExactPoint| -> usize {
        let v = pattern.vertices().iter().position(|q| q == p).expect("arm exit is a vertex");
        pattern
            .around(v)
            .iter()
            .map(|&(_, c)| c)
            .find(|&c| pattern.creases()[c].assignment != CreaseAssignment::Border)
            .expect("arm crease reaches the border")
    };
    let (l, r) = if (&exits[0] - &anchor).dot(&left_normal).signum() > 0 { (0, 1) } else { (1, 0) };
    Port {
        name: arm.name.clone(),
        anchor,
        direction,
        width,
        polarity: arm.polarity,
        role: arm.role,
        creases: [find(&exits[l]), find(&exits[r])],
    }
}

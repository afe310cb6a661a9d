//! Concrete gadget constructions. Coordinates are in units of the narrow
//! pleat width; every tile here has been checked against the oracle by the
//! tests in `tests/gadgets.rs`.

use super::sketch::Sketch;
use super::{from_inward, GadgetInstance, GadgetKind, LogicalRelation, Polarity, Pose};
use crate::crease_pattern::{build_pattern, ColorTag, CreaseAssignment, CreasePattern, PatternError};
use crate::geometry::{angle_between, Direction, ExactPoint, ExactScalar, Isometry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("dimensions must be positive")]
    NonpositiveDimension,
    #[error("theta {0} is outside the foldable range")]
    ThetaOutOfRange(i64),
    #[error("theta {0} is foldable in principle but not constructed")]
    UnsupportedTheta(i64),
    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),
    #[error("the tracked pleat must be the zig-zagging one")]
    TrackedNotZigzag,
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

type Spec = (Polarity, ColorTag);

const IN: Spec = (Polarity::Input, ColorTag::Tracked);
const OUT: Spec = (Polarity::Output, ColorTag::Tracked);
const EXTRA: Spec = (Polarity::Output, ColorTag::Extraneous);

fn pt(x: ExactScalar, y: ExactScalar) -> ExactPoint {
    ExactPoint::new(x, y)
}

/// `p/q + (r/s)·√3`
fn sc(p: i64, q: i64, r: i64, s: i64) -> ExactScalar {
    ExactScalar::from_parts(p, q, r, s)
}

fn d(deg: i64) -> Direction {
    Direction::from_degrees(deg).expect("multiple of 30")
}

/// Maps a canonical heading through `m`.
fn md(m: &Isometry, deg: i64) -> Direction {
    m.map_direction(d(deg)).expect("grid isometry")
}

/// Applies an isometry to a fragment built elsewhere.
pub fn transform_pattern(p: &CreasePattern, m: &Isometry) -> Result<CreasePattern, PatternError> {
    let (verts, creases) = p.clone().into_parts();
    build_pattern(verts.iter().map(|v| m.apply(v)).collect(), creases)
}

fn instantiate(
    kind: GadgetKind,
    pose: &Pose,
    theta: Option<Direction>,
    sketch: &Sketch,
    relation: LogicalRelation,
) -> Result<GadgetInstance, GadgetError> {
    let (fragment, mut ports) = sketch.realize(2)?;
    let m = pose.isometry();
    let fragment = if m == Isometry::identity() {
        fragment
    } else {
        for p in &mut ports {
            p.anchor = m.apply(&p.anchor);
            p.direction = m.map_direction(p.direction).expect("grid isometry");
        }
        transform_pattern(&fragment, &m)?
    };
    Ok(GadgetInstance { kind, pose: pose.clone(), theta, ports, fragment, relation })
}

/// 30-30-120 twist. Arms: wide (`√3`) at 240°, narrow at 90° and 30°.
/// Inward states satisfy `n90 = n30 = ¬wide`.
pub struct JTwist {
    /// Corners `[T0, T1, T2]`; the wide arm spans T0-T1.
    pub corners: [ExactPoint; 3],
    pub m: Isometry,
}

impl JTwist {
    pub fn new(m: Isometry) -> Self {
        let c = [pt(0.into(), 0.into()), pt(2.into(), 0.into()), pt(1.into(), sc(0, 1, 1, 3))];
        JTwist { corners: c.map(|p| m.apply(&p)), m }
    }

    pub fn add_core(&self, s: &mut Sketch) {
        s.polygon(&self.corners);
    }

    pub fn wide(&self, s: &mut Sketch, name: &str, spec: Spec) {
        s.arm(name, self.corners[0].clone(), self.corners[1].clone(), md(&self.m, 240), spec.0, spec.1);
    }

    pub fn n90(&self, s: &mut Sketch, name: &str, spec: Spec) {
        s.arm(name, self.corners[0].clone(), self.corners[2].clone(), md(&self.m, 90), spec.0, spec.1);
    }

    pub fn n30(&self, s: &mut Sketch, name: &str, spec: Spec) {
        s.arm(name, self.corners[1].clone(), self.corners[2].clone(), md(&self.m, 30), spec.0, spec.1);
    }
}

/// Two J twists joined along their wide arms; the second is the first turned
/// half a circle about a point two units down the wide arm.
fn j_pair() -> (JTwist, JTwist, Sketch) {
    let j1 = JTwist::new(Isometry::identity());
    let j2 = JTwist::new(Isometry::rotation(&pt(0.into(), sc(0, 1, -1, 1)), 6));
    let mut s = Sketch::default();
    j1.add_core(&mut s);
    j2.add_core(&mut s);
    // Link creases: T0 ↔ T1', T1 ↔ T0'.
    s.segments.push((j1.corners[0].clone(), j2.corners[1].clone(), CreaseAssignment::Unassigned, ColorTag::Tracked));
    s.segments.push((j1.corners[1].clone(), j2.corners[0].clone(), CreaseAssignment::Unassigned, ColorTag::Tracked));
    (j1, j2, s)
}

/// Equilateral twist with arms at 0°, 120° and 240°. Inward states are
/// never all equal.
pub struct NaeTwist {
    pub corners: [ExactPoint; 3],
    pub m: Isometry,
}

impl NaeTwist {
    pub fn new(m: Isometry) -> Self {
        let c = [pt(0.into(), sc(2, 3, 0, 1)), pt(sc(0, 1, -1, 3), sc(-1, 3, 0, 1)), pt(sc(0, 1, 1, 3), sc(-1, 3, 0, 1))];
        NaeTwist { corners: c.map(|p| m.apply(&p)), m }
    }
}

/// Which of the two mirror-image corner tiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chirality {
    /// Inward `L = U = ¬R = ¬D`.
    Plain,
    /// Inward `L = D = ¬R = ¬U`.
    Mirrored,
}

/// Heading names for the four axis arms.
pub const AXIS_ARMS: [(&str, i64); 4] = [("L", 180), ("U", 90), ("R", 0), ("D", 270)];

/// Two 30-60-90 twists joined by a width-2 link at 330°. Horizontal arms are
/// `√3` wide and vertical arms 1 wide. `specs` are in `L, U, R, D` order.
pub fn hub_sketch(chirality: Chirality, specs: [Spec; 4]) -> Sketch {
    // X node.
    let t2 = pt(0.into(), 0.into());
    let t1 = pt(1.into(), 0.into());
    let t0 = pt(0.into(), sc(0, 1, -1, 1));
    // Y node: X turned half a circle and moved by (5/2, -3√3/2).
    let y2 = pt(sc(5, 2, 0, 1), sc(0, 1, -3, 2));
    let y1 = pt(sc(3, 2, 0, 1), sc(0, 1, -3, 2));
    let y0 = pt(sc(5, 2, 0, 1), sc(0, 1, -1, 2));
    let mut s = Sketch::default();
    s.polygon(&[t0.clone(), t1.clone(), t2.clone()]);
    s.polygon(&[y0.clone(), y1.clone(), y2.clone()]);
    s.segment(t1.clone(), y0.clone());
    s.segment(t0.clone(), y1.clone());
    let arms = [(t2.clone(), t0), (t2, t1), (y2.clone(), y0), (y2, y1)];
    finish_axis_tile(s, arms, chirality, specs)
}

/// 30-60-90 NAE twist joined to a hub-style converter. Inward states:
/// `NAE(L, U, R)` and `D = R`. `specs` are in `L, U, R, D` order.
pub fn nae_hub_sketch(specs: [Spec; 4], m: &Isometry) -> Sketch {
    let t0 = pt(0.into(), 0.into());
    let t1 = pt(4.into(), 0.into());
    let t2 = pt(3.into(), sc(0, 1, 1, 1));
    let y2 = pt(sc(19, 4, 0, 1), sc(0, 1, -5, 4));
    let y1 = pt(sc(15, 4, 0, 1), sc(0, 1, -5, 4));
    let y0 = pt(sc(19, 4, 0, 1), sc(0, 1, -1, 4));
    let mut s = Sketch::default();
    s.polygon(&[t0.clone(), t1.clone(), t2.clone()]);
    s.polygon(&[y0.clone(), y1.clone(), y2.clone()]);
    s.segment(t0.clone(), y1.clone());
    s.segment(t1.clone(), y0.clone());
    let arms = [(t0, t2.clone()), (t1, t2), (y2.clone(), y0), (y2, y1)];
    let mut out = Sketch { segments: s.segments, ..Sketch::default() };
    for (i, (a, b)) in arms.into_iter().enumerate() {
        out.arm(AXIS_ARMS[i].0, a, b, d(AXIS_ARMS[i].1), specs[i].0, specs[i].1);
    }
    rename_axis_arms(out.transform(m), specs)
}

fn finish_axis_tile(s: Sketch, arms: [(ExactPoint, ExactPoint); 4], chirality: Chirality, specs: [Spec; 4]) -> Sketch {
    let mut out = s;
    for (i, (a, b)) in arms.into_iter().enumerate() {
        out.arm(AXIS_ARMS[i].0, a, b, d(AXIS_ARMS[i].1), Polarity::Input, ColorTag::Tracked);
    }
    let out = match chirality {
        Chirality::Plain => out,
        Chirality::Mirrored => out.transform(&Isometry::mirror_x()),
    };
    rename_axis_arms(out, specs)
}

/// Renames arms after a transform by their new headings, sorts them into
/// `L, U, R, D` order and applies `specs`.
fn rename_axis_arms(mut s: Sketch, specs: [Spec; 4]) -> Sketch {
    let mut arms = std::mem::take(&mut s.arms);
    for a in &mut arms {
        a.name = AXIS_ARMS.iter().find(|(_, h)| d(*h) == a.outward).expect("axis heading").0.into();
    }
    arms.sort_by_key(|a| AXIS_ARMS.iter().position(|(n, _)| *n == a.name));
    for (a, spec) in arms.iter_mut().zip(specs) {
        a.polarity = spec.0;
        a.role = spec.1;
    }
    s.arms = arms;
    s
}

/// Inward-state relation of an axis tile, `[L, U, R, D]`.
pub fn hub_inward(chirality: Chirality, s: &[u8]) -> bool {
    match chirality {
        Chirality::Plain => s[0] == s[1] && s[2] != s[0] && s[3] != s[0],
        Chirality::Mirrored => s[0] == s[3] && s[2] != s[0] && s[1] != s[0],
    }
}

/// Inward relation of the NAE tile under `m`, `[L, U, R, D]`. The three NAE
/// arms and the copy arm move with the transform.
pub fn nae_hub_inward(variant: NaeHubVariant, s: &[u8]) -> bool {
    let (nae, copy_of, copy) = variant.roles();
    let not_all_equal = !(s[nae[0]] == s[nae[1]] && s[nae[1]] == s[nae[2]]);
    not_all_equal && s[copy] == s[copy_of]
}

/// The four symmetric placements of the NAE tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NaeHubVariant {
    /// `NAE(L, U, R)`, `D = R`.
    Base,
    /// `NAE(R, D, L)`, `U = L`.
    Turned,
    /// `NAE(R, U, L)`, `D = L`.
    MirrorV,
    /// `NAE(L, D, R)`, `U = R`.
    MirrorH,
}

impl NaeHubVariant {
    pub const ALL: [NaeHubVariant; 4] =
        [NaeHubVariant::Base, NaeHubVariant::Turned, NaeHubVariant::MirrorV, NaeHubVariant::MirrorH];

    pub fn isometry(self) -> Isometry {
        match self {
            NaeHubVariant::Base => Isometry::identity(),
            NaeHubVariant::Turned => Isometry::rotation(&ExactPoint::origin(), 6),
            NaeHubVariant::MirrorV => Isometry::mirror_x(),
            NaeHubVariant::MirrorH => Isometry::reflection(&ExactPoint::origin(), Direction::EAST),
        }
    }

    /// `(nae arms, copied arm, copy arm)` as indices into `L, U, R, D`.
    pub fn roles(self) -> ([usize; 3], usize, usize) {
        match self {
            NaeHubVariant::Base => ([0, 1, 2], 2, 3),
            NaeHubVariant::Turned => ([2, 3, 0], 0, 1),
            NaeHubVariant::MirrorV => ([2, 1, 0], 0, 3),
            NaeHubVariant::MirrorH => ([0, 3, 2], 2, 1),
        }
    }
}

/// Straight pleat of `width` running `length` from `axis.0` along `axis.1`,
/// assigned for `state`.
pub fn make_pleat(
    axis: (ExactPoint, Direction),
    width: ExactScalar,
    length: ExactScalar,
    state: u8,
    role: ColorTag,
) -> Result<GadgetInstance, GadgetError> {
    if width.signum() <= 0 || length.signum() <= 0 {
        return Err(GadgetError::NonpositiveDimension);
    }
    let half = width.half();
    let mut s = Sketch::default();
    let a = pt(0.into(), half.clone());
    let b = pt(0.into(), -&half);
    let a2 = pt(length.clone(), half.clone());
    let b2 = pt(length.clone(), -&half);
    s.segments.push((a.clone(), a2.clone(), CreaseAssignment::Unassigned, role));
    s.segments.push((b.clone(), b2.clone(), CreaseAssignment::Unassigned, role));
    s.arm("in", a, b, d(180), Polarity::Input, role);
    s.arm("out", a2, b2, d(0), Polarity::Output, role);
    let relation = LogicalRelation::new([vec![0, 0], vec![1, 1]]);
    let mut g = instantiate(GadgetKind::Pleat, &Pose::new(axis.0, axis.1), None, &s, relation)?;
    let pins = g.pins(&[state, state]);
    g.fragment = g.fragment.with_assignments(&pins);
    // Pleat lines are single creases end to end, so pinning both ends assigns them fully.
    Ok(g)
}

fn check_theta(theta: i64, min_exclusive: i64, built: i64) -> Result<Direction, GadgetError> {
    if theta <= min_exclusive || theta >= 180 {
        return Err(GadgetError::ThetaOutOfRange(theta));
    }
    if theta != built {
        return Err(GadgetError::UnsupportedTheta(theta));
    }
    Ok(d(theta))
}

/// Triangle twist NAE gadget. Ports `a`, `b` (inputs) and `out`; the states
/// satisfy `NAE(a, b, ¬out)`.
pub fn make_nae(pose: &Pose, theta: i64) -> Result<GadgetInstance, GadgetError> {
    let th = check_theta(theta, 30, 60)?;
    let t = NaeTwist::new(Isometry::identity());
    let c = &t.corners;
    let mut s = Sketch::default();
    s.polygon(c);
    s.arm("a", c[0].clone(), c[1].clone(), d(120), Polarity::Input, ColorTag::Tracked);
    s.arm("b", c[1].clone(), c[2].clone(), d(240), Polarity::Input, ColorTag::Tracked);
    s.arm("out", c[2].clone(), c[0].clone(), d(0), Polarity::Output, ColorTag::Tracked);
    let relation = LogicalRelation::from_predicate(3, |t| !(t[0] == t[1] && t[1] == 1 - t[2]));
    instantiate(GadgetKind::Nae, pose, Some(th), &s, relation)
}

/// Reflector: ports `in`, `wide` (same state, `√3` wide) and `neg`
/// (negated, same width).
pub fn make_reflector(pose: &Pose, theta: i64) -> Result<GadgetInstance, GadgetError> {
    let th = check_theta(theta, 90, 120)?;
    let j = JTwist::new(Isometry::identity());
    let mut s = Sketch::default();
    j.add_core(&mut s);
    j.n90(&mut s, "in", IN);
    j.wide(&mut s, "wide", OUT);
    j.n30(&mut s, "neg", OUT);
    let relation = LogicalRelation::new([vec![0, 0, 1], vec![1, 1, 0]]);
    instantiate(GadgetKind::Reflector, pose, Some(th), &s, relation)
}

/// Identity turn of -60° at unchanged width. Ports `in`, `out`, then the
/// extraneous `x1` (negated) and `x2` (copy).
pub fn make_rotator(pose: &Pose) -> Result<GadgetInstance, GadgetError> {
    let (j1, j2, mut s) = j_pair();
    j1.n90(&mut s, "in", IN);
    j2.n30(&mut s, "out", OUT);
    j1.n30(&mut s, "x1", EXTRA);
    j2.n90(&mut s, "x2", EXTRA);
    let relation = LogicalRelation::new([vec![0, 0, 1, 0], vec![1, 1, 0, 1]]);
    instantiate(GadgetKind::Rotator, pose, None, &s, relation)
}

/// Two copies of the input, straight on and turned -60°. Ports `in`,
/// `out_a`, `out_b`, extraneous `x`.
pub fn make_duplicator(pose: &Pose) -> Result<GadgetInstance, GadgetError> {
    let (j1, j2, mut s) = j_pair();
    j1.n90(&mut s, "in", IN);
    j2.n90(&mut s, "out_a", OUT);
    j2.n30(&mut s, "out_b", OUT);
    j1.n30(&mut s, "x", EXTRA);
    let relation = LogicalRelation::new([vec![0, 0, 0, 1], vec![1, 1, 1, 0]]);
    instantiate(GadgetKind::Duplicator, pose, None, &s, relation)
}

/// The duplicator run backwards: two equal inputs merge into one output.
/// Ports `in_a`, `in_b`, `out`, extraneous `x`.
pub fn make_combiner(pose: &Pose) -> Result<GadgetInstance, GadgetError> {
    let (j1, j2, mut s) = j_pair();
    j2.n90(&mut s, "in_a", IN);
    j2.n30(&mut s, "in_b", IN);
    j1.n90(&mut s, "out", OUT);
    j1.n30(&mut s, "x", EXTRA);
    let relation = LogicalRelation::new([vec![0, 0, 0, 0], vec![1, 1, 1, 1]]);
    instantiate(GadgetKind::Combiner, pose, None, &s, relation)
}

/// Negation built from a plain corner tile feeding a mirrored one: the
/// signal enters heading east and leaves heading east, `√3` wide both ways.
/// Ports `in`, `out`, then four extraneous arms.
pub fn make_not(pose: &Pose) -> Result<GadgetInstance, GadgetError> {
    let h1 = hub_sketch(Chirality::Plain, [IN, (Polarity::Output, ColorTag::Intermediate), EXTRA, EXTRA]);
    let h2 = hub_sketch(Chirality::Mirrored, [EXTRA, EXTRA, OUT, (Polarity::Input, ColorTag::Intermediate)]);
    // Lift the mirrored tile so its down arm continues the plain tile's up arm.
    let up = &h1.arms[1];
    let down = &h2.arms[3];
    let dx = up.origins.iter().map(|p| p.x.clone()).min().expect("two origins")
        - down.origins.iter().map(|p| p.x.clone()).min().expect("two origins");
    let dy = sc(0, 1, 3, 1);
    let h2 = h2.transform(&Isometry::translation(pt(dx, dy)));

    let mut s = Sketch::default();
    s.segments.extend(h1.segments.iter().cloned());
    s.segments.extend(h2.segments.iter().cloned());
    let ua = sort_by_x(&h1.arms[1].origins);
    let da = sort_by_x(&h2.arms[3].origins);
    for (a, b) in ua.into_iter().zip(da) {
        s.segments.push((a, b, CreaseAssignment::Unassigned, ColorTag::Tracked));
    }
    let mut named = |arm: &super::Arm, name: &str| {
        let mut a = arm.clone();
        a.name = name.into();
        s.arms.push(a);
    };
    named(&h1.arms[0], "in");
    named(&h2.arms[2], "out");
    named(&h1.arms[2], "x1");
    named(&h1.arms[3], "x2");
    named(&h2.arms[0], "x3");
    named(&h2.arms[1], "x4");
    let relation = LogicalRelation::new([vec![0, 1, 0, 0, 0, 1], vec![1, 0, 1, 1, 1, 0]]);
    instantiate(GadgetKind::Not, pose, None, &s, relation)
}

fn sort_by_x(p: &[ExactPoint; 2]) -> [ExactPoint; 2] {
    if p[0].x <= p[1].x {
        p.clone()
    } else {
        [p[1].clone(), p[0].clone()]
    }
}

/// Four-armed corner tile; default polarity has `L` in and the rest out.
pub fn make_hub(pose: &Pose, chirality: Chirality) -> Result<GadgetInstance, GadgetError> {
    let specs = [IN, OUT, OUT, OUT];
    let s = hub_sketch(chirality, specs);
    let pol = specs.map(|x| x.0);
    let relation = from_inward(&pol, |t| hub_inward(chirality, t));
    instantiate(GadgetKind::Hub, pose, None, &s, relation)
}

/// Axis-aligned NAE tile; `L` and `U` in, `R` and `D` out in the base variant.
pub fn make_nae_hub(pose: &Pose, variant: NaeHubVariant) -> Result<GadgetInstance, GadgetError> {
    let (nae, _, copy) = variant.roles();
    let mut specs = [OUT; 4];
    specs[nae[0]] = IN;
    specs[nae[1]] = IN;
    specs[copy] = OUT;
    let s = nae_hub_sketch(specs, &variant.isometry());
    let pol = specs.map(|x| x.0);
    let relation = from_inward(&pol, |t| nae_hub_inward(variant, t));
    instantiate(GadgetKind::NaeHub, pose, None, &s, relation)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    Right,
    Zigzag,
}

/// Two unit-width pleats crossing. `axes[i]` is a point on pleat `i`'s axis
/// and its direction of travel. For the zig-zag kind, pleat 0 is the one
/// that bends through the other and must be the tracked one.
pub fn make_crossing(
    kind: CrossingKind,
    axes: [(ExactPoint, Direction); 2],
    tracked_axis: usize,
) -> Result<GadgetInstance, GadgetError> {
    let angle = angle_between(axes[0].1, axes[1].1);
    let (a, b) = (axes[0].1, axes[1].1);
    // Where the two axes meet.
    let (p, q) = (&axes[0].0, &axes[1].0);
    let (u, v) = (a.unit(), b.unit());
    let den = u.cross(&v);
    if den.is_zero() {
        return Err(GadgetError::GeometryMismatch("pleats are parallel".into()));
    }
    let t = (q - p).cross(&v) / &den;
    let centre = p + &u.scale(&t);
    let turn = b.k() - a.k();
    match kind {
        CrossingKind::Right => {
            if angle != 90 {
                return Err(GadgetError::GeometryMismatch(format!("right-angle crossing needs 90 degrees, got {angle}")));
            }
            // Canonical: pleat 0 heading east, pleat 1 north or south.
            let s = right_crossing_sketch(turn.rem_euclid(12) == 3);
            let pose = Pose::new(centre, a);
            let relation = LogicalRelation::from_predicate(4, |t| t[0] == t[2] && t[1] == t[3]);
            instantiate(GadgetKind::CrossingRight, &pose, None, &s, relation)
        }
        CrossingKind::Zigzag => {
            if angle != 60 {
                return Err(GadgetError::GeometryMismatch(format!("zig-zag crossing needs 60 degrees, got {angle}")));
            }
            if tracked_axis != 0 {
                return Err(GadgetError::TrackedNotZigzag);
            }
            let s = zigzag_sketch(turn.rem_euclid(12) == 2);
            let pose = Pose::new(centre, a);
            // The zig-zag pleat keeps its state; the straight one is unconstrained.
            let relation = LogicalRelation::from_predicate(4, |t| t[0] == t[2]);
            instantiate(GadgetKind::CrossingZigzag, &pose, None, &s, relation)
        }
    }
}

fn right_crossing_sketch(second_north: bool) -> Sketch {
    let s = lane_crossing_sketch(&ExactScalar::one(), &ExactScalar::one());
    if second_north {
        s.transform(&Isometry::reflection(&ExactPoint::origin(), Direction::EAST))
    } else {
        s
    }
}

/// A horizontal pleat of `row_width` crossing a vertical one of
/// `col_width`, centred on the origin. Arms `a_in` (west), `b_in` (north),
/// `a_out` (east), `b_out` (south); travel is eastward and southward.
pub fn lane_crossing_sketch(row_width: &ExactScalar, col_width: &ExactScalar) -> Sketch {
    let h = row_width.half();
    let v = col_width.half();
    let z = ExactScalar::zero();
    let mut s = Sketch::default();
    let row = (pt(z.clone(), h.clone()), pt(z.clone(), -&h));
    let col = (pt(v.clone(), z.clone()), pt(-&v, z.clone()));
    s.arm("a_in", row.0.clone(), row.1.clone(), d(180), Polarity::Input, ColorTag::Tracked);
    s.arm("b_in", col.0.clone(), col.1.clone(), d(90), Polarity::Input, ColorTag::Tracked);
    s.arm("a_out", row.0, row.1, d(0), Polarity::Output, ColorTag::Tracked);
    s.arm("b_out", col.0, col.1, d(270), Polarity::Output, ColorTag::Tracked);
    s
}

/// Right-angle crossing of a horizontal and a vertical pleat of the given
/// widths. Ports in `a_in, b_in, a_out, b_out` order.
pub fn make_lane_crossing(row_width: &ExactScalar, col_width: &ExactScalar) -> Result<GadgetInstance, GadgetError> {
    if row_width.signum() <= 0 || col_width.signum() <= 0 {
        return Err(GadgetError::NonpositiveDimension);
    }
    let s = lane_crossing_sketch(row_width, col_width);
    let relation = LogicalRelation::from_predicate(4, |t| t[0] == t[2] && t[1] == t[3]);
    instantiate(GadgetKind::CrossingRight, &Pose::default(), None, &s, relation)
}

/// Pleat 0 heads east and jogs through pleat 1, which runs at ±60°.
fn zigzag_sketch(second_ccw: bool) -> Sketch {
    let b = if second_ccw { d(60) } else { d(300) };
    let a = d(0);
    let n = b.unit().perp();
    let half = sc(1, 2, 0, 1);
    let c_in = if n.dot(&a.unit()).signum() < 0 { half.clone() } else { -&half };
    let c_out = -&c_in;
    // Reflection of the travel direction across the normal of pleat 1.
    let ab = a.unit().dot(&b.unit());
    let dpr = &a.unit() - &b.unit().scale(&(&ab + &ab));
    let hit = |from: &ExactPoint, dir: &ExactPoint, c: &ExactScalar| -> ExactPoint {
        let t = (c - &n.dot(from)) / n.dot(dir);
        from + &dir.scale(&t)
    };
    let mut s = Sketch::default();
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    for sign in [1i64, -1] {
        let p = a.unit().perp().scale(&ExactScalar::ratio(sign, 2));
        let p1 = hit(&p, &a.unit(), &c_in);
        let p2 = hit(&p1, &dpr, &c_out);
        s.segments.push((p1.clone(), p2.clone(), CreaseAssignment::Unassigned, ColorTag::Tracked));
        ins.push(p1);
        outs.push(p2);
    }
    let nb = n.scale(&half);
    let mb = -&nb;
    s.arm("a_in", ins[0].clone(), ins[1].clone(), d(180), Polarity::Input, ColorTag::Tracked);
    s.arm("b_in", nb.clone(), mb.clone(), b.reverse(), Polarity::Input, ColorTag::Extraneous);
    s.arm("a_out", outs[0].clone(), outs[1].clone(), d(0), Polarity::Output, ColorTag::Tracked);
    s.arm("b_out", nb, mb, b, Polarity::Output, ColorTag::Extraneous);
    s
}

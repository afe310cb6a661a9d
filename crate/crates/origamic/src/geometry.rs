//! Exact planar geometry over ℚ[√3].
//!
//! Every coordinate the toolchain produces is of the form `a + b·√3` with
//! rational `a`, `b`. That ring is closed under rotation by multiples of 30°,
//! so gadget construction and folding never round.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a + b·√3` with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub a: BigRational,
    pub b: BigRational,
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        ExactScalar { a, b }
    }

    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar::int(1)
    }

    pub fn int(n: i64) -> Self {
        ExactScalar { a: BigRational::from_integer(BigInt::from(n)), b: BigRational::zero() }
    }

    /// `n/d` as a pure rational.
    pub fn ratio(n: i64, d: i64) -> Self {
        ExactScalar { a: BigRational::new(n.into(), d.into()), b: BigRational::zero() }
    }

    /// `(p/q) + (r/s)·√3`.
    pub fn from_parts(p: i64, q: i64, r: i64, s: i64) -> Self {
        ExactScalar { a: BigRational::new(p.into(), q.into()), b: BigRational::new(r.into(), s.into()) }
    }

    pub fn sqrt3() -> Self {
        ExactScalar { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign: compares `a²` against `3b²` when the parts disagree.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * BigRational::from_integer(3.into());
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(3.into());
        if norm.is_zero() {
            return None;
        }
        Some(ExactScalar { a: &self.a / &norm, b: -(&self.b / &norm) })
    }

    pub fn half(&self) -> Self {
        let two = BigRational::from_integer(2.into());
        ExactScalar { a: &self.a / &two, b: &self.b / &two }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'a ExactScalar) -> ExactScalar {
                let f: fn(&ExactScalar, &ExactScalar) -> ExactScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'a ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| ExactScalar { a: &x.a + &y.a, b: &x.b + &y.b });
forward_binop!(Sub, sub, |x, y| ExactScalar { a: &x.a - &y.a, b: &x.b - &y.b });
forward_binop!(Mul, mul, |x, y| {
    let three = BigRational::from_integer(3.into());
    ExactScalar { a: &x.a * &y.a + &x.b * &y.b * three, b: &x.a * &y.b + &x.b * &y.a }
});
forward_binop!(Div, div, |x, y| x * &y.recip().expect("division by zero ExactScalar"));

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -self.a, b: -self.b }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -&self.a, b: -&self.b }
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::int(n)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical text form `a|b`, each part a reduced `p/q` or integer.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not an exact scalar: {0:?}")]
pub struct ParseScalarError(pub String);

impl FromStr for ExactScalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let (a, b) = s.split_once('|').ok_or_else(err)?;
        let a = BigRational::from_str(a.trim()).map_err(|_| err())?;
        let b = BigRational::from_str(b.trim()).map_err(|_| err())?;
        Ok(ExactScalar { a, b })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ExactPoint {
    pub x: ExactScalar,
    pub y: ExactScalar,
}

impl ExactPoint {
    pub fn new(x: ExactScalar, y: ExactScalar) -> Self {
        ExactPoint { x, y }
    }

    pub fn origin() -> Self {
        ExactPoint::default()
    }

    pub fn int(x: i64, y: i64) -> Self {
        ExactPoint { x: x.into(), y: y.into() }
    }

    pub fn dot(&self, o: &ExactPoint) -> ExactScalar {
        &self.x * &o.x + &self.y * &o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(&self, o: &ExactPoint) -> ExactScalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn scale(&self, s: &ExactScalar) -> ExactPoint {
        ExactPoint { x: &self.x * s, y: &self.y * s }
    }

    pub fn midpoint(&self, o: &ExactPoint) -> ExactPoint {
        ExactPoint { x: (&self.x + &o.x).half(), y: (&self.y + &o.y).half() }
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(&self) -> ExactPoint {
        ExactPoint { x: -&self.y, y: self.x.clone() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl<'a> Add<&'a ExactPoint> for &'a ExactPoint {
    type Output = ExactPoint;
    fn add(self, o: &'a ExactPoint) -> ExactPoint {
        ExactPoint { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl<'a> Sub<&'a ExactPoint> for &'a ExactPoint {
    type Output = ExactPoint;
    fn sub(self, o: &'a ExactPoint) -> ExactPoint {
        ExactPoint { x: &self.x - &o.x, y: &self.y - &o.y }
    }
}

impl Add for ExactPoint {
    type Output = ExactPoint;
    fn add(self, o: ExactPoint) -> ExactPoint {
        &self + &o
    }
}

impl Sub for ExactPoint {
    type Output = ExactPoint;
    fn sub(self, o: ExactPoint) -> ExactPoint {
        &self - &o
    }
}

impl Neg for &ExactPoint {
    type Output = ExactPoint;
    fn neg(self) -> ExactPoint {
        ExactPoint { x: -&self.x, y: -&self.y }
    }
}

/// Heading `k·30°` measured counter-clockwise from +x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Direction(u8);

impl Direction {
    pub const EAST: Direction = Direction(0);
    pub const NORTH: Direction = Direction(3);
    pub const WEST: Direction = Direction(6);
    pub const SOUTH: Direction = Direction(9);

    pub fn new(k: i64) -> Self {
        Direction(k.rem_euclid(12) as u8)
    }

    /// From a heading in degrees; must be a multiple of 30.
    pub fn from_degrees(deg: i64) -> Option<Self> {
        (deg % 30 == 0).then(|| Direction::new(deg / 30))
    }

    pub fn k(self) -> i64 {
        self.0 as i64
    }

    pub fn degrees(self) -> i64 {
        self.0 as i64 * 30
    }

    pub fn perpendicular(self) -> Self {
        self.turn(3)
    }

    pub fn reverse(self) -> Self {
        self.turn(6)
    }

    pub fn turn(self, k: i64) -> Self {
        Direction::new(self.k() + k)
    }

    /// Undirected line class, `k mod 6`.
    pub fn line_class(self) -> u8 {
        self.0 % 6
    }

    /// Unit vector `(cos, sin)`; exact because every entry lies in ½·ℚ[√3].
    pub fn unit(self) -> ExactPoint {
        ExactPoint { x: cos30(self.k()), y: cos30(self.k() - 3) }
    }
}

fn cos30(k: i64) -> ExactScalar {
    match k.rem_euclid(12) {
        0 => ExactScalar::int(1),
        1 | 11 => ExactScalar::from_parts(0, 1, 1, 2),
        2 | 10 => ExactScalar::ratio(1, 2),
        3 | 9 => ExactScalar::zero(),
        4 | 8 => ExactScalar::ratio(-1, 2),
        5 | 7 => ExactScalar::from_parts(0, 1, -1, 2),
        _ => ExactScalar::int(-1),
    }
}

/// Rotation by `k·30°` about `about`.
pub fn rotate(p: &ExactPoint, about: &ExactPoint, k: i64) -> ExactPoint {
    let u = Direction::new(k).unit();
    let d = p - about;
    let r = ExactPoint { x: &u.x * &d.x - &u.y * &d.y, y: &u.y * &d.x + &u.x * &d.y };
    about + &r
}

/// Mirror image of `p` across the line through `line.0` with heading `line.1`.
pub fn reflect(p: &ExactPoint, line: (&ExactPoint, Direction)) -> ExactPoint {
    Isometry::reflection(line.0, line.1).apply(p)
}

/// Smallest angle between two headings, in degrees 0..=180.
pub fn angle_between(d1: Direction, d2: Direction) -> i64 {
    let diff = (d1.k() - d2.k()).abs();
    diff.min(12 - diff) * 30
}

/// Affine map `p ↦ M·p + t` with exact entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Isometry {
    pub m: [[ExactScalar; 2]; 2],
    pub t: ExactPoint,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            m: [[ExactScalar::one(), ExactScalar::zero()], [ExactScalar::zero(), ExactScalar::one()]],
            t: ExactPoint::origin(),
        }
    }

    pub fn translation(t: ExactPoint) -> Self {
        Isometry { t, ..Isometry::identity() }
    }

    pub fn rotation(about: &ExactPoint, k: i64) -> Self {
        let u = Direction::new(k).unit();
        let m = [[u.x.clone(), -&u.y], [u.y.clone(), u.x.clone()]];
        let lin = Isometry { m, t: ExactPoint::origin() };
        let t = about - &lin.apply(about);
        Isometry { t, ..lin }
    }

    /// Reflection across a line at heading `d`: matrix `[[C,S],[S,-C]]` with `(C,S)` the unit at `2d`.
    pub fn reflection(through: &ExactPoint, d: Direction) -> Self {
        let u = Direction::new(2 * d.k()).unit();
        let m = [[u.x.clone(), u.y.clone()], [u.y.clone(), -&u.x]];
        let lin = Isometry { m, t: ExactPoint::origin() };
        let t = through - &lin.apply(through);
        Isometry { t, ..lin }
    }

    /// Mirror across the vertical axis `x = 0`.
    pub fn mirror_x() -> Self {
        Isometry::reflection(&ExactPoint::origin(), Direction::NORTH)
    }

    pub fn apply_linear(&self, p: &ExactPoint) -> ExactPoint {
        ExactPoint {
            x: &self.m[0][0] * &p.x + &self.m[0][1] * &p.y,
            y: &self.m[1][0] * &p.x + &self.m[1][1] * &p.y,
        }
    }

    pub fn apply(&self, p: &ExactPoint) -> ExactPoint {
        &self.apply_linear(p) + &self.t
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let a = &self.m;
        let b = &other.m;
        let mut m: [[ExactScalar; 2]; 2] = Default::default();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
            }
        }
        Isometry { m, t: self.apply(&other.t) }
    }

    pub fn det(&self) -> ExactScalar {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn is_orientation_reversing(&self) -> bool {
        self.det().signum() < 0
    }

    /// Image of a heading under the linear part; `None` if the map is not a
    /// 30°-grid isometry.
    pub fn map_direction(&self, d: Direction) -> Option<Direction> {
        let v = self.apply_linear(&d.unit());
        (0..12).map(Direction::new).find(|c| c.unit() == v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_handles_mixed_parts() {
        assert_eq!(ExactScalar::from_parts(2, 1, -1, 1).signum(), 1);
        assert_eq!(ExactScalar::from_parts(1, 1, -1, 1).signum(), -1);
        assert_eq!(ExactScalar::from_parts(-3, 1, 1, 1).signum(), -1);
        assert_eq!(ExactScalar::zero().signum(), 0);
    }

    #[test]
    fn recip_round_trips() {
        let x = ExactScalar::from_parts(3, 7, -2, 5);
        assert_eq!(&x * &x.recip().unwrap(), ExactScalar::one());
        assert!(ExactScalar::zero().recip().is_none());
    }

    #[test]
    fn display_parses_back() {
        let x = ExactScalar::from_parts(-3, 7, 5, 2);
        assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
        assert!("1/2".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn map_direction_follows_reflection() {
        let r = Isometry::reflection(&ExactPoint::origin(), Direction::new(1));
        assert_eq!(r.map_direction(Direction::EAST), Some(Direction::new(2)));
        assert!(r.is_orientation_reversing());
    }
}

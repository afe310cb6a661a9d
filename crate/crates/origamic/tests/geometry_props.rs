use origamic::geometry::{rotate, ExactPoint, ExactScalar, Isometry};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (-50i64..50, 1i64..12, -50i64..50, 1i64..12).prop_map(|(p, q, r, s)| ExactScalar::from_parts(p, q, r, s))
}

fn point() -> impl Strategy<Value = ExactPoint> {
    (scalar(), scalar()).prop_map(|(x, y)| ExactPoint::new(x, y))
}

proptest! {
    #[test]
    fn field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(r) = a.recip() {
            prop_assert_eq!(&a * &r, ExactScalar::one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn order_matches_floats(a in scalar(), b in scalar()) {
        let (x, y) = (a.to_f64(), b.to_f64());
        if (x - y).abs() > 1e-9 {
            prop_assert_eq!(a < b, x < y);
        }
        prop_assert_eq!((&a - &b).signum() == 0, a == b);
    }

    #[test]
    fn text_round_trip(a in scalar()) {
        let back: ExactScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn twelve_turns_is_identity(p in point(), c in point(), k in 0i64..12) {
        let mut q = p.clone();
        for _ in 0..12 {
            q = rotate(&q, &c, k);
        }
        prop_assert_eq!(q, p);
    }

    #[test]
    fn rotations_preserve_distance(p in point(), q in point(), c in point(), k in 0i64..12) {
        let m = Isometry::rotation(&c, k);
        let d = |a: &ExactPoint, b: &ExactPoint| {
            let v = ExactPoint::new(&a.x - &b.x, &a.y - &b.y);
            v.dot(&v)
        };
        prop_assert_eq!(d(&m.apply(&p), &m.apply(&q)), d(&p, &q));
        let back = Isometry::rotation(&c, 12 - k).compose(&m);
        prop_assert_eq!(back.apply(&p), p);
    }
}

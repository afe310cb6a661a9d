use origamic::crease_pattern::{ColorTag, CreaseAssignment as A, CreasePattern, PatternBuilder, Rect};
use origamic::flat_fold_oracle::*;
use origamic::gadgets::{make_crossing, CrossingKind};
use origamic::geometry::{Direction, ExactPoint};

fn strip(creases: &[(i64, A)]) -> CreasePattern {
    let mut b = PatternBuilder::new(Rect::new(ExactPoint::int(0, 0), ExactPoint::int(6, 2)));
    for &(x, a) in creases {
        b.add_line(ExactPoint::int(x, 0), Direction::NORTH, a, ColorTag::Tracked);
    }
    b.build().unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn three_face_pleat_has_one_stack_per_state() {
    for (a, b) in [(A::Mountain, A::Valley), (A::Valley, A::Mountain)] {
        let p = strip(&[(2, a), (4, b)]);
        assert_eq!(p.faces().len(), 3);
        let g = analyze(&p, &OracleConfig::default()).unwrap();
        let mv: Vec<A> = p.creases().iter().map(|c| c.assignment).collect();
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let ok = perms.iter().filter(|s| check_layer_order(&g, &LayerOrder::from_stack(s), &mv)).count();
        assert_eq!(ok, 1);
    }
}

#[test]
fn witness_passes_check() {
    let p = strip(&[(2, A::Mountain), (4, A::Valley)]);
    let g = analyze(&p, &OracleConfig::default()).unwrap();
    let d = is_flat_foldable(&p, &[]).unwrap();
    let w = d.witness().unwrap();
    assert!(check_layer_order(&g, &w.layer_order, &w.assignments));
}

#[test]
fn same_assignment_pleat_still_folds_as_a_roll() {
    let p = strip(&[(2, A::Mountain), (4, A::Mountain)]);
    assert!(is_flat_foldable(&p, &[]).unwrap().is_foldable());
}

#[test]
fn right_angle_crossing_folds_for_every_input_pair() {
    let o = ExactPoint::origin();
    let g = make_crossing(CrossingKind::Right, [(o.clone(), Direction::EAST), (o, Direction::NORTH)], 0).unwrap();
    assert_eq!(g.fragment.faces().len(), 9);
    let geom = analyze(&g.fragment, &OracleConfig::default()).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            let d = geom.decide(&g.fragment, &g.pins(&[a, b, a, b]));
            let w = d.witness().expect("crossing folds");
            assert!(check_layer_order(&geom, &w.layer_order, &w.assignments));
        }
    }
}

#[test]
fn kawasaki_violation_is_reported() {
    // A single crease at 30 degrees through an interior vertex with nothing to balance it.
    let mut b = PatternBuilder::new(Rect::new(ExactPoint::int(-2, -2), ExactPoint::int(2, 2)));
    b.add_line(ExactPoint::origin(), Direction::EAST, A::Mountain, ColorTag::Tracked);
    b.add_segment(ExactPoint::origin(), ExactPoint::int(0, 2), A::Valley, ColorTag::Tracked);
    let p = b.build().unwrap();
    assert!(matches!(folded_geometry(&p), Err(OracleError::KawasakiViolation(_))));
}

#[test]
fn decisions_are_deterministic() {
    let p = strip(&[(2, A::Unassigned), (4, A::Unassigned)]);
    let a = is_flat_foldable(&p, &[]).unwrap();
    let b = is_flat_foldable(&p, &[]).unwrap();
    assert_eq!(a, b);
}

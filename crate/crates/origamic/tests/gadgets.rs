use origamic::flat_fold_oracle::OracleConfig;
use origamic::gadgets::*;
use origamic::geometry::{Direction, ExactPoint, ExactScalar};

fn cfg() -> OracleConfig {
    OracleConfig { face_limit: 64 }
}

fn check(g: &GadgetInstance) {
    let got = oracle_relation(g, &cfg()).unwrap();
    let names: Vec<&str> = g.ports.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(got, g.relation, "{} {:?} faces={}", g.kind.name(), names, g.fragment.faces().len());
}

fn origin() -> Pose {
    Pose::default()
}

#[test]
fn nae_matches_oracle() {
    let g = make_nae(&origin(), 60).unwrap();
    check(&g);
    // NAE(a, b, ¬out) leaves 6 of 8 tuples.
    assert_eq!(g.relation.len(), 6);
}

#[test]
fn nae_theta_bounds() {
    assert_eq!(make_nae(&origin(), 30).unwrap_err(), GadgetError::ThetaOutOfRange(30));
    assert_eq!(make_nae(&origin(), 90).unwrap_err(), GadgetError::UnsupportedTheta(90));
}

#[test]
fn reflector_matches_oracle() {
    let g = make_reflector(&origin(), 120).unwrap();
    check(&g);
    let wide = g.port("wide").unwrap();
    let narrow = g.port("in").unwrap();
    assert!(wide.width > narrow.width);
    assert_eq!(g.port("neg").unwrap().width, narrow.width);
    assert_eq!(make_reflector(&origin(), 90).unwrap_err(), GadgetError::ThetaOutOfRange(90));
}

#[test]
fn rotator_duplicator_combiner_match_oracle() {
    check(&make_rotator(&origin()).unwrap());
    check(&make_duplicator(&origin()).unwrap());
    let c = make_combiner(&origin()).unwrap();
    check(&c);
    assert!(!c.relation.project(&[0, 1]).contains(&[0, 1]));
}

#[test]
fn hubs_match_oracle() {
    for ch in [Chirality::Plain, Chirality::Mirrored] {
        check(&make_hub(&origin(), ch).unwrap());
    }
}

#[test]
fn nae_hubs_match_oracle() {
    for v in NaeHubVariant::ALL {
        check(&make_nae_hub(&origin(), v).unwrap());
    }
}

#[test]
fn not_matches_oracle() {
    let g = make_not(&origin()).unwrap();
    check(&g);
    assert_eq!(g.relation.project(&[0, 1]).allowed.into_iter().collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0]]);
}

#[test]
fn crossings_match_oracle() {
    let o = ExactPoint::origin();
    let r = make_crossing(CrossingKind::Right, [(o.clone(), Direction::EAST), (o.clone(), Direction::NORTH)], 0).unwrap();
    check(&r);
    let z = make_crossing(CrossingKind::Zigzag, [(o.clone(), Direction::EAST), (o.clone(), Direction::new(2))], 0).unwrap();
    check(&z);
}

#[test]
fn crossing_errors() {
    let o = ExactPoint::origin();
    let e = make_crossing(CrossingKind::Right, [(o.clone(), Direction::EAST), (o.clone(), Direction::new(2))], 0);
    assert!(matches!(e, Err(GadgetError::GeometryMismatch(_))));
    let e = make_crossing(CrossingKind::Zigzag, [(o.clone(), Direction::EAST), (o.clone(), Direction::new(2))], 1);
    assert_eq!(e.unwrap_err(), GadgetError::TrackedNotZigzag);
}

#[test]
fn posed_gadget_keeps_relation() {
    let pose = Pose::new(ExactPoint::new(ExactScalar::int(3), ExactScalar::sqrt3()), Direction::new(4));
    check(&make_nae(&pose, 60).unwrap());
}

#[test]
fn pleat_is_assigned_for_state() {
    for s in [0, 1] {
        let g = make_pleat((ExactPoint::origin(), Direction::new(1)), ExactScalar::one(), ExactScalar::int(4), s, Default::default())
            .unwrap();
        check(&g);
        assert!(g.fragment.creases().iter().all(|c| c.assignment != origamic::crease_pattern::CreaseAssignment::Unassigned));
    }
}

#[test]
fn lane_crossing_matches_oracle() {
    let g = make_lane_crossing(&ExactScalar::sqrt3(), &ExactScalar::one()).unwrap();
    assert_eq!(g.fragment.faces().len(), 9);
    check(&g);
    let o = ExactPoint::origin();
    check(&make_crossing(CrossingKind::Right, [(o.clone(), Direction::EAST), (o, Direction::SOUTH)], 0).unwrap());
}

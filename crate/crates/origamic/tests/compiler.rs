use std::collections::BTreeMap;

use origamic::compiler::audit::{audit_lanes, LaneGeom, Violation};
use origamic::compiler::*;
use origamic::crease_pattern::{export_fold, kawasaki_residual, maekawa_delta, ColorTag, CreaseAssignment};
use origamic::geometry::{ExactPoint, ExactScalar};
use origamic::logic_layer::simulate;

fn load(name: &str) -> CircuitNetlist {
    let path = format!("{}/tests/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
    parse_netlist(&std::fs::read(path).unwrap()).unwrap()
}

/// Every input vector once, as per-input waveforms.
fn exhaustive(names: &[String]) -> (BTreeMap<String, Vec<u8>>, usize) {
    let n = names.len();
    let cycles = 1 << n;
    let w = names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.clone(), (0..cycles).map(|t| ((t >> i) & 1) as u8).collect()))
        .collect();
    (w, cycles)
}

fn check_against_reference(name: &str) {
    let nl = load(name);
    let circuit = nl.to_circuit().unwrap();
    let design = lay_out(&circuit, &CompileConfig::default()).unwrap();
    let ex = extract(&design).unwrap();
    let names: Vec<String> = circuit.inputs.iter().map(|(n, _)| n.clone()).collect();
    let (w, cycles) = exhaustive(&names);
    let want = simulate(&circuit, &w, cycles).unwrap();
    let (got, _) = ex.simulate(&design, &w, cycles).unwrap();
    assert_eq!(got, want, "{name}");
}

#[test]
fn combinational_designs_match_reference() {
    for name in ["not", "nand", "and", "or", "xor", "half_adder"] {
        check_against_reference(name);
    }
}

#[test]
fn nand_audit() {
    let c = compile(&load("nand"), &CompileConfig::default()).unwrap();
    assert_eq!(c.audit.useful, 4);
    assert_eq!(c.audit.extraneous, 24);
    assert!(c.audit.violations.is_empty(), "{:?}", c.audit.violations);
    let e = efficiency_report(&c.audit);
    assert_eq!(e.useful_fraction, Some(4.0 / 28.0));
}

#[test]
fn lowered_nand_is_locally_flat() {
    for a in 0..2u8 {
        for b in 0..2u8 {
            let config = CompileConfig { inputs: BTreeMap::from([("A".into(), a), ("B".into(), b)]), ..Default::default() };
            let c = compile(&load("nand"), &config).unwrap();
            let p = &c.pattern;
            for v in p.interior_vertices() {
                assert!(kawasaki_residual(p, v).unwrap().is_zero());
                assert_eq!(maekawa_delta(p, v).unwrap().abs(), 2);
            }
            assert!(p.creases().iter().all(|cr| cr.assignment != CreaseAssignment::Unassigned));
            // The output column's south end shows NAND(a, b) at the border.
            let y = c.extracted.outputs[0].1;
            assert_eq!(c.lane_states[y], 1 - (a & b));
        }
    }
}

#[test]
fn empty_netlist_is_border_only() {
    let c = compile(&load("empty"), &CompileConfig::default()).unwrap();
    assert!(c.pattern.creases().iter().all(|cr| cr.assignment == CreaseAssignment::Border));
    assert_eq!(c.audit.useful, 0);
    assert_eq!(efficiency_report(&c.audit).useful_fraction, None);
}

#[test]
fn not_is_one_mirrored_hub() {
    let c = compile(&load("not"), &CompileConfig::default()).unwrap();
    assert_eq!(c.audit.tiles, BTreeMap::from([("hub-mirrored".to_string(), 1)]));
    assert_eq!(c.audit.useful, 2);
    for (_, cr) in c.pattern.creases().iter().enumerate().filter(|(_, cr)| cr.tag == ColorTag::Intermediate) {
        assert!(cr.assignment.is_fold());
    }
}

#[test]
fn sequential_designs_match_reference() {
    use rand::{Rng, SeedableRng};
    for name in ["dff", "register2"] {
        let nl = load(name);
        let circuit = nl.to_circuit().unwrap();
        let design = lay_out(&circuit, &CompileConfig::default()).unwrap();
        let ex = extract(&design).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let w: BTreeMap<String, Vec<u8>> =
            circuit.inputs.iter().map(|(n, _)| (n.clone(), (0..100).map(|_| rng.gen_range(0..2)).collect())).collect();
        let want = simulate(&circuit, &w, 100).unwrap();
        let (got, _) = ex.simulate(&design, &w, 100).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn sixty_degree_lanes_are_flagged() {
    let lane = |p: ExactPoint, q: ExactPoint| LaneGeom { p, q, width: ExactScalar::one(), role: ColorTag::Tracked };
    let s3 = ExactScalar::sqrt3();
    let lanes = vec![
        lane(ExactPoint::int(-4, 0), ExactPoint::int(4, 0)),
        lane(ExactPoint::new(ExactScalar::int(-2), -&(&s3 * &ExactScalar::int(2))), ExactPoint::new(ExactScalar::int(2), &s3 * &ExactScalar::int(2))),
    ];
    let (v, crossings) = audit_lanes(&lanes);
    assert_eq!(crossings, 1);
    assert_eq!(v, vec![Violation::Angle { a: 0, b: 1, degrees: 60 }]);
    let square = vec![lanes[0].clone(), lane(ExactPoint::int(0, -4), ExactPoint::int(0, 4))];
    assert!(audit_lanes(&square).0.is_empty());
}

#[test]
fn compile_is_deterministic() {
    let nl = load("xor");
    let a = compile(&nl, &CompileConfig::default()).unwrap();
    let b = compile(&nl, &CompileConfig::default()).unwrap();
    assert_eq!(export_fold(&a.pattern), export_fold(&b.pattern));
    assert_eq!(report(&a), report(&b));
}

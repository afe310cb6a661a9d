use criterion::{criterion_group, criterion_main, Criterion};
use origamic::compiler::{self, CompileConfig};
use origamic::exec;
use origamic::flat_fold_oracle::OracleConfig;
use origamic::gadgets::{make_not, oracle_relation, Pose};

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn oracle(c: &mut Criterion) {
    // Six ports, so all 64 pinnings are decided in one batch.
    let g = make_not(&Pose::default()).unwrap();
    let cfg = OracleConfig { face_limit: 64 };
    let mut group = c.benchmark_group("not_gadget_relation");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| exec::with_threads(1, || oracle_relation(&g, &cfg).unwrap())));
    group.bench_function("parallel", |b| b.iter(|| exec::with_threads(threads(), || oracle_relation(&g, &cfg).unwrap())));
    group.finish();
}

fn lowering(c: &mut Criterion) {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/xor.json");
    let nl = compiler::parse_netlist(&std::fs::read(path).unwrap()).unwrap();
    let cc = CompileConfig::default();
    // Warm the shared tile cache outside the timed region.
    compiler::compile(&nl, &cc).unwrap();
    let mut group = c.benchmark_group("compile_xor");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| exec::with_threads(1, || compiler::compile(&nl, &cc).unwrap())));
    group.bench_function("parallel", |b| b.iter(|| exec::with_threads(threads(), || compiler::compile(&nl, &cc).unwrap())));
    group.finish();
}

criterion_group!(benches, oracle, lowering);
criterion_main!(benches);

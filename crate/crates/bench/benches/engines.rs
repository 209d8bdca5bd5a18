use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, Criterion};

use deacp_core::bisim::Bisim;
use deacp_core::gen::Gen;
use deacp_core::oracle::{check_truth, TruthOptions};
use deacp_core::rg::{load_judgment, load_proof, Checker};
use deacp_core::semantics::hnf;
use deacp_core::{parse_proc, DataSpec, ParseCtx};

fn read(rel: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel);
    std::fs::read_to_string(p).unwrap()
}

fn spec(name: &str) -> DataSpec {
    DataSpec::from_toml(&read(&format!("specs/{name}.toml"))).unwrap()
}

fn checker(c: &mut Criterion) {
    for (proof, s) in [("sec6", "default"), ("sec8", "nat3"), ("sec7", "nat3")] {
        let spec = spec(s);
        let (mode, d) = load_proof(&spec, &read(&format!("proofs/{proof}.ron"))).unwrap();
        let mode = mode.unwrap();
        c.bench_function(&format!("check/{proof}"), |b| {
            b.iter(|| black_box(Checker::new(&spec, mode).check(&d).accepted()))
        });
    }
}

fn truth(c: &mut Criterion) {
    for (j, s) in [("sec6_rely", "default"), ("sec8", "nat3")] {
        let spec = spec(s);
        let (mode, judgment) = load_judgment(&spec, &read(&format!("judgments/{j}.ron"))).unwrap();
        let opts = TruthOptions::new(mode.unwrap(), 12);
        c.bench_function(&format!("truth/{j}"), |b| {
            b.iter(|| black_box(check_truth(&spec, &judgment, &opts).unwrap().is_holds()))
        });
    }
}

fn bisim(c: &mut Criterion) {
    let spec = DataSpec::default_spec();
    let cx = ParseCtx::from_spec(&spec);
    let l = parse_proc("(a || b) . (i := i + 1)", &cx).unwrap();
    let r = parse_proc("(a . b + b . a) . (i := i + 1)", &cx).unwrap();
    c.bench_function("bisim/interleaving", |b| {
        b.iter(|| black_box(Bisim::new(&spec).check(&l, &r).unwrap()))
    });
}

fn normal_forms(c: &mut Criterion) {
    let spec = DataSpec::default_spec();
    let mut g = Gen::new(&spec, 11);
    let terms: Vec<_> = (0..100).map(|_| g.proc(5)).collect();
    c.bench_function("hnf/random100", |b| {
        b.iter(|| {
            for t in &terms {
                let _ = black_box(hnf(&spec, t));
            }
        })
    });
}

criterion_group!(benches, checker, truth, bisim, normal_forms);
criterion_main!(benches);

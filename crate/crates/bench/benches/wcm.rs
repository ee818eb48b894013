use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wcm_core::fixtures;
use wcm_core::linalg::{find_full_support_vector, DEFAULT_SUPPORT_CAP};
use wcm_core::removal::{oracle_scan, remove_object, DEFAULT_ORACLE_CAP};
use wcm_core::{build_tree, extract_wcms, Mode, RemovalOptions};

fn trees(c: &mut Criterion) {
    let k44 = fixtures::load("topology_8_0_16_0");
    c.bench_function("tree+extract K(4,4)", |b| {
        b.iter(|| {
            let t = build_tree(black_box(&k44), Mode::Gast).unwrap();
            extract_wcms(&k44, &t)
        })
    });
}

fn support(c: &mut Criterion) {
    let cfg = fixtures::load("gast_6_0_0_9_0");
    let basis = cfg.matrix().null_space();
    c.bench_function("full-support search", |b| {
        b.iter(|| find_full_support_vector(black_box(&basis), DEFAULT_SUPPORT_CAP).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let cfg = fixtures::load("gast_6_0_0_9_0");
    c.bench_function("oracle scan (6,0,0,9,0)", |b| {
        b.iter(|| oracle_scan(black_box(&cfg), Mode::Gast, DEFAULT_ORACLE_CAP).unwrap())
    });
}

fn removal(c: &mut Criterion) {
    let cfg = fixtures::load("gast_6_0_0_9_0");
    let w = extract_wcms(&cfg, &build_tree(&cfg, Mode::Gast).unwrap());
    let opts = RemovalOptions::default();
    c.bench_function("remove (6,0,0,9,0)", |b| {
        b.iter(|| remove_object(black_box(&cfg), &w, &opts, &mut ()).unwrap())
    });
}

criterion_group!(benches, trees, support, oracle, removal);
criterion_main!(benches);

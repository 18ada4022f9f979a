use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use zerosum_bench::{c2c4, c3c6, mixed_sequence};
use zerosum_core::search::{davenport_bruteforce, extremal_sequences};
use zerosum_core::spectrum::SubsumTable;
use zerosum_core::{Limits, SearchConfig};

fn subsum_table(c: &mut Criterion) {
    let limits = Limits::default();
    let s = mixed_sequence();
    c.bench_function("subsum_table/c3c6_len13", |b| {
        b.iter(|| SubsumTable::build(black_box(&s), &limits).unwrap())
    });
}

fn canonicalize(c: &mut Criterion) {
    let limits = Limits::default();
    let s = mixed_sequence();
    let auts = c3c6().automorphisms(&limits).unwrap();
    c.bench_function("canonicalize/c3c6_len13", |b| {
        b.iter(|| black_box(&s).canonicalize(&auts))
    });
}

fn davenport(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    let g = c3c6();
    c.bench_function("davenport/c3c6", |b| {
        b.iter(|| davenport_bruteforce(black_box(&g), &cfg).unwrap())
    });
}

fn extremal_enumeration(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    let g = c2c4();
    c.bench_function("extremal_sequences/c2c4", |b| {
        b.iter(|| extremal_sequences(black_box(&g), &cfg).unwrap())
    });
}

criterion_group!(
    benches,
    subsum_table,
    canonicalize,
    davenport,
    extremal_enumeration
);
criterion_main!(benches);

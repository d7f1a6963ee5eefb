use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dehn_bench::mixed_null_word;
use dehn_core::{
    fill_commutator, fill_null_word, fill_null_word_mod, shift_basis, shift_basis_mod, tau_fill,
    IntPoly, Side,
};
use num_bigint::BigInt;

fn poly(c: &[i64]) -> IntPoly {
    IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
}

fn commutators(c: &mut Criterion) {
    let mut g = c.benchmark_group("fill_commutator");
    for n in [4u32, 16, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| fill_commutator(n).unwrap())
        });
    }
    g.finish();
}

fn shifts(c: &mut Criterion) {
    let f = poly(&[1, -2, 3, 1]);
    c.bench_function("shift_basis/deg3", |b| b.iter(|| shift_basis(&f).unwrap()));
    let f = poly(&[1, 2, 0, 1, 2, 1]);
    c.bench_function("shift_basis_mod/m3_deg5", |b| {
        b.iter(|| shift_basis_mod(&f, 3, Side::Right).unwrap())
    });
    let (f, g) = (poly(&[2, 1, 1, 2]), poly(&[1, 0, 2]));
    c.bench_function("tau_fill/m3", |b| b.iter(|| tau_fill(&f, &g, 3).unwrap()));
}

fn null_words(c: &mut Criterion) {
    let mut g = c.benchmark_group("fill_null_word");
    for n in [1i64, 2, 3] {
        let w = mixed_null_word(n);
        g.bench_with_input(BenchmarkId::new("gamma", n), &w, |b, w| {
            b.iter(|| fill_null_word(w).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gamma_m3", n), &w, |b, w| {
            b.iter(|| fill_null_word_mod(w, 3).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, commutators, shifts, null_words);
criterion_main!(benches);

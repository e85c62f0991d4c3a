use coxwall::automorphisms::compute_h;
use coxwall::classification::is_hyperbolic;
use coxwall::coxeter::{enumerate_ball, enumerate_skeleton, presets};
use coxwall::walls::check_axiom_m;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn balls(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball");
    for (name, sys, r) in [("affine-A2", presets::affine_a2(), 8), ("H3-bar", presets::h3_bar(), 5), ("W6-K33", presets::bourdon_k33(), 4)] {
        g.bench_function(format!("{name}/r{r}"), |b| b.iter(|| enumerate_ball(black_box(&sys), r).unwrap().len()));
    }
    g.finish();
}

fn skeletons(c: &mut Criterion) {
    let sys = presets::h3_bar();
    c.bench_function("skeleton/H3-bar/r7", |b| b.iter(|| enumerate_skeleton(black_box(&sys), 7, 1 << 24).unwrap().len()));
}

fn axiom_m(c: &mut Criterion) {
    let ball = enumerate_ball(&presets::bourdon_k33(), 3).unwrap();
    c.bench_function("axiom-m/W6-K33/r3", |b| b.iter(|| check_axiom_m(black_box(&ball)).passed()));
}

fn h_sets(c: &mut Criterion) {
    let sys = presets::bourdon_k33();
    c.bench_function("H/W6-K33/r5", |b| b.iter(|| compute_h(black_box(&sys), 0, 5).unwrap().len()));
}

fn moussong(c: &mut Criterion) {
    let sys = presets::bourdon_k33();
    c.bench_function("hyperbolic/W6-K33", |b| b.iter(|| is_hyperbolic(black_box(&sys)).hyperbolic));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = balls, skeletons, axiom_m, h_sets, moussong
}
criterion_main!(benches);

//! Benchmarks for the hot paths: steady-state solve, sector eigensolve,
//! dressed evolution and the direct ladder sum.

use std::f64::consts::TAU;

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use becprobe::{
    classify_sector, dressing_transform, evolve_expectations, exact_spectrum, initial_state,
    steady_state_oracle, DriveParams, EvolutionOrder, MediumParams, PhysicalConstants,
    SectorHamiltonian,
};

const OMEGA: f64 = TAU * 5.1e14;
const DELTA: f64 = 2.4e-8 * OMEGA;
const K1: f64 = 3.04e-7 * OMEGA;
const K2: f64 = -3.01e-9 * OMEGA;

fn bench_steady_state(c: &mut Criterion) {
    let medium = MediumParams::sodium();
    let drive = DriveParams::sodium_default().with_delta(TAU * 1e6);
    let constants = PhysicalConstants::default();
    let g2 = num_complex::Complex64::new(1e-3 * medium.gamma_opt(), 0.0);
    c.bench_function("steady_state_9x9", |b| {
        b.iter(|| steady_state_oracle(black_box(&medium), black_box(&drive), g2, &constants))
    });
}

fn bench_sector_eigensolve(c: &mut Criterion) {
    let h = SectorHamiltonian::new(60, 500.0, OMEGA - DELTA, DELTA, K1, K2, 1000.0).unwrap();
    c.bench_function("sector_eigh_dim61", |b| {
        b.iter(|| exact_spectrum(black_box(&h)))
    });
}

fn bench_dressing(c: &mut Criterion) {
    let sector = classify_sector(40, 500.0, K1, K2).unwrap();
    c.bench_function("dressing_transform_order2_dim41", |b| {
        b.iter(|| dressing_transform(black_box(&sector), DELTA, 2))
    });
}

fn bench_evolution(c: &mut Criterion) {
    let state = initial_state(25.0, 1000.0, 60).unwrap();
    let times: Vec<f64> = (0..256).map(|i| 1e-9 * i as f64 / 255.0).collect();
    c.bench_function("evolve_order2_256_samples", |b| {
        b.iter(|| {
            evolve_expectations(
                black_box(&state),
                K1,
                K2,
                DELTA,
                &times,
                EvolutionOrder::Perturbative(2),
            )
        })
    });
    c.bench_function("direct_poisson_sum_4096", |b| {
        let ts: Vec<f64> = (0..4096).map(|i| 20e-9 * i as f64 / 4095.0).collect();
        b.iter(|| becprobe::direct_poisson_sum(25.0, 500.0, K1, K2, DELTA, black_box(&ts)))
    });
}

criterion_group!(
    benches,
    bench_steady_state,
    bench_sector_eigensolve,
    bench_dressing,
    bench_evolution
);
criterion_main!(benches);

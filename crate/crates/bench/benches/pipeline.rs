use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use specbound_bench::sphere_fixture;
use specbound_core::eigen::solve_smallest;
use specbound_core::inequality::{check_main_theorem, conjecture_probe, WeightedCurvatureTerms};
use specbound_core::mesh::{assemble_operators, extrinsic_summary_with, icosphere};
use specbound_core::model::{sphere_dirac_spectrum, torus_dirac_spectrum, Lattice, SpinStructure};

fn assembly(c: &mut Criterion) {
    let mesh = icosphere(4).unwrap();
    c.bench_function("assemble_icosphere4", |b| b.iter(|| assemble_operators(black_box(&mesh))));
    let ops = assemble_operators(&mesh);
    c.bench_function("extrinsic_icosphere4", |b| b.iter(|| extrinsic_summary_with(black_box(&mesh), &ops)));
}

fn solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    for level in [3, 4] {
        let (_, ops) = sphere_fixture(level);
        g.bench_function(format!("icosphere{level}_k13"), |b| {
            b.iter(|| solve_smallest(black_box(&ops), 13, 1e-10, 0).unwrap())
        });
    }
    g.finish();
}

fn checks(c: &mut Criterion) {
    let spec = sphere_dirac_spectrum(3, 1.0, 200).unwrap();
    let terms = WeightedCurvatureTerms::constant(3, 1.0, 1.5);
    c.bench_function("main_theorem_j1_50", |b| {
        b.iter(|| {
            for j in 1..=50 {
                black_box(check_main_theorem(&spec, j, 3, &terms).unwrap());
            }
        })
    });
    let lat = Lattice::rectangular(&[1.0, 1.7]).unwrap();
    c.bench_function("torus_spectrum_200", |b| {
        b.iter(|| torus_dirac_spectrum(black_box(&lat), &SpinStructure::trivial(2), 200).unwrap())
    });
    c.bench_function("conjecture_probe", |b| b.iter(|| conjecture_probe(black_box(&lat), 1.7).unwrap()));
}

criterion_group!(benches, assembly, solve, checks);
criterion_main!(benches);

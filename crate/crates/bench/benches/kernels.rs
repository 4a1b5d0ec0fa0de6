use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use slocc_bench::{pair, random_tuple};
use slocc_core::sdp::{build_ppt_relaxation, solve};
use slocc_core::witness::{build_witness, embed};
use slocc_core::{
    apply_local, maximize_slocc_overlap, partial_transpose, per_party_update, DensityMatrix,
    LocalOperatorTuple, OptimizerConfig, StateId,
};

fn overlap(c: &mut Criterion) {
    let (phi, psi) = pair("psi6", "psi17");
    let ops = random_tuple(&[2, 3, 3], 7);
    c.bench_function("als_sweep_233", |b| {
        b.iter(|| {
            let mut t = ops.clone().into_ops();
            for p in 0..3 {
                let tuple = LocalOperatorTuple::new(t.clone()).unwrap();
                t[p] = per_party_update(&phi, &psi, &tuple, p, 1e-12).unwrap();
            }
            black_box(t)
        })
    });
    let cfg = OptimizerConfig::default().with_restarts(8);
    c.bench_function("maximize_psi6_psi7_8_restarts", |b| {
        let (phi, psi) = pair("psi6", "psi7");
        b.iter(|| black_box(maximize_slocc_overlap(&phi, &psi, &cfg).unwrap().lambda))
    });
}

fn linear_algebra(c: &mut Criterion) {
    let (_, psi) = pair("psi6", "psi16");
    let eta = apply_local(&random_tuple(&[2, 3, 3], 3), &psi).unwrap().normalize().unwrap();
    let rho = DensityMatrix::from_pure(&eta).unwrap();
    c.bench_function("partial_transpose_eig_233", |b| {
        b.iter(|| black_box(partial_transpose(&rho, 1).unwrap().min_eigenvalue()))
    });
    let (phi, psi) = pair("psi6", "psi7");
    let w = build_witness(0.75, &phi, StateId::Psi(7)).unwrap();
    c.bench_function("embed_witness_233", |b| b.iter(|| black_box(embed(&w, &psi).unwrap())));
}

fn sdp(c: &mut Criterion) {
    let mut group = c.benchmark_group("ppt_relaxation");
    group.sample_size(10);
    for (target, orbit, lambda) in [("ghz:2", "zero:2x2", 0.6), ("ghz:3", "w:3", 0.9)] {
        let (phi, psi) = pair(target, orbit);
        let e = embed(&build_witness(lambda, &phi, StateId::Custom).unwrap(), &psi).unwrap();
        let problem = build_ppt_relaxation(&e);
        group.bench_function(format!("{target}_{orbit}_dim{}", problem.dim()), |b| {
            b.iter(|| black_box(solve(&problem, 1e-8).unwrap().value))
        });
    }
    group.finish();
}

criterion_group!(benches, overlap, linear_algebra, sdp);
criterion_main!(benches);

#![allow(dead_code)]

use rand::Rng;
use slocc_core::catalog::{ginibre, random_state, rng_from_seed};
use slocc_core::{representative, CMatrix, DensityMatrix, HermitianOperator, LocalOperatorTuple, PureState, StateId, C64};

pub fn id(s: &str) -> PureState {
    representative(&s.parse::<StateId>().unwrap()).unwrap()
}

pub fn ginibre_tuple<R: Rng>(dims: &[usize], rng: &mut R) -> LocalOperatorTuple {
    LocalOperatorTuple::new(dims.iter().map(|&d| ginibre(d, rng)).collect()).unwrap()
}

/// Ginibre tuple where every factor has rank `d − 1` (a column is zeroed).
pub fn rank_deficient_tuple<R: Rng>(dims: &[usize], rng: &mut R) -> LocalOperatorTuple {
    let ops = dims
        .iter()
        .map(|&d| {
            let mut g = ginibre(d, rng);
            let k = rng.random_range(0..d);
            g.column_mut(k).fill(C64::new(0.0, 0.0));
            g
        })
        .collect();
    LocalOperatorTuple::new(ops).unwrap()
}

/// Random full-rank mixed state `GG†/tr`.
pub fn random_density(dims: &[usize], seed: u64) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(n, &mut rng_from_seed(seed));
    let m: CMatrix = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(HermitianOperator::new(m / tr).unwrap(), dims.to_vec()).unwrap()
}

pub fn random_pure(dims: &[usize], seed: u64) -> PureState {
    random_state(dims, &mut rng_from_seed(seed)).unwrap()
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

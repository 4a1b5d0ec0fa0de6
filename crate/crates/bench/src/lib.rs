//! Benchmark fixtures shared by the criterion targets.

use slocc_core::{random_ginibre, representative, LocalOperatorTuple, PureState, StateId};

/// Normalized catalog representatives of `target` and `orbit`.
pub fn pair(target: &str, orbit: &str) -> (PureState, PureState) {
    let load = |s: &str| representative(&s.parse::<StateId>().expect("valid id")).expect("catalog state");
    (load(target), load(orbit))
}

/// Seeded Ginibre tuple matching `dims`.
pub fn random_tuple(dims: &[usize], seed: u64) -> LocalOperatorTuple {
    let ops = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| random_ginibre(d, seed.wrapping_add(k as u64)).expect("positive dimension"))
        .collect();
    LocalOperatorTuple::new(ops).expect("square factors")
}

mod common;

use proptest::prelude::*;
use slocc_core::catalog::{complex_normal, random_unitary, rng_from_seed};
use slocc_core::{
    apply_local, maximize_slocc_overlap, overlap_objective, per_party_update, LocalOperatorTuple, OptimizerConfig,
};

use common::{ginibre_tuple, id, random_pure, rel_close};

const DIMS: [usize; 3] = [2, 3, 3];
const EPS: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn objective_is_rescaling_invariant(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let (phi, psi) = (random_pure(&DIMS, seed ^ 1), random_pure(&DIMS, seed ^ 2));
        let ops = ginibre_tuple(&DIMS, &mut rng);
        let c: Vec<_> = (0..3).map(|_| complex_normal(&mut rng) + 0.1).collect();
        let a = overlap_objective(&phi, &psi, &ops).unwrap();
        let b = overlap_objective(&phi, &psi, &ops.rescaled(&c).unwrap()).unwrap();
        prop_assert!(rel_close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn sweeps_are_monotone(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let (phi, psi) = (random_pure(&DIMS, seed ^ 3), random_pure(&DIMS, seed ^ 4));
        let mut ops = ginibre_tuple(&DIMS, &mut rng).into_ops();
        let mut last = overlap_objective(&phi, &psi, &LocalOperatorTuple::new(ops.clone()).unwrap()).unwrap();
        for _ in 0..4 {
            for p in 0..3 {
                let tuple = LocalOperatorTuple::new(ops.clone()).unwrap();
                ops[p] = per_party_update(&phi, &psi, &tuple, p, EPS).unwrap();
                let v = overlap_objective(&phi, &psi, &LocalOperatorTuple::new(ops.clone()).unwrap()).unwrap();
                prop_assert!(v >= last - 10.0 * EPS, "{v} < {last}");
                last = v;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reported_argmax_reproduces_lambda(seed in any::<u64>()) {
        let (phi, psi) = (random_pure(&DIMS, seed), random_pure(&DIMS, seed.wrapping_add(1)));
        let r = maximize_slocc_overlap(&phi, &psi, &OptimizerConfig::default().with_restarts(8).with_seed(seed)).unwrap();
        let v = overlap_objective(&phi, &psi, &r.argmax).unwrap();
        prop_assert!((v - r.lambda).abs() < 1e-10);
        prop_assert!(r.per_restart_values.iter().all(|&x| x <= r.lambda));
    }

    #[test]
    fn local_unitaries_do_not_move_the_supremum(seed in any::<u64>(), pair in 0usize..5) {
        let (target, orbit) = [("psi6", "psi7"), ("psi7", "psi6"), ("psi8", "psi12"), ("psi14", "psi10"), ("ghz:3", "w:3")][pair];
        let (phi, psi) = (id(target), id(orbit));
        let mut rng = rng_from_seed(seed);
        let us: Vec<_> = phi.dims().iter().map(|&d| random_unitary(d, &mut rng)).collect();
        let rotated = apply_local(&LocalOperatorTuple::new(us).unwrap(), &phi).unwrap();
        let cfg = OptimizerConfig::default().with_restarts(60);
        let a = maximize_slocc_overlap(&phi, &psi, &cfg).unwrap().lambda;
        let b = maximize_slocc_overlap(&rotated, &psi, &cfg).unwrap().lambda;
        prop_assert!((a - b).abs() < 1e-6, "{target}/{orbit}: {a} vs {b}");
    }
}

#[test]
fn ghz_w_asymmetry() {
    let cfg = OptimizerConfig::default();
    let a = maximize_slocc_overlap(&id("psi6"), &id("psi7"), &cfg).unwrap();
    let b = maximize_slocc_overlap(&id("psi7"), &id("psi6"), &cfg).unwrap();
    assert!((a.lambda - 0.75).abs() < 1e-9);
    assert!(b.saturated && b.lambda > 1.0 - 1e-9);
}

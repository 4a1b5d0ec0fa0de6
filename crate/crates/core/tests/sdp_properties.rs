mod common;

use proptest::prelude::*;
use slocc_core::sdp::{build_ppt_relaxation, ppt_bound_lambda, solve, BoundConfig, SdpStatus};
use slocc_core::witness::{build_witness, embed, expectation, sigma_family};
use slocc_core::{maximize_slocc_overlap, partial_transpose, OptimizerConfig, StateId};

use common::{id, random_pure};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn optimizer_and_relaxation_sandwich_the_overlap(seed in any::<u64>()) {
        let (phi, psi) = (random_pure(&[2, 2], seed), random_pure(&[2, 2], seed ^ 7));
        let cfg = BoundConfig::default();
        let lower = maximize_slocc_overlap(&phi, &psi, &OptimizerConfig::default().with_restarts(20)).unwrap().lambda;
        let upper = ppt_bound_lambda(&phi, &psi, &cfg).unwrap().lambda;
        prop_assert!(lower <= upper + cfg.bisect_tol, "{lower} > {upper}");
    }

    #[test]
    fn returned_rho_is_ppt_and_normalized(seed in any::<u64>(), lambda in 0.2f64..1.0) {
        let (phi, psi) = (random_pure(&[2, 2], seed), random_pure(&[2, 2], seed ^ 11));
        let e = embed(&build_witness(lambda, &phi, StateId::Custom).unwrap(), &psi).unwrap();
        let sol = solve(&build_ppt_relaxation(&e), 1e-8).unwrap();
        prop_assert_eq!(sol.status, SdpStatus::Optimal);
        prop_assert!((sol.rho.base().trace() - 1.0).abs() < 1e-8);
        prop_assert!(sol.rho.base().min_eigenvalue() >= -1e-7);
        for party in 0..2 {
            prop_assert!(partial_transpose(&sol.rho, party).unwrap().min_eigenvalue() >= -1e-7);
        }
    }
}

#[test]
fn known_pairs_sandwich() {
    let cfg = BoundConfig::default();
    for (t, o, exact) in [("ghz:2", "zero:2x2", 0.5), ("ghz:2", "ghz:2", 1.0)] {
        let (phi, psi) = (id(t), id(o));
        let lower = maximize_slocc_overlap(&phi, &psi, &OptimizerConfig::default()).unwrap().lambda;
        let upper = ppt_bound_lambda(&phi, &psi, &cfg).unwrap().lambda;
        assert!((lower - exact).abs() < 1e-9);
        assert!(lower <= upper + cfg.bisect_tol && upper <= 1.0);
    }
}

#[test]
fn ppt_sigma_caps_the_ghz_w_relaxation() {
    let (phi, psi) = (id("ghz:3"), id("w:3"));
    let (p, lambda) = (0.01, 0.9);
    let sigma = sigma_family(&phi, &psi, p).unwrap();
    for party in 0..3 {
        assert!(partial_transpose(&sigma, party).unwrap().min_eigenvalue() >= -1e-10);
    }
    let e = embed(&build_witness(lambda, &phi, StateId::W(3)).unwrap(), &psi).unwrap();
    let on_sigma = expectation(&sigma, &e.matrix).unwrap();
    assert!((on_sigma - p * (lambda - 1.0)).abs() < 1e-12);
    let sol = solve(&build_ppt_relaxation(&e), 1e-8).unwrap();
    assert!(sol.value <= on_sigma + 1e-7, "{} vs {on_sigma}", sol.value);
}

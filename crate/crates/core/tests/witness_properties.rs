mod common;

use proptest::prelude::*;
use slocc_core::catalog::rng_from_seed;
use slocc_core::witness::{
    build_witness, embed, expectation, sigma_family, theorem1_bridge_embedded, vectorized_product,
    verify_slocc_witness, Verdict,
};
use slocc_core::{apply_local, maximize_slocc_overlap, LocalOperatorTuple, OptimizerConfig, StateId, C64};

use common::{ginibre_tuple, id, random_pure, rank_deficient_tuple, rel_close};

#[test]
fn confirmed_witness_is_nonnegative_on_vectorized_products() {
    let (phi, psi) = (id("psi6"), id("psi7"));
    let w = build_witness(0.75, &phi, StateId::Psi(7)).unwrap();
    let report = verify_slocc_witness(&w, &OptimizerConfig::default()).unwrap();
    assert!(matches!(report.verdict, Verdict::Witness { .. }));
    let e = embed(&w, &psi).unwrap();
    let mut rng = rng_from_seed(17);
    for k in 0..10_000 {
        let ops = if k % 10 == 0 { rank_deficient_tuple(&[2, 3, 3], &mut rng) } else { ginibre_tuple(&[2, 3, 3], &mut rng) };
        let y = vectorized_product(&ops).unwrap();
        let v = e.matrix.matrix().clone() * &y;
        let value = y.dotc(&v).re / y.norm_squared();
        assert!(value >= -1e-8, "trial {k}: {value}");
    }
}

#[test]
fn negative_embedded_values_map_to_violating_orbit_states() {
    let (phi, psi) = (id("ghz:3"), id("w:3"));
    let w = build_witness(0.6, &phi, StateId::W(3)).unwrap();
    let e = embed(&w, &psi).unwrap();
    // Haar-like tuples almost never beat 0.6, so sample around the optimizer's argmax.
    let best = maximize_slocc_overlap(&phi, &psi, &OptimizerConfig::default()).unwrap().argmax;
    let mut rng = rng_from_seed(5);
    let mut negatives = 0;
    for _ in 0..10_000 {
        let noise = ginibre_tuple(&[2, 2, 2], &mut rng);
        let ops = LocalOperatorTuple::new(
            best.ops().iter().zip(noise.ops()).map(|(a, g)| a + g * C64::new(0.05, 0.0)).collect(),
        )
        .unwrap();
        let (lhs, rhs) = theorem1_bridge_embedded(&e, &psi, &ops).unwrap();
        if rhs < 0.0 {
            negatives += 1;
            let eta = apply_local(&ops, &psi).unwrap();
            assert!(w.matrix.quadratic_form(&eta).unwrap() < 0.0);
            assert!(lhs < 0.0);
        }
    }
    assert!(negatives > 100 && negatives < 10_000, "{negatives} negative samples");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witness_spectrum_is_rank_one_shifted(seed in any::<u64>(), lambda in 0.05f64..1.5) {
        let phi = random_pure(&[2, 3, 3], seed);
        let w = build_witness(lambda, &phi, StateId::Custom).unwrap();
        let e = w.matrix.eig();
        prop_assert!((e.values[0] - (lambda - 1.0)).abs() < 1e-12);
        prop_assert!(e.values[1..].iter().all(|v| (v - lambda).abs() < 1e-12));
        prop_assert_eq!(w.trivial, lambda >= 1.0);
    }

    #[test]
    fn sigma_detects_with_value_p_times_lambda_minus_one(
        seed in any::<u64>(), lambda in 0.05f64..1.0, p in 0.0f64..1.0
    ) {
        let (phi, psi) = (random_pure(&[2, 2], seed), random_pure(&[2, 2], seed ^ 9));
        let sigma = sigma_family(&phi, &psi, p).unwrap();
        let e = embed(&build_witness(lambda, &phi, StateId::Custom).unwrap(), &psi).unwrap();
        let value = expectation(&sigma, &e.matrix).unwrap();
        prop_assert!((value - p * (lambda - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn bridge_sides_agree(seed in any::<u64>(), lambda in 0.1f64..1.0) {
        let (phi, psi) = (random_pure(&[2, 3, 3], seed), random_pure(&[2, 3, 3], seed ^ 3));
        let e = embed(&build_witness(lambda, &phi, StateId::Custom).unwrap(), &psi).unwrap();
        let mut rng = rng_from_seed(seed);
        let ops = ginibre_tuple(&[2, 3, 3], &mut rng);
        let (lhs, rhs) = theorem1_bridge_embedded(&e, &psi, &ops).unwrap();
        prop_assert!(rel_close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }
}

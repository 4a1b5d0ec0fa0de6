use std::f64::consts::PI;

use proptest::prelude::*;
use slocc_core::ghzw::{
    bound_chain, closed_form_n3, critical_objective, lambda_block, lambda_critical, mu_nu_squared, numeric_sup,
    reduced_operator, SupSearch, WClassParams,
};
use slocc_core::hermitian_eig;

fn params(n: usize) -> impl Strategy<Value = WClassParams> {
    let m = n - 1;
    (
        prop::collection::vec(0.05f64..5.0, m),
        prop::collection::vec(-PI..PI, m),
        prop::collection::vec(-PI..PI, m - 1),
    )
        .prop_map(move |(x, a, mut b)| {
            b.push(0.0);
            WClassParams::new(n, x, a, b).unwrap()
        })
}

fn real_params(n: usize) -> impl Strategy<Value = WClassParams> {
    let m = n - 1;
    (prop::collection::vec(0.05f64..5.0, m), prop::collection::vec(-PI..PI, m))
        .prop_map(move |(x, a)| WClassParams::new(n, x, a, vec![0.0; m]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn n3_closed_form(x in 0.01f64..20.0, a1 in -PI..PI, a3 in -PI..PI) {
        let p = WClassParams::new(3, vec![x, 1.0], vec![a1, a3], vec![0.0, 0.0]).unwrap();
        prop_assert!((closed_form_n3(x, a1, a3) - critical_objective(&p)).abs() < 1e-12);
    }

    #[test]
    fn bound_chain_is_monotone(p in (4usize..9).prop_flat_map(real_params)) {
        let c = bound_chain(&p).unwrap();
        prop_assert!(c.direct <= c.projected + 1e-14, "{c:?}");
        prop_assert!(c.projected <= c.three_index + 1e-14, "{c:?}");
        prop_assert!((c.three_index - 0.5).abs() < 1e-14);
    }

    #[test]
    fn objective_never_exceeds_critical_value(p in (3usize..8).prop_flat_map(params)) {
        let v = critical_objective(&p);
        prop_assert!(v <= lambda_critical(p.n()).unwrap() + 1e-12, "{v}");
        let (mu, nu) = mu_nu_squared(&p);
        prop_assert!(mu >= 0.0 && nu >= 0.0);
    }

    #[test]
    fn block_positivity_tracks_the_threshold(p in (3usize..7).prop_flat_map(params), t in 0.2f64..2.0) {
        let lc = critical_objective(&p);
        prop_assume!((t - 1.0).abs() > 1e-6);
        let b = lambda_block(&p, lc * t).unwrap();
        prop_assert_eq!(b.is_psd(0.0), t > 1.0);
        prop_assert!(lambda_block(&p, lc).unwrap().det().abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn explicit_reduced_operator_has_block_spectrum(p in (3usize..6).prop_flat_map(params), lam in 0.1f64..1.0) {
        let block = lambda_block(&p, lam).unwrap();
        let eig = hermitian_eig(&reduced_operator(&p, lam).unwrap()).unwrap();
        let scale = block.reduced_spectrum().iter().fold(1.0f64, |a, b| a.max(b.abs()));
        for (a, b) in eig.values.iter().zip(block.reduced_spectrum()) {
            prop_assert!((a - b).abs() < 1e-10 * scale, "{:?} vs {:?}", eig.values, block.reduced_spectrum());
        }
    }
}

#[test]
fn free_phases_do_not_raise_the_supremum() {
    for n in 3..=5 {
        let lc = lambda_critical(n).unwrap();
        let fixed = numeric_sup(n, &SupSearch { trials: 32, seed: 4, ..SupSearch::default() }).unwrap().value;
        let free = numeric_sup(n, &SupSearch { trials: 32, seed: 4, free_beta: true, ..SupSearch::default() }).unwrap().value;
        assert!(free <= lc + 1e-9 && fixed <= lc + 1e-9, "N={n}: {fixed} {free}");
        assert!((free - fixed).abs() < 1e-6, "N={n}: {fixed} {free}");
    }
}

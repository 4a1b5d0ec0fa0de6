mod common;

use nalgebra::DVector;
use proptest::prelude::*;
use slocc_core::catalog::{ginibre, rng_from_seed};
use slocc_core::tensor::{kron, partial_transpose_matrix, vectorize};
use slocc_core::{apply_local, conjugate_state, hermitian_eig, HermitianOperator, LocalOperatorTuple, C64};

use common::{random_density, random_pure};

const DIMS: [usize; 3] = [2, 3, 3];

fn max_abs(m: &slocc_core::CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), party in 0usize..3) {
        let rho = random_density(&DIMS, seed);
        let once = partial_transpose_matrix(rho.matrix(), &DIMS, party).unwrap();
        let twice = partial_transpose_matrix(&once, &DIMS, party).unwrap();
        prop_assert!(max_abs(&(twice - rho.matrix())) == 0.0);
    }

    #[test]
    fn partial_transposes_commute(seed in any::<u64>(), a in 0usize..3, b in 0usize..3) {
        let rho = random_density(&DIMS, seed);
        let ab = partial_transpose_matrix(&partial_transpose_matrix(rho.matrix(), &DIMS, a).unwrap(), &DIMS, b).unwrap();
        let ba = partial_transpose_matrix(&partial_transpose_matrix(rho.matrix(), &DIMS, b).unwrap(), &DIMS, a).unwrap();
        prop_assert!(max_abs(&(ab - ba)) == 0.0);
    }

    #[test]
    fn eigendecomposition_residuals(seed in any::<u64>()) {
        let g = ginibre(18, &mut rng_from_seed(seed));
        let h = HermitianOperator::new(&g + g.adjoint()).unwrap();
        let e = h.eig();
        let scale = max_abs(h.matrix()).max(1.0);
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - h.trace()).abs() < 1e-10 * scale);
        for (k, &lam) in e.values.iter().enumerate() {
            let v = e.vectors.column(k);
            let r = h.matrix() * v - v * C64::new(lam, 0.0);
            prop_assert!(r.norm() < 1e-10 * scale);
        }
        let gram = e.vectors.adjoint() * &e.vectors - slocc_core::CMatrix::identity(18, 18);
        prop_assert!(max_abs(&gram) < 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let direct = hermitian_eig(h.matrix()).unwrap();
        prop_assert_eq!(direct.values, e.values);
    }

    #[test]
    fn conjugation_is_an_involution(seed in any::<u64>()) {
        let s = random_pure(&DIMS, seed);
        prop_assert_eq!(conjugate_state(&conjugate_state(&s)), s);
    }

    #[test]
    fn identity_tuple_acts_trivially(seed in any::<u64>()) {
        let s = random_pure(&DIMS, seed);
        let out = apply_local(&LocalOperatorTuple::identity(&DIMS), &s).unwrap();
        prop_assert_eq!(out.amps(), s.amps());
    }

    #[test]
    fn vectorized_pairing_is_a_trace(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = rng_from_seed(seed);
        let y = ginibre(d, &mut rng);
        let a = DVector::from_fn(d, |_, _| slocc_core::catalog::complex_normal(&mut rng));
        let psi = DVector::from_fn(d, |_, _| slocc_core::catalog::complex_normal(&mut rng));
        let pair = kron(
            &slocc_core::CMatrix::from_column_slice(d, 1, a.as_slice()),
            &slocc_core::CMatrix::from_column_slice(d, 1, psi.conjugate().as_slice()),
        );
        let lhs = vectorize(&y).unwrap().dotc(&DVector::from_column_slice(pair.as_slice()));
        let rhs = (y.adjoint() * &a * psi.adjoint()).trace();
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }
}

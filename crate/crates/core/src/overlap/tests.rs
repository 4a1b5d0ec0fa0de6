use super::*;
use crate::catalog::{representative, rng_from_seed, StateId};
use crate::tensor::{C64, ZERO};

fn id(s: &str) -> PureState {
    representative(&s.parse::<StateId>().unwrap()).unwrap()
}

fn quick() -> OptimizerConfig {
    OptimizerConfig { restarts: 12, max_sweeps: 600, ..Default::default() }
}

#[test]
fn identity_on_same_state_is_one() {
    let s = id("psi9");
    let v = overlap_objective(&s, &s, &LocalOperatorTuple::identity(s.dims())).unwrap();
    assert!((v - 1.0).abs() < 1e-14);
}

#[test]
fn orthogonal_image_gives_zero() {
    let ghz = id("ghz:3");
    let w = id("w:3");
    let v = overlap_objective(&ghz, &w, &LocalOperatorTuple::identity(&[2, 2, 2])).unwrap();
    assert!(v.abs() < 1e-15);
}

#[test]
fn zero_image_is_degenerate() {
    let s = id("ghz:3");
    let zero = CMatrix::zeros(2, 2);
    let ops = LocalOperatorTuple::new(vec![zero, CMatrix::identity(2, 2), CMatrix::identity(2, 2)]).unwrap();
    assert!(matches!(overlap_objective(&s, &s, &ops), Err(Error::DegenerateOperator)));
}

#[test]
fn plus_basis_maximizer_reaches_three_quarters() {
    // (|+++⟩+|−−+⟩+|+−−⟩)/√3 lies in the W class; evaluate it with identity operators.
    let ghz = id("ghz:3");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [h, h];
    let minus = [h, -h];
    let kets = [[plus, plus, plus], [minus, minus, plus], [plus, minus, minus]];
    let mut amps = vec![ZERO; 8];
    for k in &kets {
        for idx in 0..8 {
            let (a, b, c) = (idx >> 2, (idx >> 1) & 1, idx & 1);
            amps[idx] += C64::new(k[0][a] * k[1][b] * k[2][c] / 3f64.sqrt(), 0.0);
        }
    }
    let target = PureState::new(vec![2, 2, 2], amps).unwrap();
    let v = overlap_objective(&ghz, &target, &LocalOperatorTuple::identity(&[2, 2, 2])).unwrap();
    assert!((v - 0.75).abs() < 1e-12);
}

#[test]
fn single_party_update_reaches_one() {
    let mut rng = rng_from_seed(4);
    let phi = crate::catalog::random_state(&[3], &mut rng).unwrap();
    let psi = crate::catalog::random_state(&[3], &mut rng).unwrap();
    let ops = LocalOperatorTuple::identity(&[3]);
    let a = per_party_update(&phi, &psi, &ops, 0, 1e-12).unwrap();
    let v = overlap_objective(&phi, &psi, &LocalOperatorTuple::new(vec![a]).unwrap()).unwrap();
    assert!((v - 1.0).abs() < 1e-9, "{v}");
}

#[test]
fn product_update_reaches_one() {
    let phi = crate::catalog::random_product_state(&[2, 3], 8).unwrap();
    let psi = crate::catalog::random_product_state(&[2, 3], 9).unwrap();
    let mut ops = LocalOperatorTuple::identity(&[2, 3]).into_ops();
    for p in 0..2 {
        let t = LocalOperatorTuple::new(ops.clone()).unwrap();
        ops[p] = per_party_update(&phi, &psi, &t, p, 1e-12).unwrap();
    }
    let v = overlap_objective(&phi, &psi, &LocalOperatorTuple::new(ops).unwrap()).unwrap();
    assert!((v - 1.0).abs() < 1e-9, "{v}");
}

#[test]
fn config_validation() {
    assert!(OptimizerConfig::default().validate().is_ok());
    let mut c = OptimizerConfig::default();
    c.saturation_threshold = 1.0;
    assert!(c.validate().is_err());
    c = OptimizerConfig { restarts: 0, ..Default::default() };
    assert!(c.validate().is_err());
    c = OptimizerConfig { regularization: 0.0, ..Default::default() };
    assert!(c.validate().is_err());
}

#[test]
fn ghz_against_w_orbit() {
    let r = maximize_slocc_overlap(&id("ghz:3"), &id("w:3"), &quick()).unwrap();
    assert!((r.lambda - 0.75).abs() < 1e-6, "{}", r.lambda);
    assert!(!r.saturated);
}

#[test]
fn ghz_against_product_orbit_is_one_half() {
    let r = maximize_slocc_overlap(&id("ghz:3"), &id("zero:2x2x2"), &quick()).unwrap();
    assert!((r.lambda - 0.5).abs() < 1e-9, "{}", r.lambda);
}

#[test]
fn asymmetry_psi6_psi7() {
    let a = maximize_slocc_overlap(&id("psi6"), &id("psi7"), &quick()).unwrap();
    let b = maximize_slocc_overlap(&id("psi7"), &id("psi6"), &quick()).unwrap();
    assert!((a.lambda - 0.75).abs() < 1e-6, "{}", a.lambda);
    assert!(b.saturated, "{}", b.lambda);
}

#[test]
fn result_invariants_and_determinism() {
    let cfg = quick().with_seed(17);
    let (phi, psi) = (id("psi8"), id("psi11"));
    let a = maximize_slocc_overlap(&phi, &psi, &cfg).unwrap();
    let b = maximize_slocc_overlap(&phi, &psi, &cfg).unwrap();
    assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
    assert_eq!(a.per_restart_values, b.per_restart_values);
    let max = a.per_restart_values.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(a.lambda, max);
    let re = overlap_objective(&phi, &psi, &a.argmax).unwrap();
    assert!((re - a.lambda).abs() < 1e-10);
    assert_eq!(a.saturated, a.lambda >= cfg.saturation_threshold);
    assert_eq!(a.sweeps_used.len(), cfg.restarts);
}

#[test]
fn saturated_entry_psi8_orbit() {
    let r = maximize_slocc_overlap(&id("psi6"), &id("psi8"), &quick()).unwrap();
    assert!(r.saturated, "{}", r.lambda);
}

#[test]
fn mismatched_dims_rejected() {
    assert!(maximize_slocc_overlap(&id("psi6"), &id("ghz:3"), &quick()).is_err());
}

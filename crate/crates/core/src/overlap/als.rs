//! Raw kernels of the alternating scheme, on flat amplitude slices.

use crate::error::{Error, Result};
use crate::tensor::ops::apply_except;
use crate::tensor::{CMatrix, C64, ZERO};

/// `|⟨φ|η⟩|² / ‖η‖²` with `η = (⊗ops)ψ`; `φ` is taken as given.
pub(crate) fn objective(phi: &[C64], psi: &[C64], dims: &[usize], ops: &[CMatrix]) -> Result<f64> {
    let eta = apply_except(ops, dims, psi, &[]);
    ratio(phi, &eta)
}

pub(crate) fn ratio(phi: &[C64], eta: &[C64]) -> Result<f64> {
    let d: f64 = eta.iter().map(|z| z.norm_sqr()).sum();
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::DegenerateOperator);
    }
    let n: C64 = phi.iter().zip(eta).map(|(a, b)| a.conj() * b).sum();
    Ok(n.norm_sqr() / d)
}

pub(crate) struct Workspace {
    dims: Vec<usize>,
}

impl Workspace {
    pub(crate) fn new(dims: &[usize]) -> Self {
        Self { dims: dims.to_vec() }
    }

    /// Replaces `ops[p]` by `F (R + ε̃𝟙)⁻¹`, normalized, where `χ` is the state with every
    /// other party applied, `R = χ_p χ_p†`, `F = φ_p χ_p†` (flattenings at `p`) and
    /// `ε̃ = ε·tr R / d_p`. If `F = 0` the objective is identically zero in `ops[p]`; it is
    /// left untouched.
    pub(crate) fn update(
        &mut self,
        phi: &[C64],
        psi: &[C64],
        ops: &mut [CMatrix],
        p: usize,
        eps: f64,
    ) -> Result<()> {
        let dims = &self.dims;
        let chi = apply_except(ops, dims, psi, &[p]);
        let d = dims[p];
        let inner: usize = dims[p + 1..].iter().product();
        let outer = chi.len() / (d * inner);
        let mut r = CMatrix::zeros(d, d);
        let mut f = CMatrix::zeros(d, d);
        for o in 0..outer {
            for i in 0..inner {
                let base = o * d * inner + i;
                for a in 0..d {
                    let xa = chi[base + a * inner];
                    let fa = phi[base + a * inner];
                    for b in 0..d {
                        let xb = chi[base + b * inner].conj();
                        r[(a, b)] += xa * xb;
                        f[(a, b)] += fa * xb;
                    }
                }
            }
        }
        let tr: f64 = (0..d).map(|a| r[(a, a)].re).sum();
        if !(tr > 0.0) {
            return Err(Error::DegenerateOperator);
        }
        if f.iter().all(|z| *z == ZERO) {
            return Ok(());
        }
        let shift = eps * tr / d as f64;
        for a in 0..d {
            r[(a, a)] += shift;
        }
        let chol = r
            .cholesky()
            .ok_or_else(|| Error::Numerical("regularized Gram matrix not positive definite".into()))?;
        let a = chol.solve(&f.adjoint()).adjoint();
        let norm = a.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Numerical("per-party update produced a degenerate matrix".into()));
        }
        ops[p] = a / C64::new(norm, 0.0);
        Ok(())
    }
}

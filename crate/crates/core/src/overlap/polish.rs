//! Trust-region Newton refinement of `f = −ln λ` in the real coordinates of the operator
//! entries, with an exact Hessian.
//!
//! With `η = (⊗A)ψ`, `d = ‖η‖²`, `n = ⟨φ|η⟩`, `s = |n|²`, and `D_k = ∂η/∂(A_p)_ij` (one
//! party replaced by a matrix unit), everything follows from the Gram matrix `⟨D_l|D_k⟩`,
//! the overlaps `⟨η|D_k⟩`, `⟨φ|D_k⟩` and the cross-party second derivatives `⟨η|D_kl⟩`,
//! `⟨φ|D_kl⟩`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::als;
use crate::tensor::ops::apply_except;
use crate::tensor::{strides, CMatrix, PureState, C64, ZERO};

const UNIT: [C64; 2] = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];

struct Layout<'a> {
    phi: &'a [C64],
    psi: &'a [C64],
    dims: &'a [usize],
    strides: Vec<usize>,
    offsets: Vec<usize>,
    nc: usize,
}

struct Derivatives {
    lambda: f64,
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

impl<'a> Layout<'a> {
    fn new(phi: &'a PureState, psi: &'a PureState) -> Self {
        let dims = psi.dims();
        let mut offsets = Vec::with_capacity(dims.len());
        let mut nc = 0;
        for &d in dims {
            offsets.push(nc);
            nc += d * d;
        }
        Self { phi: phi.amps(), psi: psi.amps(), dims, strides: strides(dims), offsets, nc }
    }

    fn derivatives(&self, ops: &[CMatrix]) -> Option<Derivatives> {
        let (dims, st, nc) = (self.dims, &self.strides, self.nc);
        let n_tot = self.psi.len();
        let eta = apply_except(ops, dims, self.psi, &[]);
        let dd: f64 = eta.iter().map(|z| z.norm_sqr()).sum();
        let nn: C64 = self.phi.iter().zip(&eta).map(|(a, b)| a.conj() * b).sum();
        let ss = nn.norm_sqr();
        if !(dd > 0.0 && ss > 0.0) {
            return None;
        }

        let mut jac = vec![vec![ZERO; n_tot]; nc];
        for (p, &d) in dims.iter().enumerate() {
            let chi = apply_except(ops, dims, self.psi, &[p]);
            for (idx, &x) in chi.iter().enumerate() {
                let j = (idx / st[p]) % d;
                let rest = idx - j * st[p];
                for i in 0..d {
                    jac[self.offsets[p] + i * d + j][rest + i * st[p]] = x;
                }
            }
        }
        let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
        let ge: Vec<C64> = jac.iter().map(|col| dot(&eta, col)).collect();
        let gf: Vec<C64> = jac.iter().map(|col| dot(self.phi, col)).collect();
        let mut gram = DMatrix::from_element(nc, nc, ZERO);
        for l in 0..nc {
            for k in l..nc {
                let v = dot(&jac[l], &jac[k]);
                gram[(l, k)] = v;
                gram[(k, l)] = v.conj();
            }
        }

        let mut me = DMatrix::from_element(nc, nc, ZERO);
        let mut mf = DMatrix::from_element(nc, nc, ZERO);
        for p in 0..dims.len() {
            for q in p + 1..dims.len() {
                let (dp, dq) = (dims[p], dims[q]);
                let t = apply_except(ops, dims, self.psi, &[p, q]);
                for (idx, &x) in t.iter().enumerate() {
                    let jp = (idx / st[p]) % dp;
                    let jq = (idx / st[q]) % dq;
                    let rest = idx - jp * st[p] - jq * st[q];
                    for i in 0..dp {
                        for i2 in 0..dq {
                            let tgt = rest + i * st[p] + i2 * st[q];
                            let k = self.offsets[p] + i * dp + jp;
                            let l = self.offsets[q] + i2 * dq + jq;
                            me[(k, l)] += eta[tgt].conj() * x;
                            mf[(k, l)] += self.phi[tgt].conj() * x;
                        }
                    }
                }
            }
        }
        for k in 0..nc {
            for l in 0..k {
                me[(k, l)] = me[(l, k)];
                mf[(k, l)] = mf[(l, k)];
            }
        }

        let np = 2 * nc;
        let mut gd = DVector::zeros(np);
        let mut gs = DVector::zeros(np);
        for k in 0..nc {
            for a in 0..2 {
                gd[2 * k + a] = 2.0 * (UNIT[a] * ge[k]).re;
                gs[2 * k + a] = 2.0 * (nn.conj() * UNIT[a] * gf[k]).re;
            }
        }
        let mut hess = DMatrix::zeros(np, np);
        for k in 0..nc {
            for l in 0..nc {
                for a in 0..2 {
                    for b in 0..2 {
                        let (ca, cb) = (UNIT[a], UNIT[b]);
                        let hd = 2.0 * (cb.conj() * ca * gram[(l, k)] + ca * cb * me[(k, l)]).re;
                        let hs = 2.0
                            * ((cb * gf[l]).conj() * ca * gf[k] + nn.conj() * ca * cb * mf[(k, l)]).re;
                        let (r, c) = (2 * k + a, 2 * l + b);
                        hess[(r, c)] = hd / dd - gd[r] * gd[c] / (dd * dd) - hs / ss
                            + gs[r] * gs[c] / (ss * ss);
                    }
                }
            }
        }
        let grad = &gd / dd - &gs / ss;
        Some(Derivatives { lambda: ss / dd, grad, hess })
    }

    fn displaced(&self, ops: &[CMatrix], step: &DVector<f64>) -> Vec<CMatrix> {
        ops.iter()
            .enumerate()
            .map(|(p, m)| {
                let d = self.dims[p];
                let mut out = m.clone();
                for i in 0..d {
                    for j in 0..d {
                        let k = self.offsets[p] + i * d + j;
                        out[(i, j)] += C64::new(step[2 * k], step[2 * k + 1]);
                    }
                }
                let n = out.norm();
                out / C64::new(n, 0.0)
            })
            .collect()
    }
}

/// Step `−(H + μ)⁻¹ g` with the smallest admissible `μ` whose length fits `radius`.
fn constrained_step(
    eig: &SymmetricEigen<f64, nalgebra::Dyn>,
    grad: &DVector<f64>,
    radius: f64,
) -> DVector<f64> {
    let w = &eig.eigenvalues;
    let gv = eig.eigenvectors.transpose() * grad;
    let wmin = w.min();
    let scale = w.amax().max(1.0);
    let lo = (-wmin).max(0.0) + 1e-12 * scale;
    let norm_at = |mu: f64| -> f64 {
        gv.iter().zip(w.iter()).map(|(g, l)| (g / (l + mu)).powi(2)).sum::<f64>().sqrt()
    };
    let mu = if norm_at(lo) <= radius {
        lo
    } else {
        let (mut a, mut b) = (lo, lo + grad.norm() / radius + scale);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if norm_at(m) > radius {
                a = m;
            } else {
                b = m;
            }
        }
        b
    };
    let coeffs = DVector::from_iterator(gv.len(), gv.iter().zip(w.iter()).map(|(g, l)| -g / (l + mu)));
    &eig.eigenvectors * coeffs
}

/// Returns the refined tuple, its objective and the number of iterations spent.
/// Never returns a point worse than `start`.
pub(crate) fn trust_region_newton(
    phi: &PureState,
    psi: &PureState,
    start: &[CMatrix],
    max_iter: usize,
) -> (Vec<CMatrix>, f64, usize) {
    let layout = Layout::new(phi, psi);
    let mut ops: Vec<CMatrix> =
        start.iter().map(|m| m / C64::new(m.norm().max(f64::MIN_POSITIVE), 0.0)).collect();
    let mut lambda = match als::objective(layout.phi, layout.psi, layout.dims, &ops) {
        Ok(v) => v,
        Err(_) => return (start.to_vec(), 0.0, 0),
    };
    let mut radius = 0.1;
    let mut iters = 0;
    while iters < max_iter && lambda < 1.0 - 1e-15 && radius > 1e-14 {
        iters += 1;
        let Some(der) = layout.derivatives(&ops) else { break };
        let eig = SymmetricEigen::new(der.hess.clone());
        let step = constrained_step(&eig, &der.grad, radius);
        let predicted = der.grad.dot(&step) + 0.5 * step.dot(&(&der.hess * &step));
        if !(predicted < 0.0) || predicted.abs() < 1e-300 {
            break;
        }
        let trial = layout.displaced(&ops, &step);
        let trial_value = als::objective(layout.phi, layout.psi, layout.dims, &trial).unwrap_or(0.0);
        let actual = -(trial_value.ln()) + der.lambda.ln();
        let rho = actual / predicted;
        if rho > 0.75 && step.norm() > 0.99 * radius {
            radius = (2.0 * radius).min(1.0);
        } else if rho < 0.25 {
            radius *= 0.25;
        }
        if rho > 0.1 && trial_value > lambda {
            ops = trial;
            lambda = trial_value;
        }
    }
    (ops, lambda, iters)
}

//! Primal–dual interior point method for real block-diagonal SDPs in the form
//!
//! ```text
//!   primal:  min Σ_j ⟨C_j, X_j⟩   s.t.  Σ_j ⟨A_jk, X_j⟩ = b_k,  X_j ⪰ 0
//!   dual:    max bᵀy              s.t.  S_j = C_j − Σ_k y_k A_jk ⪰ 0
//! ```
//!
//! HKM search direction with Mehrotra predictor–corrector. The dual iterate starts strictly
//! feasible (`y = 0` requires `C ≻ 0`) and stays feasible; the primal is infeasible-start.

use faer::linalg::solvers::{Llt, Solve};
use faer::{Mat, Side};
use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Entry {
    pub row: usize,
    pub col: usize,
    pub val: f64,
}

/// `a[k][j]` lists the (symmetric, fully enumerated) entries of `A_jk`.
pub(crate) struct BlockSdp {
    pub sizes: Vec<usize>,
    pub c: Vec<DMatrix<f64>>,
    pub a: Vec<Vec<Vec<Entry>>>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct IpmSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// Stop as soon as the (feasible) dual objective exceeds this value.
    pub stop_dual_above: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IpmStatus {
    Optimal,
    MaxIter,
    DualThreshold,
    NumericalFailure,
}

pub(crate) struct IpmResult {
    pub y: Vec<f64>,
    pub x: Vec<DMatrix<f64>>,
    pub pobj: f64,
    pub dobj: f64,
    pub pinf: f64,
    pub iterations: usize,
    pub status: IpmStatus,
}

const STEP_FRACTION: f64 = 0.95;

impl BlockSdp {
    fn m(&self) -> usize {
        self.b.len()
    }

    fn adjoint(&self, y: &[f64]) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.sizes.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        for (k, blocks) in self.a.iter().enumerate() {
            for (j, entries) in blocks.iter().enumerate() {
                for e in entries {
                    out[j][(e.row, e.col)] += y[k] * e.val;
                }
            }
        }
        out
    }

    fn apply(&self, x: &[DMatrix<f64>]) -> Vec<f64> {
        self.a
            .iter()
            .map(|blocks| {
                blocks
                    .iter()
                    .enumerate()
                    .map(|(j, es)| es.iter().map(|e| e.val * x[j][(e.row, e.col)]).sum::<f64>())
                    .sum()
            })
            .collect()
    }

    /// `M_kl = Σ_j ⟨A_jk, X_j A_jl Z_j⟩`.
    fn schur(&self, x: &[DMatrix<f64>], z: &[DMatrix<f64>]) -> Mat<f64> {
        let m = self.m();
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|k| {
                let mut row = vec![0.0; m];
                for (l, slot) in row.iter_mut().enumerate().skip(k) {
                    let mut acc = 0.0;
                    for j in 0..self.sizes.len() {
                        let (ak, al) = (&self.a[k][j], &self.a[l][j]);
                        if ak.is_empty() || al.is_empty() {
                            continue;
                        }
                        let (xj, zj) = (&x[j], &z[j]);
                        for e in ak {
                            for f in al {
                                acc += e.val * f.val * xj[(e.row, f.row)] * zj[(f.col, e.col)];
                            }
                        }
                    }
                    *slot = acc;
                }
                row
            })
            .collect();
        Mat::from_fn(m, m, |i, j| if i <= j { rows[i][j] } else { rows[j][i] })
    }
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest `α` with `X + αΔ ⪰ 0` (infinite when `Δ ⪰ 0`), or `None` if `X` is not PD.
fn max_step(x: &DMatrix<f64>, d: &DMatrix<f64>) -> Option<f64> {
    let l = x.clone().cholesky()?.unpack();
    let li_d = l.solve_lower_triangular(d)?;
    let t = l.solve_lower_triangular(&li_d.transpose())?;
    let eig = SymmetricEigen::new(sym(&t)).eigenvalues;
    let min = eig.min();
    Some(if min >= 0.0 { f64::INFINITY } else { -1.0 / min })
}

pub(crate) fn solve(p: &BlockSdp, st: &IpmSettings) -> IpmResult {
    let m = p.m();
    let nb = p.sizes.len();
    let n_total: usize = p.sizes.iter().sum();
    let bmax = p.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let xi = 10.0f64.max(bmax * 10.0);
    let mut x: Vec<DMatrix<f64>> = p.sizes.iter().map(|&n| DMatrix::identity(n, n) * xi).collect();
    let mut y = vec![0.0; m];
    let mut s: Vec<DMatrix<f64>> = p.c.clone();
    let bnorm = p.b.iter().map(|v| v * v).sum::<f64>().sqrt();

    let result = |x: Vec<DMatrix<f64>>, y: Vec<f64>, it: usize, status: IpmStatus| {
        let pobj: f64 = x.iter().zip(&p.c).map(|(a, c)| a.dot(c)).sum();
        let dobj: f64 = p.b.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ax = p.apply(&x);
        let pinf = ax.iter().zip(&p.b).map(|(a, b)| (b - a).powi(2)).sum::<f64>().sqrt() / (1.0 + bnorm);
        IpmResult { y, x, pobj, dobj, pinf, iterations: it, status }
    };

    for it in 0..st.max_iter {
        let pobj: f64 = x.iter().zip(&p.c).map(|(a, c)| a.dot(c)).sum();
        let dobj: f64 = p.b.iter().zip(&y).map(|(a, b)| a * b).sum();
        if let Some(t) = st.stop_dual_above {
            if dobj > t {
                return result(x, y, it, IpmStatus::DualThreshold);
            }
        }
        let ax = p.apply(&x);
        let rp: Vec<f64> = p.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + bnorm);
        let aty = p.adjoint(&y);
        let rd: Vec<DMatrix<f64>> = (0..nb).map(|j| &p.c[j] - &s[j] - &aty[j]).collect();
        let mu: f64 = x.iter().zip(&s).map(|(a, b)| a.dot(b)).sum::<f64>() / n_total as f64;
        let relgap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        if relgap < st.tol && pinf < st.tol {
            return result(x, y, it, IpmStatus::Optimal);
        }

        let z: Option<Vec<DMatrix<f64>>> =
            s.iter().map(|sj| sj.clone().cholesky().map(|c| c.inverse())).collect();
        let Some(z) = z else { return result(x, y, it, IpmStatus::NumericalFailure) };
        let schur = p.schur(&x, &z);
        let Ok(llt) = Llt::new(schur.as_ref(), Side::Lower) else {
            return result(x, y, it, IpmStatus::NumericalFailure);
        };

        // Solves for (ΔX, Δy, ΔS) with complementarity target τ and second-order term `corr`.
        let direction = |tau: f64, corr: Option<&[DMatrix<f64>]>| {
            let r: Vec<DMatrix<f64>> = (0..nb)
                .map(|j| {
                    let mut rj = &z[j] * tau - &x[j] - &x[j] * &rd[j] * &z[j];
                    if let Some(c) = corr {
                        rj -= &c[j] * &z[j];
                    }
                    rj
                })
                .collect();
            let ar = p.apply(&r);
            let rhs = Mat::from_fn(m, 1, |k, _| rp[k] - ar[k]);
            let dy_m = llt.solve(rhs.as_ref());
            let dy: Vec<f64> = (0..m).map(|k| dy_m[(k, 0)]).collect();
            let atdy = p.adjoint(&dy);
            let ds: Vec<DMatrix<f64>> = (0..nb).map(|j| &rd[j] - &atdy[j]).collect();
            let dx: Vec<DMatrix<f64>> =
                (0..nb).map(|j| sym(&(&r[j] + &x[j] * &atdy[j] * &z[j]))).collect();
            (dx, dy, ds)
        };
        let steps = |dx: &[DMatrix<f64>], ds: &[DMatrix<f64>]| -> Option<(f64, f64)> {
            let mut ap = f64::INFINITY;
            let mut ad = f64::INFINITY;
            for j in 0..nb {
                ap = ap.min(max_step(&x[j], &dx[j])?);
                ad = ad.min(max_step(&s[j], &ds[j])?);
            }
            Some(((STEP_FRACTION * ap).min(1.0), (STEP_FRACTION * ad).min(1.0)))
        };

        let (dxa, _, dsa) = direction(0.0, None);
        let Some((apa, ada)) = steps(&dxa, &dsa) else {
            return result(x, y, it, IpmStatus::NumericalFailure);
        };
        let mu_aff: f64 = (0..nb)
            .map(|j| (&x[j] + &dxa[j] * apa).dot(&(&s[j] + &dsa[j] * ada)))
            .sum::<f64>()
            / n_total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let corr: Vec<DMatrix<f64>> = (0..nb).map(|j| &dxa[j] * &dsa[j]).collect();
        let (dx, dy, ds) = direction(sigma * mu, Some(&corr));
        let Some((ap, ad)) = steps(&dx, &ds) else {
            return result(x, y, it, IpmStatus::NumericalFailure);
        };
        for j in 0..nb {
            x[j] += &dx[j] * ap;
            s[j] += &ds[j] * ad;
        }
        for k in 0..m {
            y[k] += ad * dy[k];
        }
    }
    let it = st.max_iter;
    result(x, y, it, IpmStatus::MaxIter)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// max y s.t. diag(1,1) − y·diag(1,2) ⪰ 0 → y* = 1/2 (b = 1).
    #[test]
    fn scalar_lmi() {
        let p = BlockSdp {
            sizes: vec![2],
            c: vec![DMatrix::identity(2, 2)],
            a: vec![vec![vec![Entry { row: 0, col: 0, val: 1.0 }, Entry { row: 1, col: 1, val: 2.0 }]]],
            b: vec![1.0],
        };
        let r = solve(&p, &IpmSettings { tol: 1e-10, max_iter: 60, stop_dual_above: None });
        assert_eq!(r.status, IpmStatus::Optimal);
        assert!((r.dobj - 0.5).abs() < 1e-8, "{}", r.dobj);
        assert!((r.pobj - 0.5).abs() < 1e-8);
    }

    #[test]
    fn minimum_eigenvalue() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        // S = A − y·I ⪰ 0, maximize y → λ_min(A).
        let p = BlockSdp {
            sizes: vec![3],
            c: vec![a.clone()],
            a: vec![vec![(0..3).map(|i| Entry { row: i, col: i, val: 1.0 }).collect()]],
            b: vec![1.0],
        };
        let r = solve(&p, &IpmSettings { tol: 1e-10, max_iter: 80, stop_dual_above: None });
        let lmin = SymmetricEigen::new(a).eigenvalues.min();
        assert_eq!(r.status, IpmStatus::Optimal);
        assert!((r.dobj - lmin).abs() < 1e-7, "{} vs {lmin}", r.dobj);
    }
}

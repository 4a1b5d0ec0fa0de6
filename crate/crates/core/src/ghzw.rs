//! GHZ versus W-class: the critical `λ` above which `(λ𝟙 − |GHZ_N⟩⟨GHZ_N|) ⊗ |W_N⟩⟨W_N|`
//! is an entanglement witness, i.e. the maximal squared overlap between `|GHZ_N⟩` and the
//! W class.
//!
//! Parties are labelled `1..=N`. W-class states are written as
//! `U₁D₁ ⊗ … ⊗ U_{N−2}D_{N−2} ⊗ U_{N−1}g ⊗ U_N D_N |W_N⟩` with `D_i = diag(1, x̃_i)`,
//! `U_i = U_ph(γ_i) X(α_i) U_ph(β_i)`, `X(δ) = e^{iδσ_x}`, `U_ph(δ) = diag(1, e^{iδ})` and
//! `g = [[1, x₀], [0, x_{N−1}]]` (the overall scale `x_N` is divided out). The `γ_i` are gauge
//! and are not represented; `β_N = 0`. Per-party vectors run over `I₀ = {1, …, N−2, N}` in that
//! order, so the last slot always belongs to party `N`.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{representative, rng_stream, StateId};
use crate::error::{Error, Result};
use crate::overlap::{maximize_slocc_overlap, OptimizerConfig};
use crate::tensor::{apply_local, hermitian_eig, CMatrix, LocalOperatorTuple, PureState, C64};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WClassParams {
    n: usize,
    x_tilde: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    pub x0: C64,
    pub x_n1: C64,
}

impl WClassParams {
    /// `x_tilde`, `alpha`, `beta` are indexed by `I₀`; the last `beta` entry must be `0`.
    pub fn new(n: usize, x_tilde: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        let m = n - 1;
        if x_tilde.len() != m || alpha.len() != m || beta.len() != m {
            return Err(Error::InvalidParameter(format!(
                "expected {m} entries per parameter list for N = {n}"
            )));
        }
        if x_tilde.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter("x_tilde entries must be positive and finite".into()));
        }
        if alpha.iter().chain(&beta).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("angles must be finite".into()));
        }
        if beta[m - 1] != 0.0 {
            return Err(Error::InvalidParameter("beta of party N is fixed to 0".into()));
        }
        Ok(Self { n, x_tilde, alpha, beta, x0: C64::new(0.0, 0.0), x_n1: C64::new(1.0, 0.0) })
    }

    /// All `x̃_i = x`, all `α_i = alpha`, all `β_i = 0`.
    pub fn uniform(n: usize, x: f64, alpha: f64) -> Result<Self> {
        check_n(n)?;
        Self::new(n, vec![x; n - 1], vec![alpha; n - 1], vec![0.0; n - 1])
    }

    pub fn with_g_block(mut self, x0: C64, x_n1: C64) -> Self {
        self.x0 = x0;
        self.x_n1 = x_n1;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn x_tilde(&self) -> &[f64] {
        &self.x_tilde
    }
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `Σ_{i∈I₀} x̃_i²`.
    pub fn sum_x_sq(&self) -> f64 {
        self.x_tilde.iter().map(|x| x * x).sum()
    }

    /// Same point in the gauge `x̃_N = 1`.
    pub fn gauge_fixed(&self) -> Self {
        let c = self.x_tilde[self.n - 2];
        let mut p = self.clone();
        p.x_tilde.iter_mut().for_each(|x| *x /= c);
        p
    }

    /// Party label (1-based) of slot `k` of the `I₀` vectors.
    fn party_of_slot(&self, k: usize) -> usize {
        if k + 1 == self.n - 1 {
            self.n
        } else {
            k + 1
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("N must be at least 3, got {n}")));
    }
    Ok(())
}

/// `(μ², ν²)` as closed-form sums over `I₀`.
pub fn mu_nu_squared(p: &WClassParams) -> (f64, f64) {
    let m = p.n - 1;
    let (s, c): (Vec<f64>, Vec<f64>) = p.alpha.iter().map(|a| a.sin_cos()).unzip();
    let prod_except = |v: &[f64], j: usize| -> f64 {
        v.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x).product()
    };
    let mut t1 = C64::new(0.0, 0.0);
    let mut t2 = C64::new(0.0, 0.0);
    for j in 0..m {
        let ph = C64::from_polar(p.x_tilde[j], -p.beta[j]);
        t1 += ph * (s[j] * prod_except(&c, j));
        t2 += ph * (c[j] * prod_except(&s, j));
    }
    let norm = 1.0 / (2.0 * p.n as f64);
    let mu_sq = norm * (t1.norm_sqr() + t2.norm_sqr());
    let nu_sq = norm * (c.iter().map(|x| x * x).product::<f64>() + s.iter().map(|x| x * x).product::<f64>());
    (mu_sq, nu_sq)
}

/// `N(μ²/Σx̃² + ν²)`: the smallest `λ_N` for which the block at these parameters is PSD.
pub fn critical_objective(p: &WClassParams) -> f64 {
    let (mu_sq, nu_sq) = mu_nu_squared(p);
    p.n as f64 * (mu_sq / p.sum_x_sq() + nu_sq)
}

/// The 2×2 block that decides positivity of the reduced operator on party `N−1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaBlock {
    pub n: usize,
    pub lambda_n: f64,
    /// Gauge `x̃_N = 1`.
    pub mu_sq: f64,
    pub nu_sq: f64,
    /// `Σ_{i∈I₀} x̃_i²` in the gauge `x̃_N = 1`.
    pub sum_x: f64,
    pub matrix: [[f64; 2]; 2],
}

impl LambdaBlock {
    /// Assemble the block from its scalar ingredients.
    pub fn from_parts(n: usize, lambda_n: f64, mu_sq: f64, nu_sq: f64, sum_x: f64) -> Self {
        let a = lambda_n / n as f64;
        let rest = sum_x - 1.0;
        let t = mu_sq + nu_sq;
        let (w0, w1, off) = if t > 0.0 {
            (mu_sq / t, nu_sq / t, (mu_sq * nu_sq).sqrt() / t)
        } else {
            (0.0, 0.0, 0.0)
        };
        let matrix = [
            [a * (1.0 + rest * w0) - t, rest * a * off],
            [rest * a * off, a * (1.0 + rest * w1)],
        ];
        Self { n, lambda_n, mu_sq, nu_sq, sum_x, matrix }
    }

    pub fn trace(&self) -> f64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    pub fn det(&self) -> f64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    /// Positivity via `det ≥ 0` and `tr ≥ 0`, with `tol` slack on the determinant.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.det() >= -tol && self.trace() >= 0.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let half = 0.5 * self.trace();
        let diff = 0.5 * (self.matrix[0][0] - self.matrix[1][1]);
        half - (diff * diff + self.matrix[0][1] * self.matrix[1][0]).sqrt()
    }

    /// The full spectrum of the reduced 4×4 operator: the block's two eigenvalues plus
    /// `λ(1+S')/N` and `λ/N`, ascending.
    pub fn reduced_spectrum(&self) -> [f64; 4] {
        let a = self.lambda_n / self.n as f64;
        let lo = self.min_eigenvalue();
        let hi = self.trace() - lo;
        let mut v = [lo, hi, a * self.sum_x, a];
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn lambda_block(p: &WClassParams, lambda_n: f64) -> Result<LambdaBlock> {
    if !(lambda_n > 0.0 && lambda_n.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda_N must be positive, got {lambda_n}")));
    }
    let g = p.gauge_fixed();
    let (mu_sq, nu_sq) = mu_nu_squared(&g);
    Ok(LambdaBlock::from_parts(p.n, lambda_n, mu_sq, nu_sq, g.sum_x_sq()))
}

/// Maximal squared overlap between `|GHZ_N⟩` and the W class.
pub fn lambda_critical(n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(if n == 3 { 0.75 } else { 0.5 })
}

/// `½[1 + x/(1+x²) · sin 2α₁ · sin 2α₃]`, the `N = 3` objective at `β = 0`.
pub fn closed_form_n3(x: f64, alpha1: f64, alpha3: f64) -> f64 {
    0.5 * (1.0 + x / (1.0 + x * x) * (2.0 * alpha1).sin() * (2.0 * alpha3).sin())
}

/// Normalized `(|+++⟩ + |−−+⟩ + |+−−⟩)/√3`, a W-class state with squared GHZ₃ overlap 3/4.
pub fn maximizer_state() -> PureState {
    let plus = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
    let minus = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
    let terms = [[plus, plus, plus], [minus, minus, plus], [plus, minus, minus]];
    let mut amps = vec![0.0; 8];
    for t in &terms {
        for (idx, a) in amps.iter_mut().enumerate() {
            *a += t[0][idx >> 2] * t[1][(idx >> 1) & 1] * t[2][idx & 1] / 3f64.sqrt();
        }
    }
    PureState::from_real(vec![2, 2, 2], &amps).expect("fixed shape")
}

// ---------------------------------------------------------------------------------------------
// Explicit states

fn x_rotation(a: f64) -> CMatrix {
    let (s, c) = a.sin_cos();
    CMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(0.0, s), C64::new(0.0, s), C64::new(c, 0.0)])
}

fn phase(d: f64) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::from_polar(1.0, d)]))
}

/// `U_i D_i` for the party in slot `k` of `I₀`.
fn local_factor(p: &WClassParams, k: usize) -> CMatrix {
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        C64::new(1.0, 0.0),
        C64::new(p.x_tilde[k], 0.0),
    ]));
    x_rotation(p.alpha[k]) * phase(p.beta[k]) * d
}

/// Local tuple with `m` on party `N−1` and `U_i D_i` elsewhere.
fn tuple_with(p: &WClassParams, m: &CMatrix) -> LocalOperatorTuple {
    let mut ops = Vec::with_capacity(p.n);
    for party in 1..=p.n {
        if party == p.n - 1 {
            ops.push(m.clone());
        } else {
            let k = if party == p.n { p.n - 2 } else { party - 1 };
            debug_assert_eq!(p.party_of_slot(k), party);
            ops.push(local_factor(p, k));
        }
    }
    LocalOperatorTuple::new(ops).expect("2×2 factors")
}

fn g_block(p: &WClassParams) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), p.x0, C64::new(0.0, 0.0), p.x_n1])
}

/// The (unnormalized) W-class state with `U_{N−1} = 𝟙` and the stored g block on party `N−1`.
pub fn materialize(p: &WClassParams) -> Result<PureState> {
    materialize_with(p, &g_block(p))
}

/// The state `(U₁D₁ ⊗ … ⊗ m ⊗ U_N D_N)|W_N⟩` for an arbitrary 2×2 `m` on party `N−1`.
pub fn materialize_with(p: &WClassParams, m: &CMatrix) -> Result<PureState> {
    if m.shape() != (2, 2) {
        return Err(Error::Shape(format!("party N-1 operator must be 2x2, got {:?}", m.shape())));
    }
    let w = representative(&StateId::W(p.n))?;
    apply_local(&tuple_with(p, m), &w)
}

/// The reduced operator on party `N−1`'s two copies, built directly from the states:
/// entry `(a, b)` is `⟨η_a|(λ𝟙 − |GHZ⟩⟨GHZ|)|η_b⟩` where `η_a` carries the matrix unit
/// `E_a = |i⟩⟨j|` (`a = 2i + j`) on party `N−1`. Evaluated in the gauge `x̃_N = 1`, where
/// its spectrum is that of [`LambdaBlock::reduced_spectrum`].
pub fn reduced_operator(p: &WClassParams, lambda_n: f64) -> Result<CMatrix> {
    let p = &p.gauge_fixed();
    let ghz = representative(&StateId::Ghz(p.n))?;
    let etas: Vec<PureState> = (0..4)
        .map(|a| {
            let mut e = CMatrix::zeros(2, 2);
            e[(a / 2, a % 2)] = C64::new(1.0, 0.0);
            materialize_with(p, &e)
        })
        .collect::<Result<_>>()?;
    let overlaps: Vec<C64> = etas.iter().map(|e| ghz.inner(e)).collect::<Result<_>>()?;
    let mut out = CMatrix::zeros(4, 4);
    for a in 0..4 {
        for b in 0..4 {
            out[(a, b)] = etas[a].inner(&etas[b])? * lambda_n - overlaps[a].conj() * overlaps[b];
        }
    }
    Ok(out)
}

/// W-class state whose party-`N−1` factor is the lowest eigenvector of the reduced operator.
/// At critical parameters its squared GHZ overlap equals `lambda_n`.
pub fn boundary_state(p: &WClassParams, lambda_n: f64) -> Result<(PureState, f64)> {
    let op = reduced_operator(p, lambda_n)?;
    let eig = hermitian_eig(&op)?;
    let v = eig.vectors.column(0);
    let m = CMatrix::from_fn(2, 2, |i, j| v[2 * i + j]);
    let state = materialize_with(p, &m)?.normalize()?;
    Ok((state, eig.values[0]))
}

/// Squared overlap of a normalized 2^N-qubit state with `|GHZ_N⟩`.
pub fn ghz_overlap(s: &PureState) -> Result<f64> {
    let ghz = representative(&StateId::Ghz(s.parties()))?;
    ghz.fidelity(s)
}

// ---------------------------------------------------------------------------------------------
// Bound chain for N ≥ 4 (β = 0)

#[derive(Debug, Clone, PartialEq)]
pub struct ChainVectors {
    pub v0: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

/// `v₀ = x̃/|x̃|`, `v₁_j = sin α_j Π_{k≠j} cos α_k / √(2N)`, `v₂_j = cos α_j Π_{k≠j} sin α_k / √(2N)`;
/// at `β = 0`, `μ²/Σx̃² = (v₀·v₁)² + (v₀·v₂)²`.
pub fn chain_vectors(p: &WClassParams) -> Result<ChainVectors> {
    if p.beta.iter().any(|&b| b != 0.0) {
        return Err(Error::InvalidParameter("chain vectors require beta = 0".into()));
    }
    let m = p.n - 1;
    let norm = p.sum_x_sq().sqrt();
    let scale = 1.0 / (2.0 * p.n as f64).sqrt();
    let (s, c): (Vec<f64>, Vec<f64>) = p.alpha.iter().map(|a| a.sin_cos()).unzip();
    let prod_except = |v: &[f64], j: usize| -> f64 {
        v.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x).product()
    };
    Ok(ChainVectors {
        v0: p.x_tilde.iter().map(|x| x / norm).collect(),
        v1: (0..m).map(|j| scale * s[j] * prod_except(&c, j)).collect(),
        v2: (0..m).map(|j| scale * c[j] * prod_except(&s, j)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundChain {
    /// `N(μ²/Σx̃² + ν²)`.
    pub direct: f64,
    /// `N(|v₁|² + |v₂|² + ν²)`.
    pub projected: f64,
    /// The same expression restricted to the first three slots of `I₀`; identically `1/2`.
    pub three_index: f64,
}

/// `½ Σ` over sign patterns with at most one odd factor, over the given angles.
fn few_flip_sum(alpha: &[f64]) -> f64 {
    let (s2, c2): (Vec<f64>, Vec<f64>) = alpha.iter().map(|a| (a.sin().powi(2), a.cos().powi(2))).unzip();
    let prod_except = |v: &[f64], j: usize| -> f64 {
        v.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x).product()
    };
    let mut acc = c2.iter().product::<f64>() + s2.iter().product::<f64>();
    for j in 0..alpha.len() {
        acc += c2[j] * prod_except(&s2, j) + s2[j] * prod_except(&c2, j);
    }
    0.5 * acc
}

pub fn bound_chain(p: &WClassParams) -> Result<BoundChain> {
    if p.n < 4 {
        return Err(Error::InvalidParameter("the bound chain applies to N >= 4".into()));
    }
    let v = chain_vectors(p)?;
    let (_, nu_sq) = mu_nu_squared(p);
    let sq = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>();
    Ok(BoundChain {
        direct: critical_objective(p),
        projected: p.n as f64 * (sq(&v.v1) + sq(&v.v2) + nu_sq),
        three_index: few_flip_sum(&p.alpha[..3]),
    })
}

// ---------------------------------------------------------------------------------------------
// Numerical supremum

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSearch {
    pub trials: usize,
    pub seed: u64,
    /// Also optimize the phases `β_i`, `i ≠ N`.
    pub free_beta: bool,
    pub max_iter: usize,
}

impl Default for SupSearch {
    fn default() -> Self {
        Self { trials: 64, seed: 0, free_beta: false, max_iter: 4000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupOutcome {
    pub value: f64,
    pub params: WClassParams,
}

/// Unpack `θ = (log x̃ over I₀∖{N}, α over I₀, [β over I₀∖{N}])` in the gauge `x̃_N = 1`.
fn unpack(n: usize, theta: &[f64], free_beta: bool) -> WClassParams {
    let m = n - 1;
    let mut x: Vec<f64> = theta[..m - 1].iter().map(|t| t.exp()).collect();
    x.push(1.0);
    let alpha = theta[m - 1..2 * m - 1].to_vec();
    let mut beta = if free_beta { theta[2 * m - 1..].to_vec() } else { vec![0.0; m - 1] };
    beta.push(0.0);
    WClassParams { n, x_tilde: x, alpha, beta, x0: C64::new(0.0, 0.0), x_n1: C64::new(1.0, 0.0) }
}

fn objective_at(n: usize, theta: &[f64], free_beta: bool) -> f64 {
    let p = unpack(n, theta, free_beta);
    if p.x_tilde.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return f64::NEG_INFINITY;
    }
    critical_objective(&p)
}

fn ascend(n: usize, mut theta: Vec<f64>, free_beta: bool, max_iter: usize) -> (Vec<f64>, f64) {
    const H: f64 = 1e-6;
    let f = |t: &[f64]| objective_at(n, t, free_beta);
    let mut value = f(&theta);
    let mut step = 0.1;
    let mut probe = theta.clone();
    for _ in 0..max_iter {
        let grad: Vec<f64> = (0..theta.len())
            .map(|i| {
                probe.copy_from_slice(&theta);
                probe[i] = theta[i] + H;
                let up = f(&probe);
                probe[i] = theta[i] - H;
                (up - f(&probe)) / (2.0 * H)
            })
            .collect();
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-12 {
            break;
        }
        let mut accepted = false;
        while step > 1e-14 {
            let cand: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t + step * g / gnorm).collect();
            let v = f(&cand);
            if v > value {
                theta = cand;
                value = v;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (theta, value)
}

/// Multi-start maximization of `N(μ²/Σx̃² + ν²)`. Trial 0 starts at `α = 0` (the product state
/// `|0…0⟩`, value exactly `1/2`); the rest start from seeded random points.
pub fn numeric_sup(n: usize, cfg: &SupSearch) -> Result<SupOutcome> {
    check_n(n)?;
    let m = n - 1;
    let dim = (m - 1) + m + if cfg.free_beta { m - 1 } else { 0 };
    let runs: Vec<(Vec<f64>, f64)> = (0..cfg.trials.max(1))
        .into_par_iter()
        .map(|t| {
            let start = if t == 0 {
                vec![0.0; dim]
            } else {
                let mut rng = rng_stream(cfg.seed, t as u64);
                (0..dim)
                    .map(|i| {
                        if i < m - 1 {
                            rng.random_range(-1.5..1.5)
                        } else {
                            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
                        }
                    })
                    .collect()
            };
            ascend(n, start, cfg.free_beta, cfg.max_iter)
        })
        .collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.1 > runs[best].1 {
            best = i;
        }
    }
    let (theta, value) = &runs[best];
    Ok(SupOutcome { value: *value, params: unpack(n, theta, cfg.free_beta) })
}

/// Best value of `N(μ²/Σx̃² + ν²)` found over `trials` starts at `β = 0`.
pub fn numeric_sup_check(n: usize, trials: usize, seed: u64) -> Result<f64> {
    Ok(numeric_sup(n, &SupSearch { trials, seed, ..SupSearch::default() })?.value)
}

/// Analytic, parametric and optimizer values of the GHZ/W threshold for one `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub n: usize,
    pub analytic: f64,
    pub numeric_sup: f64,
    pub optimizer: f64,
}

pub fn threshold_row(n: usize, search: &SupSearch, cfg: &OptimizerConfig) -> Result<ThresholdRow> {
    let analytic = lambda_critical(n)?;
    let numeric_sup = numeric_sup(n, search)?.value;
    let ghz = representative(&StateId::Ghz(n))?;
    let w = representative(&StateId::W(n))?;
    let optimizer = maximize_slocc_overlap(&ghz, &w, cfg)?.lambda;
    Ok(ThresholdRow { n, analytic, numeric_sup, optimizer })
}

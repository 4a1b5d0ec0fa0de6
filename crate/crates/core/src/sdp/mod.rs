//! PPT relaxation: `min tr(ρ𝒲̃)` over density matrices whose partial transposes on every
//! party are positive semidefinite, and bisection for the smallest `λ` with a nonnegative
//! optimum (an upper bound on the SLOCC overlap).
//!
//! `ρ` is parametrized as `𝟙/n + Σ_k y_k B_k` over a traceless Hermitian basis, so the trace
//! constraint is built in and the problem becomes a linear matrix inequality in `y` with one
//! block per cone (`ρ` itself and each partial transpose). Complex blocks are handled through
//! the real embedding `H ↦ [[Re H, −Im H], [Im H, Re H]]`; when the objective is real the
//! search is restricted to real symmetric `ρ`, which loses nothing (average `ρ` with `ρ̄`).

mod ipm;

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{shape, Error, Result};
use crate::serde_util::matrix_rows;
use crate::tensor::{
    partial_transpose_matrix, strides, CMatrix, DensityMatrix, HermitianOperator, PureState, C64,
};
use crate::witness::{build_witness, embed, EmbeddedWitness};
use crate::StateId;

use ipm::{BlockSdp, Entry, IpmSettings, IpmStatus};

/// Dimension up to which solves run without a warning.
pub const DEFAULT_MAX_DIM: usize = 128;
/// Largest Schur complement (in bytes) the reference solver will allocate.
pub const SCHUR_MEMORY_LIMIT: usize = 4 << 30;

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub objective: HermitianOperator,
    pub party_dims: Vec<usize>,
}

impl SdpProblem {
    pub fn new(objective: HermitianOperator, party_dims: Vec<usize>) -> Result<Self> {
        if party_dims.iter().product::<usize>() != objective.dim() {
            return shape(format!("party dims {party_dims:?} vs objective dim {}", objective.dim()));
        }
        Ok(Self { objective, party_dims })
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// One positivity constraint per party's partial transpose.
    pub fn pt_constraints(&self) -> usize {
        self.party_dims.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schemaVersion": crate::overlap::table::SCHEMA_VERSION,
            "partyDims": self.party_dims,
            "objective": matrix_rows(self.objective.matrix()),
        })
    }
}

pub fn build_ppt_relaxation(w: &EmbeddedWitness) -> SdpProblem {
    SdpProblem { objective: w.matrix.clone(), party_dims: w.grouping.clone() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    InfeasibleNumerics,
    /// Stopped early: the feasible `ρ` already has objective below the requested threshold.
    BelowThreshold,
}

/// Multipliers with `𝒲̃ − bound·𝟙 = Z₀ + Σ_i (Z_i)^{T_i}`, all `Z ⪰ 0`; proves
/// `tr(ρ𝒲̃) ≥ bound` on the PPT set.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub bound: f64,
    /// `Z₀` (for `ρ ⪰ 0`) followed by one multiplier per partial transpose.
    pub multipliers: Vec<HermitianOperator>,
}

impl DualCertificate {
    /// Frobenius norm of `𝒲̃ − bound·𝟙 − Z₀ − Σ_i (Z_i)^{T_i}`.
    pub fn residual(&self, p: &SdpProblem) -> Result<f64> {
        let n = p.dim();
        let mut r = p.objective.matrix() - CMatrix::identity(n, n) * C64::new(self.bound, 0.0);
        for (j, z) in self.multipliers.iter().enumerate() {
            let t = if j == 0 {
                z.matrix().clone()
            } else {
                partial_transpose_matrix(z.matrix(), &p.party_dims, j - 1)?
            };
            r -= t;
        }
        Ok(r.norm())
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// `tr(ρ𝒲̃)` at the returned feasible `ρ`.
    pub value: f64,
    pub rho: DensityMatrix,
    pub dual_certificate: Option<DualCertificate>,
    pub status: SdpStatus,
    /// `value − dual bound`.
    pub gap: f64,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl SdpSolution {
    pub fn to_json(&self) -> Value {
        json!({
            "schemaVersion": crate::overlap::table::SCHEMA_VERSION,
            "value": self.value,
            "status": self.status,
            "gap": self.gap,
            "iterations": self.iterations,
            "warnings": self.warnings,
            "dualBound": self.dual_certificate.as_ref().map(|c| c.bound),
            "rho": matrix_rows(self.rho.matrix()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverSettings {
    pub max_iter: usize,
    pub max_dim: usize,
    /// Stop once a feasible `ρ` with objective below this value is found.
    pub stop_below: Option<f64>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { max_iter: 100, max_dim: DEFAULT_MAX_DIM, stop_below: None }
    }
}

pub trait SdpSolver {
    fn solve(&self, p: &SdpProblem, tol: f64) -> Result<SdpSolution>;
}

/// Reference primal–dual interior point solver.
#[derive(Debug, Clone, Default)]
pub struct InteriorPointSolver {
    pub settings: SolverSettings,
}

/// Traceless Hermitian basis element as a list of complex entries.
type BasisElem = Vec<(usize, usize, C64)>;

fn traceless_basis(n: usize, complex: bool) -> Vec<BasisElem> {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut out: Vec<BasisElem> = (0..n - 1).map(|a| vec![(a, a, one), (n - 1, n - 1, -one)]).collect();
    for a in 0..n {
        for b in a + 1..n {
            out.push(vec![(a, b, one), (b, a, one)]);
            if complex {
                out.push(vec![(a, b, i), (b, a, -i)]);
            }
        }
    }
    out
}

/// Index map of the partial transpose on `party` (or the identity for `None`).
fn pt_index(dims: &[usize], party: Option<usize>) -> impl Fn(usize, usize) -> (usize, usize) + '_ {
    let st = party.map(|p| (strides(dims)[p], dims[p]));
    move |a, b| match st {
        None => (a, b),
        Some((s, d)) => {
            let (ap, bp) = ((a / s) % d, (b / s) % d);
            (a - ap * s + bp * s, b - bp * s + ap * s)
        }
    }
}

/// Real entries of the embedding of a complex entry `z` at `(r, c)`, negated.
fn push_embedded(out: &mut Vec<Entry>, n: usize, complex: bool, r: usize, c: usize, z: C64) {
    let mut add = |row, col, val: f64| {
        if val != 0.0 {
            out.push(Entry { row, col, val: -val });
        }
    };
    add(r, c, z.re);
    if complex {
        add(r + n, c + n, z.re);
        add(r + n, c, z.im);
        add(r, c + n, -z.im);
    }
}

fn unembed(x: &DMatrix<f64>, complex: bool) -> CMatrix {
    if !complex {
        return x.map(|v| C64::new(v, 0.0));
    }
    let n = x.nrows() / 2;
    CMatrix::from_fn(n, n, |i, j| {
        C64::new(x[(i, j)] + x[(i + n, j + n)], x[(i + n, j)] - x[(i, j + n)])
    })
}

impl InteriorPointSolver {
    pub fn new(settings: SolverSettings) -> Self {
        Self { settings }
    }
}

impl SdpSolver for InteriorPointSolver {
    fn solve(&self, p: &SdpProblem, tol: f64) -> Result<SdpSolution> {
        let n = p.dim();
        let mut warnings = Vec::new();
        if n > self.settings.max_dim {
            return Err(Error::BudgetExceeded { dim: n, budget: self.settings.max_dim });
        }
        if n > DEFAULT_MAX_DIM {
            warnings.push(format!("dimension {n} exceeds the default budget {DEFAULT_MAX_DIM}"));
        }
        let complex = !p.objective.is_real();
        let basis = traceless_basis(n, complex);
        let m = basis.len();
        if m.saturating_mul(m).saturating_mul(8) > SCHUR_MEMORY_LIMIT {
            return Err(Error::BudgetExceeded { dim: n, budget: self.settings.max_dim.min(n - 1) });
        }
        let blocks = 1 + p.party_dims.len();
        let bsize = if complex { 2 * n } else { n };
        let w = p.objective.matrix();

        let maps: Vec<Option<usize>> =
            std::iter::once(None).chain((0..p.party_dims.len()).map(Some)).collect();
        let a: Vec<Vec<Vec<Entry>>> = basis
            .iter()
            .map(|elem| {
                maps.iter()
                    .map(|&party| {
                        let f = pt_index(&p.party_dims, party);
                        let mut es = Vec::with_capacity(8);
                        for &(r, c, z) in elem {
                            let (r2, c2) = f(r, c);
                            push_embedded(&mut es, n, complex, r2, c2, z);
                        }
                        es
                    })
                    .collect()
            })
            .collect();
        let b: Vec<f64> = basis
            .iter()
            .map(|elem| -elem.iter().map(|&(r, c, z)| (w[(c, r)] * z).re).sum::<f64>())
            .collect();
        let c0 = DMatrix::identity(bsize, bsize) / n as f64;
        let trw = p.objective.trace();
        let sdp = BlockSdp { sizes: vec![bsize; blocks], c: vec![c0; blocks], a, b };
        let stop_dual_above = self.settings.stop_below.map(|t| trw / n as f64 - t);
        let r = ipm::solve(&sdp, &IpmSettings { tol, max_iter: self.settings.max_iter, stop_dual_above });

        let mut rho = CMatrix::identity(n, n) * C64::new(1.0 / n as f64, 0.0);
        for (elem, &yk) in basis.iter().zip(&r.y) {
            for &(i, j, z) in elem {
                rho[(i, j)] += z * yk;
            }
        }
        let rho_h = HermitianOperator::from_hermitian_unchecked(rho);
        let value: f64 = rho_h.matrix().iter().zip(w.transpose().iter()).map(|(x, y)| (x * y).re).sum();
        let rho = DensityMatrix::new(rho_h, p.party_dims.clone()).map_err(|e| {
            Error::Numerical(format!("interior point iterate left the feasible set: {e}"))
        })?;
        let bound = trw / n as f64 - r.pobj;
        let drift = (value - (trw / n as f64 - r.dobj)).abs();
        if drift > 1e-8 * (1.0 + value.abs()) {
            warnings.push(format!("objective recomputed from rho differs from the solver's by {drift:.3e}"));
        }
        let status = match r.status {
            IpmStatus::Optimal => SdpStatus::Optimal,
            IpmStatus::MaxIter => SdpStatus::MaxIter,
            IpmStatus::DualThreshold => SdpStatus::BelowThreshold,
            IpmStatus::NumericalFailure => SdpStatus::InfeasibleNumerics,
        };
        let dual_certificate = (status == SdpStatus::Optimal && r.pinf < tol).then(|| DualCertificate {
            bound,
            multipliers: r
                .x
                .iter()
                .map(|x| HermitianOperator::from_hermitian_unchecked(unembed(x, complex)))
                .collect(),
        });
        Ok(SdpSolution {
            value,
            rho,
            gap: value - bound,
            dual_certificate,
            status,
            iterations: r.iterations,
            warnings,
        })
    }
}

/// Solves with the reference interior point solver and default settings.
pub fn solve(p: &SdpProblem, solver_tol: f64) -> Result<SdpSolution> {
    InteriorPointSolver::default().solve(p, solver_tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundConfig {
    pub bisect_tol: f64,
    /// Known lower bound on the overlap (e.g. from the optimizer); the bracket starts there.
    pub lower_bound: f64,
    /// The optimum counts as nonnegative when it is at least `−accept_tol`.
    pub accept_tol: f64,
    pub solver_tol: f64,
    pub solver: SolverSettings,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            bisect_tol: 1e-3,
            lower_bound: 0.0,
            accept_tol: 1e-7,
            solver_tol: 1e-8,
            solver: SolverSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BisectionStep {
    pub lambda: f64,
    pub value: f64,
    pub status: SdpStatus,
    pub nonnegative: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PptBound {
    pub lambda: f64,
    pub steps: Vec<BisectionStep>,
}

/// Smallest `λ` (to `bisect_tol`) for which the PPT relaxation of
/// `(λ𝟙 − |φ⟩⟨φ|) ⊗ |ψ*⟩⟨ψ*|` has a nonnegative optimum.
pub fn ppt_bound_lambda(phi: &PureState, psi: &PureState, cfg: &BoundConfig) -> Result<PptBound> {
    if phi.dims() != psi.dims() {
        return shape("phi and psi dims differ");
    }
    if !(cfg.bisect_tol > 0.0) {
        return Err(Error::InvalidParameter("bisection tolerance must be positive".into()));
    }
    let phi = phi.clone().normalize()?;
    let psi = psi.clone().normalize()?;
    let n = phi.total_dim() * phi.total_dim();
    if n > cfg.solver.max_dim {
        return Err(Error::BudgetExceeded { dim: n, budget: cfg.solver.max_dim });
    }
    let solver = InteriorPointSolver::new(SolverSettings { stop_below: Some(-cfg.accept_tol), ..cfg.solver });
    let (mut lo, mut hi) = (cfg.lower_bound.max(0.0), 1.0);
    let mut steps = Vec::new();
    while hi - lo > cfg.bisect_tol {
        let mid = 0.5 * (lo + hi);
        let e = embed(&build_witness(mid, &phi, StateId::Custom)?, &psi)?;
        let sol = solver.solve(&build_ppt_relaxation(&e), cfg.solver_tol)?;
        let nonnegative = match sol.status {
            SdpStatus::BelowThreshold => false,
            SdpStatus::Optimal => sol.value >= -cfg.accept_tol,
            // Without convergence only a certified bound may declare nonnegativity.
            SdpStatus::MaxIter | SdpStatus::InfeasibleNumerics => {
                sol.value - sol.gap >= -cfg.accept_tol
            }
        };
        steps.push(BisectionStep { lambda: mid, value: sol.value, status: sol.status, nonnegative });
        if nonnegative {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(PptBound { lambda: hi, steps })
}

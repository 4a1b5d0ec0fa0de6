//! Maximal squared overlap between a target state and the SLOCC orbit of another:
//! `sup |⟨φ|(⊗A_i)ψ⟩|² / ‖(⊗A_i)ψ‖²`.
//!
//! Multi-start alternating maximization with closed-form per-party updates, followed by a
//! trust-region Newton polish of the best restarts. The polish matters for entries whose
//! supremum is only approached by singular operators, where alternating sweeps stall.

mod als;
mod polish;
pub mod reference;
pub(crate) mod table;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{ginibre, rng_stream};
use crate::error::{shape, Error, Result};
use crate::tensor::{CMatrix, LocalOperatorTuple, PureState};

pub use table::{overlap_table, CellValue, OverlapTable, TableSummary};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Relative objective change below which a restart's sweeps stop.
    pub convergence_tol: f64,
    /// `ε`, relative to the mean eigenvalue of the per-party Gram matrix.
    pub regularization: f64,
    pub saturation_threshold: f64,
    pub seed: u64,
    /// Number of best restarts handed to the Newton polish (0 disables it).
    pub polish_restarts: usize,
    pub polish_iterations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            max_sweeps: 2000,
            convergence_tol: 1e-13,
            regularization: 1e-12,
            saturation_threshold: 1.0 - 1e-9,
            seed: 0,
            polish_restarts: 8,
            polish_iterations: 3000,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.restarts == 0 || self.max_sweeps == 0 {
            return bad("restarts and maxSweeps must be positive");
        }
        if !(self.convergence_tol > 0.0) || !(self.regularization > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.saturation_threshold > 0.0 && self.saturation_threshold < 1.0) {
            return bad("saturation threshold must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapResult {
    pub lambda: f64,
    pub argmax: LocalOperatorTuple,
    pub saturated: bool,
    pub per_restart_values: Vec<f64>,
    pub sweeps_used: Vec<usize>,
    /// Whether the sweeps met `convergence_tol` before `max_sweeps`.
    pub converged: Vec<bool>,
    /// Newton iterations spent per restart (0 when not polished).
    pub polish_iterations: Vec<usize>,
    /// Index of the restart that produced `lambda`.
    pub best_restart: usize,
}

/// `|⟨φ|(⊗ops)ψ⟩|² / (‖(⊗ops)ψ‖² ‖φ‖²)`.
pub fn overlap_objective(phi: &PureState, psi: &PureState, ops: &LocalOperatorTuple) -> Result<f64> {
    if phi.dims() != psi.dims() {
        return shape(format!("target dims {:?} vs orbit dims {:?}", phi.dims(), psi.dims()));
    }
    ops.check_dims(psi.dims())?;
    let v = als::objective(phi.amps(), psi.amps(), psi.dims(), ops.ops())?;
    Ok(v / phi.norm_sqr())
}

/// Closed-form maximizer over party `party` with the other operators fixed,
/// returned with unit Frobenius norm.
pub fn per_party_update(
    phi: &PureState,
    psi: &PureState,
    ops: &LocalOperatorTuple,
    party: usize,
    regularization: f64,
) -> Result<CMatrix> {
    if phi.dims() != psi.dims() {
        return shape("target and orbit dims differ");
    }
    ops.check_dims(psi.dims())?;
    if party >= psi.parties() {
        return Err(Error::InvalidParty { party, parties: psi.parties() });
    }
    if !(regularization > 0.0) {
        return Err(Error::InvalidParameter("regularization must be positive".into()));
    }
    let mut ws = als::Workspace::new(psi.dims());
    let mut cur = ops.ops().to_vec();
    ws.update(phi.amps(), psi.amps(), &mut cur, party, regularization)?;
    Ok(cur.swap_remove(party))
}

struct Restart {
    ops: Vec<CMatrix>,
    value: f64,
    sweeps: usize,
    converged: bool,
    polish: usize,
}

fn run_restart(phi: &PureState, psi: &PureState, cfg: &OptimizerConfig, r: usize) -> Result<Restart> {
    let dims = psi.dims();
    let mut rng = rng_stream(cfg.seed, r as u64);
    let mut ops: Vec<CMatrix> = dims.iter().map(|&d| ginibre(d, &mut rng)).collect();
    let mut ws = als::Workspace::new(dims);
    let mut value = als::objective(phi.amps(), psi.amps(), dims, &ops)?;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        for p in 0..dims.len() {
            ws.update(phi.amps(), psi.amps(), &mut ops, p, cfg.regularization)?;
        }
        let next = als::objective(phi.amps(), psi.amps(), dims, &ops)?;
        let change = (next - value).abs();
        value = next;
        if change <= cfg.convergence_tol * value.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    Ok(Restart { ops, value, sweeps, converged, polish: 0 })
}

/// Multi-start maximization of the overlap between `phi` and the orbit of `psi`.
///
/// The result is a lower bound on the supremum. Deterministic for a fixed seed, whether or not
/// restarts execute in parallel.
pub fn maximize_slocc_overlap(
    phi: &PureState,
    psi: &PureState,
    cfg: &OptimizerConfig,
) -> Result<OverlapResult> {
    cfg.validate()?;
    if phi.dims() != psi.dims() {
        return shape(format!("target dims {:?} vs orbit dims {:?}", phi.dims(), psi.dims()));
    }
    let phi = phi.clone().normalize()?;
    let psi = psi.clone().normalize()?;
    let mut runs: Vec<Restart> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(&phi, &psi, cfg, r))
        .collect::<Result<_>>()?;

    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&a, &b| runs[b].value.total_cmp(&runs[a].value).then(a.cmp(&b)));
    order.truncate(cfg.polish_restarts);
    let polished: Vec<(usize, Vec<CMatrix>, f64, usize)> = order
        .par_iter()
        .map(|&r| {
            let (ops, value, its) =
                polish::trust_region_newton(&phi, &psi, &runs[r].ops, cfg.polish_iterations);
            (r, ops, value, its)
        })
        .collect();
    for (r, ops, value, its) in polished {
        runs[r].polish = its;
        if value > runs[r].value {
            runs[r].ops = ops;
            runs[r].value = value;
        }
    }

    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = r;
        }
    }
    let lambda = runs[best].value;
    Ok(OverlapResult {
        lambda,
        argmax: LocalOperatorTuple::new(runs[best].ops.clone())?,
        saturated: lambda >= cfg.saturation_threshold,
        per_restart_values: runs.iter().map(|r| r.value).collect(),
        sweeps_used: runs.iter().map(|r| r.sweeps).collect(),
        converged: runs.iter().map(|r| r.converged).collect(),
        polish_iterations: runs.iter().map(|r| r.polish).collect(),
        best_restart: best,
    })
}

#[cfg(test)]
mod tests;

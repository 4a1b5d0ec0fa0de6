//! Projector witnesses `λ𝟙 − |φ⟩⟨φ|`, their two-copy embeddings `𝒲 ⊗ |ψ*⟩⟨ψ*|`, and the
//! identities connecting the two.
//!
//! Embedded operators are stored in the party-grouped ordering `(A₁A₂)(B₁B₂)…`, so that
//! `|vec A⟩⟩ ⊗ |vec B⟩⟩ ⊗ …` are exactly the product states of that grouping.

use nalgebra::DVector;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{representative, StateId};
use crate::error::{shape, Error, Result};
use crate::overlap::{maximize_slocc_overlap, OptimizerConfig};
use crate::serde_util::vector_pairs;
use crate::tensor::{
    apply_local, conjugate_state, kron, permute_operator, two_copy_permutation, vectorize, CMatrix,
    DensityMatrix, HermitianOperator, LocalOperatorTuple, PureState, C64,
};

/// Slack on the witness verdict: the best overlap found may exceed `λ` by this much.
pub const VERDICT_SLACK: f64 = 1e-8;

fn require_normalized(s: &PureState, what: &str) -> Result<()> {
    let n = s.norm_sqr();
    if (n - 1.0).abs() >= 1e-12 {
        return Err(Error::InvalidParameter(format!("{what} is not normalized (norm^2 = {n})")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SloccWitness {
    pub lambda: f64,
    pub phi: PureState,
    pub matrix: HermitianOperator,
    pub orbit: StateId,
    /// `λ ≥ 1`: the operator is positive semidefinite and detects nothing.
    pub trivial: bool,
}

pub fn build_witness(lambda: f64, phi: &PureState, orbit: StateId) -> Result<SloccWitness> {
    require_normalized(phi, "phi")?;
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be finite".into()));
    }
    let n = phi.total_dim();
    let m = CMatrix::identity(n, n) * C64::new(lambda, 0.0) - HermitianOperator::projector(phi).matrix();
    Ok(SloccWitness {
        lambda,
        phi: phi.clone(),
        matrix: HermitianOperator::from_hermitian_unchecked(m),
        orbit,
        trivial: lambda >= 1.0,
    })
}

#[derive(Debug, Clone)]
pub struct EmbeddedWitness {
    pub base: SloccWitness,
    pub psi_conj: PureState,
    /// Operator in the grouped ordering.
    pub matrix: HermitianOperator,
    /// Dimensions of the grouped parties, `d_i²`.
    pub grouping: Vec<usize>,
}

impl EmbeddedWitness {
    /// The same operator in the copy-major ordering `(A₁B₁…)(A₂B₂…)`, i.e. literally
    /// `𝒲 ⊗ |ψ*⟩⟨ψ*|`.
    pub fn copy_major_matrix(&self) -> CMatrix {
        kron(self.base.matrix.matrix(), HermitianOperator::projector(&self.psi_conj).matrix())
    }
}

pub fn embed(w: &SloccWitness, psi: &PureState) -> Result<EmbeddedWitness> {
    require_normalized(psi, "psi")?;
    if psi.dims() != w.phi.dims() {
        return shape(format!("psi dims {:?} vs witness dims {:?}", psi.dims(), w.phi.dims()));
    }
    let psi_conj = conjugate_state(psi);
    let dims = psi.dims();
    let big = kron(w.matrix.matrix(), HermitianOperator::projector(&psi_conj).matrix());
    let perm = two_copy_permutation(dims, dims)?;
    Ok(EmbeddedWitness {
        base: w.clone(),
        psi_conj,
        matrix: HermitianOperator::from_hermitian_unchecked(permute_operator(&big, &perm)),
        grouping: dims.iter().map(|d| d * d).collect(),
    })
}

/// States whose expectation value `tr(ρH)` can be taken.
pub trait Expectation {
    fn expectation(&self, h: &HermitianOperator) -> Result<f64>;
}

impl Expectation for PureState {
    /// Normalizes implicitly: `⟨s|H|s⟩ / ⟨s|s⟩`.
    fn expectation(&self, h: &HermitianOperator) -> Result<f64> {
        Ok(h.quadratic_form(self)? / self.norm_sqr())
    }
}

impl Expectation for DensityMatrix {
    fn expectation(&self, h: &HermitianOperator) -> Result<f64> {
        if self.base().dim() != h.dim() {
            return shape(format!("state dim {} vs operator dim {}", self.base().dim(), h.dim()));
        }
        let (a, b) = (self.matrix(), h.matrix());
        let tr: C64 = a.iter().zip(b.transpose().iter()).map(|(x, y)| x * y).sum();
        Ok(tr.re)
    }
}

pub fn expectation<S: Expectation>(state: &S, h: &HermitianOperator) -> Result<f64> {
    state.expectation(h)
}

/// `|vec A₁⟩⟩ ⊗ |vec A₂⟩⟩ ⊗ …` in the grouped ordering.
pub fn vectorized_product(ops: &LocalOperatorTuple) -> Result<DVector<C64>> {
    let mut out = DVector::from_element(1, C64::new(1.0, 0.0));
    for a in ops.ops() {
        out = out.kronecker(&vectorize(a)?);
    }
    Ok(out)
}

/// Both sides of `⟨η|𝒲|η⟩ = ⟨⟨A⊗B⊗…| 𝒲⊗|ψ*⟩⟨ψ*| |A⊗B⊗…⟩⟩` for `η = (A⊗B⊗…)ψ`,
/// the left through the local action on the small space, the right through vectorization
/// on the doubled space.
pub fn theorem1_bridge_embedded(e: &EmbeddedWitness, psi: &PureState, ops: &LocalOperatorTuple) -> Result<(f64, f64)> {
    let eta = apply_local(ops, psi)?;
    let lhs = e.base.matrix.quadratic_form(&eta)?;
    let y = vectorized_product(ops)?;
    if y.len() != e.matrix.dim() {
        return shape("operator tuple does not match the embedded witness");
    }
    let rhs = (y.adjoint() * e.matrix.matrix() * &y)[(0, 0)].re;
    Ok((lhs, rhs))
}

pub fn theorem1_bridge(w: &SloccWitness, psi: &PureState, ops: &LocalOperatorTuple) -> Result<(f64, f64)> {
    let e = embed(w, psi)?;
    theorem1_bridge_embedded(&e, psi, ops)
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    /// No orbit state beat `λ` within the search budget.
    Witness { restarts: usize },
    Violated { by: LocalOperatorTuple, overlap: f64 },
    Trivial,
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::Witness { restarts } => format!("no violation found (restarts={restarts})"),
            Verdict::Violated { overlap, .. } => format!("violated: orbit overlap {overlap:.9} exceeds lambda"),
            Verdict::Trivial => "trivial: lambda >= 1, operator is positive semidefinite".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub verdict: Verdict,
    /// Best overlap the optimizer found (absent for trivial witnesses).
    pub best_overlap: Option<f64>,
    pub restarts: usize,
}

pub fn verify_slocc_witness(w: &SloccWitness, cfg: &OptimizerConfig) -> Result<WitnessReport> {
    if w.trivial {
        return Ok(WitnessReport { verdict: Verdict::Trivial, best_overlap: None, restarts: 0 });
    }
    let psi = representative(&w.orbit)?;
    let r = maximize_slocc_overlap(&w.phi, &psi, cfg)?;
    let verdict = if r.lambda <= w.lambda + VERDICT_SLACK {
        Verdict::Witness { restarts: cfg.restarts }
    } else {
        Verdict::Violated { by: r.argmax, overlap: r.lambda }
    };
    Ok(WitnessReport { verdict, best_overlap: Some(r.lambda), restarts: cfg.restarts })
}

/// JSON export; `phi_id` names the projector state when it came from the catalog.
pub fn witness_json(w: &SloccWitness, phi_id: Option<&StateId>, report: &WitnessReport) -> Value {
    let phi = match phi_id {
        Some(id) => json!(id.to_string()),
        None => json!(vector_pairs(w.phi.amps())),
    };
    json!({
        "schemaVersion": crate::overlap::table::SCHEMA_VERSION,
        "lambda": w.lambda,
        "phi": phi,
        "orbit": w.orbit.to_string(),
        "verdict": report.verdict,
        "diagnostics": {
            "label": report.verdict.label(),
            "bestOverlap": report.best_overlap,
            "restarts": report.restarts,
            "minEigenvalue": w.lambda - 1.0,
        },
    })
}

/// `σ = (1−p)/((D₁−1)(D₂−1)) (𝟙−|φ⟩⟨φ|)⊗(𝟙−|ψ*⟩⟨ψ*|) + p |φ⟩⟨φ|⊗|ψ*⟩⟨ψ*|`, with `D₁, D₂`
/// the total dimensions of the two factors (so that the trace is one), regrouped party-wise.
pub fn sigma_family(phi: &PureState, psi: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    require_normalized(phi, "phi")?;
    require_normalized(psi, "psi")?;
    let (d1, d2) = (phi.total_dim(), psi.total_dim());
    let pp = HermitianOperator::projector(phi).into_matrix();
    let qq = HermitianOperator::projector(&conjugate_state(psi)).into_matrix();
    let cp = CMatrix::identity(d1, d1) - &pp;
    let cq = CMatrix::identity(d2, d2) - &qq;
    let w = (1.0 - p) / ((d1 - 1) as f64 * (d2 - 1) as f64);
    let sigma = kron(&cp, &cq) * C64::new(w, 0.0) + kron(&pp, &qq) * C64::new(p, 0.0);
    let perm = two_copy_permutation(phi.dims(), psi.dims())?;
    let grouped: Vec<usize> = phi.dims().iter().zip(psi.dims()).map(|(a, b)| a * b).collect();
    DensityMatrix::new(HermitianOperator::from_hermitian_unchecked(permute_operator(&sigma, &perm)), grouped)
}

/// Bipartite case: `φ` on `d₁×d₁`, `ψ` on `d₂×d₂`; the result lives on `d₁d₂ × d₁d₂`.
pub fn bestate_sigma(phi: &PureState, psi: &PureState, p: f64) -> Result<DensityMatrix> {
    let square_bipartite = |s: &PureState| s.parties() == 2 && s.dims()[0] == s.dims()[1];
    if !square_bipartite(phi) || !square_bipartite(psi) {
        return shape("phi and psi must be bipartite with equal local dimensions");
    }
    sigma_family(phi, psi, p)
}

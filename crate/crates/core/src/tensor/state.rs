use serde::{Deserialize, Serialize};

use super::{C64, ZERO};
use crate::error::{Error, Result};

/// Amplitude tensor of an `N`-party pure state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<C64>,
    normalized: bool,
}

impl PureState {
    /// Wraps raw amplitudes; the result is flagged unnormalized.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::Shape(format!("party dimensions must be >= 2, got {dims:?}")));
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::Shape(format!(
                "{} amplitudes for dims {dims:?} (expected {total})",
                amps.len()
            )));
        }
        Ok(Self { dims, amps, normalized: false })
    }

    /// Like [`PureState::new`] but insists the amplitudes already have unit norm.
    pub fn new_normalized(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let mut s = Self::new(dims, amps)?;
        let n = s.norm_sqr();
        if (n - 1.0).abs() >= 1e-12 {
            return Err(Error::NotNormalized(n));
        }
        s.normalized = true;
        Ok(s)
    }

    /// Real amplitudes, convenient for catalog patterns.
    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::new(dims, amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis ket `|digits⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(&k, &d)| k >= d) {
            return Err(Error::Shape(format!("basis digits {digits:?} invalid for {dims:?}")));
        }
        let total: usize = dims.iter().product();
        let mut amps = vec![ZERO; total];
        let idx = digits.iter().zip(&dims).fold(0, |acc, (&k, &d)| acc * d + k);
        amps[idx] = C64::new(1.0, 0.0);
        let mut s = Self::new(dims, amps)?;
        s.normalized = true;
        Ok(s)
    }

    /// Rescales to unit norm.
    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateOperator);
        }
        let s = 1.0 / n.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
        self.normalized = true;
        Ok(self)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn amps(&self) -> &[C64] {
        &self.amps
    }
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
    pub fn parties(&self) -> usize {
        self.dims.len()
    }
    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::Shape(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Squared overlap `|⟨self|other⟩|²` divided by both norms.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        let ip = self.inner(other)?;
        Ok(ip.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, amps: Vec<C64>, normalized: bool) -> Self {
        Self { dims, amps, normalized }
    }
}

/// Entrywise complex conjugation in the product basis.
pub fn conjugate_state(state: &PureState) -> PureState {
    PureState {
        dims: state.dims.clone(),
        amps: state.amps.iter().map(|a| a.conj()).collect(),
        normalized: state.normalized,
    }
}

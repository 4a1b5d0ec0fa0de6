use nalgebra::SymmetricEigen;


use super::{partial_transpose_matrix, CMatrix, PureState, C64};
use crate::error::{shape, Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-10;

fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Hermitian operator on a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity (1e-12, relative to the largest entry when that exceeds one)
    /// and stores the exactly symmetrized matrix.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return shape("Hermitian operator must be square");
        }
        let scale = entries.iter().fold(1.0f64, |a, z| a.max(z.norm()));
        let dev = hermitian_deviation(&entries);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::from_hermitian_unchecked(entries))
    }

    /// Symmetrizes without validation; for operators Hermitian by construction.
    pub(crate) fn from_hermitian_unchecked(entries: CMatrix) -> Self {
        let sym = (&entries + entries.adjoint()) * C64::new(0.5, 0.0);
        Self { entries: sym }
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: CMatrix::identity(dim, dim) }
    }

    /// `|s⟩⟨s|` (using the amplitudes as given).
    pub fn projector(s: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(s.amps());
        Self::from_hermitian_unchecked(&v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }
    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    /// `true` when every entry is real to 1e-15.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im.abs() <= 1e-15)
    }

    pub fn eig(&self) -> HermitianEigen {
        let dec = SymmetricEigen::new(self.entries.clone());
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]));
        let values = order.iter().map(|&k| dec.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| dec.eigenvectors[(i, order[j])]);
        HermitianEigen { values, vectors }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().values[0]
    }

    /// `⟨s|H|s⟩` for a (not necessarily normalized) state.
    pub fn quadratic_form(&self, s: &PureState) -> Result<f64> {
        if s.total_dim() != self.dim() {
            return shape(format!("state dim {} vs operator dim {}", s.total_dim(), self.dim()));
        }
        let v = nalgebra::DVector::from_column_slice(s.amps());
        Ok((v.adjoint() * &self.entries * &v)[(0, 0)].re)
    }
}

/// Spectral decomposition, eigenvalues ascending, eigenvectors in columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Validating entry point: rejects non-Hermitian input.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEigen> {
    Ok(HermitianOperator::new(m.clone())?.eig())
}

/// PSD, unit-trace operator with its party layout.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    base: HermitianOperator,
    party_dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(base: HermitianOperator, party_dims: Vec<usize>) -> Result<Self> {
        if party_dims.iter().product::<usize>() != base.dim() {
            return shape(format!("party dims {party_dims:?} vs operator dim {}", base.dim()));
        }
        let tr = base.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = base.min_eigenvalue();
        if min < -DENSITY_TOL {
            return Err(Error::NotDensity(format!("min eigenvalue {min:.3e}")));
        }
        Ok(Self { base, party_dims })
    }

    pub fn from_pure(s: &PureState) -> Result<Self> {
        let s = s.clone().normalize()?;
        Ok(Self { base: HermitianOperator::projector(&s), party_dims: s.dims().to_vec() })
    }

    pub fn maximally_mixed(party_dims: Vec<usize>) -> Self {
        let n: usize = party_dims.iter().product();
        let m = CMatrix::identity(n, n) * C64::new(1.0 / n as f64, 0.0);
        Self { base: HermitianOperator { entries: m }, party_dims }
    }

    pub fn base(&self) -> &HermitianOperator {
        &self.base
    }
    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }
    pub fn party_dims(&self) -> &[usize] {
        &self.party_dims
    }

    /// Smallest eigenvalue over all single-party partial transposes.
    pub fn min_pt_eigenvalue(&self) -> Result<f64> {
        let mut min = f64::INFINITY;
        for p in 0..self.party_dims.len() {
            let pt = partial_transpose_matrix(self.matrix(), &self.party_dims, p)?;
            min = min.min(HermitianOperator::from_hermitian_unchecked(pt).min_eigenvalue());
        }
        Ok(min)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{partial_transpose, ONE, ZERO};

    fn bell() -> PureState {
        let h = C64::new(1.0 / 2f64.sqrt(), 0.0);
        PureState::new(vec![2, 2], vec![h, ZERO, ZERO, h]).unwrap()
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn identity_spectrum() {
        let e = HermitianOperator::identity(5).eig();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn rank_one_deflation_spectrum() {
        let phi = bell();
        let m = CMatrix::identity(4, 4) * C64::new(0.3, 0.0) - HermitianOperator::projector(&phi).matrix();
        let e = hermitian_eig(&m).unwrap();
        assert!((e.values[0] + 0.7).abs() < 1e-14);
        assert!(e.values[1..].iter().all(|&v| (v - 0.3).abs() < 1e-14));
    }

    #[test]
    fn bell_partial_transpose_has_negative_half() {
        let rho = DensityMatrix::from_pure(&bell()).unwrap();
        let pt = partial_transpose(&rho, 1).unwrap();
        let e = pt.eig();
        assert!((e.values[0] + 0.5).abs() < 1e-14);
        assert!(e.values[1..].iter().all(|&v| (v - 0.5).abs() < 1e-14));
    }

    #[test]
    fn diagonal_state_is_pt_invariant() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.1, 0.0),
            C64::new(0.2, 0.0),
            C64::new(0.3, 0.0),
            C64::new(0.4, 0.0),
        ]));
        let rho = DensityMatrix::new(HermitianOperator::new(m.clone()).unwrap(), vec![2, 2]).unwrap();
        assert_eq!(partial_transpose(&rho, 0).unwrap().matrix(), &m);
    }

    #[test]
    fn density_validation() {
        let m = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(HermitianOperator::new(m).unwrap(), vec![2]).is_err());
        let bad = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.5, 0.0),
            C64::new(-0.5, 0.0),
        ]));
        assert!(DensityMatrix::new(HermitianOperator::new(bad).unwrap(), vec![2]).is_err());
    }
}

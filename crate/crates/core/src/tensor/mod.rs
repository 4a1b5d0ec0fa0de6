//! Dense complex multilinear algebra over product bases.
//!
//! Index convention everywhere: row-major product basis, party 0 slowest.

mod hermitian;
pub(crate) mod ops;
mod state;

pub use hermitian::{hermitian_eig, DensityMatrix, HermitianEigen, HermitianOperator};
pub use ops::{
    apply_local, kron, matricize, partial_transpose, partial_transpose_matrix, permute_operator,
    strides, two_copy_permutation, vectorize, LocalOperatorTuple,
};
pub use state::{conjugate_state, PureState};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
#[cfg(test)]
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

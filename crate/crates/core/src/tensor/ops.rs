use serde::ser::{Serialize, SerializeSeq, Serializer};

use super::{CMatrix, CVector, PureState, C64, ZERO};
use crate::error::{shape, Error, Result};

/// One square matrix per party. Members may be singular.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperatorTuple {
    ops: Vec<CMatrix>,
}

impl LocalOperatorTuple {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return shape("empty operator tuple");
        }
        for (i, m) in ops.iter().enumerate() {
            if !m.is_square() {
                return shape(format!("operator {i} is {}x{}", m.nrows(), m.ncols()));
            }
        }
        Ok(Self { ops })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self { ops: dims.iter().map(|&d| CMatrix::identity(d, d)).collect() }
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }
    pub fn into_ops(self) -> Vec<CMatrix> {
        self.ops
    }
    pub fn dims(&self) -> Vec<usize> {
        self.ops.iter().map(|m| m.nrows()).collect()
    }
    pub fn parties(&self) -> usize {
        self.ops.len()
    }

    /// Multiplies operator `i` by `c[i]`.
    pub fn rescaled(&self, c: &[C64]) -> Result<Self> {
        if c.len() != self.ops.len() {
            return shape("scale count differs from party count");
        }
        Ok(Self { ops: self.ops.iter().zip(c).map(|(m, &s)| m * s).collect() })
    }

    pub(crate) fn check_dims(&self, dims: &[usize]) -> Result<()> {
        if self.dims() != dims {
            return shape(format!("operators act on {:?}, state has {dims:?}", self.dims()));
        }
        Ok(())
    }
}

impl Serialize for LocalOperatorTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.ops.len()))?;
        for m in &self.ops {
            seq.serialize_element(&crate::serde_util::matrix_rows(m))?;
        }
        seq.end()
    }
}

/// Suffix products: `strides[p]` is the index step of party `p`.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        s[p] = s[p + 1] * dims[p + 1];
    }
    s
}

/// Contracts `op` into axis `party` of `src`, writing into `dst`.
pub(crate) fn apply_axis(src: &[C64], dims: &[usize], party: usize, op: &CMatrix, dst: &mut [C64]) {
    let d = dims[party];
    let inner: usize = dims[party + 1..].iter().product();
    let outer = src.len() / (d * inner);
    for o in 0..outer {
        let base = o * d * inner;
        for i in 0..inner {
            for r in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += op[(r, k)] * src[base + k * inner + i];
                }
                dst[base + r * inner + i] = acc;
            }
        }
    }
}

/// Applies `ops` to every party except `skip` (which may be out of range to apply all).
pub(crate) fn apply_except(ops: &[CMatrix], dims: &[usize], amps: &[C64], skip: &[usize]) -> Vec<C64> {
    let mut cur = amps.to_vec();
    let mut buf = vec![ZERO; amps.len()];
    for (p, op) in ops.iter().enumerate() {
        if skip.contains(&p) {
            continue;
        }
        apply_axis(&cur, dims, p, op, &mut buf);
        std::mem::swap(&mut cur, &mut buf);
    }
    cur
}

/// `(⊗ ops) |state⟩`, unnormalized.
pub fn apply_local(ops: &LocalOperatorTuple, state: &PureState) -> Result<PureState> {
    ops.check_dims(state.dims())?;
    let amps = apply_except(ops.ops(), state.dims(), state.amps(), &[]);
    Ok(PureState::from_parts_unchecked(state.dims().to_vec(), amps, false))
}

/// Flattening with `party` as row index and the remaining parties (in order) as columns.
pub fn matricize(amps: &[C64], dims: &[usize], party: usize) -> Result<CMatrix> {
    if party >= dims.len() {
        return Err(Error::InvalidParty { party, parties: dims.len() });
    }
    if amps.len() != dims.iter().product::<usize>() {
        return shape("amplitude count does not match dims");
    }
    let d = dims[party];
    let inner: usize = dims[party + 1..].iter().product();
    let cols = amps.len() / d;
    let mut m = CMatrix::zeros(d, cols);
    for (idx, a) in amps.iter().enumerate() {
        let outer = idx / (d * inner);
        let r = (idx / inner) % d;
        let i = idx % inner;
        m[(r, outer * inner + i)] = *a;
    }
    Ok(m)
}

/// `|Y⟩⟩ = Σ_ij Y_ij |ij⟩`, composite index `i·d + j`.
pub fn vectorize(op: &CMatrix) -> Result<CVector> {
    if !op.is_square() {
        return shape("vectorize expects a square matrix");
    }
    let d = op.nrows();
    Ok(CVector::from_fn(d * d, |k, _| op[(k / d, k % d)]))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Transposes the factor `party` of an operator on `⊗ dims`.
pub fn partial_transpose_matrix(m: &CMatrix, dims: &[usize], party: usize) -> Result<CMatrix> {
    if party >= dims.len() {
        return Err(Error::InvalidParty { party, parties: dims.len() });
    }
    let n: usize = dims.iter().product();
    if m.nrows() != n || m.ncols() != n {
        return shape(format!("operator is {}x{}, dims {dims:?}", m.nrows(), m.ncols()));
    }
    let st = strides(dims)[party];
    let d = dims[party];
    let mut out = CMatrix::zeros(n, n);
    for b in 0..n {
        let bp = (b / st) % d;
        for a in 0..n {
            let ap = (a / st) % d;
            let a2 = a - ap * st + bp * st;
            let b2 = b - bp * st + ap * st;
            out[(a2, b2)] = m[(a, b)];
        }
    }
    Ok(out)
}

pub fn partial_transpose(
    rho: &super::DensityMatrix,
    party: usize,
) -> Result<super::HermitianOperator> {
    let m = partial_transpose_matrix(rho.matrix(), rho.party_dims(), party)?;
    Ok(super::HermitianOperator::from_hermitian_unchecked(m))
}

/// Conjugates `m` by the index permutation: `out[i, j] = m[perm[i], perm[j]]`.
pub fn permute_operator(m: &CMatrix, perm: &[usize]) -> CMatrix {
    let n = perm.len();
    CMatrix::from_fn(n, n, |i, j| m[(perm[i], perm[j])])
}

/// Maps indices of the grouped ordering `(a₁b₁)(a₂b₂)…` to the copy-major ordering
/// `(a₁a₂…)(b₁b₂…)` of `H_a ⊗ H_b`.
pub fn two_copy_permutation(dims_a: &[usize], dims_b: &[usize]) -> Result<Vec<usize>> {
    if dims_a.len() != dims_b.len() {
        return shape("copies must have the same number of parties");
    }
    let nb: usize = dims_b.iter().product();
    let grouped: Vec<usize> = dims_a.iter().zip(dims_b).map(|(a, b)| a * b).collect();
    let total: usize = grouped.iter().product();
    let sa = strides(dims_a);
    let sb = strides(dims_b);
    let sg = strides(&grouped);
    Ok((0..total)
        .map(|g| {
            let (mut ia, mut ib) = (0, 0);
            for p in 0..grouped.len() {
                let digit = (g / sg[p]) % grouped[p];
                ia += (digit / dims_b[p]) * sa[p];
                ib += (digit % dims_b[p]) * sb[p];
            }
            ia * nb + ib
        })
        .collect())
}

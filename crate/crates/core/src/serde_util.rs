//! JSON payload helpers: complex entries are `[re, im]` pairs.

use crate::tensor::{CMatrix, C64};

pub fn complex_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex_pair(m[(i, j)])).collect()).collect()
}

pub fn vector_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|&z| complex_pair(z)).collect()
}

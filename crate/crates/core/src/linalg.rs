//! Dense decompositions backed by faer.

use faer::{Mat, Side};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn to_faer(m: &DMatrix<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn to_nalgebra(m: faer::MatRef<'_, Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let mut s = to_faer(m)
        .singular_values()
        .map_err(|e| Error::InvalidArgument(format!("singular value decomposition failed: {e:?}")))?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// `m = U diag(σ) V*` with `σ` descending.
pub struct Svd {
    pub u: DMatrix<Complex64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<Complex64>,
}

pub fn svd(m: &DMatrix<Complex64>) -> Result<Svd> {
    let d = to_faer(m)
        .svd()
        .map_err(|e| Error::InvalidArgument(format!("singular value decomposition failed: {e:?}")))?;
    let s = d.S().column_vector();
    let sigma: Vec<f64> = (0..s.nrows()).map(|k| s[k].re).collect();
    let u = to_nalgebra(d.U());
    let v = to_nalgebra(d.V());
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    Ok(Svd {
        u: DMatrix::from_fn(u.nrows(), order.len(), |i, k| u[(i, order[k])]),
        sigma: order.iter().map(|&k| sigma[k]).collect(),
        v: DMatrix::from_fn(v.nrows(), order.len(), |i, k| v[(i, order[k])]),
    })
}

/// Eigenvalues of a Hermitian matrix, read from its lower triangle.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    to_faer(m)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::InvalidArgument(format!("eigendecomposition failed: {e:?}")))
}

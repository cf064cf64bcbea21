//! Grounding matrices: orthonormal bases of the complement of the all-ones
//! vector.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// The `(n-1) x n` grounding matrix `Q` with `Q 1 = 0`, `Q Q^T = I` and
/// `Q^T Q = I - 1 1^T / n`.
///
/// Rows are the Helmert contrasts, i.e. rows 2..n of the orthogonal matrix
/// obtained by Gram-Schmidt on `1, e_1, e_2, ...`. Row `k` (zero based) is
/// `(1, ..., 1, -(k+1), 0, ..., 0) / sqrt((k+1)(k+2))`, so the first entry
/// of every row is positive.
pub fn grounding_matrix(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    Ok(DMatrix::from_fn(n - 1, n, |k, j| {
        let m = (k + 1) as f64;
        let scale = (m * (m + 1.0)).sqrt();
        if j <= k {
            1.0 / scale
        } else if j == k + 1 {
            -m / scale
        } else {
            0.0
        }
    }))
}

/// A second, unrelated grounding matrix built from a Householder reflection
/// that maps `e_1` onto `1 / sqrt(n)`. Used to check that results depend on
/// `Q` only through the projector `Q^T Q`.
pub fn householder_grounding_matrix(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let s = 1.0 / (n as f64).sqrt();
    // v = e_1 - 1/sqrt(n); H = I - 2 v v^T / (v^T v) is symmetric orthogonal
    // with H e_1 = 1/sqrt(n), so rows 2..n of H are orthogonal to 1.
    let mut v = vec![-s; n];
    v[0] += 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    Ok(DMatrix::from_fn(n - 1, n, |r, j| {
        let i = r + 1;
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - 2.0 * v[i] * v[j] / vv
    }))
}

/// Largest violation of the three defining identities, in max-abs norm:
/// `(Q 1, Q Q^T - I, Q^T Q - (I - 1 1^T / n))`.
pub fn grounding_residuals(q: &DMatrix<f64>) -> (f64, f64, f64) {
    let n = q.ncols();
    let ones = DMatrix::from_element(n, 1, 1.0);
    let null = (q * &ones).amax();
    let orth = (q * q.transpose() - DMatrix::identity(n - 1, n - 1)).amax();
    let centering = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    let proj = (q.transpose() * q - centering).amax();
    (null, orth, proj)
}

//! Dense solvers for the continuous Lyapunov equation `A X + X A^T = C`.
//!
//! Two independent routes are provided. [`solve_kronecker`] vectorizes the
//! equation into `(I (x) A + A (x) I) vec(X) = vec(C)` and solves it with a
//! dense LU factorization; it costs O(n^6) and serves as the reference.
//! [`solve_schur`] is the Bartels-Stewart method on the complex Schur form
//! and costs O(n^3).

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

/// Which solver to use for the Lyapunov equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LyapunovMethod {
    #[default]
    Schur,
    Kronecker,
}

pub fn solve(a: &DMatrix<f64>, c: &DMatrix<f64>, method: LyapunovMethod) -> Result<DMatrix<f64>> {
    match method {
        LyapunovMethod::Schur => solve_schur(a, c),
        LyapunovMethod::Kronecker => solve_kronecker(a, c),
    }
}

fn check_shapes(a: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<usize> {
    let n = a.nrows();
    if a.ncols() != n || c.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "Lyapunov equation needs square A and C of equal size, got {:?} and {:?}",
            a.shape(),
            c.shape()
        )));
    }
    Ok(n)
}

/// Relative tolerance below which `lambda_i + conj(lambda_j)` counts as zero.
const PAIRING_TOL: f64 = 1e-13;

/// Bartels-Stewart: `A = U T U^*` with `T` upper triangular, then
/// `T Y + Y T^* = U^* C U` is solved column by column from the right and
/// `X = U Y U^*`.
pub fn solve_schur(a: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = check_shapes(a, c)?;
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let scale = a.amax().max(f64::MIN_POSITIVE);
    let ac: DMatrix<Complex<f64>> = a.map(|x| Complex::new(x, 0.0));
    // QR iterations can stall at machine precision on clustered spectra; the
    // caller's residual check guards the looser deflation thresholds
    let schur = [1.0, 16.0, 256.0, 4096.0]
        .into_iter()
        .find_map(|k| ac.clone().try_schur(k * f64::EPSILON, 20_000))
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (u, t) = schur.unpack();
    let cc: DMatrix<Complex<f64>> = c.map(|x| Complex::new(x, 0.0));
    let rhs = u.adjoint() * cc * &u;

    let mut y = DMatrix::<Complex<f64>>::zeros(n, n);
    for j in (0..n).rev() {
        // (T + conj(t_jj) I) y_j = rhs_j - sum_{k>j} conj(t_jk) y_k
        let mut b = rhs.column(j).into_owned();
        for k in j + 1..n {
            let f = t[(j, k)].conj();
            if f != Complex::new(0.0, 0.0) {
                b.axpy(-f, &y.column(k), Complex::new(1.0, 0.0));
            }
        }
        let shift = t[(j, j)].conj();
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= t[(i, k)] * y[(k, j)];
            }
            let d = t[(i, i)] + shift;
            if d.norm() <= PAIRING_TOL * scale {
                return Err(Error::LyapunovSingular {
                    lambda_i: format!("{}", t[(i, i)]),
                    lambda_j: format!("{}", t[(j, j)]),
                    sum: d.norm(),
                });
            }
            y[(i, j)] = s / d;
        }
    }
    let x = &u * y * u.adjoint();
    Ok(x.map(|z| z.re))
}

/// Reference solve via the Kronecker-vectorized linear system. Column-major
/// `vec` gives `vec(A X) = (I (x) A) vec(X)` and `vec(X A^T) = (A (x) I) vec(X)`.
pub fn solve_kronecker(a: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = check_shapes(a, c)?;
    let eye = DMatrix::<f64>::identity(n, n);
    let system = eye.kronecker(a) + a.kronecker(&eye);
    let rhs = DMatrix::from_column_slice(n * n, 1, c.as_slice());
    let lu = system.lu();
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::singular("Kronecker-vectorized Lyapunov system"))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::singular("Kronecker-vectorized Lyapunov system"));
    }
    Ok(DMatrix::from_column_slice(n, n, sol.as_slice()))
}

/// Frobenius norm of `A X + X A^T - C`.
pub fn residual(a: &DMatrix<f64>, x: &DMatrix<f64>, c: &DMatrix<f64>) -> f64 {
    (a * x + x * a.transpose() - c).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stable(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        // diagonally dominant with positive diagonal: eigenvalues in the right half plane
        let mut a: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        for i in 0..n {
            let off: f64 = a.row(i).iter().map(|v: &f64| v.abs()).sum();
            a[(i, i)] = off + 0.5;
        }
        a
    }

    #[test]
    fn scalar_case() {
        let a = DMatrix::from_element(1, 1, 2.0);
        let c = DMatrix::from_element(1, 1, 1.0);
        for m in [LyapunovMethod::Schur, LyapunovMethod::Kronecker] {
            let x = solve(&a, &c, m).unwrap();
            assert!((x[(0, 0)] - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn routes_agree_on_nonnormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 5, 9, 14] {
            let a = stable(n, &mut rng);
            let c = DMatrix::identity(n, n);
            let x1 = solve_schur(&a, &c).unwrap();
            let x2 = solve_kronecker(&a, &c).unwrap();
            assert!((&x1 - &x2).amax() < 1e-10, "n={n}");
            assert!(residual(&a, &x1, &c) < 1e-10);
        }
    }

    #[test]
    fn rotation_block_needs_complex_schur() {
        // eigenvalues 1 +- 3i
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 3.0, -3.0, 1.0]);
        let c = DMatrix::identity(2, 2);
        let x = solve_schur(&a, &c).unwrap();
        assert!(residual(&a, &x, &c) < 1e-12);
        assert!((x - DMatrix::identity(2, 2) * 0.5).amax() < 1e-12);
    }

    #[test]
    fn singular_pairing_detected() {
        // eigenvalues +1 and -1 pair to zero
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let c = DMatrix::identity(2, 2);
        assert!(matches!(solve_schur(&a, &c), Err(Error::LyapunovSingular { .. })));
        assert!(solve_kronecker(&a, &c).is_err());
    }
}

//! Dense symmetric-matrix kernels: cyclic Jacobi eigendecomposition and
//! spectral matrix functions (exp, log, sqrt, inverse sqrt).
//!
//! Matrices are stored row-major in flat slices of length `n * n`. Sizes in
//! this crate are tiny (n <= ~10), where Jacobi converges in a handful of
//! sweeps and delivers machine-precision, orthogonal eigenvectors.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scalar function applied to the eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFn {
    Sqrt,
    InvSqrt,
    Exp,
    Log,
}

/// Returns the n-by-n identity.
pub(crate) fn identity<T: Real>(n: usize) -> Vec<T> {
    let mut m = vec![T::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = T::one();
    }
    m
}

/// C = A * B for row-major n-by-n matrices.
pub(crate) fn mat_mul<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let mut c = vec![T::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == T::zero() {
                continue;
            }
            for j in 0..n {
                c[i * n + j] = c[i * n + j] + aik * b[k * n + j];
            }
        }
    }
    c
}

/// (A + A^T) / 2.
pub(crate) fn symmetrize<T: Real>(a: &[T], n: usize) -> Vec<T> {
    let mut s = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = (a[i * n + j] + a[j * n + i]) * T::half();
        }
    }
    s
}

/// Frobenius inner product of two matrices, sum_ij A_ij B_ij.
pub(crate) fn frobenius_dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b.iter()).map(|(&x, &y)| x * y).sum()
}

/// Max-norm asymmetry |A - A^T|_inf relative to |A|_inf; used by validation.
pub(crate) fn asymmetry<T: Real>(a: &[T], n: usize) -> (T, T) {
    let mut asym = T::zero();
    let mut scale = T::zero();
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((a[i * n + j] - a[j * n + i]).abs());
            scale = scale.max(a[i * n + j].abs());
        }
    }
    (asym, scale)
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors stored column-wise
/// in a row-major n-by-n matrix Q such that A = Q diag(w) Q^T. The input is
/// symmetrized before iterating so 1-ulp asymmetry from upstream arithmetic
/// is tolerated.
pub(crate) fn sym_eigen<T: Real>(a: &[T], n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if a.len() != n * n {
        return Err(Error::Usage(format!(
            "sym_eigen: expected {}x{} matrix, got {} entries",
            n,
            n,
            a.len()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("sym_eigen: non-finite matrix entry".into()));
    }

    let mut m = symmetrize(a, n);
    let mut q = identity::<T>(n);
    if n == 1 {
        return Ok((vec![m[0]], q));
    }

    let off = |m: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + m[i * n + j] * m[i * n + j];
            }
        }
        s
    };
    let norm2 = frobenius_dot(&m, &m);
    let tol = T::epsilon() * T::epsilon() * norm2.max(T::min_positive_value());

    let max_sweeps = 30;
    for _ in 0..max_sweeps {
        if off(&m) <= tol {
            let w = (0..n).map(|i| m[i * n + i]).collect();
            return Ok((w, q));
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apq = m[p * n + r];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[r * n + r];
                // Stable rotation: t = sgn(theta)/(|theta| + sqrt(theta^2+1))
                let theta = (aqq - app) / (T::two() * apq);
                let t = {
                    let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                    if theta >= T::zero() {
                        T::one() / denom
                    } else {
                        -T::one() / denom
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + r];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + r] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[r * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[r * n + k] = s * mpk + c * mqk;
                }
                m[p * n + r] = T::zero();
                m[r * n + p] = T::zero();
                for k in 0..n {
                    let qkp = q[k * n + p];
                    let qkq = q[k * n + r];
                    q[k * n + p] = c * qkp - s * qkq;
                    q[k * n + r] = s * qkp + c * qkq;
                }
            }
        }
    }
    if off(&m) <= tol * T::of(1e4) {
        let w = (0..n).map(|i| m[i * n + i]).collect();
        return Ok((w, q));
    }
    Err(Error::Numeric(format!(
        "sym_eigen: Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {:e})",
        off(&m).sqrt()
    )))
}

/// Applies `f` to the spectrum of symmetric `a`: Q f(diag(w)) Q^T.
///
/// `Sqrt`, `InvSqrt` and `Log` require a positive definite input.
pub fn sym_matrix_function<T: Real>(a: &[T], n: usize, f: MatrixFn) -> Result<Vec<T>> {
    let (w, q) = sym_eigen(a, n)?;
    if matches!(f, MatrixFn::Sqrt | MatrixFn::InvSqrt | MatrixFn::Log) {
        if let Some(min) = w.iter().cloned().reduce(T::min) {
            if min <= T::zero() {
                return Err(Error::Domain(format!(
                    "matrix function {:?} requires a positive definite input (min eigenvalue {:e})",
                    f, min
                )));
            }
        }
    }
    let fw: Vec<T> = w
        .iter()
        .map(|&lam| match f {
            MatrixFn::Sqrt => lam.sqrt(),
            MatrixFn::InvSqrt => T::one() / lam.sqrt(),
            MatrixFn::Exp => lam.exp(),
            MatrixFn::Log => lam.ln(),
        })
        .collect();
    if fw.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric(format!(
            "matrix function {:?} produced non-finite eigenvalues",
            f
        )));
    }

    // Q diag(fw) Q^T, accumulated column-by-column.
    let mut out = vec![T::zero(); n * n];
    for k in 0..n {
        let fk = fw[k];
        for i in 0..n {
            let qik = q[i * n + k];
            for j in 0..n {
                out[i * n + j] = out[i * n + j] + fk * qik * q[j * n + k];
            }
        }
    }
    Ok(symmetrize(&out, n))
}

/// Smallest eigenvalue of a symmetric matrix.
pub(crate) fn min_eigenvalue<T: Real>(a: &[T], n: usize) -> Result<T> {
    let (w, _) = sym_eigen(a, n)?;
    Ok(w.into_iter().reduce(T::min).expect("n >= 1"))
}

/// A^{1/2} and A^{-1/2} from a single eigendecomposition; A must be positive
/// definite.
pub(crate) fn sqrt_and_inv_sqrt<T: Real>(a: &[T], n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let (w, q) = sym_eigen(a, n)?;
    if let Some(&min) = w
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"))
    {
        if min <= T::zero() {
            return Err(Error::Domain(format!(
                "matrix square root requires a positive definite input (min eigenvalue {min:e})"
            )));
        }
    }
    let mut s = vec![T::zero(); n * n];
    let mut inv = vec![T::zero(); n * n];
    for k in 0..n {
        let r = w[k].sqrt();
        let ir = T::one() / r;
        for i in 0..n {
            let qik = q[i * n + k];
            for j in 0..n {
                let qq = qik * q[j * n + k];
                s[i * n + j] = s[i * n + j] + r * qq;
                inv[i * n + j] = inv[i * n + j] + ir * qq;
            }
        }
    }
    Ok((symmetrize(&s, n), symmetrize(&inv, n)))
}

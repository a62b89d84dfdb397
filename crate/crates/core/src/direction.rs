//! Steepest-descent direction subproblem.
//!
//! At a point p with Riemannian gradients g_1, ..., g_m, the direction is the
//! unique minimizer of
//!
//! ```text
//!     min_{v in T_pM}  max_i <g_i, v>_p + (1/2) |v|_p^2
//! ```
//!
//! whose solution is v = -sum_i alpha_i g_i for simplex weights alpha, i.e.
//! minus the minimum-norm point of the convex hull of the gradients under
//! the metric at p. The solver works entirely on the m-by-m Gram matrix
//! Q_ij = <g_i, g_j>_p: `solve_direction` runs Wolfe's minimum-norm-point
//! algorithm (finite termination, machine precision at these sizes), and
//! `oracle_direction` is an independent verifier that enumerates every
//! support set and solves the equality-constrained face problems directly.

use crate::error::{Error, Result};
use crate::geometry::{symmat, ManifoldDescriptor, Point, Tangent};
use crate::scalar::Real;

/// Relative duality-gap tolerance for the minimum-norm-point iteration.
const MNP_GAP_RTOL: f64 = 1e-12;

/// Relative tolerance for the active-set membership test.
const ACTIVE_SET_RTOL: f64 = 1e-9;

/// Solution of the direction subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionResult<T> {
    /// The steepest-descent direction v(p).
    pub v: Tangent<T>,
    /// Simplex weights with v = -sum_i alpha_i g_i; zero off the support.
    pub alpha: Vec<T>,
    /// Optimal value of the subproblem; equals -|v|^2/2 at the solution.
    pub theta: T,
    /// Indices whose <g_i, v> ties the maximum within tolerance.
    pub active_set: Vec<usize>,
    /// |v|_p, the criticality residual.
    pub criticality: T,
}

/// True when the residual |v(p)|_p is within `eps` of zero, the numerical
/// surrogate for Pareto criticality.
pub fn is_pareto_critical<T: Real>(result: &DirectionResult<T>, eps: T) -> bool {
    result.criticality <= eps
}

fn check_gradients<T: Real>(grads: &[Tangent<T>]) -> Result<()> {
    if grads.is_empty() {
        return Err(Error::Usage(
            "direction subproblem needs at least one gradient".into(),
        ));
    }
    for (i, g) in grads.iter().enumerate() {
        if g.coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!(
                "gradient {i} has non-finite entries"
            )));
        }
    }
    Ok(())
}

/// Q_ij = <g_i, g_j>_p.
fn gram_matrix<T: Real>(
    grads: &[Tangent<T>],
    p: &Point<T>,
    m_desc: &ManifoldDescriptor,
) -> Result<Vec<T>> {
    let m = grads.len();
    let mut q = vec![T::zero(); m * m];
    for i in 0..m {
        for j in i..m {
            let val = m_desc.inner(p, &grads[i], &grads[j])?;
            q[i * m + j] = val;
            q[j * m + i] = val;
        }
    }
    Ok(q)
}

/// Builds the full result from simplex weights: v, theta, active set and the
/// criticality residual.
fn assemble_result<T: Real>(
    grads: &[Tangent<T>],
    p: &Point<T>,
    m_desc: &ManifoldDescriptor,
    q: &[T],
    alpha: Vec<T>,
) -> Result<DirectionResult<T>> {
    let m = grads.len();
    let dim = grads[0].coords.len();
    let mut v = vec![T::zero(); dim];
    for (g, &a) in grads.iter().zip(&alpha) {
        if a != T::zero() {
            for (vk, &gk) in v.iter_mut().zip(&g.coords) {
                *vk = *vk - a * gk;
            }
        }
    }
    let v = Tangent::new(v);

    // lambda^T Q lambda and the inner products <g_i, v> = -(Q lambda)_i.
    let mut q_alpha = vec![T::zero(); m];
    for i in 0..m {
        let mut s = T::zero();
        for j in 0..m {
            s = s + q[i * m + j] * alpha[j];
        }
        q_alpha[i] = s;
    }
    // The quadratic form is nonnegative by PSD-ness of Q; clamp the tiny
    // negatives cancellation can leave behind so theta <= 0 holds exactly.
    let quad: T = alpha
        .iter()
        .zip(&q_alpha)
        .map(|(&a, &qa)| a * qa)
        .sum::<T>()
        .max(T::zero());
    let theta = -T::half() * quad;

    let inner_with_v: Vec<T> = q_alpha.iter().map(|&x| -x).collect();
    let max_inner = inner_with_v.iter().cloned().fold(T::neg_infinity(), T::max);
    let tie = T::of(ACTIVE_SET_RTOL) * (T::one() + max_inner.abs());
    let active_set = (0..m)
        .filter(|&i| inner_with_v[i] >= max_inner - tie)
        .collect();

    let criticality = m_desc.norm(p, &v)?;
    Ok(DirectionResult {
        v,
        alpha,
        theta,
        active_set,
        criticality,
    })
}

/// Minimum-norm solution of the symmetric system B x = rhs via spectral
/// pseudo-inverse; tolerant of the rank deficiency that affinely dependent
/// gradients create.
fn solve_symmetric_pinv<T: Real>(b: &[T], rhs: &[T], n: usize) -> Result<Vec<T>> {
    let (w, qv) = symmat::sym_eigen(b, n)?;
    let scale = w.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let cut = scale * T::epsilon() * T::of(n as f64) * T::of(16.0);
    let mut x = vec![T::zero(); n];
    for k in 0..n {
        if w[k].abs() <= cut {
            continue;
        }
        let mut proj = T::zero();
        for i in 0..n {
            proj = proj + qv[i * n + k] * rhs[i];
        }
        let coef = proj / w[k];
        for i in 0..n {
            x[i] = x[i] + coef * qv[i * n + k];
        }
    }
    Ok(x)
}

/// Minimizer of 1/2 lambda^T Q_SS lambda subject to sum lambda = 1 on the
/// affine hull of the support (no sign constraint), through the bordered
/// KKT system.
fn affine_minimizer<T: Real>(q: &[T], m: usize, support: &[usize]) -> Result<Vec<T>> {
    let s = support.len();
    let n = s + 1;
    let mut b = vec![T::zero(); n * n];
    for (a, &ia) in support.iter().enumerate() {
        for (c, &ic) in support.iter().enumerate() {
            b[a * n + c] = q[ia * m + ic];
        }
        b[a * n + s] = T::one();
        b[s * n + a] = T::one();
    }
    let mut rhs = vec![T::zero(); n];
    rhs[s] = T::one();
    let sol = solve_symmetric_pinv(&b, &rhs, n)?;
    Ok(sol[..s].to_vec())
}

/// Solves the direction subproblem with Wolfe's minimum-norm-point algorithm
/// started from the gradient of smallest metric norm.
pub fn solve_direction<T: Real>(
    grads: &[Tangent<T>],
    p: &Point<T>,
    m_desc: &ManifoldDescriptor,
) -> Result<DirectionResult<T>> {
    check_gradients(grads)?;
    let q = gram_matrix(grads, p, m_desc)?;
    let m = grads.len();
    let start = (0..m)
        .min_by(|&a, &b| {
            q[a * m + a]
                .partial_cmp(&q[b * m + b])
                .expect("finite Gram")
        })
        .expect("m >= 1");
    solve_direction_with_start(grads, p, m_desc, start)
}

/// Same as [`solve_direction`] but started from an explicit hull vertex.
///
/// The minimizer is unique, so every start must reach the same v; exposing
/// the start makes that verifiable.
pub fn solve_direction_with_start<T: Real>(
    grads: &[Tangent<T>],
    p: &Point<T>,
    m_desc: &ManifoldDescriptor,
    start: usize,
) -> Result<DirectionResult<T>> {
    check_gradients(grads)?;
    let m = grads.len();
    if start >= m {
        return Err(Error::Usage(format!(
            "start vertex {start} out of range for m = {m}"
        )));
    }
    let q = gram_matrix(grads, p, m_desc)?;

    // Degenerate case: every gradient is zero, each simplex point is optimal.
    if (0..m).all(|i| q[i * m + i] == T::zero()) {
        let uniform = vec![T::one() / T::of(m as f64); m];
        return assemble_result(grads, p, m_desc, &q, uniform);
    }

    let gap_tol = T::of(MNP_GAP_RTOL).max(T::epsilon() * T::of(8.0));
    let drop_tol = T::epsilon() * T::of(16.0);
    let max_iters = 50 * m * m;

    let mut support = vec![start];
    let mut lam = vec![T::one()];
    let mut iters = 0usize;

    loop {
        // <x, g_j> = sum_{s} lam_s Q_{j, support_s} for the current
        // x = sum lam_s g_s.
        let inner_x = |support: &[usize], lam: &[T], j: usize| -> T {
            support
                .iter()
                .zip(lam)
                .map(|(&s, &l)| l * q[j * m + s])
                .sum()
        };
        let norm2: T = support
            .iter()
            .zip(&lam)
            .map(|(&s, &l)| l * inner_x(&support, &lam, s))
            .sum();
        let (j_min, min_inner) = (0..m)
            .map(|j| (j, inner_x(&support, &lam, j)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite inner products"))
            .expect("m >= 1");

        let gap = norm2 - min_inner;
        if gap <= gap_tol * (T::one() + norm2) || support.contains(&j_min) {
            // Either optimal, or floating point cannot improve the support.
            let mut alpha = vec![T::zero(); m];
            for (&s, &l) in support.iter().zip(&lam) {
                alpha[s] = l;
            }
            return assemble_result(grads, p, m_desc, &q, alpha);
        }

        support.push(j_min);
        lam.push(T::zero());

        // Minor cycle: pull the affine minimizer back into the simplex.
        loop {
            iters += 1;
            if iters > max_iters {
                return Err(Error::Numeric(format!(
                    "minimum-norm-point did not converge within {max_iters} iterations \
                     (duality gap {gap:e})"
                )));
            }
            let mu = affine_minimizer(&q, m, &support)?;
            if mu.iter().all(|&x| x >= -drop_tol) {
                lam = mu.iter().map(|&x| x.max(T::zero())).collect();
                break;
            }
            // Largest step towards mu that keeps lambda nonnegative.
            let mut theta = T::one();
            let mut blocker = None;
            for i in 0..support.len() {
                if mu[i] < T::zero() && lam[i] > mu[i] {
                    let step = lam[i] / (lam[i] - mu[i]);
                    if step < theta {
                        theta = step;
                        blocker = Some(i);
                    }
                }
            }
            for i in 0..support.len() {
                lam[i] = (T::one() - theta) * lam[i] + theta * mu[i];
            }
            if let Some(b) = blocker {
                lam[b] = T::zero();
            }
            let keep: Vec<usize> = (0..support.len()).filter(|&i| lam[i] > drop_tol).collect();
            support = keep.iter().map(|&i| support[i]).collect();
            lam = keep.iter().map(|&i| lam[i]).collect();
            if support.is_empty() {
                return Err(Error::Numeric(
                    "minimum-norm-point support emptied out; degenerate Gram matrix".into(),
                ));
            }
            // Renormalize against drift.
            let total: T = lam.iter().cloned().sum();
            for l in lam.iter_mut() {
                *l = *l / total;
            }
        }
    }
}

/// Largest m accepted by the enumeration oracle (2^m - 1 supports).
pub const ORACLE_MAX_OBJECTIVES: usize = 12;

/// Independent verifier: enumerates every nonempty support, solves the
/// equality-constrained face problem, keeps candidates that are feasible
/// (nonnegative weights), and returns the best.
pub fn oracle_direction<T: Real>(
    grads: &[Tangent<T>],
    p: &Point<T>,
    m_desc: &ManifoldDescriptor,
) -> Result<DirectionResult<T>> {
    check_gradients(grads)?;
    let m = grads.len();
    if m > ORACLE_MAX_OBJECTIVES {
        return Err(Error::Usage(format!(
            "oracle enumeration supports at most {ORACLE_MAX_OBJECTIVES} objectives, got {m}"
        )));
    }
    let q = gram_matrix(grads, p, m_desc)?;

    let feas_tol = T::of(1e-10);
    let mut best: Option<(T, Vec<T>)> = None;
    for mask in 1u32..(1u32 << m) {
        let support: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        let mu = affine_minimizer(&q, m, &support)?;
        if mu.iter().any(|&x| x < -feas_tol) {
            continue;
        }
        let mut alpha = vec![T::zero(); m];
        for (&s, &l) in support.iter().zip(&mu) {
            alpha[s] = l.max(T::zero());
        }
        // Renormalize the clipped weights.
        let total: T = alpha.iter().cloned().sum();
        if total <= T::zero() {
            continue;
        }
        for a in alpha.iter_mut() {
            *a = *a / total;
        }
        let mut value = T::zero();
        for i in 0..m {
            for j in 0..m {
                value = value + alpha[i] * q[i * m + j] * alpha[j];
            }
        }
        value = value * T::half();
        match &best {
            Some((v, _)) if *v <= value => {}
            _ => best = Some((value, alpha)),
        }
    }
    let (_, alpha) = best.expect("at least the singleton supports are feasible");
    assemble_result(grads, p, m_desc, &q, alpha)
}

//! Trajectory diagnostics that test the convergence theory numerically:
//! strict monotone decrease, the Fejér inequality against a point that
//! weakly dominates the whole trajectory, the summability bound on step
//! energies, and a sampling-based weak-Pareto probe around the terminal
//! point.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::problem::{MulticriteriaProblem, ObjectiveVector};
use crate::sampling::random_unit_tangent;
use crate::scalar::Real;
use crate::solver::SolveReport;
use rand::{Rng, RngCore};

/// Max-coordinate scalarization. Subadditive, positively homogeneous and
/// monotone under the componentwise order, which is what turns vector
/// decrease into a scalar telescoping argument.
pub fn scalarize_max<T: Real>(f: &ObjectiveVector<T>) -> T {
    assert!(
        !f.values.is_empty(),
        "scalarize_max needs at least one component"
    );
    f.values.iter().cloned().fold(T::neg_infinity(), T::max)
}

/// Per-iteration Fejér slacks plus the verification that the reference
/// weakly dominates every recorded objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FejerCheck<T> {
    /// slack_k = d^2(p^{k+1}, ref) - d^2(p^k, ref) - t_k^2 |v^k|^2; all
    /// nonpositive (up to roundoff) on flat manifolds with quasi-convex F
    /// and a valid reference.
    pub slacks: Vec<T>,
    /// Record indices where F(ref) <= F(p^k) fails; nonempty means the
    /// reference does not dominate the trajectory and the slacks carry no
    /// guarantee.
    pub membership_violations: Vec<usize>,
    /// d^2(p^0, ref), the scale the acceptance tolerance is relative to.
    pub initial_sq_distance: T,
}

impl<T: Real> FejerCheck<T> {
    pub fn max_slack(&self) -> T {
        self.slacks.iter().cloned().fold(T::neg_infinity(), T::max)
    }
}

/// Computes the Fejér slacks of a recorded run against a reference point.
///
/// The inequality is only guaranteed when the reference weakly dominates
/// every recorded objective vector; that precondition is checked record by
/// record, and violations are flagged, not thrown.
pub fn check_fejer<T: Real>(
    prob: &MulticriteriaProblem<T>,
    report: &SolveReport<T>,
    ref_point: &Point<T>,
) -> Result<FejerCheck<T>> {
    let m_desc = prob.manifold();
    let f_ref = prob.evaluate(ref_point)?;
    let points = report.point_sequence();
    let objectives = report.objective_sequence();

    let membership_violations: Vec<usize> = objectives
        .iter()
        .enumerate()
        .filter(|(_, f)| !f_ref.leq(f))
        .map(|(k, _)| k)
        .collect();

    let mut dist_sq = Vec::with_capacity(points.len());
    for p in &points {
        let d = m_desc.distance(p, ref_point)?;
        dist_sq.push(d * d);
    }
    let slacks = report
        .records
        .iter()
        .enumerate()
        .map(|(k, r)| dist_sq[k + 1] - dist_sq[k] - r.t * r.t * r.norm_v * r.norm_v)
        .collect();
    Ok(FejerCheck {
        slacks,
        membership_violations,
        initial_sq_distance: dist_sq.first().cloned().unwrap_or_else(T::zero),
    })
}

/// Outcome of the step-energy summability bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummabilityCheck<T> {
    /// sum_k t_k^2 |v^k|^2 over the recorded steps.
    pub lhs: T,
    /// 2 (phi(F(p^0)) - phi(ref_f)) / beta.
    pub rhs: T,
    pub ok: bool,
    /// Whether ref_f <= F(p^k) held along the whole trajectory.
    pub precondition_ok: bool,
}

/// Absolute slack granted to the summability comparison.
pub const SUMMABILITY_TOL: f64 = 1e-10;

/// Verifies sum_k t_k^2 |v^k|^2 <= 2 (phi(F(p^0)) - phi(ref_f)) / beta.
pub fn check_summability<T: Real>(
    report: &SolveReport<T>,
    beta: T,
    ref_f: &ObjectiveVector<T>,
) -> SummabilityCheck<T> {
    let objectives = report.objective_sequence();
    let precondition_ok = objectives.iter().all(|f| ref_f.leq(f));
    let lhs: T = report
        .records
        .iter()
        .map(|r| r.t * r.t * r.norm_v * r.norm_v)
        .sum();
    let f0 = objectives
        .first()
        .expect("a report always carries a terminal objective");
    let rhs = T::two() * (scalarize_max(f0) - scalarize_max(ref_f)) / beta;
    let ok = lhs <= rhs + T::of(SUMMABILITY_TOL);
    SummabilityCheck {
        lhs,
        rhs,
        ok,
        precondition_ok,
    }
}

/// True iff the objective sequence decreases strictly componentwise at every
/// consecutive pair (vacuously true for empty or singleton traces).
pub fn check_monotone<T: Real>(report: &SolveReport<T>) -> bool {
    report
        .objective_sequence()
        .windows(2)
        .all(|pair| pair[1].lt(pair[0]))
}

/// Result of the weak-Pareto sampling probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakParetoProbe {
    pub probes: usize,
    /// Probes whose objective vector strictly dominated the terminal one.
    pub dominating: usize,
}

impl WeakParetoProbe {
    pub fn ok(&self) -> bool {
        self.dominating == 0
    }
}

/// Samples points around `center` (geodesic balls of the given metric
/// radius) and counts strict dominations of F(center). For convex problems a
/// critical terminal point is weak Pareto optimal, so the count must be
/// zero. A sampling check: it can falsify, never prove.
pub fn weak_pareto_probe<T: Real>(
    prob: &MulticriteriaProblem<T>,
    center: &Point<T>,
    probes: usize,
    radius: T,
    rng: &mut dyn RngCore,
) -> Result<WeakParetoProbe> {
    if radius <= T::zero() {
        return Err(Error::Usage(
            "weak_pareto_probe: radius must be positive".into(),
        ));
    }
    let m_desc = prob.manifold();
    let f_center = prob.evaluate(center)?;
    let mut dominating = 0usize;
    for _ in 0..probes {
        let dir = random_unit_tangent(&m_desc, center, rng);
        let r = T::of(rng.gen_range(0.0..1.0)) * radius;
        let q = m_desc.exp_map(center, &dir, r)?;
        let f_q = prob.evaluate(&q)?;
        if f_q.lt(&f_center) {
            dominating += 1;
        }
    }
    Ok(WeakParetoProbe { probes, dominating })
}

/// Bundle of every diagnostic the harness computes for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport<T> {
    pub monotone_ok: bool,
    /// Present only when a reference point was supplied.
    pub fejer: Option<FejerCheck<T>>,
    pub summability: SummabilityCheck<T>,
    /// phi(F(p^k)) along the run, terminal point included.
    pub scalarization: Vec<T>,
}

/// Computes the full diagnostics bundle. When `ref_point` is `None` the
/// Fejér slacks are skipped and the summability reference defaults to the
/// run's own terminal objective vector, which dominates the trajectory by
/// monotone decrease.
pub fn diagnostics<T: Real>(
    prob: &MulticriteriaProblem<T>,
    report: &SolveReport<T>,
    ref_point: Option<&Point<T>>,
    beta: T,
) -> Result<DiagnosticsReport<T>> {
    let monotone_ok = check_monotone(report);
    let fejer = match ref_point {
        Some(r) => Some(check_fejer(prob, report, r)?),
        None => None,
    };
    let ref_f = match ref_point {
        Some(r) => prob.evaluate(r)?,
        None => report.final_f.clone(),
    };
    let summability = check_summability(report, beta, &ref_f);
    let scalarization = report
        .objective_sequence()
        .iter()
        .map(|f| scalarize_max(f))
        .collect();
    Ok(DiagnosticsReport {
        monotone_ok,
        fejer,
        summability,
        scalarization,
    })
}

//! The steepest-descent driver: direction subproblem, criticality test,
//! Armijo backtracking, exponential-map update, trace recording.

use crate::direction::{solve_direction, DirectionResult};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linesearch::{armijo_step, ArmijoConfig};
use crate::problem::{jacobian_apply, MulticriteriaProblem, ObjectiveVector};
use crate::scalar::Real;

/// Driver parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Armijo sufficient-decrease factor in (0, 1).
    pub beta: T,
    /// Stop when |v(p)|_p drops to this residual.
    pub eps_crit: T,
    /// Iteration budget; purely an artifact bound, the method itself has none.
    pub max_iters: usize,
    /// Halving budget handed to the line search.
    pub max_halvings: u32,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            beta: T::half(),
            eps_crit: T::of(1e-6),
            max_iters: 1000,
            max_halvings: 64,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > T::zero() && self.beta < T::one()) {
            return Err(Error::Usage(format!(
                "beta must lie in (0,1), got {}",
                self.beta
            )));
        }
        if !(self.eps_crit >= T::zero() && self.eps_crit.is_finite()) {
            return Err(Error::Usage(format!(
                "eps_crit must be finite and >= 0, got {}",
                self.eps_crit
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Usage("max_iters must be at least 1".into()));
        }
        if self.max_halvings == 0 {
            return Err(Error::Usage("max_halvings must be at least 1".into()));
        }
        Ok(())
    }

    fn armijo(&self) -> ArmijoConfig<T> {
        ArmijoConfig {
            beta: self.beta,
            max_halvings: self.max_halvings,
        }
    }
}

/// One completed iteration: the incoming point p^k, its objective vector,
/// the direction data and the accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub k: usize,
    pub p: Point<T>,
    pub f: ObjectiveVector<T>,
    pub norm_v: T,
    pub theta: T,
    pub alpha: Vec<T>,
    pub t: T,
    pub j: u32,
}

/// Why the driver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// |v(p)| fell below eps_crit.
    Critical,
    /// The iteration budget ran out first.
    MaxIters,
    /// Backtracking exhausted its halvings, signalling numerical breakdown.
    LineSearchFailure,
}

impl SolveStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SolveStatus::Critical => "Critical",
            SolveStatus::MaxIters => "MaxIters",
            SolveStatus::LineSearchFailure => "LineSearchFailure",
        }
    }
}

/// Full outcome of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub status: SolveStatus,
    pub records: Vec<IterationRecord<T>>,
    pub final_point: Point<T>,
    pub final_f: ObjectiveVector<T>,
    pub final_criticality: T,
}

impl<T: Real> SolveReport<T> {
    /// The objective sequence F(p^0), ..., F(p^K) including the terminal
    /// point.
    pub fn objective_sequence(&self) -> Vec<&ObjectiveVector<T>> {
        self.records
            .iter()
            .map(|r| &r.f)
            .chain(std::iter::once(&self.final_f))
            .collect()
    }

    /// The iterate sequence p^0, ..., p^K including the terminal point.
    pub fn point_sequence(&self) -> Vec<&Point<T>> {
        self.records
            .iter()
            .map(|r| &r.p)
            .chain(std::iter::once(&self.final_point))
            .collect()
    }
}

/// Result of a single driver step.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome<T> {
    /// A descent step was taken.
    Stepped {
        record: IterationRecord<T>,
        next: Point<T>,
    },
    /// The incoming point is already critical at the configured residual.
    Critical {
        criticality: T,
        direction: DirectionResult<T>,
    },
}

/// Exactly one loop body of [`solve`], exposed for step-through testing.
/// `k` is the record index the caller is at; composing `iterate_once` k
/// times reproduces the first k records of [`solve`] bit for bit.
pub fn iterate_once<T: Real>(
    prob: &MulticriteriaProblem<T>,
    p: &Point<T>,
    k: usize,
    cfg: &SolverConfig<T>,
) -> Result<StepOutcome<T>> {
    cfg.validate()?;
    let m_desc = prob.manifold();
    let grads = prob.riemannian_jacobian(p)?;
    let dir = solve_direction(&grads, p, &m_desc)?;
    if dir.criticality <= cfg.eps_crit {
        return Ok(StepOutcome::Critical {
            criticality: dir.criticality,
            direction: dir,
        });
    }
    let f_p = prob.evaluate(p)?;
    let jac_v = jacobian_apply(&grads, p, &dir.v, &m_desc)?;
    let step = armijo_step(prob, p, &dir.v, &jac_v, &f_p, &cfg.armijo())?;
    let record = IterationRecord {
        k,
        p: p.clone(),
        f: f_p,
        norm_v: dir.criticality,
        theta: dir.theta,
        alpha: dir.alpha,
        t: step.t,
        j: step.j,
    };
    Ok(StepOutcome::Stepped {
        record,
        next: step.p_new,
    })
}

/// Runs the descent from `p0` until criticality, the iteration budget, or a
/// line-search breakdown.
pub fn solve<T: Real>(
    prob: &MulticriteriaProblem<T>,
    p0: &Point<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    let m_desc = prob.manifold();
    if let Some(msg) = m_desc.validate_point(p0) {
        return Err(Error::Domain(format!(
            "solve({}): invalid start point: {msg}",
            prob.name()
        )));
    }

    let mut p = p0.clone();
    let mut records = Vec::new();
    for k in 0..cfg.max_iters {
        match iterate_once(prob, &p, k, cfg) {
            Ok(StepOutcome::Stepped { record, next }) => {
                records.push(record);
                p = next;
            }
            Ok(StepOutcome::Critical { criticality, .. }) => {
                let final_f = prob.evaluate(&p)?;
                return Ok(SolveReport {
                    status: SolveStatus::Critical,
                    records,
                    final_point: p,
                    final_f,
                    final_criticality: criticality,
                });
            }
            Err(Error::LineSearch { .. }) => {
                let final_f = prob.evaluate(&p)?;
                let criticality = terminal_criticality(prob, &p)?;
                return Ok(SolveReport {
                    status: SolveStatus::LineSearchFailure,
                    records,
                    final_point: p,
                    final_f,
                    final_criticality: criticality,
                });
            }
            Err(Error::Numeric(msg)) => {
                return Err(Error::Numeric(format!("at iteration {k}: {msg}")));
            }
            Err(e) => return Err(e),
        }
    }
    let final_f = prob.evaluate(&p)?;
    let criticality = terminal_criticality(prob, &p)?;
    Ok(SolveReport {
        status: SolveStatus::MaxIters,
        records,
        final_point: p,
        final_f,
        final_criticality: criticality,
    })
}

fn terminal_criticality<T: Real>(prob: &MulticriteriaProblem<T>, p: &Point<T>) -> Result<T> {
    let m_desc = prob.manifold();
    let grads = prob.riemannian_jacobian(p)?;
    Ok(solve_direction(&grads, p, &m_desc)?.criticality)
}

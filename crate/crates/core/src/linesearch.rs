//! Armijo backtracking along geodesics with the componentwise vector
//! sufficient-decrease test.
//!
//! The accepted step is the largest t = 2^-j, j = 0, 1, 2, ..., with
//!
//! ```text
//!     F(exp_p(t v))  <=  F(p) + beta t * gradF(p)v    (componentwise)
//! ```
//!
//! Steps live in (0, 1] and the dyadic ladder starts at j = 0.

use crate::error::{Error, Result};
use crate::geometry::{Point, Tangent};
use crate::problem::{MulticriteriaProblem, ObjectiveVector};
use crate::scalar::Real;

/// Backtracking parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmijoConfig<T> {
    /// Sufficient-decrease factor, strictly between 0 and 1.
    pub beta: T,
    /// Halving budget; 64 puts the smallest trial step near 5e-20, below any
    /// meaningful decrease in double precision.
    pub max_halvings: u32,
}

impl<T: Real> Default for ArmijoConfig<T> {
    fn default() -> Self {
        ArmijoConfig {
            beta: T::half(),
            max_halvings: 64,
        }
    }
}

impl<T: Real> ArmijoConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > T::zero() && self.beta < T::one()) {
            return Err(Error::Usage(format!(
                "beta must lie in (0,1), got {}",
                self.beta
            )));
        }
        if self.max_halvings == 0 {
            return Err(Error::Usage("max_halvings must be at least 1".into()));
        }
        Ok(())
    }
}

/// An accepted Armijo step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult<T> {
    /// Accepted step, exactly 2^-j.
    pub t: T,
    /// Number of halvings performed.
    pub j: u32,
    /// Objective evaluations spent (j + 1).
    pub trial_count: u32,
    /// F at the accepted point.
    pub f_new: ObjectiveVector<T>,
    /// The accepted point exp_p(t v).
    pub p_new: Point<T>,
}

/// Backtracks along exp_p(t v) until the vector Armijo inequality holds.
///
/// `jac_v` must be gradF(p)v with every component negative (v is a descent
/// direction) and `f_p` must be F(p); both are computed by the caller, which
/// already has them. The inequality is tested with exact `<=`, no slack.
pub fn armijo_step<T: Real>(
    prob: &MulticriteriaProblem<T>,
    p: &Point<T>,
    v: &Tangent<T>,
    jac_v: &ObjectiveVector<T>,
    f_p: &ObjectiveVector<T>,
    cfg: &ArmijoConfig<T>,
) -> Result<StepResult<T>> {
    cfg.validate()?;
    let m_desc = prob.manifold();
    let mut t = T::one();
    for j in 0..=cfg.max_halvings {
        let p_trial = m_desc.exp_map(p, v, t)?;
        let f_trial = prob.evaluate(&p_trial)?;
        let bound = ObjectiveVector::new(
            f_p.values
                .iter()
                .zip(&jac_v.values)
                .map(|(&f, &d)| f + cfg.beta * t * d)
                .collect(),
        );
        if f_trial.leq(&bound) {
            return Ok(StepResult {
                t,
                j,
                trial_count: j + 1,
                f_new: f_trial,
                p_new: p_trial,
            });
        }
        t = t * T::half();
    }
    Err(Error::LineSearch {
        halvings: cfg.max_halvings,
        detail: format!(
            "no dyadic step satisfied the Armijo inequality down to t = 2^-{}",
            cfg.max_halvings
        ),
    })
}

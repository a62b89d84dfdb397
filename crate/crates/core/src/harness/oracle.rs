//! Randomized cross-check of the minimum-norm-point direction solver
//! against the support-enumeration oracle.

use crate::direction::{oracle_direction, solve_direction};
use crate::error::Result;
use crate::geometry::{ManifoldDescriptor, ManifoldKind, Tangent};
use crate::sampling::{random_ambient_tangent, random_point};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Trial plan. Unset fields are swept randomly per trial: m in 1..=5,
/// n in 2..=8, all four manifolds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleTrialConfig {
    pub trials: usize,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub manifold: Option<ManifoldKind>,
    pub seed: u64,
}

impl Default for OracleTrialConfig {
    fn default() -> Self {
        OracleTrialConfig {
            trials: 200,
            m: None,
            n: None,
            manifold: None,
            seed: 0,
        }
    }
}

/// Worst deviations observed over a batch of trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSummary<T> {
    pub trials: usize,
    /// max |v_solver - v_oracle|_p.
    pub max_v_deviation: T,
    /// max |theta_solver - theta_oracle|.
    pub max_theta_deviation: T,
    /// max |theta + |v|^2/2| / max(1, |v|^2) over the solver results.
    pub max_stationarity_residual: T,
}

const ALL_KINDS: [ManifoldKind; 4] = [
    ManifoldKind::Euclidean,
    ManifoldKind::PositiveOctant,
    ManifoldKind::Hypercube,
    ManifoldKind::SpdCone,
];

/// Runs seeded random instances through both direction solvers and tracks
/// the worst disagreement. Gradients are drawn with ambient entries in
/// [-1, 1] and pushed through the metric at a random feasible point.
pub fn run_oracle_trials<T: Real>(cfg: &OracleTrialConfig) -> Result<OracleSummary<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_v = T::zero();
    let mut max_theta = T::zero();
    let mut max_stat = T::zero();
    for _ in 0..cfg.trials {
        let kind = cfg
            .manifold
            .unwrap_or_else(|| ALL_KINDS[rng.gen_range(0..ALL_KINDS.len())]);
        let m = cfg.m.unwrap_or_else(|| rng.gen_range(1..=5));
        let n = cfg.n.unwrap_or_else(|| rng.gen_range(2..=8));
        let m_desc = ManifoldDescriptor::new(kind, n)?;
        let p = random_point::<T>(&m_desc, &mut rng);
        let grads: Result<Vec<Tangent<T>>> = (0..m)
            .map(|_| m_desc.egrad_to_rgrad(&p, &random_ambient_tangent(&m_desc, &mut rng)))
            .collect();
        let grads = grads?;

        let s = solve_direction(&grads, &p, &m_desc)?;
        let o = oracle_direction(&grads, &p, &m_desc)?;

        let diff = Tangent::new(
            s.v.coords
                .iter()
                .zip(&o.v.coords)
                .map(|(&a, &b)| a - b)
                .collect(),
        );
        max_v = max_v.max(m_desc.norm(&p, &diff)?);
        max_theta = max_theta.max((s.theta - o.theta).abs());

        let n2 = s.criticality * s.criticality;
        max_stat = max_stat.max((s.theta + T::half() * n2).abs() / T::one().max(n2));
    }
    Ok(OracleSummary {
        trials: cfg.trials,
        max_v_deviation: max_v,
        max_theta_deviation: max_theta,
        max_stationarity_residual: max_stat,
    })
}

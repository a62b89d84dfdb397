//! Self-checks behind the `check` CLI subcommand: finite-difference gradient
//! verification plus geodesic and law-of-cosines property sweeps, each
//! reported as a pass/fail row.

use crate::error::Result;
use crate::geometry::{ManifoldDescriptor, ManifoldKind};
use crate::problem::{fd_gradient_check, MulticriteriaProblem};
use crate::sampling::{random_point, random_unit_tangent};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One row of the pass/fail table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            pass,
            detail,
        }
    }
}

/// Finite-difference gradient verification at `points` random feasible
/// points (step 1e-6, tolerance 1e-5 relative).
pub fn fd_check<T: Real>(
    prob: &MulticriteriaProblem<T>,
    points: usize,
    seed: u64,
) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m_desc = prob.manifold();
    let mut worst = T::zero();
    let mut pass = true;
    for _ in 0..points {
        let p = random_point::<T>(&m_desc, &mut rng);
        let report = fd_gradient_check(prob, &p, T::of(1e-6), T::of(1e-5), 4, &mut rng)?;
        for obj in &report.per_objective {
            worst = worst.max(obj.max_rel_err);
            pass &= obj.pass;
        }
    }
    Ok(CheckOutcome::new(
        "fd-gradient",
        pass,
        format!(
            "max rel err {:.2e} over {points} points",
            worst.to_f64_lossy()
        ),
    ))
}

/// Geodesic identities on a manifold: exp at t = 0 is exact, and
/// d(p, exp_p(t v)) = t |v|_p to 1e-8 relative.
pub fn geodesic_checks<T: Real>(
    m_desc: &ManifoldDescriptor,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exp0_exact = true;
    let mut worst_dist = T::zero();
    for _ in 0..samples {
        let p = random_point::<T>(m_desc, &mut rng);
        let v = random_unit_tangent(m_desc, &p, &mut rng).scaled(T::of(rng.gen_range(0.1..2.0)));
        let q0 = m_desc.exp_map(&p, &v, T::zero())?;
        exp0_exact &= q0 == p;
        for &t in &[0.1, 0.5, 1.0] {
            let t = T::of(t);
            let q = m_desc.exp_map(&p, &v, t)?;
            let d = m_desc.distance(&p, &q)?;
            let expected = t * m_desc.norm(&p, &v)?;
            worst_dist = worst_dist.max((d - expected).abs() / expected.max(T::one()));
        }
    }
    let dist_tol = T::of(1e-8);
    Ok(vec![
        CheckOutcome::new(
            "exp-at-zero",
            exp0_exact,
            "bitwise equality over samples".into(),
        ),
        CheckOutcome::new(
            "geodesic-distance",
            worst_dist <= dist_tol,
            format!("max rel err {:.2e}", worst_dist.to_f64_lossy()),
        ),
    ])
}

/// Law-of-cosines equality on random geodesic hinges; only meaningful on the
/// zero-curvature manifolds (octant, hypercube, Euclidean). Returns `None`
/// for the SPD cone, whose curvature is nonpositive: only the inequality
/// direction would be meaningful there, and it is not asserted.
pub fn law_of_cosines_check<T: Real>(
    m_desc: &ManifoldDescriptor,
    hinges: usize,
    seed: u64,
) -> Result<Option<CheckOutcome>> {
    if m_desc.kind == ManifoldKind::SpdCone {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = T::zero();
    for _ in 0..hinges {
        let p = random_point::<T>(m_desc, &mut rng);
        let v1 = random_unit_tangent(m_desc, &p, &mut rng);
        let v2 = random_unit_tangent(m_desc, &p, &mut rng);
        let l1 = T::of(rng.gen_range(0.1..1.5));
        let l2 = T::of(rng.gen_range(0.1..1.5));
        let q1 = m_desc.exp_map(&p, &v1, l1)?;
        let q2 = m_desc.exp_map(&p, &v2, l2)?;
        let l3 = m_desc.distance(&q1, &q2)?;
        let cos_alpha = m_desc.inner(&p, &v1, &v2)?;
        let rhs = l1 * l1 + l2 * l2 - T::two() * l1 * l2 * cos_alpha;
        let scale = (l1 * l1 + l2 * l2).max(T::one());
        worst = worst.max((l3 * l3 - rhs).abs() / scale);
    }
    let tol = T::of(1e-8);
    Ok(Some(CheckOutcome::new(
        "law-of-cosines",
        worst <= tol,
        format!(
            "max rel defect {:.2e} over {hinges} hinges",
            worst.to_f64_lossy()
        ),
    )))
}

/// Octant/hypercube distances must coincide with the Euclidean distance of
/// their log/logit coordinates; a flat Euclidean identity otherwise.
pub fn isometry_check<T: Real>(
    m_desc: &ManifoldDescriptor,
    samples: usize,
    seed: u64,
) -> Result<Option<CheckOutcome>> {
    let map: fn(T) -> T = match m_desc.kind {
        ManifoldKind::PositiveOctant => |x: T| x.ln(),
        ManifoldKind::Hypercube => |x: T| x.ln() - (T::one() - x).ln(),
        _ => return Ok(None),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = T::zero();
    for _ in 0..samples {
        let p = random_point::<T>(m_desc, &mut rng);
        let q = random_point::<T>(m_desc, &mut rng);
        let d = m_desc.distance(&p, &q)?;
        let flat = p
            .coords
            .iter()
            .zip(&q.coords)
            .map(|(&a, &b)| {
                let d = map(a) - map(b);
                d * d
            })
            .sum::<T>()
            .sqrt();
        worst = worst.max((d - flat).abs() / flat.max(T::one()));
    }
    let tol = T::of(1e-12);
    Ok(Some(CheckOutcome::new(
        "isometry",
        worst <= tol,
        format!("max rel err {:.2e}", worst.to_f64_lossy()),
    )))
}

/// Everything the `check` subcommand runs for one benchmark problem.
pub fn problem_checks<T: Real>(
    prob: &MulticriteriaProblem<T>,
    fd_points: usize,
    seed: u64,
) -> Result<Vec<CheckOutcome>> {
    let m_desc = prob.manifold();
    let mut out = vec![fd_check(prob, fd_points, seed)?];
    out.extend(geodesic_checks::<T>(&m_desc, 20, seed ^ 0x5eed)?);
    if let Some(c) = law_of_cosines_check::<T>(&m_desc, 100, seed ^ 0xc0de)? {
        out.push(c);
    }
    if let Some(c) = isometry_check::<T>(&m_desc, 50, seed ^ 0x150)? {
        out.push(c);
    }
    Ok(out)
}

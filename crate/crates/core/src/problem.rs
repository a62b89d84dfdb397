//! Multicriteria objective definition: objective vectors with the
//! componentwise partial order, Riemannian jacobian assembly, and a
//! finite-difference gradient checker.

use crate::error::{Error, Result};
use crate::geometry::{ManifoldDescriptor, Point, Tangent};
use crate::sampling::random_unit_tangent;
use crate::scalar::Real;
use rand::RngCore;

/// The value F(p) in R^m.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector<T> {
    pub values: Vec<T>,
}

impl<T: Real> ObjectiveVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        ObjectiveVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Componentwise `self <= other` (the partial order on R^m).
    ///
    /// Panics on length mismatch; comparing objective vectors of different
    /// problems is a caller bug.
    pub fn leq(&self, other: &Self) -> bool {
        assert_eq!(
            self.values.len(),
            other.values.len(),
            "objective vectors must have equal length"
        );
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Strict componentwise `self < other`.
    pub fn lt(&self, other: &Self) -> bool {
        assert_eq!(
            self.values.len(),
            other.values.len(),
            "objective vectors must have equal length"
        );
        self.values.iter().zip(&other.values).all(|(a, b)| a < b)
    }
}

type EvalFn<T> = Box<dyn Fn(&Point<T>) -> T + Send + Sync>;
type EgradFn<T> = Box<dyn Fn(&Point<T>) -> Tangent<T> + Send + Sync>;

/// One scalar objective with its analytic ambient gradient.
///
/// Gradients are supplied, not differentiated automatically; the
/// finite-difference checker below is the safety net.
pub struct ScalarObjective<T> {
    eval: EvalFn<T>,
    egrad: EgradFn<T>,
}

/// A vector objective F = (f_1, ..., f_m) on a manifold.
pub struct MulticriteriaProblem<T> {
    manifold: ManifoldDescriptor,
    name: String,
    objectives: Vec<ScalarObjective<T>>,
}

impl<T: Real> MulticriteriaProblem<T> {
    pub fn new(manifold: ManifoldDescriptor, name: impl Into<String>) -> Self {
        MulticriteriaProblem {
            manifold,
            name: name.into(),
            objectives: Vec::new(),
        }
    }

    /// Appends an objective given its evaluator and ambient-gradient closure.
    pub fn with_objective(
        mut self,
        eval: impl Fn(&Point<T>) -> T + Send + Sync + 'static,
        egrad: impl Fn(&Point<T>) -> Tangent<T> + Send + Sync + 'static,
    ) -> Self {
        self.objectives.push(ScalarObjective {
            eval: Box::new(eval),
            egrad: Box::new(egrad),
        });
        self
    }

    pub fn manifold(&self) -> ManifoldDescriptor {
        self.manifold
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of objectives m.
    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.objectives.is_empty() {
            return Err(Error::Usage(format!(
                "problem '{}' has no objectives",
                self.name
            )));
        }
        Ok(())
    }

    /// F(p) = (f_1(p), ..., f_m(p)).
    pub fn evaluate(&self, p: &Point<T>) -> Result<ObjectiveVector<T>> {
        self.require_nonempty()?;
        if let Some(msg) = self.manifold.validate_point(p) {
            return Err(Error::Domain(format!("evaluate({}): {msg}", self.name)));
        }
        let mut values = Vec::with_capacity(self.objectives.len());
        for (i, obj) in self.objectives.iter().enumerate() {
            let v = (obj.eval)(p);
            if !v.is_finite() {
                return Err(Error::Numeric(format!(
                    "objective {i} of '{}' returned a non-finite value",
                    self.name
                )));
            }
            values.push(v);
        }
        Ok(ObjectiveVector::new(values))
    }

    /// grad F(p) = (grad f_1(p), ..., grad f_m(p)), each ambient gradient
    /// converted through the metric at p.
    pub fn riemannian_jacobian(&self, p: &Point<T>) -> Result<Vec<Tangent<T>>> {
        self.require_nonempty()?;
        if let Some(msg) = self.manifold.validate_point(p) {
            return Err(Error::Domain(format!(
                "riemannian_jacobian({}): {msg}",
                self.name
            )));
        }
        self.objectives
            .iter()
            .map(|obj| self.manifold.egrad_to_rgrad(p, &(obj.egrad)(p)))
            .collect()
    }
}

/// grad F(p) v = (<grad f_1, v>_p, ..., <grad f_m, v>_p).
pub fn jacobian_apply<T: Real>(
    grads: &[Tangent<T>],
    p: &Point<T>,
    v: &Tangent<T>,
    m: &ManifoldDescriptor,
) -> Result<ObjectiveVector<T>> {
    let mut values = Vec::with_capacity(grads.len());
    for g in grads {
        values.push(m.inner(p, g, v)?);
    }
    Ok(ObjectiveVector::new(values))
}

/// Result of a finite-difference gradient check for one objective.
#[derive(Debug, Clone, PartialEq)]
pub struct FdObjectiveCheck<T> {
    pub objective: usize,
    pub max_rel_err: T,
    pub pass: bool,
}

/// Finite-difference check of every objective gradient at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct FdCheckReport<T> {
    pub per_objective: Vec<FdObjectiveCheck<T>>,
    pub pass: bool,
}

/// Compares <grad f_i(p), v>_p against the central difference of f_i along
/// the geodesic exp_p(t v) for `n_dirs` random unit tangents per objective.
///
/// Relative error is measured against max(1, |analytic|). Reports, never
/// fails: a broken gradient shows up as `pass = false`.
pub fn fd_gradient_check<T: Real>(
    prob: &MulticriteriaProblem<T>,
    p: &Point<T>,
    step: T,
    tol: T,
    n_dirs: usize,
    rng: &mut dyn RngCore,
) -> Result<FdCheckReport<T>> {
    if step <= T::zero() {
        return Err(Error::Usage(
            "fd_gradient_check: step must be positive".into(),
        ));
    }
    let m_desc = prob.manifold();
    let grads = prob.riemannian_jacobian(p)?;
    let mut per_objective = Vec::with_capacity(grads.len());
    let mut all_pass = true;
    let dirs: Vec<Tangent<T>> = (0..n_dirs.max(1))
        .map(|_| random_unit_tangent(&m_desc, p, rng))
        .collect();
    for (i, g) in grads.iter().enumerate() {
        let mut max_rel = T::zero();
        for v in &dirs {
            let analytic = m_desc.inner(p, g, v)?;
            let fwd = prob.evaluate(&m_desc.exp_map(p, v, step)?)?.values[i];
            let bwd = prob
                .evaluate(&m_desc.exp_map(p, &v.scaled(-T::one()), step)?)?
                .values[i];
            let fd = (fwd - bwd) / (T::two() * step);
            let rel = (fd - analytic).abs() / T::one().max(analytic.abs());
            max_rel = max_rel.max(rel);
        }
        let pass = max_rel <= tol;
        all_pass &= pass;
        per_objective.push(FdObjectiveCheck {
            objective: i,
            max_rel_err: max_rel,
            pass,
        });
    }
    Ok(FdCheckReport {
        per_objective,
        pass: all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ManifoldDescriptor;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oct_quad() -> MulticriteriaProblem<f64> {
        // f_i(p) = 1/2 |ln p - ln a_i|^2 on the positive octant,
        // a_1 = (1, 1), a_2 = (e, e^2).
        let anchors = [vec![0.0, 0.0], vec![1.0, 2.0]]; // stored as ln a_i
        let mut prob =
            MulticriteriaProblem::new(ManifoldDescriptor::positive_octant(2), "OCT-QUAD");
        for b in anchors {
            let b2 = b.clone();
            prob = prob.with_objective(
                move |p: &Point<f64>| {
                    p.coords
                        .iter()
                        .zip(&b)
                        .map(|(&x, &bi)| (x.ln() - bi).powi(2))
                        .sum::<f64>()
                        * 0.5
                },
                move |p: &Point<f64>| {
                    Tangent::new(
                        p.coords
                            .iter()
                            .zip(&b2)
                            .map(|(&x, &bi)| (x.ln() - bi) / x)
                            .collect(),
                    )
                },
            );
        }
        prob
    }

    #[test]
    fn oct_quad_evaluates_hand_checked_values() {
        let prob = oct_quad();
        let f = prob.evaluate(&Point::new(vec![1.0, 1.0])).unwrap();
        assert_relative_eq!(f.values[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(f.values[1], 2.5, max_relative = 1e-15);
    }

    #[test]
    fn evaluate_is_pure() {
        let prob = oct_quad();
        let p = Point::new(vec![5.0, 0.2]);
        assert_eq!(prob.evaluate(&p).unwrap(), prob.evaluate(&p).unwrap());
        assert_eq!(
            prob.riemannian_jacobian(&p).unwrap(),
            prob.riemannian_jacobian(&p).unwrap()
        );
    }

    #[test]
    fn scalar_problem_yields_length_one_vector() {
        let prob = MulticriteriaProblem::new(ManifoldDescriptor::euclidean(2), "quad")
            .with_objective(
                |p: &Point<f64>| 0.5 * p.coords.iter().map(|x| x * x).sum::<f64>(),
                |p: &Point<f64>| Tangent::new(p.coords.clone()),
            );
        assert_eq!(prob.evaluate(&Point::new(vec![1.0, 2.0])).unwrap().len(), 1);
    }

    #[test]
    fn octant_linear_objective_gradient_scaling() {
        let prob = MulticriteriaProblem::new(ManifoldDescriptor::positive_octant(2), "lin")
            .with_objective(
                |p: &Point<f64>| p.coords[0],
                |_: &Point<f64>| Tangent::new(vec![1.0, 0.0]),
            );
        let grads = prob
            .riemannian_jacobian(&Point::new(vec![2.0, 3.0]))
            .unwrap();
        assert_eq!(grads[0].coords, vec![4.0, 0.0]);
    }

    #[test]
    fn jacobian_apply_basics() {
        let m = ManifoldDescriptor::euclidean(2);
        let p = Point::new(vec![0.0, 0.0]);
        let g = Tangent::new(vec![3.0, 4.0]);
        let zero = jacobian_apply(std::slice::from_ref(&g), &p, &Tangent::zeros(2), &m).unwrap();
        assert_eq!(zero.values, vec![0.0]);
        let down = jacobian_apply(std::slice::from_ref(&g), &p, &g.scaled(-1.0), &m).unwrap();
        assert_relative_eq!(down.values[0], -25.0, max_relative = 1e-15);
    }

    #[test]
    fn jacobian_apply_matches_finite_differences() {
        let prob = oct_quad();
        let m = prob.manifold();
        let p = Point::new(vec![3.0, 0.7]);
        let grads = prob.riemannian_jacobian(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let v = random_unit_tangent(&m, &p, &mut rng);
            let analytic = jacobian_apply(&grads, &p, &v, &m).unwrap();
            let h = 1e-6;
            let fp = prob.evaluate(&m.exp_map(&p, &v, h).unwrap()).unwrap();
            let fm = prob
                .evaluate(&m.exp_map(&p, &v.scaled(-1.0), h).unwrap())
                .unwrap();
            for i in 0..2 {
                let fd = (fp.values[i] - fm.values[i]) / (2.0 * h);
                assert_relative_eq!(analytic.values[i], fd, max_relative = 1e-5, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn partial_order_examples() {
        let a = ObjectiveVector::new(vec![1.0, 2.0]);
        let b = ObjectiveVector::new(vec![1.0, 3.0]);
        assert!(a.leq(&b));
        assert!(!a.lt(&b));
        assert!(a.leq(&a));
        assert!(!a.lt(&a));
        let c = ObjectiveVector::new(vec![1.0, 4.0]);
        let d = ObjectiveVector::new(vec![2.0, 3.0]);
        assert!(!c.leq(&d) && !d.leq(&c));
    }

    #[test]
    #[should_panic(expected = "equal length")]
    fn partial_order_rejects_length_mismatch() {
        let a = ObjectiveVector::new(vec![1.0]);
        let b = ObjectiveVector::new(vec![1.0, 2.0]);
        let _ = a.leq(&b);
    }

    #[test]
    fn fd_check_exact_on_linear_euclidean_objective() {
        let prob = MulticriteriaProblem::new(ManifoldDescriptor::euclidean(3), "lin")
            .with_objective(
                |p: &Point<f64>| p.coords[0] + 2.0 * p.coords[1] - p.coords[2],
                |_: &Point<f64>| Tangent::new(vec![1.0, 2.0, -1.0]),
            );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // A linear function has zero truncation error at any step; a large
        // step keeps the roundoff amplification (eps / step) negligible too.
        let report = fd_gradient_check(
            &prob,
            &Point::new(vec![0.3, -0.4, 1.1]),
            0.25,
            1e-12,
            8,
            &mut rng,
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn fd_check_passes_on_oct_quad_interior_points() {
        let prob = oct_quad();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in [vec![5.0, 0.2], vec![1.3, 1.3], vec![0.1, 9.0]] {
            let report = fd_gradient_check(&prob, &Point::new(p), 1e-6, 1e-5, 8, &mut rng).unwrap();
            assert!(report.pass, "{report:?}");
        }
    }

    #[test]
    fn non_finite_objective_is_a_numeric_error() {
        let prob = MulticriteriaProblem::new(ManifoldDescriptor::euclidean(1), "nan")
            .with_objective(
                |_: &Point<f64>| f64::NAN,
                |_: &Point<f64>| Tangent::new(vec![0.0]),
            );
        assert!(matches!(
            prob.evaluate(&Point::new(vec![0.0])),
            Err(crate::error::Error::Numeric(_))
        ));
    }

    #[test]
    fn problems_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<MulticriteriaProblem<f64>>();
        assert_send_sync::<ObjectiveVector<f64>>();
        assert_send_sync::<Point<f64>>();
        assert_send_sync::<Tangent<f64>>();

        let prob = std::sync::Arc::new(oct_quad());
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let prob = prob.clone();
                std::thread::spawn(move || {
                    let p = Point::new(vec![1.0 + i as f64, 0.5]);
                    prob.evaluate(&p).unwrap().values[0]
                })
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap().is_finite());
        }
    }

    #[test]
    fn fd_check_detects_a_corrupted_gradient() {
        let prob = MulticriteriaProblem::new(ManifoldDescriptor::euclidean(2), "bad")
            .with_objective(
                |p: &Point<f64>| 0.5 * p.coords.iter().map(|x| x * x).sum::<f64>(),
                // Deliberately scaled x2.
                |p: &Point<f64>| Tangent::new(p.coords.iter().map(|x| 2.0 * x).collect()),
            );
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let report =
            fd_gradient_check(&prob, &Point::new(vec![1.0, -2.0]), 1e-6, 1e-5, 8, &mut rng)
                .unwrap();
        assert!(!report.pass);
    }
}

//! Benchmark registry, trajectory diagnostics, trace/report serialization
//! and the CLI.
//!
//! The registry carries four small problems, one per manifold, each built so
//! the convergence theory it exercises actually applies: the octant and
//! hypercube problems are geodesically convex on flat manifolds (full
//! convergence, Fejér and summability checks all in force), the SPD problem
//! is convex on a negatively curved manifold (criticality only), and the
//! Euclidean scalar problem pins the m = 1 reduction to classical steepest
//! descent.

pub mod checks;
pub mod diagnostics;
pub mod oracle;
pub mod trace;

mod cli;

pub use cli::run_cli;

use crate::error::{Error, Result};
use crate::geometry::{symmat, ManifoldDescriptor, Point, Tangent};
use crate::problem::MulticriteriaProblem;
use crate::scalar::Real;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

/// A registry entry: manifold, objective parameters, default start, and,
/// when one is known a priori, a point that weakly dominates every
/// trajectory (a Fejér reference).
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec<T> {
    pub key: String,
    pub manifold: ManifoldDescriptor,
    pub m: usize,
    pub parameters: Vec<(String, Vec<T>)>,
    pub default_p0: Point<T>,
    pub known_reference: Option<Point<T>>,
}

impl<T: Real> BenchmarkSpec<T> {
    pub fn param(&self, name: &str) -> Option<&[T]> {
        self.parameters
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Overrides a named parameter array; the replacement must match the
    /// default's length.
    pub fn set_param(&mut self, name: &str, values: Vec<T>) -> Result<()> {
        match self.parameters.iter_mut().find(|(n, _)| n == name) {
            Some((_, slot)) => {
                if slot.len() != values.len() {
                    return Err(Error::Usage(format!(
                        "parameter '{name}' of {} expects {} values, got {}",
                        self.key,
                        slot.len(),
                        values.len()
                    )));
                }
                *slot = values;
                Ok(())
            }
            None => Err(Error::Usage(format!(
                "benchmark {} has no parameter named '{name}'",
                self.key
            ))),
        }
    }
}

/// All built-in benchmarks, in listing order.
pub fn registry<T: Real>() -> Vec<BenchmarkSpec<T>> {
    let e = std::f64::consts::E;
    vec![
        BenchmarkSpec {
            key: "SCALAR-QUAD".into(),
            manifold: ManifoldDescriptor::euclidean(2),
            m: 1,
            parameters: vec![("center".into(), vec![T::zero(), T::zero()])],
            default_p0: Point::new(vec![T::one(), T::zero()]),
            // The global minimizer dominates every trajectory.
            known_reference: Some(Point::new(vec![T::zero(), T::zero()])),
        },
        BenchmarkSpec {
            key: "OCT-QUAD".into(),
            manifold: ManifoldDescriptor::positive_octant(2),
            m: 2,
            parameters: vec![
                ("a1".into(), vec![T::one(), T::one()]),
                ("a2".into(), vec![T::of(e), T::of(e * e)]),
            ],
            default_p0: Point::new(vec![T::of(5.0), T::of(0.2)]),
            known_reference: None,
        },
        BenchmarkSpec {
            key: "CUBE-BI".into(),
            manifold: ManifoldDescriptor::hypercube(2),
            m: 2,
            parameters: vec![
                ("a1".into(), vec![T::of(0.3), T::of(0.3)]),
                ("a2".into(), vec![T::of(0.7), T::of(0.5)]),
            ],
            default_p0: Point::new(vec![T::of(0.9), T::of(0.1)]),
            known_reference: None,
        },
        BenchmarkSpec {
            key: "SPD-TRACE".into(),
            manifold: ManifoldDescriptor::spd_cone(2),
            m: 2,
            parameters: vec![("c".into(), vec![T::two(), T::zero(), T::zero(), T::half()])],
            default_p0: Point::new(vec![T::of(4.0), T::zero(), T::zero(), T::of(0.25)]),
            known_reference: None,
        },
    ]
}

/// Looks a benchmark up by key.
pub fn find_benchmark<T: Real>(key: &str) -> Result<BenchmarkSpec<T>> {
    registry::<T>()
        .into_iter()
        .find(|b| b.key == key)
        .ok_or_else(|| Error::Usage(format!("unknown benchmark key '{key}'")))
}

fn spd_inverse<T: Real>(x: &[T], n: usize) -> Vec<T> {
    let (w, q) = symmat::sym_eigen(x, n).expect("objective evaluated at a validated SPD point");
    let mut inv = vec![T::zero(); n * n];
    for k in 0..n {
        let iw = T::one() / w[k];
        for i in 0..n {
            for j in 0..n {
                inv[i * n + j] = inv[i * n + j] + iw * q[i * n + k] * q[j * n + k];
            }
        }
    }
    symmat::symmetrize(&inv, n)
}

fn spd_log_det<T: Real>(x: &[T], n: usize) -> T {
    let (w, _) = symmat::sym_eigen(x, n).expect("objective evaluated at a validated SPD point");
    w.into_iter().map(|l| l.ln()).sum()
}

/// Instantiates the objective closures for a (possibly parameter-overridden)
/// registry entry.
pub fn build_problem<T: Real>(spec: &BenchmarkSpec<T>) -> Result<MulticriteriaProblem<T>> {
    let prob = match spec.key.as_str() {
        "SCALAR-QUAD" => {
            let center = spec
                .param("center")
                .ok_or_else(|| Error::Usage("SCALAR-QUAD needs a 'center' parameter".into()))?
                .to_vec();
            let c2 = center.clone();
            MulticriteriaProblem::new(spec.manifold, spec.key.clone()).with_objective(
                move |p: &Point<T>| {
                    p.coords
                        .iter()
                        .zip(&center)
                        .map(|(&x, &c)| (x - c) * (x - c))
                        .sum::<T>()
                        * T::half()
                },
                move |p: &Point<T>| {
                    Tangent::new(p.coords.iter().zip(&c2).map(|(&x, &c)| x - c).collect())
                },
            )
        }
        "OCT-QUAD" => {
            let mut prob = MulticriteriaProblem::new(spec.manifold, spec.key.clone());
            for name in ["a1", "a2"] {
                let anchor = spec
                    .param(name)
                    .ok_or_else(|| Error::Usage(format!("OCT-QUAD needs parameter '{name}'")))?;
                if anchor.iter().any(|&a| a <= T::zero()) {
                    return Err(Error::Usage(format!(
                        "OCT-QUAD anchor '{name}' must be strictly positive"
                    )));
                }
                let ln_a: Vec<T> = anchor.iter().map(|a| a.ln()).collect();
                let ln_a2 = ln_a.clone();
                prob = prob.with_objective(
                    move |p: &Point<T>| {
                        p.coords
                            .iter()
                            .zip(&ln_a)
                            .map(|(&x, &b)| {
                                let d = x.ln() - b;
                                d * d
                            })
                            .sum::<T>()
                            * T::half()
                    },
                    move |p: &Point<T>| {
                        Tangent::new(
                            p.coords
                                .iter()
                                .zip(&ln_a2)
                                .map(|(&x, &b)| (x.ln() - b) / x)
                                .collect(),
                        )
                    },
                );
            }
            prob
        }
        "CUBE-BI" => {
            let mut prob = MulticriteriaProblem::new(spec.manifold, spec.key.clone());
            for name in ["a1", "a2"] {
                let anchor = spec
                    .param(name)
                    .ok_or_else(|| Error::Usage(format!("CUBE-BI needs parameter '{name}'")))?;
                if anchor.iter().any(|&a| a <= T::zero() || a >= T::one()) {
                    return Err(Error::Usage(format!(
                        "CUBE-BI anchor '{name}' must lie strictly inside (0,1)"
                    )));
                }
                let logit = |x: T| x.ln() - (T::one() - x).ln();
                let b: Vec<T> = anchor.iter().map(|&a| logit(a)).collect();
                let b2 = b.clone();
                prob = prob.with_objective(
                    move |p: &Point<T>| {
                        p.coords
                            .iter()
                            .zip(&b)
                            .map(|(&x, &bi)| {
                                let d = (x.ln() - (T::one() - x).ln()) - bi;
                                d * d
                            })
                            .sum::<T>()
                            * T::half()
                    },
                    move |p: &Point<T>| {
                        Tangent::new(
                            p.coords
                                .iter()
                                .zip(&b2)
                                .map(|(&x, &bi)| {
                                    let w = x * (T::one() - x);
                                    ((x.ln() - (T::one() - x).ln()) - bi) / w
                                })
                                .collect(),
                        )
                    },
                );
            }
            prob
        }
        "SPD-TRACE" => {
            let n = spec.manifold.dim_param;
            let c = spec
                .param("c")
                .ok_or_else(|| Error::Usage("SPD-TRACE needs a 'c' parameter".into()))?
                .to_vec();
            if c.len() != n * n {
                return Err(Error::Usage(format!(
                    "SPD-TRACE parameter 'c' must have {} entries",
                    n * n
                )));
            }
            let c2 = c.clone();
            MulticriteriaProblem::new(spec.manifold, spec.key.clone())
                .with_objective(
                    // f1(X) = tr X - ln det X, minimized at the identity.
                    move |p: &Point<T>| {
                        let tr: T = (0..n).map(|i| p.coords[i * n + i]).sum();
                        tr - spd_log_det(&p.coords, n)
                    },
                    move |p: &Point<T>| {
                        let inv = spd_inverse(&p.coords, n);
                        let mut g = vec![T::zero(); n * n];
                        for i in 0..n {
                            for j in 0..n {
                                let id = if i == j { T::one() } else { T::zero() };
                                g[i * n + j] = id - inv[i * n + j];
                            }
                        }
                        Tangent::new(g)
                    },
                )
                .with_objective(
                    // f2(X) = tr(CX) - ln det X, minimized at C^-1.
                    move |p: &Point<T>| {
                        let mut tr = T::zero();
                        for i in 0..n {
                            for k in 0..n {
                                tr = tr + c[i * n + k] * p.coords[k * n + i];
                            }
                        }
                        tr - spd_log_det(&p.coords, n)
                    },
                    move |p: &Point<T>| {
                        let inv = spd_inverse(&p.coords, n);
                        let g: Vec<T> = c2.iter().zip(&inv).map(|(&cij, &kij)| cij - kij).collect();
                        Tangent::new(g)
                    },
                )
        }
        other => return Err(Error::Usage(format!("unknown benchmark key '{other}'"))),
    };
    if prob.num_objectives() != spec.m {
        return Err(Error::Usage(format!(
            "benchmark {} declares m = {} but built {} objectives",
            spec.key,
            spec.m,
            prob.num_objectives()
        )));
    }
    Ok(prob)
}

/// On-disk problem description: a registry key plus optional parameter and
/// start-point overrides. JSON, so it round-trips through ordinary tooling.
#[derive(Debug, Clone, Deserialize)]
pub struct ProblemFile {
    pub problem: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, Vec<f64>>,
    #[serde(default)]
    pub p0: Option<Vec<f64>>,
}

/// Loads a problem file and resolves it against the registry.
pub fn resolve_problem_file(path: &Path) -> Result<BenchmarkSpec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let file: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| Error::Usage(format!("malformed problem file {}: {e}", path.display())))?;
    let mut spec = find_benchmark::<f64>(&file.problem)?;
    for (name, values) in file.parameters {
        spec.set_param(&name, values)?;
    }
    if let Some(p0) = file.p0 {
        if p0.len() != spec.manifold.ambient_len() {
            return Err(Error::Usage(format!(
                "p0 override must have {} coordinates, got {}",
                spec.manifold.ambient_len(),
                p0.len()
            )));
        }
        spec.default_p0 = Point::new(p0);
    }
    Ok(spec)
}

/// Resolves a `--problem` argument: an existing file path wins, otherwise
/// the string is treated as a registry key.
pub fn resolve_problem_arg(arg: &str) -> Result<BenchmarkSpec<f64>> {
    let path = Path::new(arg);
    if path.is_file() {
        resolve_problem_file(path)
    } else {
        find_benchmark::<f64>(arg)
    }
}

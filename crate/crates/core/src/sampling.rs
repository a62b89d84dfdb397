//! Seeded sampling of feasible points and tangents, shared by the
//! finite-difference checker, the oracle harness and the tests.
//!
//! All randomness flows through a caller-supplied RNG so every randomized
//! check is reproducible from an explicit seed.

use crate::geometry::{ManifoldDescriptor, ManifoldKind, Point, Tangent};
use crate::scalar::Real;
use rand::{Rng, RngCore};

fn uniform<T: Real>(rng: &mut dyn RngCore, lo: f64, hi: f64) -> T {
    T::of(rng.gen_range(lo..hi))
}

/// A random point safely inside the manifold's domain.
pub fn random_point<T: Real>(m: &ManifoldDescriptor, rng: &mut dyn RngCore) -> Point<T> {
    let n = m.dim_param;
    let coords = match m.kind {
        ManifoldKind::Euclidean => (0..n).map(|_| uniform(rng, -2.0, 2.0)).collect(),
        ManifoldKind::PositiveOctant => {
            (0..n).map(|_| uniform::<T>(rng, -1.5, 1.5).exp()).collect()
        }
        ManifoldKind::Hypercube => (0..n).map(|_| uniform(rng, 0.05, 0.95)).collect(),
        ManifoldKind::SpdCone => {
            // B B^T / n + I/2 keeps eigenvalues in roughly [0.5, n/2 + 0.5].
            let b: Vec<T> = (0..n * n).map(|_| uniform(rng, -1.0, 1.0)).collect();
            let mut a = vec![T::zero(); n * n];
            let inv_n = T::one() / T::of(n as f64);
            for i in 0..n {
                for j in 0..n {
                    let mut s = T::zero();
                    for k in 0..n {
                        s = s + b[i * n + k] * b[j * n + k];
                    }
                    a[i * n + j] = s * inv_n;
                }
                a[i * n + i] = a[i * n + i] + T::half();
            }
            a
        }
    };
    Point::new(coords)
}

/// A random tangent with ambient entries in [-1, 1], symmetrized on the SPD
/// cone. Not metric-normalized.
pub fn random_ambient_tangent<T: Real>(
    m: &ManifoldDescriptor,
    rng: &mut dyn RngCore,
) -> Tangent<T> {
    let n = m.dim_param;
    match m.kind {
        ManifoldKind::SpdCone => {
            let mut v = vec![T::zero(); n * n];
            for i in 0..n {
                for j in 0..=i {
                    let x = uniform(rng, -1.0, 1.0);
                    v[i * n + j] = x;
                    v[j * n + i] = x;
                }
            }
            Tangent::new(v)
        }
        _ => Tangent::new((0..n).map(|_| uniform(rng, -1.0, 1.0)).collect()),
    }
}

/// A random tangent of metric norm one at `p`.
pub fn random_unit_tangent<T: Real>(
    m: &ManifoldDescriptor,
    p: &Point<T>,
    rng: &mut dyn RngCore,
) -> Tangent<T> {
    loop {
        let v = random_ambient_tangent(m, rng);
        let norm = m.norm(p, &v).expect("sampling requires a valid base point");
        if norm > T::of(1e-6) {
            return v.scaled(T::one() / norm);
        }
    }
}

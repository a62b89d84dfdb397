//! Manifold descriptors with exact geodesics.
//!
//! Four manifolds are supported, each with a closed-form exponential map, a
//! metric inner product, a Riemannian distance and the Euclidean-to-Riemannian
//! gradient conversion:
//!
//! * `Euclidean`: R^n with the identity metric; geodesics are straight lines.
//! * `PositiveOctant`: R^n_{++} with the log-barrier Hessian metric
//!   G(p) = diag(p_j^-2); geodesics are componentwise exponentials and the
//!   manifold is isometric to flat R^n under `ln`.
//! * `Hypercube`: (0,1)^n with G(p) = diag(p_j^-2 (1-p_j)^-2); geodesics are
//!   logistic curves and the manifold is flat under `logit`.
//! * `SpdCone`: symmetric positive definite n-by-n matrices with the
//!   affine-invariant metric <U,V>_X = tr(X^-1 U X^-1 V) induced by the
//!   log-det barrier; geodesics are X^{1/2} exp(t X^{-1/2} V X^{-1/2}) X^{1/2}.
//!
//! Points and tangents are flat real arrays; the descriptor fixes whether an
//! array is a vector (length n) or a full square symmetric matrix (length
//! n*n, row-major).

pub mod symmat;

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

pub use symmat::{sym_matrix_function, MatrixFn};

/// Which of the four supported geometries a descriptor denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ManifoldKind {
    Euclidean,
    PositiveOctant,
    Hypercube,
    SpdCone,
}

impl ManifoldKind {
    pub fn name(&self) -> &'static str {
        match self {
            ManifoldKind::Euclidean => "euclidean",
            ManifoldKind::PositiveOctant => "positive-octant",
            ManifoldKind::Hypercube => "hypercube",
            ManifoldKind::SpdCone => "spd-cone",
        }
    }

    /// Parses the CLI spelling of a manifold kind.
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(ManifoldKind::Euclidean),
            "octant" | "positive-octant" => Ok(ManifoldKind::PositiveOctant),
            "hypercube" | "cube" => Ok(ManifoldKind::Hypercube),
            "spd" | "spd-cone" => Ok(ManifoldKind::SpdCone),
            other => Err(Error::Usage(format!("unknown manifold kind '{other}'"))),
        }
    }
}

/// A manifold together with its dimension parameter: vector length for the
/// three vector manifolds, matrix side for the SPD cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub kind: ManifoldKind,
    pub dim_param: usize,
}

/// A point on a manifold, stored in the ambient chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    pub coords: Vec<T>,
}

/// A tangent vector at some point, stored in the same chart as points.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent<T> {
    pub coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Point { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl<T: Real> Tangent<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Tangent { coords }
    }

    pub fn zeros(len: usize) -> Self {
        Tangent {
            coords: vec![T::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Componentwise scaling; chart-level, not metric-aware.
    pub fn scaled(&self, c: T) -> Self {
        Tangent {
            coords: self.coords.iter().map(|&x| x * c).collect(),
        }
    }
}

impl<T: Real> From<Vec<T>> for Point<T> {
    fn from(coords: Vec<T>) -> Self {
        Point { coords }
    }
}

impl<T: Real> From<Vec<T>> for Tangent<T> {
    fn from(coords: Vec<T>) -> Self {
        Tangent { coords }
    }
}

/// Relative max-norm tolerance under which an SPD array counts as symmetric.
const SPD_SYMMETRY_RTOL: f64 = 1e-12;

#[inline]
fn logit<T: Real>(p: T) -> T {
    p.ln() - (T::one() - p).ln()
}

/// Overflow-safe logistic function, evaluated branch-wise.
#[inline]
fn sigmoid<T: Real>(u: T) -> T {
    if u >= T::zero() {
        T::one() / (T::one() + (-u).exp())
    } else {
        let e = u.exp();
        e / (T::one() + e)
    }
}

impl ManifoldDescriptor {
    pub fn new(kind: ManifoldKind, dim_param: usize) -> Result<Self> {
        if dim_param == 0 {
            return Err(Error::Usage("dim_param must be at least 1".into()));
        }
        Ok(ManifoldDescriptor { kind, dim_param })
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(ManifoldKind::Euclidean, n).expect("n >= 1")
    }

    pub fn positive_octant(n: usize) -> Self {
        Self::new(ManifoldKind::PositiveOctant, n).expect("n >= 1")
    }

    pub fn hypercube(n: usize) -> Self {
        Self::new(ManifoldKind::Hypercube, n).expect("n >= 1")
    }

    pub fn spd_cone(n: usize) -> Self {
        Self::new(ManifoldKind::SpdCone, n).expect("n >= 1")
    }

    /// Length of the ambient storage array: n for vector manifolds, n*n for
    /// the SPD cone (full square layout, kept symmetric).
    pub fn ambient_len(&self) -> usize {
        match self.kind {
            ManifoldKind::SpdCone => self.dim_param * self.dim_param,
            _ => self.dim_param,
        }
    }

    /// Checks the point invariants; returns the first violated constraint
    /// with its coordinate index, or `None` when the point is valid.
    pub fn validate_point<T: Real>(&self, p: &Point<T>) -> Option<String> {
        if p.coords.len() != self.ambient_len() {
            return Some(format!(
                "expected {} coordinates, got {}",
                self.ambient_len(),
                p.coords.len()
            ));
        }
        if let Some(i) = p.coords.iter().position(|x| !x.is_finite()) {
            return Some(format!("non-finite coordinate at index {i}"));
        }
        match self.kind {
            ManifoldKind::Euclidean => None,
            ManifoldKind::PositiveOctant => p
                .coords
                .iter()
                .position(|&x| x <= T::zero())
                .map(|i| format!("coordinate at index {i} must be > 0, got {}", p.coords[i])),
            ManifoldKind::Hypercube => p
                .coords
                .iter()
                .position(|&x| x <= T::zero() || x >= T::one())
                .map(|i| {
                    format!(
                        "coordinate at index {i} must lie in (0,1), got {}",
                        p.coords[i]
                    )
                }),
            ManifoldKind::SpdCone => {
                let n = self.dim_param;
                let (asym, scale) = symmat::asymmetry(&p.coords, n);
                if asym > T::of(SPD_SYMMETRY_RTOL) * scale {
                    return Some(format!(
                        "matrix is not symmetric (|A - A^T|_inf = {asym:e})"
                    ));
                }
                match symmat::min_eigenvalue(&p.coords, n) {
                    Ok(min) if min > T::zero() => None,
                    Ok(min) => Some(format!(
                        "matrix is not positive definite (min eigenvalue {min:e})"
                    )),
                    Err(e) => Some(format!("eigendecomposition failed: {e}")),
                }
            }
        }
    }

    /// Checks the tangent invariants at `p` (shape, finiteness, and symmetry
    /// on the SPD cone).
    pub fn validate_tangent<T: Real>(&self, _p: &Point<T>, v: &Tangent<T>) -> Option<String> {
        if v.coords.len() != self.ambient_len() {
            return Some(format!(
                "expected {} tangent coordinates, got {}",
                self.ambient_len(),
                v.coords.len()
            ));
        }
        if let Some(i) = v.coords.iter().position(|x| !x.is_finite()) {
            return Some(format!("non-finite tangent coordinate at index {i}"));
        }
        if self.kind == ManifoldKind::SpdCone {
            let n = self.dim_param;
            let (asym, scale) = symmat::asymmetry(&v.coords, n);
            if asym > T::of(SPD_SYMMETRY_RTOL) * scale {
                return Some(format!(
                    "tangent matrix is not symmetric (|V - V^T|_inf = {asym:e})"
                ));
            }
        }
        None
    }

    fn require_point<T: Real>(&self, p: &Point<T>) -> Result<()> {
        match self.validate_point(p) {
            None => Ok(()),
            Some(msg) => Err(Error::Domain(format!("{}: {msg}", self.kind.name()))),
        }
    }

    fn require_tangent<T: Real>(&self, p: &Point<T>, v: &Tangent<T>) -> Result<()> {
        match self.validate_tangent(p, v) {
            None => Ok(()),
            Some(msg) => Err(Error::Domain(format!("{}: {msg}", self.kind.name()))),
        }
    }

    /// Evaluates the geodesic gamma with gamma(0) = p and gamma'(0) = v at
    /// parameter `t >= 0`. The closed forms keep the result inside the
    /// manifold's domain exactly.
    pub fn exp_map<T: Real>(&self, p: &Point<T>, v: &Tangent<T>, t: T) -> Result<Point<T>> {
        self.require_point(p)?;
        self.require_tangent(p, v)?;
        if !t.is_finite() || t < T::zero() {
            return Err(Error::Usage(format!(
                "exp_map: t must be finite and >= 0, got {t}"
            )));
        }
        let coords = match self.kind {
            ManifoldKind::Euclidean => p
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(&pj, &vj)| pj + t * vj)
                .collect(),
            ManifoldKind::PositiveOctant => p
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(&pj, &vj)| pj * ((vj / pj) * t).exp())
                .collect(),
            ManifoldKind::Hypercube => {
                // Largest representable value below one; extreme velocities
                // saturate the logistic, and the result must stay inside the
                // open interval.
                let below_one = T::one() - T::epsilon() * T::half();
                p.coords
                    .iter()
                    .zip(&v.coords)
                    .map(|(&pj, &vj)| {
                        let step = t * vj;
                        if step == T::zero() {
                            // sigmoid(logit(p)) only reproduces p up to
                            // roundoff; a zero step must fix the point
                            // exactly.
                            pj
                        } else {
                            sigmoid(logit(pj) + step / (pj * (T::one() - pj)))
                                .max(T::min_positive_value())
                                .min(below_one)
                        }
                    })
                    .collect()
            }
            ManifoldKind::SpdCone => {
                let n = self.dim_param;
                if t == T::zero() || v.coords.iter().all(|&x| x == T::zero()) {
                    return Ok(p.clone());
                }
                let (sqrt_x, inv_sqrt_x) = symmat::sqrt_and_inv_sqrt(&p.coords, n)?;
                let tv: Vec<T> = v.coords.iter().map(|&x| t * x).collect();
                let inner = symmat::symmetrize(
                    &symmat::mat_mul(&symmat::mat_mul(&inv_sqrt_x, &tv, n), &inv_sqrt_x, n),
                    n,
                );
                let e = sym_matrix_function(&inner, n, MatrixFn::Exp)?;
                symmat::symmetrize(
                    &symmat::mat_mul(&symmat::mat_mul(&sqrt_x, &e, n), &sqrt_x, n),
                    n,
                )
            }
        };
        Ok(Point::new(coords))
    }

    /// Metric inner product <u, v>_p.
    pub fn inner<T: Real>(&self, p: &Point<T>, u: &Tangent<T>, v: &Tangent<T>) -> Result<T> {
        self.require_point(p)?;
        self.require_tangent(p, u)?;
        self.require_tangent(p, v)?;
        let val = match self.kind {
            ManifoldKind::Euclidean => u
                .coords
                .iter()
                .zip(&v.coords)
                .map(|(&uj, &vj)| uj * vj)
                .sum(),
            ManifoldKind::PositiveOctant => p
                .coords
                .iter()
                .zip(u.coords.iter().zip(&v.coords))
                .map(|(&pj, (&uj, &vj))| uj * vj / (pj * pj))
                .sum(),
            ManifoldKind::Hypercube => p
                .coords
                .iter()
                .zip(u.coords.iter().zip(&v.coords))
                .map(|(&pj, (&uj, &vj))| {
                    let w = pj * (T::one() - pj);
                    uj * vj / (w * w)
                })
                .sum(),
            ManifoldKind::SpdCone => {
                // tr(X^-1 U X^-1 V) written as <W U W, W V W>_F with
                // W = X^{-1/2}, which keeps the bilinear form manifestly
                // symmetric positive definite.
                let n = self.dim_param;
                let (_, w) = symmat::sqrt_and_inv_sqrt(&p.coords, n)?;
                let wu = symmat::mat_mul(&symmat::mat_mul(&w, &u.coords, n), &w, n);
                let wv = symmat::mat_mul(&symmat::mat_mul(&w, &v.coords, n), &w, n);
                symmat::frobenius_dot(&wu, &wv)
            }
        };
        Ok(val)
    }

    /// Metric norm, sqrt(<v, v>_p).
    pub fn norm<T: Real>(&self, p: &Point<T>, v: &Tangent<T>) -> Result<T> {
        Ok(self.inner(p, v, v)?.max(T::zero()).sqrt())
    }

    /// Converts an ambient partial-derivative array into the Riemannian
    /// gradient G(p)^-1 g.
    pub fn egrad_to_rgrad<T: Real>(&self, p: &Point<T>, g: &Tangent<T>) -> Result<Tangent<T>> {
        self.require_point(p)?;
        if g.coords.len() != self.ambient_len() {
            return Err(Error::Usage(format!(
                "egrad_to_rgrad: expected {} gradient entries, got {}",
                self.ambient_len(),
                g.coords.len()
            )));
        }
        if let Some(i) = g.coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!(
                "egrad_to_rgrad: non-finite entry at index {i}"
            )));
        }
        let coords = match self.kind {
            ManifoldKind::Euclidean => g.coords.clone(),
            ManifoldKind::PositiveOctant => p
                .coords
                .iter()
                .zip(&g.coords)
                .map(|(&pj, &gj)| pj * pj * gj)
                .collect(),
            ManifoldKind::Hypercube => p
                .coords
                .iter()
                .zip(&g.coords)
                .map(|(&pj, &gj)| {
                    let w = pj * (T::one() - pj);
                    w * w * gj
                })
                .collect(),
            ManifoldKind::SpdCone => {
                let n = self.dim_param;
                let gs = symmat::symmetrize(&g.coords, n);
                symmat::symmetrize(
                    &symmat::mat_mul(&symmat::mat_mul(&p.coords, &gs, n), &p.coords, n),
                    n,
                )
            }
        };
        Ok(Tangent::new(coords))
    }

    /// Riemannian distance d(p, q). Geodesics on all four manifolds are
    /// globally minimizing, so the closed forms below are exact:
    /// componentwise log/logit isometries for the octant and hypercube, and
    /// the affine-invariant distance |log(X^{-1/2} Y X^{-1/2})|_F on the SPD
    /// cone.
    pub fn distance<T: Real>(&self, p: &Point<T>, q: &Point<T>) -> Result<T> {
        self.require_point(p)?;
        self.require_point(q)?;
        let d = match self.kind {
            ManifoldKind::Euclidean => p
                .coords
                .iter()
                .zip(&q.coords)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<T>()
                .sqrt(),
            ManifoldKind::PositiveOctant => p
                .coords
                .iter()
                .zip(&q.coords)
                .map(|(&a, &b)| {
                    let d = a.ln() - b.ln();
                    d * d
                })
                .sum::<T>()
                .sqrt(),
            ManifoldKind::Hypercube => p
                .coords
                .iter()
                .zip(&q.coords)
                .map(|(&a, &b)| {
                    let d = logit(a) - logit(b);
                    d * d
                })
                .sum::<T>()
                .sqrt(),
            ManifoldKind::SpdCone => {
                let n = self.dim_param;
                let (_, w) = symmat::sqrt_and_inv_sqrt(&p.coords, n)?;
                let m = symmat::symmetrize(
                    &symmat::mat_mul(&symmat::mat_mul(&w, &q.coords, n), &w, n),
                    n,
                );
                let (eigs, _) = symmat::sym_eigen(&m, n)?;
                let mut sum = T::zero();
                for lam in eigs {
                    if lam <= T::zero() {
                        return Err(Error::Numeric(
                            "spd distance: congruence-transformed matrix lost positive definiteness".into(),
                        ));
                    }
                    let l = lam.ln();
                    sum = sum + l * l;
                }
                sum.sqrt()
            }
        };
        Ok(d)
    }
}

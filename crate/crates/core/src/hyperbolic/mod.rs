//! Hyperbolic 3-space in the upper-half-space model, acted on by SL₂(ℂ)
//! through the Poincaré extension of Möbius transformations.

mod center;
mod segments;

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use center::{approximate_center, displacement_radius, oracle_grid_best, CenterParams};
pub use segments::{min_displacement_on_segment, point_segment_distance, polygon_thinness_defect};

/// Thinness constant of geodesic triangles in Hⁿ, `log(1 + √2)`.
pub fn thin_triangle_delta() -> f64 {
    (1.0 + 2f64.sqrt()).ln()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperbolicError {
    #[error("matrix is not in SL2(C): det = {0}")]
    NotUnimodular(Complex64),
    #[error("invalid point: height {h} must be positive and coordinates finite")]
    InvalidPoint { h: f64 },
    #[error("point escapes to boundary")]
    PointEscapes,
    #[error("center search failed; displacement trace {trace:?}")]
    CenterSearchFailed { trace: Vec<f64> },
    #[error("at least one matrix is required")]
    NoMatrices,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewPoints(usize),
    #[error("consecutive polygon vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2C {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl Matrix2C {
    /// Accepts `|det − 1| ≤ 1e-9` as is and rescales by `√det` when within `1e-6`.
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, HyperbolicError> {
        let m = Self { a, b, c, d };
        let det = m.det();
        let err = (det - 1.0).norm();
        if err <= 1e-9 {
            Ok(m)
        } else if err <= 1e-6 {
            Ok(m.scaled(det.sqrt().inv()))
        } else {
            Err(HyperbolicError::NotUnimodular(det))
        }
    }

    /// Rescales any invertible matrix into SL₂(ℂ).
    pub fn normalized(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, HyperbolicError> {
        let m = Self { a, b, c, d };
        let det = m.det();
        if det.norm() == 0.0 || !det.re.is_finite() || !det.im.is_finite() {
            return Err(HyperbolicError::NotUnimodular(det));
        }
        Ok(m.scaled(det.sqrt().inv()))
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, HyperbolicError> {
        let r = |x: f64| Complex64::new(x, 0.0);
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// `diag(λ, 1/λ)`.
    pub fn diagonal(lambda: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: lambda,
            b: zero,
            c: zero,
            d: lambda.inv(),
        }
    }

    fn scaled(self, k: Complex64) -> Self {
        Self {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            d: self.d * k,
        }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Sum of squared entry moduli; `cosh d(j, Mj)` is half of it.
    pub fn frobenius_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (self.a - 1.0).norm() <= tol
            && self.b.norm() <= tol
            && self.c.norm() <= tol
            && (self.d - 1.0).norm() <= tol
    }
}

impl Mul for Matrix2C {
    type Output = Matrix2C;
    fn mul(self, o: Matrix2C) -> Matrix2C {
        let m = Matrix2C {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        };
        // keep det = 1 against rounding drift
        let det = m.det();
        if (det - 1.0).norm() > 1e-12 && det.norm() > 0.0 {
            m.scaled(det.sqrt().inv())
        } else {
            m
        }
    }
}

/// The point `z + h·j` of upper half-space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointH3 {
    pub z: Complex64,
    pub h: f64,
}

impl PointH3 {
    pub fn new(z: Complex64, h: f64) -> Result<Self, HyperbolicError> {
        if !(h > 0.0) || !h.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(HyperbolicError::InvalidPoint { h });
        }
        Ok(Self { z, h })
    }

    /// The standard basepoint `j = (0, 1)`.
    pub fn basepoint() -> Self {
        Self {
            z: Complex64::new(0.0, 0.0),
            h: 1.0,
        }
    }

    pub fn at(x: f64, y: f64, h: f64) -> Self {
        Self::new(Complex64::new(x, y), h).expect("valid upper half-space point")
    }
}

impl fmt::Display for PointH3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}{:+.6}i, h={:.6})", self.z.re, self.z.im, self.h)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HyperbolicContext {
    pub delta: f64,
    pub samples_per_segment: usize,
    pub tolerance: f64,
    pub center: CenterParams,
}

impl Default for HyperbolicContext {
    fn default() -> Self {
        Self {
            delta: thin_triangle_delta(),
            samples_per_segment: 256,
            tolerance: 1e-9,
            center: CenterParams::default(),
        }
    }
}

/// Poincaré extension: for `p = z + h·j`, `D = |cz+d|² + |c|²h²`,
/// image `((az+b)·conj(cz+d) + a·conj(c)·h²)/D + (h/D)·j`.
pub fn mobius_act(m: &Matrix2C, p: &PointH3) -> Result<PointH3, HyperbolicError> {
    let czd = m.c * p.z + m.d;
    let h2 = p.h * p.h;
    let denom = czd.norm_sqr() + m.c.norm_sqr() * h2;
    if !(denom > f64::MIN_POSITIVE) || !denom.is_finite() {
        return Err(HyperbolicError::PointEscapes);
    }
    let z = ((m.a * p.z + m.b) * czd.conj() + m.a * m.c.conj() * h2) / denom;
    PointH3::new(z, p.h / denom).map_err(|_| HyperbolicError::PointEscapes)
}

/// `arccosh(1 + (|z₁−z₂|² + (h₁−h₂)²)/(2h₁h₂))`, evaluated as `2·asinh(·)` for accuracy.
pub fn dist_h3(p: &PointH3, q: &PointH3) -> f64 {
    let num = (p.z - q.z).norm_sqr() + (p.h - q.h) * (p.h - q.h);
    2.0 * (num.sqrt() / (2.0 * (p.h * q.h).sqrt())).asinh()
}

/// `2·arccosh(|tr|/2)`, clamped to 0 when `|tr| ≤ 2`.
pub fn translation_length_from_trace(trace: Complex64) -> f64 {
    let half = trace.norm() / 2.0;
    if half <= 1.0 {
        0.0
    } else {
        2.0 * half.acosh()
    }
}

pub fn translation_length_trace(m: &Matrix2C) -> f64 {
    translation_length_from_trace(m.trace())
}

/// The point at fraction `s` of the arclength from `p` to `q`.
///
/// Interpolates in the hyperboloid model, where the geodesic is
/// `(sinh((1−s)d)·P + sinh(sd)·Q)/sinh d`; only the coordinates `X₀−X₃ = 1/h`
/// and `X₁ + iX₂ = z/h` are needed, and both combine without cancellation.
pub fn geodesic_point(p: &PointH3, q: &PointH3, s: f64) -> PointH3 {
    let d = dist_h3(p, q);
    if d == 0.0 {
        return *p;
    }
    let (w1, w2) = if d < 1e-8 {
        (1.0 - s, s)
    } else {
        let sd = d.sinh();
        (((1.0 - s) * d).sinh() / sd, (s * d).sinh() / sd)
    };
    let u = w1 / p.h + w2 / q.h;
    let x = w1 * p.z / p.h + w2 * q.z / q.h;
    PointH3 {
        z: x / u,
        h: 1.0 / u,
    }
}

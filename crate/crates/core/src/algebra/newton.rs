//! Newton polygons of bivariate polynomials and the growth exponents they
//! determine along branches of `{p = 0}` with `|z| → ∞`.
//!
//! Along such a branch, `log|y| ≈ D·log|z|` and the term `y^m z^n` has size
//! about `(m·D + n)·log|z|`. Cancellation forces the maximum of the linear form
//! `(D, 1)·(m, n)` to be attained on an edge of the hull, so `D = u/v` for an
//! edge with primitive outward normal `(u, v)`, `v > 0`. Writing the edge
//! direction as `(a, b)` with `a > 0`, the same value is `−b/a`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::{AlgebraError, BivariatePolynomial, GaussianRational, Monomial, Poly};

/// The edge polynomial `y^r z^s q(y^a z^b)` of one hull edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeData {
    pub r: i64,
    pub s: i64,
    pub a: i64,
    pub b: i64,
    pub q: Poly,
    /// `lim log|y| / log|z|` for branches governed by this edge; `None` for
    /// edges parallel to the `z` axis.
    pub exponent: Option<BigRational>,
}

impl EdgeData {
    /// Expands `y^r z^s q(y^a z^b)` back into monomials.
    pub fn reconstruct(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(self.q.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as i64;
            ((self.r + k * self.a, self.s + k * self.b), c.clone())
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonEdge {
    pub from: Monomial,
    pub to: Monomial,
    /// Primitive outward normal.
    pub normal: (i64, i64),
    pub data: EdgeData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub support: Vec<Monomial>,
    /// Hull vertices in counterclockwise order starting from the lexicographically
    /// smallest; collinear boundary points are not vertices.
    pub hull: Vec<Monomial>,
    pub edges: Vec<NewtonEdge>,
}

fn cross(o: Monomial, a: Monomial, b: Monomial) -> i128 {
    let (ax, ay) = ((a.0 - o.0) as i128, (a.1 - o.1) as i128);
    let (bx, by) = ((b.0 - o.0) as i128, (b.1 - o.1) as i128);
    ax * by - ay * bx
}

/// Convex hull vertices, counterclockwise, by the monotone chain.
pub fn convex_hull(points: &[Monomial]) -> Vec<Monomial> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Monomial> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Monomial> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn on_segment(p: Monomial, a: Monomial, b: Monomial) -> bool {
    cross(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn edge_data(p: &BivariatePolynomial, from: Monomial, to: Monomial) -> EdgeData {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let g = dx.gcd(&dy);
    let (mut a, mut b) = (dx / g, dy / g);
    let mut start = from;
    let mut steps = g;
    if a < 0 || (a == 0 && b < 0) {
        a = -a;
        b = -b;
        start = to;
    }
    steps = steps.abs();
    let q = Poly::new(
        (0..=steps)
            .map(|k| p.coeff((start.0 + k * a, start.1 + k * b)))
            .collect(),
    );
    let exponent = (a != 0).then(|| BigRational::new(BigInt::from(-b), BigInt::from(a)));
    EdgeData {
        r: start.0,
        s: start.1,
        a,
        b,
        q,
        exponent,
    }
}

pub fn newton_polygon(p: &BivariatePolynomial) -> Result<NewtonPolygon, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let support = p.support();
    let hull = convex_hull(&support);
    let n = hull.len();
    let pairs: Vec<(Monomial, Monomial)> = match n {
        1 => Vec::new(),
        2 => vec![(hull[0], hull[1]), (hull[1], hull[0])],
        _ => (0..n).map(|i| (hull[i], hull[(i + 1) % n])).collect(),
    };
    let edges = pairs
        .into_iter()
        .map(|(from, to)| {
            let (dx, dy) = (to.0 - from.0, to.1 - from.1);
            let g = dx.gcd(&dy);
            NewtonEdge {
                from,
                to,
                normal: (dy / g, -dx / g),
                data: edge_data(p, from, to),
            }
        })
        .collect();
    Ok(NewtonPolygon {
        support,
        hull,
        edges,
    })
}

impl NewtonPolygon {
    /// Terms of `p` lying on the hull boundary.
    pub fn boundary_terms(&self, p: &BivariatePolynomial) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(p.terms().filter_map(|(m, c)| {
            let on_boundary = match self.hull.len() {
                1 => m == self.hull[0],
                _ => self.edges.iter().any(|e| on_segment(m, e.from, e.to)),
            };
            on_boundary.then(|| (m, c.clone()))
        }))
    }
}

/// One entry per hull edge whose outward normal points into `v > 0`,
/// sorted by exponent.
pub fn asymptotic_exponents(
    p: &BivariatePolynomial,
) -> Result<Vec<(BigRational, EdgeData)>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if p.len() < 2 {
        return Err(AlgebraError::NoBranches);
    }
    let poly = newton_polygon(p)?;
    let mut out: Vec<(BigRational, EdgeData)> = poly
        .edges
        .into_iter()
        .filter(|e| e.normal.1 > 0)
        .map(|e| {
            let exp = BigRational::new(BigInt::from(e.normal.0), BigInt::from(e.normal.1));
            debug_assert_eq!(Some(&exp), e.data.exponent.as_ref());
            (exp, e.data)
        })
        .collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

/// Leading coefficient check used by callers that need `q(0) ≠ 0`.
pub fn edge_constant_term(data: &EdgeData) -> GaussianRational {
    data.q.coeff(0)
}

//! Exact arithmetic over ℚ(i): polynomials, Laurent polynomials, rational
//! functions in one variable, bivariate polynomials and their Newton polygons.

mod bivariate;
pub mod expr;
mod gaussian;
mod laurent;
pub mod newton;
mod poly;
mod rational_function;
pub mod roots;

use thiserror::Error;

pub use bivariate::{BivariatePolynomial, Monomial};
pub use expr::{parse_bivariate, parse_gaussian, parse_rational_function, ParseError};
#[allow(unused_imports)]
pub(crate) use gaussian::ratio_to_f64;
pub use gaussian::GaussianRational;
pub use laurent::LaurentPolynomial;
pub use newton::{asymptotic_exponents, newton_polygon, EdgeData, NewtonEdge, NewtonPolygon};
pub use poly::Poly;
pub use rational_function::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("valuation of zero undefined")]
    ZeroValuation,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("no branches: a single-term polynomial has no asymptotic exponents")]
    NoBranches,
    #[error("root finder did not converge")]
    RootFinding,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Growth order at `t → ∞`; see [`RationalFunction::degree_at_infinity`].
pub fn degree_at_infinity(f: &RationalFunction) -> Result<i64, AlgebraError> {
    f.degree_at_infinity()
}

/// See [`RationalFunction::substitute_end_chart`].
pub fn substitute_end_chart(
    f: &RationalFunction,
    t0: &GaussianRational,
) -> Result<RationalFunction, AlgebraError> {
    f.substitute_end_chart(t0)
}

/// Double-precision value of `p(y, z)`.
pub fn evaluate_bivariate(
    p: &BivariatePolynomial,
    y: num_complex::Complex64,
    z: num_complex::Complex64,
) -> num_complex::Complex64 {
    p.evaluate(y, z)
}

/// `log|y| / log|z|` for every nonzero root `y` of `p(·, z)`.
pub fn branch_exponents_at(
    p: &BivariatePolynomial,
    z: num_complex::Complex64,
) -> Result<Vec<f64>, AlgebraError> {
    let coeffs = p.coefficients_in_y(z);
    let roots = roots::polynomial_roots(&coeffs)?;
    let lz = z.norm().ln();
    Ok(roots
        .into_iter()
        .filter(|y| y.norm() > 0.0)
        .map(|y| y.norm().ln() / lz)
        .collect())
}

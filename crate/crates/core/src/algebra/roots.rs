//! Numeric roots of one-variable complex polynomials (Aberth–Ehrlich), used as
//! the floating-point companion to the exact Newton-polygon exponents.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::AlgebraError;

const MAX_ITERATIONS: usize = 1000;

/// All roots, with multiplicity, of `Σ coeffs[k] x^k`. Zero roots are returned exactly.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, AlgebraError> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    let c = &c[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = c.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-c[0] / c[1]);
        return Ok(roots);
    }

    let mut z = initial_guesses(c);
    let dc: Vec<Complex64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a * k as f64)
        .collect();
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let p = horner(c, z[k]);
            if p.norm() == 0.0 {
                converged[k] = true;
                continue;
            }
            let dp = horner(&dc, z[k]);
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                converged[k] = true;
                continue;
            }
            z[k] -= step;
            if step.norm() <= 1e-14 * z[k].norm().max(f64::MIN_POSITIVE) {
                converged[k] = true;
            }
        }
        if converged.iter().all(|&x| x) {
            break;
        }
    }
    if z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(AlgebraError::RootFinding);
    }
    roots.extend(z);
    Ok(roots)
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, log|c_k|)`, so roots of very different magnitudes start near their scale.
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(k, a)| (k, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross =
                (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let ((i, li), (j, lj)) = (w[0], w[1]);
        let count = j - i;
        let radius = ((li - lj) / count as f64).exp();
        for m in 0..count {
            let angle = 2.0 * PI * m as f64 / count as f64 + 0.4 + out.len() as f64 * 0.7;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

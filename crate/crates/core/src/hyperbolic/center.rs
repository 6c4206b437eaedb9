use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    dist_h3, geodesic_point, mobius_act, HyperbolicContext, HyperbolicError, Matrix2C, PointH3,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CenterParams {
    /// Window (in iterations) over which progress is measured.
    pub patience: usize,
    /// Stop once the window's improvement falls below this.
    pub min_improvement: f64,
    pub max_iterations: usize,
    /// Smallest step fraction tried before giving up on a start.
    pub min_step: f64,
    /// Half-width, in units of the start height, of the oracle box.
    pub oracle_radius: f64,
    pub oracle_points: usize,
}

impl Default for CenterParams {
    fn default() -> Self {
        Self {
            patience: 50,
            min_improvement: 0.01,
            max_iterations: 5000,
            min_step: 1e-6,
            oracle_radius: 3.0,
            oracle_points: 10_000,
        }
    }
}

/// `r_S(x) = max_M d(x, Mx)` together with the index of a maximizer.
pub fn displacement_radius(
    mats: &[Matrix2C],
    x: &PointH3,
) -> Result<(f64, usize), HyperbolicError> {
    let mut best = (0.0, 0);
    for (k, m) in mats.iter().enumerate() {
        let d = dist_h3(x, &mobius_act(m, x)?);
        if d > best.0 {
            best = (d, k);
        }
    }
    Ok(best)
}

fn escaped(p: &PointH3) -> bool {
    !p.h.is_finite() || p.h < 1e-200 || p.h > 1e200 || !p.z.re.is_finite() || !p.z.im.is_finite()
}

fn descend(
    mats: &[Matrix2C],
    start: PointH3,
    params: &CenterParams,
) -> Result<(PointH3, f64), HyperbolicError> {
    let mut x = start;
    let (mut r, mut worst) = displacement_radius(mats, &x)?;
    let mut history = vec![r];
    let mut step = 1.0;
    for _ in 0..params.max_iterations {
        if r == 0.0 || step < params.min_step {
            break;
        }
        let mx = mobius_act(&mats[worst], &x)?;
        let target = geodesic_point(&x, &mx, 0.5);
        let y = geodesic_point(&x, &target, step);
        if escaped(&y) {
            return Err(HyperbolicError::CenterSearchFailed { trace: history });
        }
        let (ry, wy) = match displacement_radius(mats, &y) {
            Ok(v) => v,
            Err(_) => return Err(HyperbolicError::CenterSearchFailed { trace: history }),
        };
        if ry < r {
            x = y;
            r = ry;
            worst = wy;
        } else {
            step *= 0.5;
        }
        history.push(r);
        let n = history.len();
        if n > params.patience && history[n - 1 - params.patience] - r < params.min_improvement {
            break;
        }
    }
    Ok((x, r))
}

fn perturbations(x0: &PointH3) -> Vec<PointH3> {
    let offsets: [(f64, f64, f64); 8] = [
        (1.0, 0.0, 0.0),
        (-1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, -1.0, 0.0),
        (0.0, 0.0, 1.0),
        (0.0, 0.0, -1.0),
        (1.0, 1.0, 1.0),
        (-1.0, -1.0, -1.0),
    ];
    offsets
        .iter()
        .map(|&(dx, dy, ds)| PointH3 {
            z: x0.z + Complex64::new(dx, dy) * x0.h,
            h: x0.h * ds.exp(),
        })
        .collect()
}

/// A point `x` whose `r_S(x)` is within the optimization slack of the minimum.
///
/// Geodesic descent toward the midpoint of `[x, Mx]` for the currently
/// worst-displacing `M`, halving the step on non-improvement, run from `x0`
/// and eight perturbations of it; the best end point wins, ties going to the
/// earlier start.
pub fn approximate_center(
    mats: &[Matrix2C],
    ctx: &HyperbolicContext,
    x0: &PointH3,
) -> Result<(PointH3, f64), HyperbolicError> {
    if mats.is_empty() {
        return Err(HyperbolicError::NoMatrices);
    }
    let mut best: Option<(PointH3, f64)> = None;
    for start in std::iter::once(*x0).chain(perturbations(x0)) {
        let found = descend(mats, start, &ctx.center)?;
        match best {
            Some((_, r)) if found.1 >= r - ctx.tolerance => {}
            _ => best = Some(found),
        }
    }
    Ok(best.expect("at least one start"))
}

fn radical_inverse(mut n: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while n > 0 {
        out += (n % base) as f64 * inv;
        n /= base;
        inv /= base as f64;
    }
    out
}

/// Minimum of `r_S` over a Halton point set filling the box
/// `z ∈ z₀ + h₀·[−R, R]²`, `log h ∈ log h₀ + [−R, R]`.
pub fn oracle_grid_best(
    mats: &[Matrix2C],
    around: &PointH3,
    radius: f64,
    count: usize,
) -> Result<(PointH3, f64), HyperbolicError> {
    if mats.is_empty() {
        return Err(HyperbolicError::NoMatrices);
    }
    let mut best = (*around, displacement_radius(mats, around)?.0);
    for k in 1..=count {
        let u = [
            radical_inverse(k, 2),
            radical_inverse(k, 3),
            radical_inverse(k, 5),
        ];
        let p = PointH3 {
            z: around.z + Complex64::new(2.0 * u[0] - 1.0, 2.0 * u[1] - 1.0) * radius * around.h,
            h: around.h * ((2.0 * u[2] - 1.0) * radius).exp(),
        };
        let r = displacement_radius(mats, &p)?.0;
        if r < best.1 {
            best = (p, r);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::translation_length_trace;

    #[test]
    fn identity_stays_put() {
        let x0 = PointH3::at(0.2, -0.1, 1.5);
        let (x, r) =
            approximate_center(&[Matrix2C::identity()], &HyperbolicContext::default(), &x0)
                .unwrap();
        assert_eq!(x, x0);
        assert!(r < 1e-12);
    }

    #[test]
    fn loxodromic_pair_centers_near_axis() {
        let m = Matrix2C::diagonal(Complex64::new(4.0, 0.0));
        let mats = [m, m.inverse()];
        let ctx = HyperbolicContext::default();
        let (x, r) = approximate_center(&mats, &ctx, &PointH3::at(0.7, 0.4, 0.8)).unwrap();
        assert!((r - 2.0 * 4f64.ln()).abs() <= 1.0, "{r} at {x}");
        assert!(r >= translation_length_trace(&m) - 1e-9);
        let (_, grid) = oracle_grid_best(&mats, &PointH3::basepoint(), 3.0, 10_000).unwrap();
        assert!(r <= grid + 1.0);
    }

    #[test]
    fn perpendicular_axes() {
        let m1 = Matrix2C::diagonal(Complex64::new(3.0, 0.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rot = Matrix2C::from_real(s, -s, s, s).unwrap();
        let m2 = rot * m1 * rot.inverse();
        let mats = [m1, m2];
        let ctx = HyperbolicContext::default();
        let (_, r) = approximate_center(&mats, &ctx, &PointH3::at(0.5, 0.5, 2.0)).unwrap();
        let at_origin = displacement_radius(&mats, &PointH3::basepoint()).unwrap().0;
        assert!((r - at_origin).abs() <= 1.0, "{r} vs {at_origin}");
        let (_, grid) = oracle_grid_best(&mats, &PointH3::basepoint(), 3.0, 10_000).unwrap();
        assert!(r <= grid + 1.0);
    }

    #[test]
    fn halton_is_in_unit_interval() {
        for k in 1..1000 {
            let v = radical_inverse(k, 3);
            assert!((0.0..1.0).contains(&v));
        }
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }
}

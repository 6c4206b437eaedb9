use super::{
    dist_h3, geodesic_point, mobius_act, HyperbolicContext, HyperbolicError, Matrix2C, PointH3,
};

const GOLDEN_ITERATIONS: usize = 90;

/// Samples `[x, Mx]` at `ctx.samples_per_segment` evenly spaced points and
/// returns the sample `y` minimizing `d(y, My)`.
pub fn min_displacement_on_segment(
    m: &Matrix2C,
    x: &PointH3,
    ctx: &HyperbolicContext,
) -> Result<(PointH3, f64), HyperbolicError> {
    let mx = mobius_act(m, x)?;
    let n = ctx.samples_per_segment.max(2);
    let mut best = (*x, f64::INFINITY);
    for k in 0..n {
        let s = k as f64 / (n - 1) as f64;
        let y = geodesic_point(x, &mx, s);
        let d = dist_h3(&y, &mobius_act(m, &y)?);
        if d < best.1 {
            best = (y, d);
        }
    }
    Ok(best)
}

/// Distance from `x` to the geodesic segment `[a, b]`.
///
/// `s ↦ d(x, γ(s))` is convex along a geodesic, so golden-section search on
/// `[0, 1]` converges to the foot of the perpendicular or to an endpoint.
pub fn point_segment_distance(x: &PointH3, a: &PointH3, b: &PointH3) -> f64 {
    let f = |s: f64| dist_h3(x, &geodesic_point(a, b, s));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut m1 = hi - ratio * (hi - lo);
    let mut m2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(m1), f(m2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - ratio * (hi - lo);
            f1 = f(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + ratio * (hi - lo);
            f2 = f(m2);
        }
    }
    f1.min(f2).min(f(0.0)).min(f(1.0))
}

/// For the closed geodesic polygon on `points`: the largest distance from a
/// sampled point of one side to the union of the other sides.
pub fn polygon_thinness_defect(
    points: &[PointH3],
    ctx: &HyperbolicContext,
) -> Result<f64, HyperbolicError> {
    let n = points.len();
    if n < 3 {
        return Err(HyperbolicError::TooFewPoints(n));
    }
    for i in 0..n {
        let j = (i + 1) % n;
        if dist_h3(&points[i], &points[j]) <= ctx.tolerance {
            return Err(HyperbolicError::RepeatedVertex(i, j));
        }
    }
    let samples = ctx.samples_per_segment.max(2);
    let mut worst = 0.0f64;
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        for k in 0..samples {
            let x = geodesic_point(&a, &b, k as f64 / (samples - 1) as f64);
            let mut nearest = f64::INFINITY;
            for j in (0..n).filter(|&j| j != i) {
                let d = point_segment_distance(&x, &points[j], &points[(j + 1) % n]);
                nearest = nearest.min(d);
                if nearest <= worst {
                    break;
                }
            }
            worst = worst.max(nearest);
        }
    }
    Ok(worst)
}

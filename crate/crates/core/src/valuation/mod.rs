//! Trace functions along a rational curve of SL₂ representations, their
//! valuations at the ends of the curve, and the limiting length functions and
//! tree metrics they determine.

mod curve_spec;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_gaussian, AlgebraError, GaussianRational, RationalFunction};
use crate::hyperbolic::{
    approximate_center, displacement_radius, dist_h3, translation_length_from_trace,
    HyperbolicContext, HyperbolicError, Matrix2C, PointH3,
};
use crate::tree::{classify_from_orbit, FiniteMetric, TreeError, Q};
use crate::words::{Alphabet, Word, WordBall, WordError};

pub use curve_spec::{parse_curve_spec, CurveSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValuationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error("generator {generator}: determinant is {det}, not 1")]
    Determinant { generator: char, det: String },
    #[error("invalid curve spec: {0}")]
    Spec(String),
    #[error("invalid end {0:?}: expected `infinity` or `t0=VALUE`")]
    End(String),
    #[error("approximate center drifts; supply conjugating normalization (distance {near:.4} then {far:.4})")]
    CenterDrift { near: f64, far: f64 },
    #[error("numeric overflow at t = {0}")]
    Overflow(f64),
    #[error("sample points must be increasing and greater than 1")]
    BadSamples,
    #[error("orbit distances for {word} are not realizable in a tree")]
    OrbitNotRealizable { word: String },
}

/// A 2×2 matrix of rational functions of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RfMatrix {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub c: RationalFunction,
    pub d: RationalFunction,
}

impl RfMatrix {
    pub fn new(
        a: RationalFunction,
        b: RationalFunction,
        c: RationalFunction,
        d: RationalFunction,
    ) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(
            RationalFunction::one(),
            RationalFunction::zero(),
            RationalFunction::zero(),
            RationalFunction::one(),
        )
    }

    pub fn entries(&self) -> [&RationalFunction; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> RationalFunction {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> RationalFunction {
        &self.a + &self.d
    }

    /// Adjugate; the inverse for determinant 1.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn mul(&self, o: &RfMatrix) -> RfMatrix {
        let dot = |x: &RationalFunction,
                   y: &RationalFunction,
                   z: &RationalFunction,
                   w: &RationalFunction| { &(x * y) + &(z * w) };
        RfMatrix::new(
            dot(&self.a, &o.a, &self.b, &o.c),
            dot(&self.a, &o.b, &self.b, &o.d),
            dot(&self.c, &o.a, &self.d, &o.c),
            dot(&self.c, &o.b, &self.d, &o.d),
        )
    }

    pub fn pow(&self, n: u32) -> RfMatrix {
        (0..n).fold(RfMatrix::identity(), |acc, _| acc.mul(self))
    }

    pub fn map(
        &self,
        f: impl Fn(&RationalFunction) -> Result<RationalFunction, AlgebraError>,
    ) -> Result<Self, AlgebraError> {
        Ok(Self::new(
            f(&self.a)?,
            f(&self.b)?,
            f(&self.c)?,
            f(&self.d)?,
        ))
    }

    pub fn eval_complex(&self, t: Complex64) -> [Complex64; 4] {
        [
            self.a.eval_complex(t),
            self.b.eval_complex(t),
            self.c.eval_complex(t),
            self.d.eval_complex(t),
        ]
    }
}

impl fmt::Display for RfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A rational curve `t ↦ ρ_t` in the representation variety of a free group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCurve {
    alphabet: Alphabet,
    generators: Vec<RfMatrix>,
    inverses: Vec<RfMatrix>,
}

impl RepCurve {
    /// Generators in alphabet order; each must have determinant ≡ 1.
    pub fn new(alphabet: Alphabet, generators: Vec<RfMatrix>) -> Result<Self, ValuationError> {
        if generators.len() != alphabet.rank() {
            return Err(ValuationError::Spec(format!(
                "{} matrices for {} generators",
                generators.len(),
                alphabet.rank()
            )));
        }
        for (k, m) in generators.iter().enumerate() {
            let det = m.det();
            if !det.is_one() {
                return Err(ValuationError::Determinant {
                    generator: alphabet.names()[k],
                    det: det.to_string(),
                });
            }
        }
        let inverses = generators.iter().map(RfMatrix::adjugate).collect();
        Ok(Self {
            alphabet,
            generators,
            inverses,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> &[RfMatrix] {
        &self.generators
    }

    fn letter_matrix(&self, l: crate::words::Letter) -> &RfMatrix {
        let g = l.generator as usize;
        if l.inverse {
            &self.inverses[g]
        } else {
            &self.generators[g]
        }
    }
}

/// An end of the parameter line: `t → ∞`, or `t → t0` through the chart
/// `t = t0 + 1/s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum End {
    Infinity,
    Finite(GaussianRational),
}

impl End {
    /// The parameter value `t` at chart coordinate `s` (`s → ∞` at the end).
    pub fn parameter_at(&self, s: f64) -> Complex64 {
        match self {
            End::Infinity => Complex64::new(s, 0.0),
            End::Finite(t0) => t0.to_complex() + 1.0 / s,
        }
    }

    /// `f` rewritten in the end's chart variable.
    pub fn chart(&self, f: &RationalFunction) -> Result<RationalFunction, AlgebraError> {
        match self {
            End::Infinity => Ok(f.clone()),
            End::Finite(t0) => f.substitute_end_chart(t0),
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Infinity => f.write_str("infinity"),
            End::Finite(t0) => write!(f, "t0={t0}"),
        }
    }
}

impl FromStr for End {
    type Err = ValuationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "infinity" || s == "inf" {
            return Ok(End::Infinity);
        }
        match s.strip_prefix("t0=") {
            Some(v) => parse_gaussian(v)
                .map(End::Finite)
                .map_err(|_| ValuationError::End(s.to_string())),
            None => Err(ValuationError::End(s.to_string())),
        }
    }
}

/// Symbolic `ρ_t(w)`.
pub fn evaluate_word_matrix(curve: &RepCurve, w: &Word) -> RfMatrix {
    w.letters().iter().fold(RfMatrix::identity(), |acc, &l| {
        acc.mul(curve.letter_matrix(l))
    })
}

pub fn trace_function(curve: &RepCurve, w: &Word) -> RationalFunction {
    evaluate_word_matrix(curve, w).trace()
}

/// `f_w = (trace ρ_t w)² − 4`.
pub fn f_of(curve: &RepCurve, w: &Word) -> RationalFunction {
    f_from_trace(&trace_function(curve, w))
}

fn f_from_trace(tr: &RationalFunction) -> RationalFunction {
    &(tr * tr) - &RationalFunction::from_integer(4)
}

/// Growth order of `f` at the end: positive iff `|f|` blows up there.
pub fn valuation(f: &RationalFunction, end: &End) -> Result<i64, AlgebraError> {
    end.chart(f)?.degree_at_infinity()
}

fn length_from_f(f: &RationalFunction, end: &End) -> Result<i64, AlgebraError> {
    if f.is_zero() {
        return Ok(0);
    }
    Ok(valuation(f, end)?.max(0))
}

/// `max(V(f_w), 0)`, and 0 when `f_w ≡ 0`.
pub fn limit_length(curve: &RepCurve, end: &End, w: &Word) -> Result<i64, AlgebraError> {
    length_from_f(&f_of(curve, w), end)
}

/// Memoized word matrices; each word is built from its longest proper prefix.
#[derive(Debug, Clone)]
pub struct MatrixCache<'c> {
    curve: &'c RepCurve,
    cache: HashMap<Word, RfMatrix>,
}

impl<'c> MatrixCache<'c> {
    pub fn new(curve: &'c RepCurve) -> Self {
        let mut cache = HashMap::new();
        cache.insert(Word::identity(), RfMatrix::identity());
        Self { curve, cache }
    }

    pub fn curve(&self) -> &RepCurve {
        self.curve
    }

    pub fn matrix(&mut self, w: &Word) -> RfMatrix {
        if let Some(m) = self.cache.get(w) {
            return m.clone();
        }
        let letters = w.letters();
        let prefix = Word::from_letters(letters[..letters.len() - 1].iter().copied());
        let m = self
            .matrix(&prefix)
            .mul(self.curve.letter_matrix(letters[letters.len() - 1]));
        self.cache.insert(w.clone(), m.clone());
        m
    }

    pub fn limit_length(&mut self, end: &End, w: &Word) -> Result<i64, AlgebraError> {
        length_from_f(&f_from_trace(&self.matrix(w).trace()), end)
    }

    /// `d̄(1, w) = 2·max(0, max entry valuation of ρ(w))`.
    pub fn displacement(&mut self, end: &End, w: &Word) -> Result<i64, AlgebraError> {
        let m = self.matrix(w);
        let mut top = 0;
        for e in m.entries() {
            if !e.is_zero() {
                top = top.max(valuation(e, end)?);
            }
        }
        Ok(2 * top)
    }

    /// `max(0, d̄(1, w²) − d̄(1, w))`, the translation length read off the
    /// orbit of the basepoint.
    pub fn orbit_limit_length(&mut self, end: &End, w: &Word) -> Result<i64, ValuationError> {
        let d1 = self.displacement(end, w)?;
        let d2 = self.displacement(end, &w.pow(2))?;
        let class = classify_from_orbit(&Q::from_integer(d1.into()), &Q::from_integer(d2.into()))
            .map_err(|_| ValuationError::OrbitNotRealizable {
            word: self.curve.alphabet.render(w),
        })?;
        Ok(i64::try_from(class.translation_length.to_integer()).expect("small integer"))
    }
}

pub fn orbit_limit_length(curve: &RepCurve, end: &End, w: &Word) -> Result<i64, ValuationError> {
    MatrixCache::new(curve).orbit_limit_length(end, w)
}

/// The shortlex-first ball word with positive limit length, if any.
pub fn blows_up(
    curve: &RepCurve,
    end: &End,
    ball: &WordBall,
) -> Result<Option<Word>, AlgebraError> {
    let mut cache = MatrixCache::new(curve);
    for w in &ball.words {
        if cache.limit_length(end, w)? > 0 {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

/// Limit length function restricted to a ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthFunction {
    pub values: BTreeMap<Word, i64>,
}

impl LengthFunction {
    pub fn get(&self, w: &Word) -> Option<i64> {
        self.values.get(w).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|&v| v == 0)
    }
}

pub fn length_function(
    curve: &RepCurve,
    end: &End,
    ball: &WordBall,
) -> Result<LengthFunction, AlgebraError> {
    let mut cache = MatrixCache::new(curve);
    let mut values = BTreeMap::new();
    for w in &ball.words {
        values.insert(w.clone(), cache.limit_length(end, w)?);
    }
    Ok(LengthFunction { values })
}

/// The limit pseudo-metric `d̄` on a ball of words, in the `1/log|t|` scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitMetric {
    pub ball: WordBall,
    pub metric: FiniteMetric,
}

impl LimitMetric {
    pub fn distance(&self, g: &Word, h: &Word) -> Option<&Q> {
        Some(
            self.metric
                .d(self.ball.index_of(g)?, self.ball.index_of(h)?),
        )
    }
}

/// Parameters of the check that the standard basepoint is a fair stand-in
/// for the approximate centers along the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasepointGuard {
    pub samples: (f64, f64),
    /// Allowed growth of the basepoint's distance to the approximate centers,
    /// as a fraction of the growth of `log t`.
    pub max_drift_fraction: f64,
    /// `x` is an approximate center when `r_S(x) ≤ min r_S + slack`.
    pub center_slack: f64,
}

impl Default for BasepointGuard {
    fn default() -> Self {
        Self {
            samples: (1e3, 1e4),
            max_drift_fraction: 0.25,
            center_slack: 1.0,
        }
    }
}

/// Generator matrices in floating point at chart coordinate `s`.
pub fn generator_matrices_at(
    curve: &RepCurve,
    end: &End,
    s: f64,
) -> Result<Vec<Matrix2C>, ValuationError> {
    let t = end.parameter_at(s);
    curve
        .generators
        .iter()
        .map(|m| {
            let [a, b, c, d] = m.eval_complex(t);
            if [a, b, c, d]
                .iter()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(ValuationError::Overflow(s));
            }
            Ok(Matrix2C::new(a, b, c, d)?)
        })
        .collect()
}

/// Distance from the basepoint `j` to the approximate centers at each guard
/// sample: zero when `j` is itself one, otherwise `d(j, c)` for the computed
/// center `c`. Errors if it grows faster than the allowed fraction of `log t`.
pub fn check_basepoint(
    curve: &RepCurve,
    end: &End,
    guard: &BasepointGuard,
    ctx: &HyperbolicContext,
) -> Result<(f64, f64), ValuationError> {
    let j = PointH3::basepoint();
    let dist = |s: f64| -> Result<f64, ValuationError> {
        let mats = generator_matrices_at(curve, end, s)?;
        let (c, r) = approximate_center(&mats, ctx, &j)?;
        let (rj, _) = displacement_radius(&mats, &j)?;
        Ok(if rj <= r + guard.center_slack {
            0.0
        } else {
            dist_h3(&j, &c)
        })
    };
    let (s1, s2) = guard.samples;
    let (near, far) = (dist(s1)?, dist(s2)?);
    if far - near > guard.max_drift_fraction * (s2.ln() - s1.ln()) {
        return Err(ValuationError::CenterDrift { near, far });
    }
    Ok((near, far))
}

/// `d̄(g, h) = d̄(1, g⁻¹h)` over all ball pairs, without the basepoint guard.
pub fn limit_metric_unchecked(
    curve: &RepCurve,
    end: &End,
    ball: &WordBall,
) -> Result<LimitMetric, ValuationError> {
    let mut cache = MatrixCache::new(curve);
    let mut memo: HashMap<Word, i64> = HashMap::new();
    let n = ball.len();
    let mut d = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        let gi = ball.words[i].inverse();
        for j in i + 1..n {
            let key = gi.mul(&ball.words[j]);
            let v = match memo.get(&key) {
                Some(v) => *v,
                None => {
                    let v = cache.displacement(end, &key)?;
                    memo.insert(key.inverse(), v);
                    memo.insert(key, v);
                    v
                }
            };
            d[i][j] = Q::from_integer(v.into());
            d[j][i] = Q::from_integer(v.into());
        }
    }
    let labels = ball
        .words
        .iter()
        .map(|w| curve.alphabet.render(w))
        .collect();
    Ok(LimitMetric {
        ball: ball.clone(),
        metric: FiniteMetric::new(labels, d)?,
    })
}

/// The limit metric, after the basepoint guard passes.
pub fn limit_metric(
    curve: &RepCurve,
    end: &End,
    ball: &WordBall,
    guard: &BasepointGuard,
    ctx: &HyperbolicContext,
) -> Result<LimitMetric, ValuationError> {
    check_basepoint(curve, end, guard, ctx)?;
    limit_metric_unchecked(curve, end, ball)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityProbe {
    /// `(u, w, p)` with `L(u) > 0` and `L([u^p, w]) > 0`.
    pub witness: Option<(Word, Word, u32)>,
    /// `L([u^p, w])` for `p = 1..=pmax`, for the witness pair.
    pub commutator_lengths: BTreeMap<u32, i64>,
}

/// Searches `u` then `w` in shortlex order over the ball, and `p = 1..=pmax`,
/// for a commutator `[u^p, w]` that blows up.
pub fn irreducibility_probe(
    curve: &RepCurve,
    end: &End,
    ball: &WordBall,
    pmax: u32,
) -> Result<IrreducibilityProbe, AlgebraError> {
    let mut cache = MatrixCache::new(curve);
    let commutator_length =
        |cache: &mut MatrixCache, u: &Word, w: &Word, p: u32| -> Result<i64, AlgebraError> {
            let up = cache.matrix(u).pow(p);
            let wm = cache.matrix(w);
            let m = up.mul(&wm).mul(&up.adjugate()).mul(&wm.adjugate());
            length_from_f(&f_from_trace(&m.trace()), end)
        };
    for u in &ball.words {
        if cache.limit_length(end, u)? == 0 {
            continue;
        }
        for w in &ball.words {
            for p in 1..=pmax {
                if commutator_length(&mut cache, u, w, p)? > 0 {
                    let mut lengths = BTreeMap::new();
                    for q in 1..=pmax {
                        lengths.insert(q, commutator_length(&mut cache, u, w, q)?);
                    }
                    return Ok(IrreducibilityProbe {
                        witness: Some((u.clone(), w.clone(), p)),
                        commutator_lengths: lengths,
                    });
                }
            }
        }
    }
    Ok(IrreducibilityProbe {
        witness: None,
        commutator_lengths: BTreeMap::new(),
    })
}

/// `(s, t(ρ w)/log s)` at each chart coordinate `s`.
pub fn numeric_length_samples(
    curve: &RepCurve,
    end: &End,
    w: &Word,
    ts: &[f64],
) -> Result<Vec<(f64, f64)>, ValuationError> {
    let trace = trace_function(curve, w);
    numeric_samples_of_trace(&trace, end, ts)
}

pub(crate) fn numeric_samples_of_trace(
    trace: &RationalFunction,
    end: &End,
    ts: &[f64],
) -> Result<Vec<(f64, f64)>, ValuationError> {
    if ts.iter().any(|&s| !(s > 1.0)) || ts.windows(2).any(|p| p[1] <= p[0]) {
        return Err(ValuationError::BadSamples);
    }
    let chart = end.chart(trace)?;
    ts.iter()
        .map(|&s| {
            let tr = chart.eval_complex(Complex64::new(s, 0.0));
            if !tr.re.is_finite() || !tr.im.is_finite() {
                return Err(ValuationError::Overflow(s));
            }
            Ok((s, translation_length_from_trace(tr) / s.ln()))
        })
        .collect()
}

/// How lengths are rescaled along the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RescalingSchedule {
    /// `λ(t) = 1/log|t|`; limits come out as integers.
    Symbolic,
    /// `λ = 1/max(1, max_β d(j, βj))` over the generators.
    Paper,
}

impl RescalingSchedule {
    pub fn lambda(&self, mats: &[Matrix2C], s: f64) -> f64 {
        match self {
            RescalingSchedule::Symbolic => 1.0 / s.ln(),
            RescalingSchedule::Paper => {
                // cosh d(j, Mj) = |M|²/2
                let r = mats
                    .iter()
                    .map(|m| (0.5 * m.frobenius_sqr()).max(1.0).acosh())
                    .fold(1.0, f64::max);
                1.0 / r
            }
        }
    }
}

/// Ratio between the two schedules in the limit: `max_β d̄(1, β)` over
/// generators, so that displacement-scaled lengths are symbolic lengths divided by it.
pub fn conversion_factor(curve: &RepCurve, end: &End) -> Result<i64, AlgebraError> {
    let mut cache = MatrixCache::new(curve);
    let mut top = 0;
    for g in curve.alphabet.generators() {
        top = top.max(cache.displacement(end, &g)?);
    }
    Ok(top)
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use crate::algebra::LaurentPolynomial;
    use crate::words::enumerate_ball;

    /// Laurent-degree oracle: `max(deg_t(tr² − 4), 0)` computed on Laurent
    /// polynomials directly, without rational-function canonicalization.
    fn laurent_length(tr: &LaurentPolynomial) -> i64 {
        let f = &(tr * tr) - &LaurentPolynomial::constant(GaussianRational::from_integer(4));
        if f.is_zero() {
            0
        } else {
            f.degree().unwrap().max(0)
        }
    }

    fn laurent_trace(m: &[[LaurentPolynomial; 2]; 2]) -> LaurentPolynomial {
        &m[0][0] + &m[1][1]
    }

    fn lmul(
        x: &[[LaurentPolynomial; 2]; 2],
        y: &[[LaurentPolynomial; 2]; 2],
    ) -> [[LaurentPolynomial; 2]; 2] {
        let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    fn lc(n: i64) -> LaurentPolynomial {
        LaurentPolynomial::constant(GaussianRational::from_integer(n))
    }

    fn tpow(k: i64) -> LaurentPolynomial {
        LaurentPolynomial::monomial(GaussianRational::from_integer(1), k)
    }

    #[test]
    fn word_matrix_examples() {
        let c = canonical();
        assert_eq!(
            evaluate_word_matrix(&c, &Word::identity()),
            RfMatrix::identity()
        );
        assert_eq!(
            evaluate_word_matrix(&c, &word(&c, "a")),
            matrix(["t", "0", "0", "1/t"])
        );
        let m = evaluate_word_matrix(&c, &word(&c, "abAB"));
        assert_eq!(m, matrix(["2 - t^2", "t^2 - 1", "2/t^2 - 2", "2 - 1/t^2"]));
        assert!(m.det().is_one());
        assert_eq!(m.trace(), rf("4 - t^2 - 1/t^2"));
    }

    #[test]
    fn trace_and_f_examples() {
        let c = canonical();
        assert_eq!(trace_function(&c, &Word::identity()), rf("2"));
        assert!(f_of(&c, &Word::identity()).is_zero());
        assert_eq!(trace_function(&c, &word(&c, "a")), rf("t + 1/t"));
        assert_eq!(f_of(&c, &word(&c, "a")), rf("(t - 1/t)^2"));
        assert_eq!(f_of(&c, &word(&c, "b")), rf("5"));
    }

    #[test]
    fn valuation_examples() {
        let one = End::Finite(GaussianRational::from_integer(1));
        assert_eq!(valuation(&rf("(t - 1/t)^2"), &End::Infinity).unwrap(), 2);
        assert_eq!(valuation(&rf("5"), &End::Infinity).unwrap(), 0);
        assert_eq!(valuation(&rf("5"), &one).unwrap(), 0);
        assert_eq!(valuation(&rf("1/(t - 1)^2"), &one).unwrap(), 2);
        assert_eq!(valuation(&rf("(t - 1)^3"), &one).unwrap(), -3);
        assert!(valuation(&rf("0"), &End::Infinity).is_err());
    }

    #[test]
    fn limit_length_examples() {
        let c = canonical();
        let l = |s: &str| limit_length(&c, &End::Infinity, &word(&c, s)).unwrap();
        assert_eq!(
            (l("a"), l("b"), l("ab"), l("ba"), l("abAB"), l("1")),
            (2, 0, 2, 2, 4, 0)
        );
    }

    #[test]
    fn agrees_with_laurent_oracle_on_ball() {
        let c = canonical();
        let a = [[tpow(1), lc(0)], [lc(0), tpow(-1)]];
        let ai = [[tpow(-1), lc(0)], [lc(0), tpow(1)]];
        let b = [[lc(1), lc(1)], [lc(1), lc(2)]];
        let bi = [[lc(2), lc(-1)], [lc(-1), lc(1)]];
        let ball = enumerate_ball(c.alphabet(), 3).unwrap();
        let mut cache = MatrixCache::new(&c);
        for w in &ball.words {
            let mut m = [[lc(1), lc(0)], [lc(0), lc(1)]];
            for l in w.letters() {
                let g = match (l.generator, l.inverse) {
                    (0, false) => &a,
                    (0, true) => &ai,
                    (1, false) => &b,
                    _ => &bi,
                };
                m = lmul(&m, g);
            }
            let expected = laurent_length(&laurent_trace(&m));
            assert_eq!(
                cache.limit_length(&End::Infinity, w).unwrap(),
                expected,
                "{}",
                c.alphabet().render(w)
            );
        }
    }

    #[test]
    fn lemma_commutator_identity() {
        // A = diag(a, 1/a), B = [[b+c, b²−c²−1], [1, b−c]]
        let cases = [
            ("t", "3/2", "-1/2"),
            ("t^2 + 1", "t", "1/t"),
            ("2*t", "t - 1", "3"),
            ("t", "i*t", "t^2"),
        ];
        for (a, b, cc) in cases {
            let (a, b, cc) = (rf(a), rf(b), rf(cc));
            let one = RationalFunction::one();
            let bb = &b * &b;
            let c2 = &cc * &cc;
            let am = RfMatrix::new(
                a.clone(),
                RationalFunction::zero(),
                RationalFunction::zero(),
                a.recip().unwrap(),
            );
            let bm = RfMatrix::new(&b + &cc, &(&bb - &c2) - &one, one.clone(), &b - &cc);
            assert!(bm.det().is_one());
            for p in 1..=4u32 {
                let ap = am.pow(p);
                let tr = ap.mul(&bm).mul(&ap.adjugate()).mul(&bm.adjugate()).trace();
                let a2p = a.pow(2 * p);
                let closed = &(&(&(&one - &bb) + &c2) * &(&a2p + &a2p.recip().unwrap()))
                    + &(&RationalFunction::from_integer(2) * &(&bb - &c2));
                assert_eq!(tr, closed, "p = {p}");
            }
        }
    }

    #[test]
    fn determinant_is_checked() {
        let err = RepCurve::new(
            Alphabet::from_letters("a").unwrap(),
            vec![matrix(["t", "0", "0", "t"])],
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "generator a: determinant is t^2, not 1");
    }

    #[test]
    fn blow_up_examples() {
        let ball = |c: &RepCurve| enumerate_ball(c.alphabet(), 2).unwrap();
        let c = canonical();
        assert_eq!(
            blows_up(&c, &End::Infinity, &ball(&c)).unwrap(),
            Some(word(&c, "a"))
        );
        let k = curve(&[["2", "1", "1", "1"], ["1", "1", "0", "1"]]);
        assert_eq!(blows_up(&k, &End::Infinity, &ball(&k)).unwrap(), None);
        let s = curve(&[["1", "0", "0", "1"], ["t", "0", "0", "1/t"]]);
        assert_eq!(
            blows_up(&s, &End::Infinity, &ball(&s)).unwrap(),
            Some(word(&s, "b"))
        );
    }

    #[test]
    fn limit_metric_examples() {
        let c = canonical();
        let ball = enumerate_ball(c.alphabet(), 2).unwrap();
        let m = limit_metric_unchecked(&c, &End::Infinity, &ball).unwrap();
        let d = |g: &str, h: &str| m.distance(&word(&c, g), &word(&c, h)).unwrap().clone();
        assert_eq!(d("1", "a"), Q::from_integer(2.into()));
        assert_eq!(d("1", "b"), Q::zero());
        assert_eq!(d("1", "aa"), Q::from_integer(4.into()));
        // left invariance
        assert_eq!(d("b", "ba"), d("1", "a"));
        assert_eq!(d("a", "ab"), d("1", "b"));
    }

    #[test]
    fn basepoint_guard_on_canonical_curve() {
        let c = canonical();
        let ctx = HyperbolicContext::default();
        let (near, far) =
            check_basepoint(&c, &End::Infinity, &BasepointGuard::default(), &ctx).unwrap();
        assert_eq!((near, far), (0.0, 0.0));
    }

    #[test]
    fn basepoint_guard_flags_drifting_conjugate() {
        // b conjugated by z ↦ t²z: its axis, and with it every center, rises with t
        let c = curve(&[["t", "0", "0", "1/t"], ["1", "t^2", "1/t^2", "2"]]);
        let ctx = HyperbolicContext::default();
        let err =
            check_basepoint(&c, &End::Infinity, &BasepointGuard::default(), &ctx).unwrap_err();
        assert!(matches!(err, ValuationError::CenterDrift { .. }), "{err}");
    }

    #[test]
    fn orbit_examples() {
        let c = canonical();
        let mut cache = MatrixCache::new(&c);
        for (w, expected) in [("a", 2), ("b", 0), ("abAB", 4)] {
            assert_eq!(
                cache
                    .orbit_limit_length(&End::Infinity, &word(&c, w))
                    .unwrap(),
                expected
            );
        }
    }

    #[test]
    fn probe_examples() {
        let c = canonical();
        let ball = enumerate_ball(c.alphabet(), 2).unwrap();
        let p = irreducibility_probe(&c, &End::Infinity, &ball, 4).unwrap();
        assert_eq!(p.witness, Some((word(&c, "a"), word(&c, "b"), 1)));
        assert_eq!(p.commutator_lengths[&1], 4);

        let abelian = curve(&[["t", "0", "0", "1/t"], ["t", "0", "0", "1/t"]]);
        let ball = enumerate_ball(abelian.alphabet(), 2).unwrap();
        assert_eq!(
            irreducibility_probe(&abelian, &End::Infinity, &ball, 4)
                .unwrap()
                .witness,
            None
        );

        let reducible = curve(&[["t", "0", "0", "1/t"], ["1", "1", "0", "1"]]);
        let ball = enumerate_ball(reducible.alphabet(), 2).unwrap();
        assert_eq!(
            irreducibility_probe(&reducible, &End::Infinity, &ball, 4)
                .unwrap()
                .witness,
            None
        );
    }

    #[test]
    fn numeric_samples() {
        let c = canonical();
        let s = numeric_length_samples(&c, &End::Infinity, &word(&c, "a"), &[1e6]).unwrap();
        assert!((s[0].1 - 2.0).abs() < 1e-9);
        let s = numeric_length_samples(&c, &End::Infinity, &word(&c, "b"), &[1e3, 1e6]).unwrap();
        let expected = |t: f64| 2.0 * 1.5f64.acosh() / t.ln();
        assert!((s[0].1 - expected(1e3)).abs() < 1e-12 && (s[1].1 - expected(1e6)).abs() < 1e-12);
        assert!(numeric_length_samples(&c, &End::Infinity, &word(&c, "a"), &[10.0, 5.0]).is_err());
        let huge = numeric_length_samples(&c, &End::Infinity, &word(&c, "aaa"), &[1e120]);
        assert!(matches!(huge, Err(ValuationError::Overflow(_))));
    }

    #[test]
    fn finite_end_uses_chart() {
        // a = diag(1/(t−1), t−1) blows up as t → 1
        let c = curve(&[["1/(t - 1)", "0", "0", "t - 1"], ["1", "1", "1", "2"]]);
        let end: End = "t0=1".parse().unwrap();
        assert_eq!(limit_length(&c, &end, &word(&c, "a")).unwrap(), 2);
        assert_eq!(limit_length(&c, &End::Infinity, &word(&c, "a")).unwrap(), 2);
        let s = numeric_length_samples(&c, &end, &word(&c, "a"), &[1e6]).unwrap();
        assert!((s[0].1 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn end_parsing() {
        assert_eq!("infinity".parse::<End>().unwrap(), End::Infinity);
        assert_eq!(
            "t0=1/2".parse::<End>().unwrap(),
            End::Finite(GaussianRational::from_ratio(1, 2))
        );
        assert_eq!("t0=1/2".parse::<End>().unwrap().to_string(), "t0=1/2");
        assert!("zero".parse::<End>().is_err());
    }

    #[test]
    fn conversion_factor_canonical() {
        assert_eq!(conversion_factor(&canonical(), &End::Infinity).unwrap(), 2);
    }
}

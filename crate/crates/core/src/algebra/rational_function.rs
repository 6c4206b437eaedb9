use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{AlgebraError, GaussianRational, LaurentPolynomial, Poly};

/// A ratio of one-variable polynomials over ℚ(i) in canonical form:
/// the denominator is monic and coprime to the numerator, and zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lead = den.leading().unwrap().inv().unwrap();
        Self {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(GaussianRational::from_integer(n))
    }

    /// The parameter `t` itself.
    pub fn t() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.den.degree() == Some(0) && self.num.degree().unwrap_or(0) == 0
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Growth order as `t → ∞`: `deg(num) − deg(den)`. Positive iff `|f| → ∞`.
    pub fn degree_at_infinity(&self) -> Result<i64, AlgebraError> {
        match self.num.degree() {
            None => Err(AlgebraError::ZeroValuation),
            Some(n) => Ok(n as i64 - self.den.degree().unwrap() as i64),
        }
    }

    /// Rewrites `f(t)` in the chart `t = t0 + 1/s`, so the end `t → t0`
    /// becomes `s → ∞`.
    pub fn substitute_end_chart(&self, t0: &GaussianRational) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroValuation);
        }
        // p(t0 + 1/s) = s^{-deg p} · Σ p_k (t0·s + 1)^k s^{deg p − k}
        let homogenize = |p: &Poly| -> (Poly, usize) {
            let n = p.degree().unwrap();
            let lin = Poly::new(vec![GaussianRational::one(), t0.clone()]);
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = lin.pow(k as u32).shift(n - k).scale(c);
                acc = &acc + &term;
            }
            (acc, n)
        };
        let (num, n) = homogenize(&self.num);
        let (den, m) = homogenize(&self.den);
        // f = s^{m−n} · num/den
        let (num, den) = if m >= n {
            (num.shift(m - n), den)
        } else {
            (num, den.shift(n - m))
        };
        Self::new(num, den)
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        self.num.eval_complex(t) / self.den.eval_complex(t)
    }

    pub fn eval(&self, t: &GaussianRational) -> Option<GaussianRational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(t) / &d)
    }

    /// Laurent form when the denominator is a power of `t`.
    pub fn to_laurent(&self) -> Option<LaurentPolynomial> {
        if !self.den.is_monomial() {
            return None;
        }
        let shift = self.den.degree().unwrap() as i64;
        Some(LaurentPolynomial::from_terms(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64 - shift, c.clone())),
        ))
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            return self.num.render(var);
        }
        let wrap = |p: &Poly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({})", p.render(var))
            } else {
                p.render(var)
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl From<LaurentPolynomial> for RationalFunction {
    fn from(l: LaurentPolynomial) -> Self {
        let Some(order) = l.order() else {
            return Self::zero();
        };
        let shift = (-order).max(0) as usize;
        let lift = (order.max(0)) as usize;
        let deg = l.degree().unwrap();
        let mut coeffs = vec![GaussianRational::zero(); (deg - order) as usize + 1 + lift];
        for (e, c) in l.terms() {
            coeffs[(e - order) as usize + lift] = c.clone();
        }
        Self::canonical(
            Poly::new(coeffs),
            Poly::monomial(GaussianRational::one(), shift),
        )
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalFunction::canonical(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::canonical(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        // cross-cancel so each gcd runs on the smaller pairs
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1);
        let d2 = o.den.exact_div(&g1);
        let n2 = o.num.exact_div(&g2);
        let d1 = self.den.exact_div(&g2);
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lead = den.leading().unwrap().inv().unwrap();
        RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self * &o.recip().expect("rational function division by zero")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::GaussianRational;

/// Exponent pair `(m, n)` of the monomial `y^m z^n`.
pub type Monomial = (i64, i64);

/// Sparse polynomial in `y` and `z` with ℚ(i) coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl BivariatePolynomial {
    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(terms: I) -> Self {
        let mut out = Self::default();
        for (mono, c) in terms {
            out.add_term(mono, c);
        }
        out
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn y() -> Self {
        Self::from_terms([((1, 0), GaussianRational::one())])
    }

    pub fn z() -> Self {
        Self::from_terms([((0, 1), GaussianRational::one())])
    }

    fn add_term(&mut self, mono: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&mono) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(mono, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &GaussianRational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mono: Monomial) -> GaussianRational {
        self.terms
            .get(&mono)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_terms(self.terms().map(|(m, a)| (m, a * c)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(GaussianRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Double-precision value at `(y, z)`: Horner in `y` over inner Horner sums in `z`.
    pub fn evaluate(&self, y: Complex64, z: Complex64) -> Complex64 {
        let rows = self.rows_in_y();
        let Some((&min_m, _)) = rows.iter().next() else {
            return Complex64::new(0.0, 0.0);
        };
        let max_m = *rows.keys().next_back().unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for m in (min_m..=max_m).rev() {
            let row = rows.get(&m).map(|r| horner_z(r, z)).unwrap_or_default();
            acc = acc * y + row;
        }
        acc * y.powi(min_m as i32)
    }

    /// Coefficients of `p(·, z)` as a polynomial in `y`, lowest power first,
    /// after dividing out the smallest power of `y`.
    pub fn coefficients_in_y(&self, z: Complex64) -> Vec<Complex64> {
        let rows = self.rows_in_y();
        let Some((&min_m, _)) = rows.iter().next() else {
            return Vec::new();
        };
        let max_m = *rows.keys().next_back().unwrap();
        (min_m..=max_m)
            .map(|m| rows.get(&m).map(|r| horner_z(r, z)).unwrap_or_default())
            .collect()
    }

    fn rows_in_y(&self) -> BTreeMap<i64, Vec<(i64, Complex64)>> {
        let mut rows: BTreeMap<i64, Vec<(i64, Complex64)>> = BTreeMap::new();
        for ((m, n), c) in self.terms() {
            rows.entry(m).or_default().push((n, c.to_complex()));
        }
        rows
    }
}

fn horner_z(row: &[(i64, Complex64)], z: Complex64) -> Complex64 {
    let min_n = row.iter().map(|(n, _)| *n).min().unwrap();
    let max_n = row.iter().map(|(n, _)| *n).max().unwrap();
    let mut dense = vec![Complex64::new(0.0, 0.0); (max_n - min_n) as usize + 1];
    for (n, c) in row {
        dense[(n - min_n) as usize] += c;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for c in dense.iter().rev() {
        acc = acc * z + c;
    }
    acc * z.powi(min_n as i32)
}

impl<'a> Add<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (m, c) in o.terms() {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        self + &(-o)
    }
}

impl<'a> Mul<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::default();
        for ((m1, n1), c1) in self.terms() {
            for ((m2, n2), c2) in o.terms() {
                out.add_term((m1 + m2, n1 + n2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(self.terms().map(|(m, c)| (m, -c)))
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((m, n), c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if !c.is_one() || (*m == 0 && *n == 0) {
                factors.push(c.to_string());
            }
            for (var, e) in [("y", *m), ("z", *n)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

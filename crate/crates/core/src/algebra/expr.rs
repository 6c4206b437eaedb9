//! Parser for the coefficient-expression grammar:
//! integers, `i`, variables, `+ - * /`, `^` with nonnegative integer exponents,
//! parentheses. Whitespace is insignificant. Example: `(3/2)*t^2 - i*t + 1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{BivariatePolynomial, GaussianRational, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    /// Zero-based character offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Integer(BigInt),
    ImaginaryUnit,
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division, with the position of the `/` for error reporting.
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(char),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            out.push((start, Tok::Int(digits.parse().expect("ascii digits"))));
        } else if ch.is_ascii_alphabetic() {
            if k + 1 < chars.len() && chars[k + 1].is_ascii_alphabetic() {
                return Err(ParseError::new(k, "identifiers are single letters"));
            }
            out.push((k, Tok::Ident(ch)));
            k += 1;
        } else if "+-*/^()".contains(ch) {
            out.push((k, Tok::Op(ch)));
            k += 1;
        } else {
            return Err(ParseError::new(k, format!("unexpected character '{ch}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [char],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.here();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let at = self.here();
        match self.toks.get(self.pos) {
            Some((_, Tok::Int(n))) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| ParseError::new(at, "exponent too large"))?;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(ParseError::new(
                at,
                "expected a nonnegative integer exponent",
            )),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(ParseError::new(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Expr::Integer(n)),
            Tok::Ident('i') => Ok(Expr::ImaginaryUnit),
            Tok::Ident(v) if self.vars.contains(&v) => Ok(Expr::Var(v)),
            Tok::Ident(v) => Err(ParseError::new(at, format!("unknown variable '{v}'"))),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat_op(')') {
                    return Err(ParseError::new(self.here(), "expected ')'"));
                }
                Ok(inner)
            }
            Tok::Op(op) => Err(ParseError::new(at, format!("unexpected '{op}'"))),
        }
    }
}

/// Parses `text` into an expression tree over the given single-letter variables.
pub fn parse_expr(text: &str, vars: &[char]) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let end = text.chars().count();
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        vars,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::new(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

/// An algebra that expression trees can be evaluated into.
pub trait ExprTarget: Sized + Clone {
    fn constant(c: GaussianRational) -> Self;
    fn var(v: char) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division, or a message explaining why it is not allowed.
    fn div(&self, o: &Self) -> Result<Self, String>;
    fn neg(&self) -> Self;
    fn pow(&self, e: u32) -> Self;
}

impl Expr {
    pub fn eval<T: ExprTarget>(&self) -> Result<T, ParseError> {
        Ok(match self {
            Expr::Integer(n) => T::constant(GaussianRational::from_rational(
                BigRational::from_integer(n.clone()),
            )),
            Expr::ImaginaryUnit => T::constant(GaussianRational::i()),
            Expr::Var(v) => T::var(*v),
            Expr::Neg(a) => a.eval::<T>()?.neg(),
            Expr::Add(a, b) => a.eval::<T>()?.add(&b.eval()?),
            Expr::Sub(a, b) => a.eval::<T>()?.sub(&b.eval()?),
            Expr::Mul(a, b) => a.eval::<T>()?.mul(&b.eval()?),
            Expr::Div(a, b, at) => a
                .eval::<T>()?
                .div(&b.eval()?)
                .map_err(|m| ParseError::new(*at, m))?,
            Expr::Pow(a, e) => a.eval::<T>()?.pow(*e),
        })
    }
}

impl ExprTarget for GaussianRational {
    fn constant(c: GaussianRational) -> Self {
        c
    }
    fn var(_: char) -> Self {
        unreachable!("constant expressions admit no variables")
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        if o.is_zero() {
            return Err("division by zero".into());
        }
        Ok(self / o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: u32) -> Self {
        GaussianRational::pow(self, e)
    }
}

impl ExprTarget for RationalFunction {
    fn constant(c: GaussianRational) -> Self {
        RationalFunction::constant(c)
    }
    fn var(_: char) -> Self {
        RationalFunction::t()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        if o.is_zero() {
            return Err("division by zero".into());
        }
        Ok(self / o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: u32) -> Self {
        RationalFunction::pow(self, e)
    }
}

impl ExprTarget for BivariatePolynomial {
    fn constant(c: GaussianRational) -> Self {
        BivariatePolynomial::constant(c)
    }
    fn var(v: char) -> Self {
        if v == 'y' {
            BivariatePolynomial::y()
        } else {
            BivariatePolynomial::z()
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        match o.as_constant() {
            Some(c) if !c.is_zero() => Ok(self.scale(&c.inv().unwrap())),
            Some(_) => Err("division by zero".into()),
            None => Err("polynomials may only be divided by constants".into()),
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: u32) -> Self {
        BivariatePolynomial::pow(self, e)
    }
}

/// A rational function in `t`, e.g. `t^2/ (t-1)`.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction, ParseError> {
    parse_expr(text, &['t'])?.eval()
}

/// A constant in ℚ(i), e.g. `-3/2 + i/2`.
pub fn parse_gaussian(text: &str) -> Result<GaussianRational, ParseError> {
    parse_expr(text, &[])?.eval()
}

/// A polynomial in `y` and `z`, e.g. `(y - z^2)*(y - z^5)`.
pub fn parse_bivariate(text: &str) -> Result<BivariatePolynomial, ParseError> {
    parse_expr(text, &['y', 'z'])?.eval()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Integer(n) => write!(f, "{n}"),
            Expr::ImaginaryUnit => f.write_str("i"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b, _) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e) => write!(f, "{a}^{e}"),
        }
    }
}

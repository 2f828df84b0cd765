//! Exact rational arithmetic and Laurent polynomials in one formal variable `s`.
//!
//! Rationals are `num`'s `BigRational`, which is always stored reduced with a
//! positive denominator. [`LaurentPolynomial`] keeps a sparse exponent map with
//! no zero coefficients, so structural equality is mathematical equality and
//! `is_zero` is an exact identity test.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use num::BigInt;
pub use num::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("evaluation at s = 0 of a polynomial with negative exponents")]
    EvalAtPole,
    #[error("cannot parse rational literal `{0}` (expected NUM or NUM/DEN)")]
    BadRational(String),
}

impl ArithError {
    pub fn code(&self) -> &'static str {
        match self {
            ArithError::EvalAtPole => "EvalAtPole",
            ArithError::BadRational(_) => "BadRational",
        }
    }
}

/// Build a rational from a small numerator and denominator.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Parse `NUM` or `NUM/DEN` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, ArithError> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|_| ArithError::BadRational(text.to_string()))
}

/// Lossy conversion used at the exact/float boundary.
pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 fails only on huge operands; fall back to scaled division.
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Arithmetic selector for [`apply`].
#[derive(Debug, Clone, PartialEq)]
pub enum LaurentOp {
    Add,
    Sub,
    Mul,
    /// Scale the left operand; the right operand is ignored.
    Scale(BigRational),
}

/// Apply `op` to `a` and `b`, returning a canonical result.
pub fn apply(a: &LaurentPolynomial, b: &LaurentPolynomial, op: &LaurentOp) -> LaurentPolynomial {
    match op {
        LaurentOp::Add => a + b,
        LaurentOp::Sub => a - b,
        LaurentOp::Mul => a * b,
        LaurentOp::Scale(c) => a.scale(c),
    }
}

/// Finite sum `Σ cₘ sᵐ` with rational coefficients and integer exponents.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i32, BigRational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · s^exp`
    pub fn monomial(c: BigRational, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// The formal variable `s`.
    pub fn s() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// Collects `(exponent, coefficient)` pairs, summing repeats and dropping zeros.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigRational)>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i32) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of the highest power of `s`, zero for the zero polynomial.
    pub fn leading_coefficient(&self) -> BigRational {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by `s^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + shift, v.clone())).collect(),
        }
    }

    /// `sᵐ ↦ s^(offset − m)`, i.e. the polynomial `s^offset · p(1/s)`.
    pub fn reflect(&self, offset: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (offset - e, v.clone())).collect(),
        }
    }

    /// Term-wise power rule; constants vanish.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (e - 1, c * int(*e as i64))),
        )
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, x: &BigRational) -> Result<BigRational, ArithError> {
        if x.is_zero() {
            return if self.min_exponent().is_some_and(|e| e < 0) {
                Err(ArithError::EvalAtPole)
            } else {
                Ok(self.coeff(0))
            };
        }
        let (pos, neg) = self.split_parts();
        let mut total = horner_exact(&pos, x);
        if !neg.is_empty() {
            let inv = x.recip();
            total += horner_exact(&neg, &inv) * &inv;
        }
        Ok(total)
    }

    /// Float value; the nonnegative part is evaluated by Horner in `x` and the
    /// negative part by Horner in `1/x`.
    pub fn eval_f64(&self, x: f64) -> Result<f64, ArithError> {
        if x == 0.0 && self.min_exponent().is_some_and(|e| e < 0) {
            return Err(ArithError::EvalAtPole);
        }
        Ok(self.eval_f64_unchecked(x))
    }

    pub(crate) fn eval_f64_unchecked(&self, x: f64) -> f64 {
        let (pos, neg) = self.split_parts_f64();
        let mut total = horner_f64(&pos, x);
        if !neg.is_empty() {
            let inv = 1.0 / x;
            total += horner_f64(&neg, inv) * inv;
        }
        total
    }

    /// Float coefficient table usable for repeated evaluation without touching bigints.
    pub fn to_float(&self) -> FloatLaurent {
        let (pos, neg) = self.split_parts_f64();
        FloatLaurent { pos, neg }
    }

    /// Dense coefficient vectors: `pos[m]` multiplies `sᵐ` (m ≥ 0) and `neg[j]`
    /// multiplies `s^-(j+1)`.
    fn split_parts(&self) -> (Vec<BigRational>, Vec<BigRational>) {
        let max = self.max_exponent().unwrap_or(0).max(0);
        let min = self.min_exponent().unwrap_or(0).min(0);
        let mut pos = vec![BigRational::zero(); if self.terms.range(0..).next().is_some() { max as usize + 1 } else { 0 }];
        let mut neg = vec![BigRational::zero(); (-min) as usize];
        for (e, c) in &self.terms {
            if *e >= 0 {
                pos[*e as usize] = c.clone();
            } else {
                neg[(-e - 1) as usize] = c.clone();
            }
        }
        (pos, neg)
    }

    fn split_parts_f64(&self) -> (Vec<f64>, Vec<f64>) {
        let (pos, neg) = self.split_parts();
        (pos.iter().map(to_f64).collect(), neg.iter().map(to_f64).collect())
    }

    /// Number of sign changes in the coefficient sequence. By Descartes' rule
    /// this bounds the number of roots in `(0, ∞)`.
    pub fn positive_sign_changes(&self) -> usize {
        let signs: Vec<bool> = self.terms.values().map(|c| c.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

fn horner_exact(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn horner_f64(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Float image of a Laurent polynomial, split as in [`LaurentPolynomial::eval_f64`].
#[derive(Debug, Clone, PartialEq)]
pub struct FloatLaurent {
    pos: Vec<f64>,
    neg: Vec<f64>,
}

impl FloatLaurent {
    pub fn eval(&self, x: f64) -> f64 {
        let mut total = horner_f64(&self.pos, x);
        if !self.neg.is_empty() {
            let inv = 1.0 / x;
            total += horner_f64(&self.neg, inv) * inv;
        }
        total
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({self})")
    }
}

/// Terms from the highest power down, e.g. `4/9*s^2 + 1/3*s - 7/6*s^-1`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "s")?,
                1 => write!(f, "{mag}*s")?,
                _ if unit => write!(f, "s^{e}")?,
                _ => write!(f, "{mag}*s^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-BigRational::one())
    }
}

macro_rules! forward_owned {
    ($Op:ident, $op:ident) => {
        impl $Op for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $op(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$op(&rhs)
            }
        }
        impl $Op<&LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $op(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                (&self).$op(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

//! Laurent polynomials in `y = L^{1/2}` and truncated series in `q`.
//!
//! A half-integer power `L^{k/2}` is stored as the whole power `y^k`, so every
//! exponent is an ordinary integer. Coefficients are arbitrary precision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Laurent polynomial in `y` with integer coefficients.
///
/// No stored coefficient is ever zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff * y^exp`.
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub(crate) fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Value at `y = 1`: the Euler-characteristic shadow.
    pub fn specialize_y1(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// The substitution `y -> 1/y`.
    pub fn invert_y(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplies by `y^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Polynomial with every coefficient multiplied by `factor`.
    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * factor)).collect(),
        }
    }

    /// Parses the canonical rendering produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for piece in text.split(" + ") {
            let bad = || Error::Format(format!("malformed Laurent term `{piece}`"));
            let (c, e) = match piece.split_once("*y^") {
                Some((c, e)) => (c, e.parse::<i64>().map_err(|_| bad())?),
                None => (piece, 0),
            };
            let c: BigInt = c.parse().map_err(|_| bad())?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl fmt::Display for HalfLaurent {
    /// Ascending exponents, `c*y^k` joined by ` + `, with `y^0` elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *e == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*y^{e}")?;
            }
        }
        Ok(())
    }
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: HalfLaurent) -> HalfLaurent {
        &self + &rhs
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        HalfLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        self + &(-rhs)
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = HalfLaurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: HalfLaurent) -> HalfLaurent {
        &self * &rhs
    }
}

pub fn hl_add(a: &HalfLaurent, b: &HalfLaurent) -> HalfLaurent {
    a + b
}

pub fn hl_mul(a: &HalfLaurent, b: &HalfLaurent) -> HalfLaurent {
    a * b
}

pub fn hl_specialize_y1(a: &HalfLaurent) -> BigInt {
    a.specialize_y1()
}

pub fn hl_invert_y(a: &HalfLaurent) -> HalfLaurent {
    a.invert_y()
}

/// Power series in `q` truncated at an inclusive order, with Laurent
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<HalfLaurent>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![HalfLaurent::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = HalfLaurent::one();
        s
    }

    /// Pads with zeros or truncates `coeffs` to length `order + 1`.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<HalfLaurent>) -> Self {
        coeffs.resize(order + 1, HalfLaurent::zero());
        Self { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[HalfLaurent] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> &HalfLaurent {
        &self.coeffs[degree]
    }

    pub(crate) fn coeff_mut(&mut self, degree: usize) -> &mut HalfLaurent {
        &mut self.coeffs[degree]
    }

    pub fn map_coeffs(&self, f: impl Fn(&HalfLaurent) -> HalfLaurent) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Values at `y = 1`, degree by degree.
    pub fn specialize_y1(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(HalfLaurent::specialize_y1).collect()
    }

    /// The substitution `q -> -q`.
    pub fn negate_q(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        let mut out = Self::zero(self.order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=self.order - i].iter().enumerate() {
                let prod = a * b;
                for (e, c) in prod.terms {
                    out.coeffs[i + j].add_term(e, c);
                }
            }
        }
        Ok(out)
    }
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.mul(b)
}

//! Exact scalars: rationals, factorials, binomials and the Bernoulli family.
//!
//! Every coefficient in the crate is a [`Rational`], always kept in lowest
//! terms with a positive denominator, so equality of two values is literal
//! equality of their stored parts.
//!
//! Bernoulli numbers follow the convention `B_n = B_n(0)`, hence
//! `B_1 = -1/2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary precision reduced fraction.
pub type Rational = num_rational::BigRational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"` or `"p"`. Whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Newtype used where a rational has to be a standalone serde value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(pub Rational);

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_rational::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_rational::deserialize(d).map(ExactRational)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl From<Rational> for ExactRational {
    fn from(q: Rational) -> Self {
        ExactRational(q)
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u32, k: i64) -> BigInt {
    if k < 0 || k > i64::from(n) {
        return BigInt::zero();
    }
    let k = k.min(i64::from(n) - k) as u32;
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Bernoulli numbers `B_0..=B_n` from `sum_{k=0}^{m} C(m+1,k) B_k = 0`.
pub fn bernoulli_numbers(n: u32) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    out.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (k, b) in out.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, k as i64)) * b;
        }
        out.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    out
}

pub fn bernoulli_number(n: u32) -> Rational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

/// `B_n(t) = sum_k C(n,k) B_k t^(n-k)`.
pub fn bernoulli_polynomial(n: u32) -> UniPoly {
    let b = bernoulli_numbers(n);
    let mut coeffs = vec![Rational::zero(); n as usize + 1];
    for (k, bk) in b.iter().enumerate() {
        coeffs[n as usize - k] = Rational::from_integer(binomial(n, k as i64)) * bk;
    }
    UniPoly::new(coeffs)
}

/// Dense univariate polynomial in `t` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        UniPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// `int_0^1 p(t) dt`
    pub fn integrate_unit(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c / Rational::from_integer(BigInt::from(k + 1)))
            .sum()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{}", format_rational(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{} ", format_rational(&a))?;
                    }
                    if k == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Coefficients `[z^0] .. [z^max_order]` of `z (e^{zt} - 1) / (e^z - 1)`,
/// each a polynomial in `t`, obtained by formal division of truncated
/// exponential series.
pub fn exp_series_ratio(max_order: usize) -> Vec<UniPoly> {
    // numerator e^{zt} - 1 = sum_{k>=1} z^k t^k / k!
    let numerator: Vec<UniPoly> = (0..=max_order)
        .map(|k| {
            if k == 0 {
                UniPoly::zero()
            } else {
                UniPoly::monomial(
                    Rational::new(BigInt::one(), factorial(k as u32)),
                    k,
                )
            }
        })
        .collect();
    // denominator (e^z - 1)/z = sum_{k>=0} z^k / (k+1)!
    let denominator: Vec<Rational> = (0..=max_order)
        .map(|k| Rational::new(BigInt::one(), factorial(k as u32 + 1)))
        .collect();
    // denominator[0] == 1, so q_k = num_k - sum_{j=1}^{k} den_j q_{k-j}
    let mut quotient: Vec<UniPoly> = Vec::with_capacity(max_order + 1);
    for k in 0..=max_order {
        let mut q = numerator[k].clone();
        for j in 1..=k {
            q = q.sub(&quotient[k - j].scale(&denominator[j]));
        }
        quotient.push(q);
    }
    quotient
}

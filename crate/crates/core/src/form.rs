//! Polynomial differential forms on the standard simplex.
//!
//! `Ω_n` is the free graded commutative algebra on `t_0..t_n` (degree 0)
//! and `dt_0..dt_n` (degree 1) modulo `t_0 + ... + t_n = 1` and
//! `dt_0 + ... + dt_n = 0`. A [`Form`] is stored in the normal form that
//! eliminates `t_0` and `dt_0`: a sparse rational combination of monomials
//! `t_1^{a_1} ... t_n^{a_n} dt_S` with `S ⊂ {1..n}` in ascending order.
//! Two forms are equal exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{factorial, format_rational, parse_rational, Rational};

/// Which kind of generator of `Ω_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    T,
    Dt,
}

/// `t_1^{a_1} ... t_n^{a_n} dt_S`. Bit `j - 1` of `dts` marks `dt_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormMonomial {
    exps: Vec<u32>,
    dts: u32,
}

impl FormMonomial {
    pub fn new(exps: Vec<u32>, dts: u32) -> Self {
        debug_assert!(exps.len() >= 32 || dts >> exps.len() == 0);
        FormMonomial { exps, dts }
    }

    pub fn one(dim: usize) -> Self {
        FormMonomial {
            exps: vec![0; dim],
            dts: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn dt_mask(&self) -> u32 {
        self.dts
    }

    /// Indices `j` (1-based) with `dt_j` present, ascending.
    pub fn dt_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|b| self.dts >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    pub fn form_degree(&self) -> usize {
        self.dts.count_ones() as usize
    }

    pub fn poly_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Product of two monomials with the sign from reordering the `dt`s,
    /// or `None` if a `dt` repeats.
    pub fn mul(&self, other: &FormMonomial) -> Option<(bool, FormMonomial)> {
        if self.dts & other.dts != 0 {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        let negative = dt_swap_parity(self.dts, other.dts);
        Some((
            negative,
            FormMonomial {
                exps,
                dts: self.dts | other.dts,
            },
        ))
    }
}

/// Parity of the number of pairs `(x, y)` with `x ∈ a`, `y ∈ b`, `x > y`.
pub(crate) fn dt_swap_parity(a: u32, b: u32) -> bool {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        count += (a >> y >> 1).count_ones();
    }
    count % 2 == 1
}

/// An element of `Ω_n` in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<FormMonomial, Rational>,
}

impl Form {
    pub fn zero(dim: usize) -> Self {
        Form {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Form::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Form::from_monomial(c, FormMonomial::one(dim))
    }

    pub fn from_monomial(c: Rational, m: FormMonomial) -> Self {
        let mut f = Form::zero(m.dim());
        f.add_term(m, c);
        f
    }

    /// `c * t^exps * dt_{i_1} ... dt_{i_r}` for 1-based indices in any order.
    pub fn term(dim: usize, c: Rational, exps: &[u32], dts: &[usize]) -> Result<Self, Error> {
        if exps.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: exps.len(),
            });
        }
        let mut out = Form::from_monomial(c, FormMonomial::new(exps.to_vec(), 0));
        for &j in dts {
            out = out.wedge(&Form::generator(dim, Generator::Dt, j)?)?;
        }
        Ok(out)
    }

    /// Normal form of `t_i` or `dt_i`, `0 <= i <= dim`.
    pub fn generator(dim: usize, kind: Generator, i: usize) -> Result<Self, Error> {
        if i > dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        let unit = |j: usize| {
            let mut exps = vec![0; dim];
            let mut dts = 0;
            match kind {
                Generator::T => exps[j - 1] = 1,
                Generator::Dt => dts = 1 << (j - 1),
            }
            FormMonomial::new(exps, dts)
        };
        let mut f = Form::zero(dim);
        if i == 0 {
            if kind == Generator::T {
                f.add_term(FormMonomial::one(dim), Rational::one());
            }
            for j in 1..=dim {
                f.add_term(unit(j), -Rational::one());
            }
        } else {
            f.add_term(unit(i), Rational::one());
        }
        Ok(f)
    }

    pub fn t(dim: usize, i: usize) -> Self {
        Form::generator(dim, Generator::T, i).expect("generator index in range")
    }

    pub fn dt(dim: usize, i: usize) -> Self {
        Form::generator(dim, Generator::Dt, i).expect("generator index in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &FormMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: FormMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero(self.dim);
        }
        Form {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Form degrees that occur, ascending.
    pub fn form_degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.terms.keys().map(FormMonomial::form_degree).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The form degree if the form is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.form_degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// Component of form degree `k`.
    pub fn degree_part(&self, k: usize) -> Form {
        Form {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.form_degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_poly_degree(&self) -> Option<u32> {
        self.terms.keys().map(FormMonomial::poly_degree).max()
    }

    fn check_dim(&self, other: &Form) -> Result<(), Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Graded commutative product.
    pub fn wedge(&self, other: &Form) -> Result<Form, Error> {
        self.check_dim(other)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &Form) -> Form {
        let mut out = Form::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((negative, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        out
    }

    /// Exterior derivative, `d t_i = dt_i`, `d dt_i = 0`.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.dim);
        for (m, c) in &self.terms {
            for j in 0..self.dim {
                let a = m.exps[j];
                if a == 0 || m.dts >> j & 1 == 1 {
                    continue;
                }
                let mut exps = m.exps.clone();
                exps[j] -= 1;
                // dt_j moves to its slot past the smaller dt's
                let negative = (m.dts & ((1 << j) - 1)).count_ones() % 2 == 1;
                let coeff = c * Rational::from_integer(BigInt::from(a));
                out.add_term(
                    FormMonomial::new(exps, m.dts | 1 << j),
                    if negative { -coeff } else { coeff },
                );
            }
        }
        out
    }

    /// Value at the vertex `e_i`: `t_i = 1`, the other `t`'s and all `dt`'s zero.
    pub fn vertex_evaluate(&self, i: usize) -> Result<Rational, Error> {
        if i > self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        Ok(self
            .terms
            .iter()
            .filter(|(m, _)| {
                m.dts == 0
                    && m
                        .exps
                        .iter()
                        .enumerate()
                        .all(|(j, &a)| a == 0 || j + 1 == i)
            })
            .map(|(_, c)| c.clone())
            .sum())
    }

    /// Pullback along the inclusion of the face `(i_0 < ... < i_k)`.
    pub fn face_restrict(&self, face: &[usize]) -> Result<Form, Error> {
        validate_face(face, self.dim)?;
        let k = face.len() - 1;
        let mut t_img = Vec::with_capacity(self.dim);
        let mut dt_img = Vec::with_capacity(self.dim);
        for l in 1..=self.dim {
            match face.iter().position(|&v| v == l) {
                Some(j) => {
                    t_img.push(Form::t(k, j));
                    dt_img.push(Form::dt(k, j));
                }
                None => {
                    t_img.push(Form::zero(k));
                    dt_img.push(Form::zero(k));
                }
            }
        }
        Ok(pullback(self, &t_img, &dt_img, &Form::one(k)))
    }

    /// `I_n`: integral of the top-degree part over the simplex.
    pub fn integrate_top(&self) -> Rational {
        let full = if self.dim == 0 { 0 } else { u32::MAX >> (32 - self.dim) };
        let mut out = Rational::zero();
        for (m, c) in &self.terms {
            if m.dts != full {
                continue;
            }
            let num = m.exps.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
            let den = factorial(m.poly_degree() + self.dim as u32);
            out += c * Rational::new(num, den);
        }
        out
    }

    /// Integral over the geometric face `(i_0 < ... < i_k)`.
    pub fn integrate_face(&self, face: &[usize]) -> Result<Rational, Error> {
        Ok(self.face_restrict(face)?.integrate_top())
    }
}

pub(crate) fn validate_face(face: &[usize], dim: usize) -> Result<(), Error> {
    if face.is_empty() || face.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::FaceNotIncreasing(face.to_vec()));
    }
    if face.iter().any(|&v| v > dim) {
        return Err(Error::FaceOutOfRange {
            face: face.to_vec(),
            dim,
        });
    }
    Ok(())
}

/// Target algebra for substitution homomorphisms out of `Ω_n`.
pub(crate) trait SubstAlgebra: Clone {
    fn mul(&self, other: &Self) -> Self;
    fn add_scaled(&mut self, other: &Self, c: &Rational);
    fn zero_like(&self) -> Self;
}

impl SubstAlgebra for Form {
    fn mul(&self, other: &Self) -> Self {
        self.wedge_unchecked(other)
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    fn zero_like(&self) -> Self {
        Form::zero(self.dim)
    }
}

/// Algebra map determined by the images of `t_1..t_n` and `dt_1..dt_n`.
/// Images of `dt`'s must be odd, images of `t`'s even.
pub(crate) fn pullback<A: SubstAlgebra>(form: &Form, t_img: &[A], dt_img: &[A], one: &A) -> A {
    let mut powers: Vec<Vec<A>> = t_img.iter().map(|x| vec![one.clone(), x.clone()]).collect();
    let mut out = one.zero_like();
    for (m, c) in &form.terms {
        let mut acc = one.clone();
        for (j, &a) in m.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let cache = &mut powers[j];
            while cache.len() <= a as usize {
                let next = cache.last().expect("non-empty").mul(&t_img[j]);
                cache.push(next);
            }
            acc = acc.mul(&cache[a as usize]);
        }
        for j in 0..form.dim {
            if m.dts >> j & 1 == 1 {
                acc = acc.mul(&dt_img[j]);
            }
        }
        out.add_scaled(&acc, c);
    }
    out
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += &-rhs;
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl fmt::Display for FormMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, &a) in self.exps.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("t{}", j + 1)),
                _ => parts.push(format!("t{}^{a}", j + 1)),
            }
        }
        for j in self.dt_indices() {
            parts.push(format!("dt{j}"));
        }
        f.write_str(&parts.join(" "))
    }
}

/// Terms like `3/2 t1^2 t2 dt1 dt3` joined by ` + `.
impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let body = m.to_string();
            if body.is_empty() {
                f.write_str(&format_rational(c))?;
            } else if c.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{} {body}", format_rational(c))?;
            }
        }
        Ok(())
    }
}

impl Form {
    /// Parses the textual syntax in dimension `dim`. `t0` and `dt0` are
    /// accepted and eliminated; `dt` factors may come in any order.
    pub fn parse(dim: usize, text: &str) -> Result<Form, Error> {
        let mut out = Form::zero(dim);
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty form".into()));
        }
        for term in text.split('+') {
            let mut tokens = term.split_whitespace().peekable();
            let mut value = Form::one(dim);
            if let Some(tok) = tokens.peek() {
                if let Ok(c) = parse_rational(tok) {
                    value = value.scale(&c);
                    tokens.next();
                }
            } else {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            for tok in tokens {
                let (kind, rest) = if let Some(r) = tok.strip_prefix("dt") {
                    (Generator::Dt, r)
                } else if let Some(r) = tok.strip_prefix('t') {
                    (Generator::T, r)
                } else {
                    return Err(Error::Parse(format!("unexpected token {tok:?}")));
                };
                let (index, power) = match rest.split_once('^') {
                    Some((i, p)) if kind == Generator::T => (i, p),
                    Some(_) => return Err(Error::Parse(format!("power of dt in {tok:?}"))),
                    None => (rest, "1"),
                };
                let index: usize = index
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index in {tok:?}")))?;
                let power: u32 = power
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad power in {tok:?}")))?;
                let g = Form::generator(dim, kind, index)?;
                for _ in 0..power {
                    value = value.wedge_unchecked(&g);
                }
            }
            out += &value;
        }
        Ok(out)
    }
}

impl FromStr for Form {
    type Err = Error;

    /// Parses with the dimension inferred from the largest index used.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let dim = s
            .split(|c: char| !c.is_ascii_alphanumeric())
            .filter_map(|tok| tok.strip_prefix("dt").or_else(|| tok.strip_prefix('t')))
            .filter_map(|i| i.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Form::parse(dim, s)
    }
}

/// All monomials of `Ω_n` with polynomial degree `<= max_poly`.
pub fn monomial_basis(dim: usize, max_poly: u32) -> Vec<FormMonomial> {
    let mut exps_list = Vec::new();
    let mut current = vec![0u32; dim];
    fn rec(j: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == cur.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[j] = a;
            rec(j + 1, left - a, cur, out);
        }
        cur[j] = 0;
    }
    rec(0, max_poly, &mut current, &mut exps_list);
    let mut out = Vec::new();
    for exps in exps_list {
        for dts in 0..(1u32 << dim) {
            out.push(FormMonomial::new(exps.clone(), dts));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn f1(s: &str) -> Form {
        Form::parse(1, s).unwrap()
    }

    fn f2(s: &str) -> Form {
        Form::parse(2, s).unwrap()
    }

    #[test]
    fn generators_eliminate_index_zero() {
        assert_eq!(Form::t(1, 0), f1("1 + -1 t1"));
        assert_eq!(Form::dt(2, 0), f2("-1 dt1 + -1 dt2"));
        assert_eq!(Form::t(1, 1), f1("t1"));
        assert!(Form::generator(1, Generator::T, 2).is_err());
    }

    #[test]
    fn wedge_signs() {
        let dt1 = Form::dt(2, 1);
        let dt2 = Form::dt(2, 2);
        assert!(dt1.wedge(&dt1).unwrap().is_zero());
        assert_eq!(
            Form::t(1, 1).wedge(&Form::dt(1, 1)).unwrap(),
            f1("t1 dt1")
        );
        assert_eq!(dt2.wedge(&dt1).unwrap(), f2("-1 dt1 dt2"));
        assert!(Form::t(1, 1).wedge(&Form::t(2, 1)).is_err());
    }

    #[test]
    fn differential_examples() {
        assert_eq!(f1("t1^2").d(), f1("2 t1 dt1"));
        assert!(f1("dt1").d().is_zero());
        assert_eq!(f2("t1 t2").d(), f2("t2 dt1 + t1 dt2"));
    }

    #[test]
    fn vertex_values() {
        assert_eq!(f1("t1").vertex_evaluate(1).unwrap(), int(1));
        assert_eq!(f1("dt1").vertex_evaluate(0).unwrap(), int(0));
        assert_eq!(f1("t1^2 + 3").vertex_evaluate(0).unwrap(), int(3));
        assert!(f1("t1").vertex_evaluate(2).is_err());
    }

    #[test]
    fn face_restrictions() {
        assert_eq!(f2("t1").face_restrict(&[0, 1]).unwrap(), f1("t1"));
        assert!(f2("t2").face_restrict(&[0, 1]).unwrap().is_zero());
        assert_eq!(f2("dt2").face_restrict(&[0, 2]).unwrap(), f1("dt1"));
        assert_eq!(f2("t1").face_restrict(&[1, 2]).unwrap(), f1("1 + -1 t1"));
        assert!(matches!(
            f2("t1").face_restrict(&[1, 0]),
            Err(Error::FaceNotIncreasing(_))
        ));
        assert!(matches!(
            f2("t1").face_restrict(&[0, 3]),
            Err(Error::FaceOutOfRange { .. })
        ));
    }

    #[test]
    fn top_integrals() {
        assert_eq!(f1("t1 dt1").integrate_top(), ratio(1, 2));
        assert_eq!(f2("dt1 dt2").integrate_top(), ratio(1, 2));
        assert_eq!(f1("t1^2 dt1").integrate_top(), ratio(1, 3));
        assert_eq!(f1("t1").integrate_top(), int(0));
    }

    #[test]
    fn face_integrals() {
        assert_eq!(f1("1").integrate_face(&[0]).unwrap(), int(1));
        assert_eq!(f2("dt1").integrate_face(&[0, 1]).unwrap(), int(1));
        assert_eq!(f1("t1 dt1").integrate_face(&[0, 1]).unwrap(), ratio(1, 2));
    }

    #[test]
    fn text_round_trip() {
        let w = Form::parse(3, "3/2 t1^2 t2 dt1 dt3 + -1 t3 + 5").unwrap();
        let back = Form::parse(3, &w.to_string()).unwrap();
        assert_eq!(w, back);
        assert_eq!(Form::parse(3, "dt3 dt1").unwrap(), Form::parse(3, "-1 dt1 dt3").unwrap());
        assert!(Form::parse(1, "t1 q").is_err());
        assert!(Form::parse(1, "dt1^2").is_err());
        assert_eq!("t2 dt1".parse::<Form>().unwrap().dim(), 2);
    }

    #[test]
    fn basis_size() {
        // 10 exponent vectors of degree <= 2 in 3 variables times 8 dt subsets
        assert_eq!(monomial_basis(3, 2).len(), 80);
        assert_eq!(monomial_basis(0, 4).len(), 1);
    }
}

//! Normalized cochains on the standard simplex and the Whitney maps.
//!
//! [`Cochain`] assigns rationals to the nondegenerate faces of `Δ^n`. The
//! coboundary is the Stokes dual of the exterior derivative, so that
//! [`project_f`] (integration over faces) is a chain map by construction.
//! [`include_g`] sends a face to its Whitney elementary form, and
//! `project_f ∘ include_g` is the identity.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{AddAssign, Neg};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::form::{validate_face, Form};
use crate::scalar::{factorial, format_rational, parse_rational, Rational};

/// A strictly increasing vertex list. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(vertices: Vec<usize>) -> Result<Face, Error> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::FaceNotIncreasing(vertices));
        }
        Ok(Face(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Number of vertices minus one.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, other: &Face) -> bool {
        other.0.iter().all(|v| self.0.binary_search(v).is_ok())
    }

    /// The face with the `j`-th vertex removed.
    pub fn remove(&self, j: usize) -> Face {
        let mut v = self.0.clone();
        v.remove(j);
        Face(v)
    }

    /// Every nonempty subface, in face order.
    pub fn subfaces(&self) -> Vec<Face> {
        let n = self.0.len();
        let mut out: Vec<Face> = (1u32..(1 << n))
            .map(|mask| {
                Face(
                    (0..n)
                        .filter(|b| mask >> b & 1 == 1)
                        .map(|b| self.0[b])
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Positions of `sub`'s vertices inside `self`.
    pub fn relative(&self, sub: &Face) -> Option<Face> {
        sub.0
            .iter()
            .map(|v| self.0.binary_search(v).ok())
            .collect::<Option<Vec<_>>>()
            .map(Face)
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All faces of `Δ^n`.
pub fn simplex_faces(n: usize) -> Vec<Face> {
    Face((0..=n).collect()).subfaces()
}

/// A normalized cochain on `Δ^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    dim: usize,
    coeffs: BTreeMap<Face, Rational>,
}

impl Cochain {
    pub fn zero(dim: usize) -> Self {
        Cochain {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// Indicator cochain `χ_face`.
    pub fn basis(dim: usize, face: &[usize]) -> Result<Self, Error> {
        validate_face(face, dim)?;
        let mut c = Cochain::zero(dim);
        c.add_entry(Face(face.to_vec()), Rational::one());
        Ok(c)
    }

    /// The cochain taking value 1 on every vertex.
    pub fn unit(dim: usize) -> Self {
        let mut c = Cochain::zero(dim);
        for v in 0..=dim {
            c.add_entry(Face(vec![v]), Rational::one());
        }
        c
    }

    /// All indicator cochains of `Δ^n`, in face order.
    pub fn basis_elements(dim: usize) -> Vec<Cochain> {
        simplex_faces(dim)
            .into_iter()
            .map(|f| {
                let mut c = Cochain::zero(dim);
                c.add_entry(f, Rational::one());
                c
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Face, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, face: &[usize]) -> Rational {
        self.coeffs
            .get(&Face(face.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_entry(&mut self, face: Face, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(face) {
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

    pub fn scale(&self, c: &Rational) -> Cochain {
        if c.is_zero() {
            return Cochain::zero(self.dim);
        }
        Cochain {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(f, x)| (f.clone(), x * c)).collect(),
        }
    }

    /// Cochain degrees that occur, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.coeffs.keys().map(Face::dim).collect();
        out.dedup();
        out
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// `(δc)(i_0..i_k) = Σ_j (-1)^j c(i_0..î_j..i_k)`.
    pub fn coboundary(&self) -> Cochain {
        let mut out = Cochain::zero(self.dim);
        for (face, c) in &self.coeffs {
            for v in 0..=self.dim {
                if let Err(j) = face.0.binary_search(&v) {
                    let mut bigger = face.0.clone();
                    bigger.insert(j, v);
                    out.add_entry(Face(bigger), if j % 2 == 0 { c.clone() } else { -c });
                }
            }
        }
        out
    }

    /// Pullback to the face `(i_0 < .. < i_k)`, re-indexed to `Δ^k`.
    pub fn restrict(&self, face: &[usize]) -> Result<Cochain, Error> {
        validate_face(face, self.dim)?;
        let outer = Face(face.to_vec());
        let mut out = Cochain::zero(face.len() - 1);
        for (f, c) in &self.coeffs {
            if let Some(rel) = outer.relative(f) {
                out.add_entry(rel, c.clone());
            }
        }
        Ok(out)
    }

    /// One `face=[i0,i1,...] coeff=p/q` line per entry.
    pub fn to_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|(f, c)| format!("face={f} coeff={}\n", format_rational(c)))
            .collect()
    }

    pub fn from_text(dim: usize, text: &str) -> Result<Cochain, Error> {
        let mut out = Cochain::zero(dim);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let bad = || Error::Parse(format!("bad cochain line {line:?}"));
            let rest = line.strip_prefix("face=[").ok_or_else(bad)?;
            let (verts, rest) = rest.split_once(']').ok_or_else(bad)?;
            let coeff = rest.trim().strip_prefix("coeff=").ok_or_else(bad)?;
            let verts = verts
                .split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            validate_face(&verts, dim)?;
            out.add_entry(Face(verts), parse_rational(coeff)?);
        }
        Ok(out)
    }
}

impl AddAssign<&Cochain> for Cochain {
    fn add_assign(&mut self, rhs: &Cochain) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (f, c) in &rhs.coeffs {
            self.add_entry(f.clone(), c.clone());
        }
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(face, c)| {
                if c.is_one() {
                    format!("χ{face}")
                } else {
                    format!("{} χ{face}", format_rational(c))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `ω_{i_0..i_k} = k! Σ_j (-1)^j t_{i_j} dt_{i_0} .. (omit j) .. dt_{i_k}`.
pub fn elementary_form(face: &[usize], n: usize) -> Result<Form, Error> {
    validate_face(face, n)?;
    let k = face.len() - 1;
    let mut out = Form::zero(n);
    for j in 0..=k {
        let mut term = Form::t(n, face[j]);
        for (l, &v) in face.iter().enumerate() {
            if l != j {
                term = term.wedge_unchecked(&Form::dt(n, v));
            }
        }
        if j % 2 == 1 {
            term = -term;
        }
        out += &term;
    }
    Ok(out.scale(&Rational::from_integer(factorial(k as u32))))
}

/// Integration over every face: `Ω_n -> N_n`.
pub fn project_f(form: &Form) -> Cochain {
    let n = form.dim();
    let mut out = Cochain::zero(n);
    for face in simplex_faces(n) {
        let degree = face.dim();
        let part = form.degree_part(degree);
        if part.is_zero() {
            continue;
        }
        let value = part
            .integrate_face(face.vertices())
            .expect("faces of the simplex are valid");
        out.add_entry(face, value);
    }
    out
}

/// Linear extension of `face ↦ ω_face`: `N_n -> Ω_n`.
pub fn include_g(c: &Cochain) -> Form {
    let mut out = Form::zero(c.dim());
    for (face, x) in c.entries() {
        let w = elementary_form(face.vertices(), c.dim()).expect("stored faces are valid");
        out += &w.scale(x);
    }
    out
}

/// Coordinates of an interval cochain in the basis `{1, t, dt}`, where
/// `1 = χ(0) + χ(1)`, `t = χ(1)` and `dt = χ(01)`.
pub fn interval_coordinates(c: &Cochain) -> Result<[Rational; 3], Error> {
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch {
            left: 1,
            right: c.dim(),
        });
    }
    let at0 = c.coefficient(&[0]);
    let at1 = c.coefficient(&[1]);
    Ok([at0.clone(), at1 - at0, c.coefficient(&[0, 1])])
}

/// Inverse of [`interval_coordinates`].
pub fn interval_from_coordinates(one: &Rational, t: &Rational, dt: &Rational) -> Cochain {
    let mut c = Cochain::zero(1);
    c.add_entry(Face(vec![0]), one.clone());
    c.add_entry(Face(vec![1]), one + t);
    c.add_entry(Face(vec![0, 1]), dt.clone());
    c
}

/// JSON record for one cochain entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    #[serde(rename = "simplex")]
    pub face: Face,
    #[serde(with = "crate::scalar::serde_rational")]
    pub coeff: Rational,
}

impl Cochain {
    pub fn to_records(&self) -> Vec<CochainEntry> {
        self.coeffs
            .iter()
            .map(|(f, c)| CochainEntry {
                face: f.clone(),
                coeff: c.clone(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn chi(n: usize, face: &[usize]) -> Cochain {
        Cochain::basis(n, face).unwrap()
    }

    #[test]
    fn coboundary_on_interval() {
        assert_eq!(chi(1, &[0]).coboundary(), -&chi(1, &[0, 1]));
        assert!(chi(1, &[0, 1]).coboundary().is_zero());
        assert!(Cochain::unit(1).coboundary().is_zero());
    }

    #[test]
    fn coboundary_squares_to_zero() {
        for n in 0..=4 {
            for c in Cochain::basis_elements(n) {
                assert!(c.coboundary().coboundary().is_zero());
            }
        }
    }

    #[test]
    fn elementary_forms() {
        assert_eq!(elementary_form(&[0], 1).unwrap(), Form::parse(1, "1 + -1 t1").unwrap());
        assert_eq!(elementary_form(&[0, 1], 1).unwrap(), Form::parse(1, "dt1").unwrap());
        // 2 (t0 dt1 dt2 - t1 dt0 dt2 + t2 dt0 dt1) with t0, dt0 eliminated
        assert_eq!(
            elementary_form(&[0, 1, 2], 2).unwrap(),
            Form::parse(2, "2 dt1 dt2").unwrap()
        );
        assert!(elementary_form(&[1, 1], 2).is_err());
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_f(&Form::parse(1, "t1").unwrap()), chi(1, &[1]));
        assert_eq!(project_f(&Form::parse(1, "dt1").unwrap()), chi(1, &[0, 1]));
        assert_eq!(project_f(&Form::one(1)), Cochain::unit(1));
    }

    #[test]
    fn inclusion_examples() {
        assert_eq!(include_g(&chi(1, &[0, 1])), Form::dt(1, 1));
        assert_eq!(include_g(&chi(1, &[1])), Form::t(1, 1));
        assert_eq!(include_g(&Cochain::unit(1)), Form::one(1));
    }

    #[test]
    fn interval_basis_change() {
        let c = interval_from_coordinates(&int(2), &int(-1), &int(5));
        assert_eq!(interval_coordinates(&c).unwrap(), [int(2), int(-1), int(5)]);
        assert_eq!(interval_coordinates(&chi(1, &[1])).unwrap(), [int(0), int(1), int(0)]);
    }

    #[test]
    fn restriction_reindexes() {
        let c = chi(2, &[0, 2]);
        assert_eq!(c.restrict(&[0, 2]).unwrap(), chi(1, &[0, 1]));
        assert!(c.restrict(&[0, 1]).unwrap().is_zero());
    }

    #[test]
    fn text_format() {
        let mut c = chi(2, &[0, 2]).scale(&crate::scalar::ratio(-3, 4));
        c += &chi(2, &[1]);
        let text = c.to_text();
        assert_eq!(text, "face=[1] coeff=1\nface=[0,2] coeff=-3/4\n");
        assert_eq!(Cochain::from_text(2, &text).unwrap(), c);
        assert!(Cochain::from_text(2, "face=[2,0] coeff=1").is_err());
    }
}

//! Dupont's contraction of `Ω_n` onto the Whitney cochains.
//!
//! The dilation toward the vertex `e_i`,
//! `(u, t) ↦ ((1-u)t_0, .., (1-u)t_i + u, .., (1-u)t_n)`, pulls a form back
//! to `[0,1] × Δ^n`; [`h_operator`] keeps the part linear in `du` and
//! integrates over `u`. The operator
//!
//! ```text
//! s_n = Σ_{k=0}^{n-1} (-1)^k Σ_{i_0 < .. < i_k} ω_{i_0..i_k} h^{i_k} .. h^{i_0}
//! ```
//!
//! satisfies `1 - g∘f = ds + sd`, `f∘s = 0` and `s∘s = 0`, and the transfer
//! uses `H = -s`.
//!
//! Orientation of the fibre integral: with `du` written on the left, the
//! `du`-coefficient is integrated with a minus sign. That is the choice for
//! which `1 - ε^i = d h^i + h^i d` holds with a plus sign. With `h^i`
//! normalized this way, the `k`-fold composites enter `s_n` with the sign
//! `(-1)^k`; without it `1 - g∘f = ds + sd` already fails on `Ω_2`. On the
//! interval only `k = 0` occurs and the sign is invisible.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cochain::{elementary_form, include_g, project_f, simplex_faces, Cochain};
use crate::error::Error;
use crate::form::{monomial_basis, pullback, Form, FormMonomial, SubstAlgebra};
use crate::scalar::Rational;

/// Forms on `[0,1] × Δ^n`: sums of `u^a du^e ∧ ω`, `e ∈ {0,1}`.
#[derive(Clone, Debug)]
struct CylinderForm {
    dim: usize,
    terms: BTreeMap<(u32, bool, FormMonomial), Rational>,
}

impl CylinderForm {
    fn zero(dim: usize) -> Self {
        CylinderForm {
            dim,
            terms: BTreeMap::new(),
        }
    }

    fn one(dim: usize) -> Self {
        let mut out = CylinderForm::zero(dim);
        out.add((0, false, FormMonomial::one(dim)), Rational::one());
        out
    }

    fn add(&mut self, key: (u32, bool, FormMonomial), c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
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

    /// `u^a du^e ω` summed over the given form.
    fn lift(form: &Form, upow: u32, du: bool) -> Self {
        let mut out = CylinderForm::zero(form.dim());
        for (m, c) in form.terms() {
            out.add((upow, du, m.clone()), c.clone());
        }
        out
    }
}

impl SubstAlgebra for CylinderForm {
    fn mul(&self, other: &Self) -> Self {
        let mut out = CylinderForm::zero(self.dim);
        for ((ua, ea, ma), ca) in &self.terms {
            for ((ub, eb, mb), cb) in &other.terms {
                if *ea && *eb {
                    continue;
                }
                let Some((mut negative, m)) = ma.mul(mb) else {
                    continue;
                };
                // du from the right factor moves left past ω_a
                if *eb && ma.form_degree() % 2 == 1 {
                    negative = !negative;
                }
                let c = ca * cb;
                out.add((ua + ub, *ea || *eb, m), if negative { -c } else { c });
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (k, x) in &other.terms {
            self.add(k.clone(), x * c);
        }
    }

    fn zero_like(&self) -> Self {
        CylinderForm::zero(self.dim)
    }
}

/// `h^i`: pull back along the dilation toward `e_i`, then integrate out `u`.
pub fn h_operator(form: &Form, i: usize) -> Result<Form, Error> {
    let n = form.dim();
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let one_minus_u = {
        let mut x = CylinderForm::one(n);
        x.add((1, false, FormMonomial::one(n)), -Rational::one());
        x
    };
    let mut t_img = Vec::with_capacity(n);
    let mut dt_img = Vec::with_capacity(n);
    for j in 1..=n {
        let tj = Form::t(n, j);
        let dtj = Form::dt(n, j);
        let mut t_new = one_minus_u.mul(&CylinderForm::lift(&tj, 0, false));
        let mut dt_new = one_minus_u.mul(&CylinderForm::lift(&dtj, 0, false));
        if j == i {
            // (1-u) t_i + u,  (1-u) dt_i + (1 - t_i) du
            t_new.add((1, false, FormMonomial::one(n)), Rational::one());
            dt_new.add_scaled(&CylinderForm::lift(&(&Form::one(n) - &tj), 0, true), &Rational::one());
        } else {
            // (1-u) t_j,  (1-u) dt_j - t_j du
            dt_new.add_scaled(&CylinderForm::lift(&tj, 0, true), &-Rational::one());
        }
        t_img.push(t_new);
        dt_img.push(dt_new);
    }
    let pulled = pullback(form, &t_img, &dt_img, &CylinderForm::one(n));
    let mut out = Form::zero(n);
    for ((upow, du, m), c) in pulled.terms {
        if du {
            let weight = Rational::new(BigInt::one(), BigInt::from(upow + 1));
            out.add_term(m, -(c * weight));
        }
    }
    Ok(out)
}

/// Dupont's operator `s_n`, composites of `k + 1` dilation homotopies
/// weighted by `(-1)^k`.
pub fn s_operator(form: &Form) -> Form {
    let n = form.dim();
    let mut out = Form::zero(n);
    // depth-first over increasing vertex sequences i_0 < i_1 < ..
    fn walk(
        current: &Form,
        path: &mut Vec<usize>,
        n: usize,
        out: &mut Form,
    ) {
        let start = path.last().map_or(0, |&v| v + 1);
        for v in start..=n {
            if path.len() == n {
                break;
            }
            let next = h_operator(current, v).expect("vertex in range");
            if next.is_zero() {
                continue;
            }
            path.push(v);
            let omega = elementary_form(path, n).expect("increasing path");
            let term = omega.wedge_unchecked(&next);
            if path.len() % 2 == 0 {
                *out += &-term;
            } else {
                *out += &term;
            }
            walk(&next, path, n, out);
            path.pop();
        }
    }
    walk(form, &mut Vec::new(), n, &mut out);
    out
}

/// `H = -s`.
pub fn homotopy_h(form: &Form) -> Form {
    -s_operator(form)
}

/// Outcome of one identity over a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub basis_size: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub dimension: usize,
    pub poly_degree_bound: u32,
    pub checks: Vec<IdentityCheck>,
}

impl ContractionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ContractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "contraction n={} max-poly-degree={}",
            self.dimension, self.poly_degree_bound
        )?;
        let width = self.checks.iter().map(|c| c.identity.len()).max().unwrap_or(0);
        for c in &self.checks {
            write!(
                f,
                "  {:<width$}  basis={:>5}  {}",
                c.identity,
                c.basis_size,
                if c.passed { "PASS" } else { "FAIL" }
            )?;
            if let Some(ce) = &c.counterexample {
                write!(f, "  counterexample: {ce}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs `check` on every item in parallel and keeps the first failure in
/// input order.
pub(crate) fn run_identity<T, F>(name: &str, items: &[T], check: F) -> IdentityCheck
where
    T: Sync,
    F: Fn(&T) -> Option<String> + Sync,
{
    let failures: Vec<Option<String>> = items.par_iter().map(&check).collect();
    let counterexample = failures.into_iter().flatten().next();
    IdentityCheck {
        identity: name.to_string(),
        basis_size: items.len(),
        passed: counterexample.is_none(),
        counterexample,
    }
}

/// Evaluates every contraction identity on all monomials of `Ω_n` with
/// polynomial degree at most `max_poly`.
pub fn check_contraction(n: usize, max_poly: u32) -> ContractionReport {
    let monomials: Vec<Form> = monomial_basis(n, max_poly)
        .into_iter()
        .map(|m| Form::from_monomial(Rational::one(), m))
        .collect();
    let cochains = Cochain::basis_elements(n);
    let faces = simplex_faces(n);
    let mut checks = Vec::new();

    checks.push(run_identity("f∘g = 1", &cochains, |c| {
        let back = project_f(&include_g(c));
        (back != *c).then(|| format!("{c} ↦ {back}"))
    }));
    checks.push(run_identity("1 - g∘f = ds + sd", &monomials, |w| {
        let lhs = w - &include_g(&project_f(w));
        let rhs = &s_operator(w).d() + &s_operator(&w.d());
        (lhs != rhs).then(|| format!("{w}: {lhs} vs {rhs}"))
    }));
    checks.push(run_identity("f∘s = 0", &monomials, |w| {
        let v = project_f(&s_operator(w));
        (!v.is_zero()).then(|| format!("{w} ↦ {v}"))
    }));
    checks.push(run_identity("s∘s = 0", &monomials, |w| {
        let v = s_operator(&s_operator(w));
        (!v.is_zero()).then(|| format!("{w} ↦ {v}"))
    }));
    checks.push(run_identity("s∘g = 0", &cochains, |c| {
        let v = s_operator(&include_g(c));
        (!v.is_zero()).then(|| format!("{c} ↦ {v}"))
    }));
    let one = vec![Form::one(n)];
    checks.push(run_identity("s(1) = 0", &one, |w| {
        let v = s_operator(w);
        (!v.is_zero()).then(|| format!("s(1) = {v}"))
    }));
    for i in 0..=n {
        let name = format!("1 - ε^{i} = dh^{i} + h^{i}d");
        checks.push(run_identity(&name, &monomials, |w| {
            let eps = w.vertex_evaluate(i).expect("vertex in range");
            let lhs = w - &Form::constant(n, eps);
            let h = |x: &Form| h_operator(x, i).expect("vertex in range");
            let rhs = &h(w).d() + &h(&w.d());
            (lhs != rhs).then(|| format!("{w}: {lhs} vs {rhs}"))
        }));
    }
    debug_assert_eq!(faces.len(), cochains.len());
    ContractionReport {
        dimension: n,
        poly_degree_bound: max_poly,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn f1(s: &str) -> Form {
        Form::parse(1, s).unwrap()
    }

    #[test]
    fn h_examples_on_interval() {
        assert_eq!(h_operator(&f1("dt1"), 0).unwrap(), f1("t1"));
        assert!(h_operator(&f1("t1^2"), 0).unwrap().is_zero());
        assert_eq!(h_operator(&f1("dt1"), 1).unwrap(), f1("t1 + -1"));
        assert!(h_operator(&f1("dt1"), 2).is_err());
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_operator(&f1("t1 dt1")), f1("1/2 t1^2 + -1/2 t1"));
        for n in 0..=3 {
            assert!(s_operator(&Form::one(n)).is_zero());
        }
        assert!(s_operator(&f1("dt1")).is_zero());
    }

    #[test]
    fn homotopy_is_negated_s() {
        assert_eq!(homotopy_h(&f1("t1 dt1")), f1("1/2 t1 + -1/2 t1^2"));
        assert!(homotopy_h(&Form::one(2)).is_zero());
        for n in 1..=3 {
            for c in Cochain::basis_elements(n) {
                assert!(homotopy_h(&include_g(&c)).is_zero(), "{c}");
            }
        }
    }

    #[test]
    fn s_closed_form_on_interval() {
        for k in 0..=10u32 {
            let w = Form::term(1, int(1), &[k], &[1]).unwrap();
            let expected = (&Form::term(1, int(1), &[k + 1], &[]).unwrap() - &f1("t1"))
                .scale(&Rational::new(BigInt::one(), BigInt::from(k + 1)));
            assert_eq!(s_operator(&w), expected, "k={k}");
        }
    }

    #[test]
    fn point_contraction_is_trivial() {
        let report = check_contraction(0, 1);
        assert!(report.all_passed(), "{report}");
        assert!(s_operator(&Form::one(0)).is_zero());
    }

    #[test]
    fn interval_battery() {
        let report = check_contraction(1, 6);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn triangle_battery() {
        let report = check_contraction(2, 4);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn unsigned_composites_break_the_homotopy_formula() {
        // ω_0 h^0 + ω_1 h^1 + ω_2 h^2 + ω_01 h^1 h^0 + ω_02 h^2 h^0 + ω_12 h^2 h^1
        let w = Form::parse(2, "t2 dt1 dt2").unwrap();
        let mut unsigned = Form::zero(2);
        for i in 0..=2 {
            let hi = h_operator(&w, i).unwrap();
            unsigned += &elementary_form(&[i], 2).unwrap().wedge(&hi).unwrap();
            for j in i + 1..=2 {
                let hji = h_operator(&hi, j).unwrap();
                unsigned += &elementary_form(&[i, j], 2).unwrap().wedge(&hji).unwrap();
            }
        }
        let lhs = &w - &include_g(&project_f(&w));
        assert_ne!(unsigned.d(), lhs);
        assert_eq!(s_operator(&w).d(), lhs);
    }

    #[test]
    fn h_commutes_with_faces_through_the_vertex() {
        for n in 1..=2 {
            for face in simplex_faces(n) {
                let verts = face.vertices();
                for m in monomial_basis(n, 2) {
                    let w = Form::from_monomial(int(1), m);
                    for (local, &i) in verts.iter().enumerate() {
                        let a = h_operator(&w, i).unwrap().face_restrict(verts).unwrap();
                        let b = h_operator(&w.face_restrict(verts).unwrap(), local).unwrap();
                        assert_eq!(a, b, "n={n} face={face} i={i} w={w}");
                    }
                }
            }
        }
    }
}

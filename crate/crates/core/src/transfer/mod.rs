//! Transfer of the product on `A` to an A∞ (in fact C∞) structure on `B`
//! along a contraction `(f, g, H)`.
//!
//! The primary route is the recursion
//!
//! ```text
//! m_n^B = Σ_{k≥2} Σ_{n_1+..+n_k=n} f ∘ m_k^A ∘ (G_{n_1} ⊗ .. ⊗ G_{n_k})
//! G_n   = Σ_{k≥2} Σ_{n_1+..+n_k=n} H ∘ m_k^A ∘ (G_{n_1} ⊗ .. ⊗ G_{n_k})
//! ```
//!
//! with `m_1^B = d_B` and `G_1 = g`. The sum over planar trees in
//! [`crate::tree`] is kept as an independent route and the two agree.
//!
//! Degrees are shifted: every `m_k` has degree 1, `G_n` degree 0, `H`
//! degree -1. On a dg algebra `A` the only nonzero product is
//! `m_2^A(a, b) = (-1)^{|a|+1} a ∧ b`.

mod checks;
mod interval;

pub use checks::*;
pub use interval::*;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Mutex;

use num_traits::One;

use crate::cochain::{include_g, project_f, Cochain};
use crate::dupont::homotopy_h;
use crate::error::Error;
use crate::form::Form;
use crate::scalar::Rational;
use crate::tensor::{compositions, Homog, SignRule};
use crate::tree::{evaluate_tree_g, evaluate_tree_m, TreeCatalog};

/// Linear structure shared by both sides of a contraction.
pub trait Vector: Clone + PartialEq + Send + Sync + fmt::Display {
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: &Rational);
}

impl Vector for Form {
    fn is_zero(&self) -> bool {
        Form::is_zero(self)
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += &other.scale(c);
    }
}

impl Vector for Cochain {
    fn is_zero(&self) -> bool {
        Cochain::is_zero(self)
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += &other.scale(c);
    }
}

/// A contraction `(f, g, H)` from an A∞ algebra `A` onto a complex `B`,
/// with `g∘f - 1 = dH + Hd` and `f∘g = 1`.
pub trait Contraction: Sync {
    type A: Vector;
    type B: Vector + Eq + Hash;

    fn zero_a(&self) -> Self::A;
    fn zero_b(&self) -> Self::B;
    fn unit_a(&self) -> Self::A;

    fn d_a(&self, a: &Self::A) -> Self::A;
    fn d_b(&self, b: &Self::B) -> Self::B;

    /// `m_k^A` for `k >= 2`; `None` stands for the zero map.
    fn product(&self, args: &[Homog<Self::A>]) -> Option<Self::A>;

    /// Largest `k` with `m_k^A` possibly nonzero.
    fn max_product_arity(&self) -> Option<usize> {
        Some(2)
    }

    fn f(&self, a: &Self::A) -> Self::B;
    fn g(&self, b: &Self::B) -> Self::A;
    fn h(&self, a: &Self::A) -> Self::A;

    /// Shifted degree of a homogeneous nonzero element of `B`.
    fn degree_b(&self, b: &Self::B) -> i64;

    fn scale_a(&self, a: &Self::A, c: &Rational) -> Self::A {
        let mut out = self.zero_a();
        out.add_scaled(a, c);
        out
    }
}

/// `m_2^A(a, b) = (-1)^{|a|+1} a ∧ b` on forms, applied per monomial of
/// `a` so that inhomogeneous inputs are handled.
pub fn signed_wedge(a: &Form, b: &Form) -> Form {
    let mut out = Form::zero(a.dim());
    for k in a.form_degrees() {
        let part = a.degree_part(k).wedge_unchecked(b);
        if k % 2 == 0 {
            out += &part;
        } else {
            out += &-part;
        }
    }
    out
}

/// Whitney–Dupont contraction of `Ω_n` onto `N_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WhitneyDupont {
    pub dim: usize,
}

impl WhitneyDupont {
    pub fn new(dim: usize) -> Self {
        WhitneyDupont { dim }
    }

    /// Indicator cochains of all faces.
    pub fn basis(&self) -> Vec<Cochain> {
        Cochain::basis_elements(self.dim)
    }
}

impl Contraction for WhitneyDupont {
    type A = Form;
    type B = Cochain;

    fn zero_a(&self) -> Form {
        Form::zero(self.dim)
    }

    fn zero_b(&self) -> Cochain {
        Cochain::zero(self.dim)
    }

    fn unit_a(&self) -> Form {
        Form::one(self.dim)
    }

    fn d_a(&self, a: &Form) -> Form {
        a.d()
    }

    fn d_b(&self, b: &Cochain) -> Cochain {
        b.coboundary()
    }

    fn product(&self, args: &[Homog<Form>]) -> Option<Form> {
        match args {
            [a, b] => Some(signed_wedge(&a.value, &b.value)),
            _ => None,
        }
    }

    fn f(&self, a: &Form) -> Cochain {
        project_f(a)
    }

    fn g(&self, b: &Cochain) -> Form {
        include_g(b)
    }

    fn h(&self, a: &Form) -> Form {
        homotopy_h(a)
    }

    fn degree_b(&self, b: &Cochain) -> i64 {
        let k = b
            .homogeneous_degree()
            .unwrap_or_else(|| panic!("inhomogeneous cochain {b}"));
        k as i64 - 1
    }
}

/// Evaluator for the transferred operations with a cache of `G` on words.
pub struct Transfer<'c, C: Contraction> {
    ctx: &'c C,
    rule: SignRule,
    cache: Mutex<HashMap<Vec<C::B>, C::A>>,
}

impl<'c, C: Contraction> Transfer<'c, C> {
    pub fn new(ctx: &'c C) -> Self {
        Transfer::with_rule(ctx, SignRule::Koszul)
    }

    pub fn with_rule(ctx: &'c C, rule: SignRule) -> Self {
        Transfer {
            ctx,
            rule,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn context(&self) -> &'c C {
        self.ctx
    }

    pub fn rule(&self) -> SignRule {
        self.rule
    }

    /// Attaches shifted degrees to the letters of a word.
    pub fn homog(&self, word: &[C::B]) -> Vec<Homog<C::B>> {
        word.iter()
            .map(|b| {
                let d = if b.is_zero() { 0 } else { self.ctx.degree_b(b) };
                Homog::new(b.clone(), d)
            })
            .collect()
    }

    fn word_degree(&self, word: &[C::B]) -> i64 {
        word.iter()
            .filter(|b| !b.is_zero())
            .map(|b| self.ctx.degree_b(b))
            .sum()
    }

    /// `Σ_{k≥2} Σ_{compositions} m_k^A(G_{n_1} ⊗ .. ⊗ G_{n_k})`.
    fn inner_sum(&self, word: &[C::B]) -> C::A {
        let n = word.len();
        let max_k = self.ctx.max_product_arity().unwrap_or(n).min(n);
        let mut acc = self.ctx.zero_a();
        for k in 2..=max_k {
            for parts in compositions(n, k) {
                let mut args = Vec::with_capacity(k);
                let mut start = 0;
                let mut vanished = false;
                for len in parts {
                    let piece = &word[start..start + len];
                    let value = self.morphism_g_unchecked(piece);
                    if value.is_zero() {
                        vanished = true;
                        break;
                    }
                    args.push(Homog::new(value, self.word_degree(piece)));
                    start += len;
                }
                if vanished {
                    continue;
                }
                if let Some(p) = self.ctx.product(&args) {
                    acc.add_scaled(&p, &Rational::one());
                }
            }
        }
        acc
    }

    fn morphism_g_unchecked(&self, word: &[C::B]) -> C::A {
        if word.iter().any(Vector::is_zero) {
            return self.ctx.zero_a();
        }
        if word.len() == 1 {
            return self.ctx.g(&word[0]);
        }
        if let Some(hit) = self.cache.lock().expect("cache lock").get(word) {
            return hit.clone();
        }
        let value = self.ctx.h(&self.inner_sum(word));
        self.cache
            .lock()
            .expect("cache lock")
            .insert(word.to_vec(), value.clone());
        value
    }

    /// `G_n` on a word of length `n`.
    pub fn morphism_g(&self, n: usize, word: &[C::B]) -> Result<C::A, Error> {
        if word.len() != n || n == 0 {
            return Err(Error::ArityMismatch {
                expected: n,
                got: word.len(),
            });
        }
        Ok(self.morphism_g_unchecked(word))
    }

    pub(crate) fn m_unchecked(&self, word: &[C::B]) -> C::B {
        if word.iter().any(Vector::is_zero) {
            return self.ctx.zero_b();
        }
        if word.len() == 1 {
            return self.ctx.d_b(&word[0]);
        }
        self.ctx.f(&self.inner_sum(word))
    }

    /// `m_n^B` on a word of length `n`, by the recursion.
    pub fn transferred_m(&self, n: usize, word: &[C::B]) -> Result<C::B, Error> {
        if word.len() != n || n == 0 {
            return Err(Error::ArityMismatch {
                expected: n,
                got: word.len(),
            });
        }
        Ok(self.m_unchecked(word))
    }

    /// `m_n^B = Σ_{T ∈ T_n} m_T`.
    pub fn transferred_m_trees(
        &self,
        catalog: &TreeCatalog,
        n: usize,
        word: &[C::B],
    ) -> Result<C::B, Error> {
        if word.len() != n || n == 0 {
            return Err(Error::ArityMismatch {
                expected: n,
                got: word.len(),
            });
        }
        if n == 1 {
            return Ok(self.ctx.d_b(&word[0]));
        }
        let inputs = self.homog(word);
        let mut acc = self.ctx.zero_b();
        for tree in catalog.trees(n) {
            acc.add_scaled(&evaluate_tree_m(self.ctx, tree, &inputs, self.rule)?, &Rational::one());
        }
        Ok(acc)
    }

    /// `G_n = Σ_{T ∈ T_n} G_T`.
    pub fn morphism_g_trees(
        &self,
        catalog: &TreeCatalog,
        n: usize,
        word: &[C::B],
    ) -> Result<C::A, Error> {
        if word.len() != n || n == 0 {
            return Err(Error::ArityMismatch {
                expected: n,
                got: word.len(),
            });
        }
        if n == 1 {
            return Ok(self.ctx.g(&word[0]));
        }
        let inputs = self.homog(word);
        let mut acc = self.ctx.zero_a();
        for tree in catalog.trees(n) {
            acc.add_scaled(&evaluate_tree_g(self.ctx, tree, &inputs, self.rule)?, &Rational::one());
        }
        Ok(acc)
    }
}

/// All words of length `n` over `letters`, in lexicographic index order.
pub fn words<T: Clone>(letters: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for l in letters {
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn interval() -> (WhitneyDupont, Cochain, Cochain) {
        (
            WhitneyDupont::new(1),
            Cochain::basis(1, &[1]).unwrap(),
            Cochain::basis(1, &[0, 1]).unwrap(),
        )
    }

    #[test]
    fn m1_is_the_coboundary() {
        let (ctx, _, _) = interval();
        let tr = Transfer::new(&ctx);
        let v0 = Cochain::basis(1, &[0]).unwrap();
        assert_eq!(tr.transferred_m(1, &[v0]).unwrap(), -&Cochain::basis(1, &[0, 1]).unwrap());
    }

    #[test]
    fn m2_of_t_t() {
        let (ctx, t, _) = interval();
        let tr = Transfer::new(&ctx);
        assert_eq!(tr.transferred_m(2, &[t.clone(), t.clone()]).unwrap(), t);
    }

    #[test]
    fn m3_of_t_dt_dt_has_magnitude_one_twelfth() {
        let (ctx, t, dt) = interval();
        let tr = Transfer::new(&ctx);
        let v = tr.transferred_m(3, &[t, dt.clone(), dt]).unwrap();
        let c = v.coefficient(&[0, 1]);
        assert!(c == ratio(1, 12) || c == ratio(-1, 12), "{v}");
        assert_eq!(v.entries().count(), 1);
    }

    #[test]
    fn g_values() {
        let (ctx, t, dt) = interval();
        let tr = Transfer::new(&ctx);
        assert_eq!(tr.morphism_g(1, &[dt.clone()]).unwrap(), Form::dt(1, 1));
        assert!(tr.morphism_g(2, &[t.clone(), t.clone()]).unwrap().is_zero());
        let g2 = tr.morphism_g(2, &[t, dt]).unwrap();
        let half = Form::parse(1, "1/2 t1^2 + -1/2 t1").unwrap();
        assert!(g2 == half || g2 == -&half, "{g2}");
    }

    #[test]
    fn arity_is_checked() {
        let (ctx, t, _) = interval();
        let tr = Transfer::new(&ctx);
        assert!(matches!(
            tr.transferred_m(3, &[t.clone()]),
            Err(Error::ArityMismatch { expected: 3, got: 1 })
        ));
        assert!(tr.morphism_g(2, &[t]).is_err());
    }

    #[test]
    fn signed_wedge_sign() {
        let dt = Form::dt(1, 1);
        let t = Form::t(1, 1);
        assert_eq!(signed_wedge(&t, &dt), Form::parse(1, "t1 dt1").unwrap());
        assert_eq!(signed_wedge(&dt, &t), Form::parse(1, "-1 t1 dt1").unwrap());
        assert_eq!(signed_wedge(&Form::one(1), &t).scale(&int(2)), t.scale(&int(2)));
    }

    #[test]
    fn word_enumeration() {
        let w = words(&['a', 'b'], 3);
        assert_eq!(w.len(), 8);
        assert_eq!(w[1], vec!['a', 'a', 'b']);
    }
}

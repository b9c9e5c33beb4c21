//! Tensor words of homogeneous elements and their signs.
//!
//! All signs are computed from *shifted* degrees: a cochain or form of
//! degree `p` has shifted degree `p - 1`. Operators carry a parity:
//! `f`, `g` and the `G_n` are even, `m_k` and `H` are odd.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Rational;

/// Anything with a shifted degree.
pub trait Graded {
    fn degree(&self) -> i64;
}

/// A value together with the shifted degree used for every sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homog<T> {
    pub value: T,
    pub degree: i64,
}

impl<T> Homog<T> {
    pub fn new(value: T, degree: i64) -> Self {
        Homog { value, degree }
    }
}

impl<T> Graded for Homog<T> {
    fn degree(&self) -> i64 {
        self.degree
    }
}

/// A symbol with an assigned degree; used where only the shape of a
/// tensor expression matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub name: String,
    pub degree: i64,
}

impl Letter {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Letter {
            name: name.into(),
            degree,
        }
    }
}

impl Graded for Letter {
    fn degree(&self) -> i64 {
        self.degree
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.degree)
    }
}

/// A word is graded by the sum of its letters' degrees.
impl<L: Graded> Graded for Vec<L> {
    fn degree(&self) -> i64 {
        self.iter().map(Graded::degree).sum()
    }
}

pub fn is_odd(degree: i64) -> bool {
    degree.rem_euclid(2) == 1
}

/// How signs are produced. `Ignore` drops every Koszul sign and exists so
/// that the verification batteries can be shown to detect a broken rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignRule {
    #[default]
    Koszul,
    Ignore,
}

impl SignRule {
    /// `(-1)^{a b}` under this rule.
    pub fn swap(self, a: i64, b: i64) -> bool {
        match self {
            SignRule::Koszul => is_odd(a) && is_odd(b),
            SignRule::Ignore => false,
        }
    }
}

/// Sign of `(φ_1 ⊗ .. ⊗ φ_k)(a_1 ⊗ .. ⊗ a_k)`:
/// `(-1)^{Σ_{i<j} |φ_j| |a_i|}`. Returns `true` when negative.
pub fn koszul_sign(parities: &[i64], degrees: &[i64], rule: SignRule) -> bool {
    let mut negative = false;
    let mut passed = 0i64;
    for (p, a) in parities.iter().zip(degrees) {
        negative ^= rule.swap(*p, passed);
        passed += a;
    }
    negative
}

/// One slot of a tensor product of operators.
pub struct SlotOp<'a, T, U> {
    pub parity: i64,
    pub apply: Box<dyn Fn(&Homog<T>) -> Homog<U> + 'a>,
}

impl<'a, T, U> SlotOp<'a, T, U> {
    pub fn new(parity: i64, apply: impl Fn(&Homog<T>) -> Homog<U> + 'a) -> Self {
        SlotOp {
            parity,
            apply: Box::new(apply),
        }
    }
}

/// Letterwise application with the Koszul sign. The sign is returned
/// separately because concrete carriers are multiplied into it by the
/// caller.
pub fn koszul_apply<T, U>(
    ops: &[SlotOp<'_, T, U>],
    word: &[Homog<T>],
    rule: SignRule,
) -> Result<(bool, Vec<Homog<U>>), Error> {
    if ops.len() != word.len() {
        return Err(Error::ArityMismatch {
            expected: ops.len(),
            got: word.len(),
        });
    }
    let parities: Vec<i64> = ops.iter().map(|o| o.parity).collect();
    let degrees: Vec<i64> = word.iter().map(|a| a.degree).collect();
    let negative = koszul_sign(&parities, &degrees, rule);
    let out = ops.iter().zip(word).map(|(op, a)| (op.apply)(a)).collect();
    Ok((negative, out))
}

/// Signed terms of `u ⧢ v`, one per splitting, before any cancellation.
pub fn shuffle_terms<L: Clone + Graded>(u: &[L], v: &[L], rule: SignRule) -> Vec<(bool, Vec<L>)> {
    let p = u.len();
    let q = v.len();
    let mut out = Vec::new();
    // positions taken by u, as a bitmask over p + q slots
    let mut stack = vec![(0usize, 0usize, false, Vec::with_capacity(p + q))];
    while let Some((i, j, negative, word)) = stack.pop() {
        if i == p && j == q {
            out.push((negative, word));
            continue;
        }
        if j < q {
            // v_j placed before the remaining u_i..u_p
            let rest: i64 = u[i..].iter().map(Graded::degree).sum();
            let mut w = word.clone();
            w.push(v[j].clone());
            stack.push((i, j + 1, negative ^ rule.swap(rest, v[j].degree()), w));
        }
        if i < p {
            let mut w = word;
            w.push(u[i].clone());
            stack.push((i + 1, j, negative, w));
        }
    }
    out
}

/// Formal linear combination of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSum<W: Ord> {
    terms: BTreeMap<W, Rational>,
}

impl<W: Ord + Clone> Default for TensorSum<W> {
    fn default() -> Self {
        TensorSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<W: Ord + Clone> TensorSum<W> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: W, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_sum(&mut self, other: &TensorSum<W>, c: &Rational) {
        for (w, x) in &other.terms {
            self.add(w.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&W, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `u ⧢ v` as a sum of words.
pub fn shuffle<L: Clone + Graded + Ord>(u: &[L], v: &[L]) -> TensorSum<Vec<L>> {
    let mut out = TensorSum::new();
    for (negative, w) in shuffle_terms(u, v, SignRule::Koszul) {
        out.add(w, signed_one(negative));
    }
    out
}

pub(crate) fn signed_one(negative: bool) -> Rational {
    if negative {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Compositions `n_1 + .. + n_k = n` with every `n_i > 0`.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    if n < k {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 1..=n - (k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `∇_k`: every split of the word into `k` nonempty consecutive pieces.
pub fn deconcatenations<L: Clone>(word: &[L], k: usize) -> Result<Vec<Vec<Vec<L>>>, Error> {
    if k == 0 || k > word.len() {
        return Err(Error::SplitOutOfRange { k, len: word.len() });
    }
    Ok(compositions(word.len(), k)
        .into_iter()
        .map(|parts| {
            let mut start = 0;
            parts
                .into_iter()
                .map(|len| {
                    let piece = word[start..start + len].to_vec();
                    start += len;
                    piece
                })
                .collect()
        })
        .collect())
}

/// `μ`: concatenates a tuple of words.
pub fn concatenate<L: Clone>(tuple: &[Vec<L>]) -> Vec<L> {
    tuple.iter().flatten().cloned().collect()
}

/// An element of `T^k(TA)` over formal letters.
pub type NestedSum = TensorSum<Vec<Vec<Letter>>>;

/// `∇_k` extended linearly.
pub fn nabla(x: &TensorSum<Vec<Letter>>, k: usize) -> Result<NestedSum, Error> {
    let mut out = NestedSum::new();
    for (w, c) in x.terms() {
        if k > w.len() {
            continue;
        }
        for tuple in deconcatenations(w, k)? {
            out.add(tuple, c.clone());
        }
    }
    Ok(out)
}

/// Exact incremental row echelon form over the rationals.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl Echelon {
    fn reduce(&self, mut v: BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        loop {
            let pivot = v
                .iter()
                .map(|(k, _)| *k)
                .find(|k| self.rows.contains_key(k));
            let Some(p) = pivot else {
                return v;
            };
            let row = &self.rows[&p];
            let factor = v[&p].clone();
            for (k, x) in row {
                let e = v.entry(*k).or_insert_with(Rational::zero);
                *e -= x * &factor;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
    }

    pub(crate) fn insert(&mut self, v: BTreeMap<usize, Rational>) {
        let v = self.reduce(v);
        if let Some((&p, lead)) = v.iter().next() {
            let inv = Rational::one() / lead;
            let row = v.iter().map(|(k, x)| (*k, x * &inv)).collect();
            self.rows.insert(p, row);
        }
    }

    pub(crate) fn contains(&self, v: BTreeMap<usize, Rational>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Distinct orderings of a multiset of letters.
fn distinct_permutations(letters: &[Letter]) -> Vec<Vec<Letter>> {
    let mut sorted = letters.to_vec();
    sorted.sort();
    let mut out = BTreeSet::new();
    fn rec(pool: &mut Vec<Letter>, cur: &mut Vec<Letter>, out: &mut BTreeSet<Vec<Letter>>) {
        if pool.is_empty() {
            out.insert(cur.clone());
            return;
        }
        for i in 0..pool.len() {
            if i > 0 && pool[i] == pool[i - 1] {
                continue;
            }
            let l = pool.remove(i);
            cur.push(l.clone());
            rec(pool, cur, out);
            cur.pop();
            pool.insert(i, l);
        }
    }
    rec(&mut sorted, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

/// Decides whether `x ∈ T^k(TA)` lies in the span of
/// the shuffles of `T(TA)` landing in `T^k(TA)` (words treated as letters of
/// degree equal to their total degree), plus the summands
/// `T^{j-1}(TA) ⊗ (TA ⧢ TA) ⊗ T^{k-j}(TA)`.
///
/// Only words of total length at most 5 are accepted.
pub fn shuffle_span_membership(x: &NestedSum) -> Result<bool, Error> {
    let mut contents: BTreeSet<(usize, Vec<Letter>)> = BTreeSet::new();
    for (tuple, _) in x.terms() {
        let mut letters = concatenate(tuple);
        if letters.len() > 5 {
            return Err(Error::InstanceTooLarge(letters.len()));
        }
        letters.sort();
        contents.insert((tuple.len(), letters));
    }
    let mut index: BTreeMap<Vec<Vec<Letter>>, usize> = BTreeMap::new();
    let mut echelon = Echelon::default();
    let intern = |t: Vec<Vec<Letter>>, index: &mut BTreeMap<Vec<Vec<Letter>>, usize>| {
        let next = index.len();
        *index.entry(t).or_insert(next)
    };
    for (k, letters) in &contents {
        let tuples: Vec<Vec<Vec<Letter>>> = distinct_permutations(letters)
            .into_iter()
            .flat_map(|w| deconcatenations(&w, *k).expect("k <= length"))
            .collect();
        for tuple in &tuples {
            // shuffles of tuples, each word acting as one letter
            for p in 1..*k {
                let mut row = BTreeMap::new();
                for (negative, t) in shuffle_terms(&tuple[..p], &tuple[p..], SignRule::Koszul) {
                    let id = intern(t, &mut index);
                    let e = row.entry(id).or_insert_with(Rational::zero);
                    *e += signed_one(negative);
                }
                row.retain(|_, v: &mut Rational| !v.is_zero());
                echelon.insert(row);
            }
            // a shuffle inside one slot
            for j in 0..*k {
                let slot = &tuple[j];
                for cut in 1..slot.len() {
                    let mut row = BTreeMap::new();
                    for (negative, w) in
                        shuffle_terms(&slot[..cut], &slot[cut..], SignRule::Koszul)
                    {
                        let mut t = tuple.clone();
                        t[j] = w;
                        let id = intern(t, &mut index);
                        let e = row.entry(id).or_insert_with(Rational::zero);
                        *e += signed_one(negative);
                    }
                    row.retain(|_, v: &mut Rational| !v.is_zero());
                    echelon.insert(row);
                }
            }
        }
    }
    let mut target = BTreeMap::new();
    for (tuple, c) in x.terms() {
        let id = intern(tuple.clone(), &mut index);
        target.insert(id, c.clone());
    }
    Ok(echelon.contains(target))
}

/// Word rendering for reports: `[a:1, b:0]`.
pub fn format_word(word: &[Letter]) -> String {
    let parts: Vec<String> = word.iter().map(Letter::to_string).collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn letters(spec: &[(&str, i64)]) -> Vec<Letter> {
        spec.iter().map(|(n, d)| Letter::new(*n, *d)).collect()
    }

    #[test]
    fn even_operators_give_no_sign() {
        assert!(!koszul_sign(&[0, 0, 0], &[1, 1, 1], SignRule::Koszul));
    }

    #[test]
    fn odd_operator_passing_odd_letter() {
        // (id ⊗ H)(a ⊗ b), |a| odd
        assert!(koszul_sign(&[0, 1], &[1, 0], SignRule::Koszul));
        // (H ⊗ id)(a ⊗ b): nothing is passed
        assert!(!koszul_sign(&[1, 0], &[1, 1], SignRule::Koszul));
        assert!(!koszul_sign(&[0, 1], &[1, 0], SignRule::Ignore));
    }

    #[test]
    fn koszul_apply_checks_arity() {
        let ops: Vec<SlotOp<'_, i32, i32>> = vec![SlotOp::new(1, |a: &Homog<i32>| a.clone())];
        let word = vec![Homog::new(1, 1), Homog::new(2, 0)];
        assert!(matches!(
            koszul_apply(&ops, &word, SignRule::Koszul),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn shuffle_of_two_and_one() {
        let w = letters(&[("a1", 1), ("a2", 1), ("a3", 1)]);
        let s = shuffle(&w[..2], &w[2..]);
        let mut expected = TensorSum::new();
        expected.add(w.clone(), int(1));
        expected.add(vec![w[0].clone(), w[2].clone(), w[1].clone()], int(-1));
        expected.add(vec![w[2].clone(), w[0].clone(), w[1].clone()], int(1));
        assert_eq!(s, expected);
    }

    #[test]
    fn shuffle_of_letters() {
        let w = letters(&[("a", 1), ("b", -1)]);
        let s = shuffle(&w[..1], &w[1..]);
        assert_eq!(s.len(), 2);
        let back: Vec<Letter> = vec![w[1].clone(), w[0].clone()];
        assert_eq!(s.terms().find(|(k, _)| **k == back).unwrap().1, &int(-1));
    }

    #[test]
    fn shuffle_term_count() {
        let w = letters(&[("a", 0), ("b", 0), ("c", 0), ("d", 0)]);
        assert_eq!(shuffle_terms(&w[..2], &w[2..], SignRule::Koszul).len(), 6);
    }

    #[test]
    fn deconcatenation_examples() {
        let w = vec!['a', 'b', 'c'];
        assert_eq!(
            deconcatenations(&w[..2], 2).unwrap(),
            vec![vec![vec!['a'], vec!['b']]]
        );
        assert_eq!(
            deconcatenations(&w, 2).unwrap(),
            vec![
                vec![vec!['a'], vec!['b', 'c']],
                vec![vec!['a', 'b'], vec!['c']]
            ]
        );
        assert_eq!(
            deconcatenations(&w, 3).unwrap(),
            vec![vec![vec!['a'], vec!['b'], vec!['c']]]
        );
        assert!(deconcatenations(&w, 4).is_err());
        assert!(deconcatenations(&w, 0).is_err());
    }

    #[test]
    fn membership_examples() {
        let w = letters(&[("a", 1), ("b", 0), ("c", -1)]);
        let x = nabla(&shuffle(&w[..1], &w[1..2]), 2).unwrap();
        assert!(shuffle_span_membership(&x).unwrap());
        let x = nabla(&shuffle(&w[..2], &w[2..]), 2).unwrap();
        assert!(shuffle_span_membership(&x).unwrap());
        let mut lone = NestedSum::new();
        lone.add(vec![w[..1].to_vec(), w[1..2].to_vec()], int(1));
        assert!(!shuffle_span_membership(&lone).unwrap());
    }

    #[test]
    fn membership_rejects_large_instances() {
        let w: Vec<Letter> = (0..6).map(|i| Letter::new(format!("x{i}"), 0)).collect();
        let mut x = NestedSum::new();
        x.add(vec![w.clone()], int(1));
        assert!(matches!(
            shuffle_span_membership(&x),
            Err(Error::InstanceTooLarge(6))
        ));
    }
}

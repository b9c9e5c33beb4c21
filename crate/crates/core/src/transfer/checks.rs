//! Identity batteries for the transferred structure.

use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::{words, Contraction, Transfer, Vector};
use crate::tensor::{compositions, shuffle_terms, Homog};
use crate::scalar::Rational;

/// How many failing words a report keeps.
pub const MAX_COUNTEREXAMPLES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub arity_range: String,
    pub basis: String,
    pub words_checked: usize,
    pub passed: bool,
    pub counterexamples: Vec<String>,
}

impl VerificationReport {
    fn from_sweep(family: &str, lo: usize, hi: usize, basis: &str, sweep: Sweep) -> Self {
        VerificationReport {
            family: family.to_string(),
            arity_range: if lo == hi {
                format!("{lo}")
            } else {
                format!("{lo}..{hi}")
            },
            basis: basis.to_string(),
            words_checked: sweep.checked,
            passed: sweep.failures.is_empty(),
            counterexamples: sweep.failures,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<6} {:<12} n={:<6} basis={:<4} words={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.family,
            self.arity_range,
            self.basis,
            self.words_checked
        )?;
        for c in &self.counterexamples {
            write!(f, "\n       counterexample: {c}")?;
        }
        Ok(())
    }
}

struct Sweep {
    checked: usize,
    failures: Vec<String>,
}

/// Runs `check` on every item in parallel; failures are kept in input order.
fn sweep<T: Sync>(items: &[T], check: impl Fn(&T) -> Option<String> + Sync + Send) -> Sweep {
    let results: Vec<Option<String>> = items.par_iter().map(check).collect();
    Sweep {
        checked: items.len(),
        failures: results.into_iter().flatten().take(MAX_COUNTEREXAMPLES).collect(),
    }
}

fn merge(parts: Vec<Sweep>) -> Sweep {
    let mut out = Sweep {
        checked: 0,
        failures: Vec::new(),
    };
    for p in parts {
        out.checked += p.checked;
        for f in p.failures {
            if out.failures.len() < MAX_COUNTEREXAMPLES {
                out.failures.push(f);
            }
        }
    }
    out
}

pub fn format_word<T: fmt::Display>(word: &[T]) -> String {
    let parts: Vec<String> = word.iter().map(|b| b.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn sign(negative: bool) -> Rational {
    if negative {
        -Rational::one()
    } else {
        Rational::one()
    }
}

impl<C: Contraction> Transfer<'_, C> {
    /// Left side of (I_n) on one word:
    /// `Σ_{k,j} ± m_{n-k+1}(b_1..b_j, m_k(b_{j+1}..b_{j+k}), ..)` with sign
    /// `(-1)^{|b_1|+..+|b_j|}`.
    pub fn a_infinity_defect(&self, word: &[C::B]) -> C::B {
        let n = word.len();
        let hom = self.homog(word);
        let mut acc = self.context().zero_b();
        for k in 1..=n {
            for j in 0..=n - k {
                let inner = self.m_unchecked(&word[j..j + k]);
                if inner.is_zero() {
                    continue;
                }
                let mut outer_word = word[..j].to_vec();
                outer_word.push(inner);
                outer_word.extend_from_slice(&word[j + k..]);
                let value = self.m_unchecked(&outer_word);
                let prefix: i64 = hom[..j].iter().map(|b| b.degree).sum();
                acc.add_scaled(&value, &sign(self.rule().swap(1, prefix)));
            }
        }
        acc
    }

    /// Both sides of (II_n) with `F = G`:
    /// `Σ m_k^A(G_{n_1} ⊗ .. ⊗ G_{n_k})` (including `d_A G_n`) and
    /// `Σ ± G_{n-k+1}(.., m_k^B(..), ..)`.
    pub fn morphism_sides(&self, word: &[C::B]) -> (C::A, C::A) {
        let ctx = self.context();
        let n = word.len();
        let hom = self.homog(word);
        let mut lhs = ctx.d_a(&self.morphism_g_unchecked(word));
        let max_k = ctx.max_product_arity().unwrap_or(n).min(n);
        for k in 2..=max_k {
            for parts in compositions(n, k) {
                let mut args = Vec::with_capacity(k);
                let mut start = 0;
                for len in parts {
                    let piece = &hom[start..start + len];
                    let value = self.morphism_g_unchecked(&word[start..start + len]);
                    args.push(Homog::new(value, piece.iter().map(|b| b.degree).sum()));
                    start += len;
                }
                if let Some(p) = ctx.product(&args) {
                    lhs.add_scaled(&p, &Rational::one());
                }
            }
        }
        let mut rhs = ctx.zero_a();
        for k in 1..=n {
            for j in 0..=n - k {
                let inner = self.m_unchecked(&word[j..j + k]);
                if inner.is_zero() {
                    continue;
                }
                let mut outer_word = word[..j].to_vec();
                outer_word.push(inner);
                outer_word.extend_from_slice(&word[j + k..]);
                let value = self.morphism_g_unchecked(&outer_word);
                let prefix: i64 = hom[..j].iter().map(|b| b.degree).sum();
                rhs.add_scaled(&value, &sign(self.rule().swap(1, prefix)));
            }
        }
        (lhs, rhs)
    }

    /// `m_n` and `G_n` on the signed shuffle `u ⧢ v`.
    pub fn on_shuffle(&self, u: &[C::B], v: &[C::B]) -> (C::B, C::A) {
        let hu = self.homog(u);
        let hv = self.homog(v);
        let mut m = self.context().zero_b();
        let mut g = self.context().zero_a();
        for (negative, w) in shuffle_terms(&hu, &hv, self.rule()) {
            let letters: Vec<C::B> = w.into_iter().map(|h| h.value).collect();
            m.add_scaled(&self.m_unchecked(&letters), &sign(negative));
            g.add_scaled(&self.morphism_g_unchecked(&letters), &sign(negative));
        }
        (m, g)
    }
}

/// Relation (I_n) for `1 <= n <= max_arity` on every basis word.
pub fn check_a_infinity<C: Contraction>(
    tr: &Transfer<'_, C>,
    max_arity: usize,
    basis: &[C::B],
    basis_name: &str,
) -> VerificationReport {
    let parts = (1..=max_arity)
        .map(|n| {
            sweep(&words(basis, n), |w| {
                let defect = tr.a_infinity_defect(w);
                (!defect.is_zero()).then(|| format!("(I_{n}) on {} gives {defect}", format_word(w)))
            })
        })
        .collect();
    VerificationReport::from_sweep("(I_n)", 1, max_arity, basis_name, merge(parts))
}

/// Relation (II_n) with `F = G` for `1 <= n <= max_arity`.
pub fn check_morphism<C: Contraction>(
    tr: &Transfer<'_, C>,
    max_arity: usize,
    basis: &[C::B],
    basis_name: &str,
) -> VerificationReport {
    let parts = (1..=max_arity)
        .map(|n| {
            sweep(&words(basis, n), |w| {
                let (lhs, rhs) = tr.morphism_sides(w);
                (lhs != rhs).then(|| format!("(II_{n}) on {}: {lhs} != {rhs}", format_word(w)))
            })
        })
        .collect();
    VerificationReport::from_sweep("(II_n)", 1, max_arity, basis_name, merge(parts))
}

/// `m_n` and `G_n` vanish on `u ⧢ v` for nonempty `u, v` with
/// `|u| + |v| = n <= max_arity`.
pub fn check_c_infinity<C: Contraction>(
    tr: &Transfer<'_, C>,
    max_arity: usize,
    basis: &[C::B],
    basis_name: &str,
) -> VerificationReport {
    let mut parts = Vec::new();
    for n in 2..=max_arity {
        let mut pairs = Vec::new();
        for p in 1..n {
            for u in words(basis, p) {
                for v in words(basis, n - p) {
                    pairs.push((u.clone(), v));
                }
            }
        }
        parts.push(sweep(&pairs, |(u, v)| {
            let (m, g) = tr.on_shuffle(u, v);
            if !m.is_zero() {
                Some(format!("m_{n} on {} ⧢ {} gives {m}", format_word(u), format_word(v)))
            } else if !g.is_zero() {
                Some(format!("G_{n} on {} ⧢ {} gives {g}", format_word(u), format_word(v)))
            } else {
                None
            }
        }));
    }
    VerificationReport::from_sweep("C∞", 2, max_arity.max(2), basis_name, merge(parts))
}

/// Unit laws for `e_B = f(1)`.
pub fn check_unital<C: Contraction>(
    tr: &Transfer<'_, C>,
    max_arity: usize,
    basis: &[C::B],
    basis_name: &str,
) -> VerificationReport {
    let ctx = tr.context();
    let one = ctx.unit_a();
    let e = ctx.f(&one);
    let mut parts = Vec::new();

    let mut head = Sweep {
        checked: 2,
        failures: Vec::new(),
    };
    let me = tr.m_unchecked(std::slice::from_ref(&e));
    if !me.is_zero() {
        head.failures.push(format!("m_1(e) = {me}"));
    }
    let ge = tr.morphism_g_unchecked(std::slice::from_ref(&e));
    if ge != one {
        head.failures.push(format!("G_1(e) = {ge}"));
    }
    if !ctx.h(&one).is_zero() {
        head.failures.push("H(1) != 0".to_string());
    }
    parts.push(head);

    if max_arity >= 2 {
        parts.push(sweep(basis, |b| {
            let left = tr.m_unchecked(&[e.clone(), b.clone()]);
            let right = tr.m_unchecked(&[b.clone(), e.clone()]);
            let expected_right = {
                let mut x = ctx.zero_b();
                x.add_scaled(b, &sign(crate::tensor::is_odd(ctx.degree_b(b) + 1)));
                x
            };
            if &left != b {
                Some(format!("m_2(e, {b}) = {left}"))
            } else if right != expected_right {
                Some(format!("m_2({b}, e) = {right}"))
            } else {
                None
            }
        }));
    }

    let mut letters = basis.to_vec();
    letters.push(e.clone());
    for n in 2..=max_arity {
        let with_unit: Vec<Vec<C::B>> = words(&letters, n)
            .into_iter()
            .filter(|w| w.contains(&e))
            .collect();
        parts.push(sweep(&with_unit, |w| {
            if n > 2 {
                let m = tr.m_unchecked(w);
                if !m.is_zero() {
                    return Some(format!("m_{n} on {} gives {m}", format_word(w)));
                }
            }
            let g = tr.morphism_g_unchecked(w);
            (!g.is_zero()).then(|| format!("G_{n} on {} gives {g}", format_word(w)))
        }));
    }
    VerificationReport::from_sweep("unital", 1, max_arity, basis_name, merge(parts))
}

/// Transferred `m_n` by recursion and by the tree sum agree on every word.
pub fn check_tree_formula<C: Contraction>(
    tr: &Transfer<'_, C>,
    max_arity: usize,
    basis: &[C::B],
    basis_name: &str,
) -> VerificationReport {
    let catalog = crate::tree::TreeCatalog::up_to(max_arity);
    let parts = (1..=max_arity)
        .map(|n| {
            sweep(&words(basis, n), |w| {
                let rec = tr.m_unchecked(w);
                let trees = match tr.transferred_m_trees(&catalog, n, w) {
                    Ok(v) => v,
                    Err(e) => return Some(e.to_string()),
                };
                if rec != trees {
                    return Some(format!("m_{n} on {}: {rec} != {trees}", format_word(w)));
                }
                let g_rec = tr.morphism_g_unchecked(w);
                match tr.morphism_g_trees(&catalog, n, w) {
                    Ok(g) if g == g_rec => None,
                    Ok(g) => Some(format!("G_{n} on {}: {g_rec} != {g}", format_word(w))),
                    Err(e) => Some(e.to_string()),
                }
            })
        })
        .collect();
    VerificationReport::from_sweep("trees", 1, max_arity, basis_name, merge(parts))
}

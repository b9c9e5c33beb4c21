//! Finite ordered simplicial complexes, global cochains and global forms,
//! and the simplexwise contraction between them.
//!
//! A simplex is a strictly increasing list of vertex indices. Every
//! operation is applied simplex by simplex; global forms keep a form on
//! every simplex of the closure and must agree on shared faces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cochain::{include_g, project_f, Cochain, CochainEntry, Face};
use crate::dupont::homotopy_h;
use crate::error::Error;
use crate::form::Form;
use crate::scalar::{format_rational, Rational};
use crate::tensor::Homog;
use crate::transfer::{
    format_word, signed_wedge, Contraction, Transfer, Vector, VerificationReport,
};

#[derive(Deserialize)]
struct ComplexFile {
    vertices: Vec<serde_json::Value>,
    simplices: Vec<Vec<usize>>,
}

/// A finite simplicial complex on totally ordered vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedComplex {
    vertices: Vec<String>,
    maximal: Vec<Face>,
    closure: BTreeSet<Face>,
}

impl OrderedComplex {
    /// Vertex names and the listed simplices, as indices into `vertices`.
    pub fn new(vertices: Vec<String>, simplices: Vec<Vec<usize>>) -> Result<Self, Error> {
        let mut listed = BTreeSet::new();
        let mut closure = BTreeSet::new();
        for s in simplices {
            if s.is_empty() {
                return Err(Error::Parse("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NonIncreasingSimplex(s));
            }
            if s.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::UnknownVertex(s));
            }
            let face = Face::new(s.clone())?;
            if !listed.insert(face.clone()) {
                return Err(Error::DuplicateSimplex(s));
            }
            closure.extend(face.subfaces());
        }
        let maximal = listed
            .iter()
            .filter(|s| !listed.iter().any(|t| t != *s && t.contains(s)))
            .cloned()
            .collect();
        Ok(OrderedComplex {
            vertices,
            maximal,
            closure,
        })
    }

    /// The full simplex `Δ^n`.
    pub fn simplex(n: usize) -> Self {
        let vertices = (0..=n).map(|v| v.to_string()).collect();
        OrderedComplex::new(vertices, vec![(0..=n).collect()]).expect("standard simplex")
    }

    /// The boundary `∂Δ^n`, `n >= 1`.
    pub fn boundary(n: usize) -> Self {
        let vertices = (0..=n).map(|v| v.to_string()).collect();
        let facets = (0..=n)
            .map(|j| (0..=n).filter(|&v| v != j).collect())
            .collect();
        OrderedComplex::new(vertices, facets).expect("boundary of a simplex")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn maximal_simplices(&self) -> &[Face] {
        &self.maximal
    }

    /// All simplices, in face order.
    pub fn simplices(&self) -> impl Iterator<Item = &Face> {
        self.closure.iter()
    }

    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    pub fn contains(&self, s: &Face) -> bool {
        self.closure.contains(s)
    }

    /// Indicator cochains of all simplices.
    pub fn basis(&self) -> Vec<GlobalCochain> {
        self.closure
            .iter()
            .map(|s| GlobalCochain::indicator(s.clone()))
            .collect()
    }

    /// The 0-cochain `1`.
    pub fn unit_cochain(&self) -> GlobalCochain {
        let mut c = GlobalCochain::zero();
        for s in self.closure.iter().filter(|s| s.dim() == 0) {
            c.add_entry(s.clone(), Rational::one());
        }
        c
    }

    /// The constant form `1`.
    pub fn unit_form(&self) -> GlobalForm {
        GlobalForm {
            forms: self
                .closure
                .iter()
                .map(|s| (s.clone(), Form::one(s.dim())))
                .collect(),
        }
    }

    /// `c` restricted to `s`, as a cochain on `Δ^{dim s}`.
    pub fn restrict(&self, c: &GlobalCochain, s: &Face) -> Cochain {
        let mut out = Cochain::zero(s.dim());
        for sub in s.subfaces() {
            let q = c.coefficient(&sub);
            if !q.is_zero() {
                out.add_entry(s.relative(&sub).expect("subface"), q);
            }
        }
        out
    }

    /// Checks that the form on every simplex restricts to the forms on
    /// its codimension-one faces.
    pub fn check_compatible(&self, a: &GlobalForm) -> Result<(), Error> {
        for s in &self.closure {
            let Some(form) = a.forms.get(s) else {
                return Err(Error::NotInComplex(s.vertices().to_vec()));
            };
            if form.dim() != s.dim() {
                return Err(Error::DimensionMismatch {
                    left: s.dim(),
                    right: form.dim(),
                });
            }
            if s.dim() == 0 {
                continue;
            }
            for j in 0..=s.dim() {
                let face = s.remove(j);
                let local = s.relative(&face).expect("face");
                if form.face_restrict(local.vertices())? != a.forms[&face] {
                    return Err(Error::Incompatible {
                        simplex: s.vertices().to_vec(),
                        face: face.vertices().to_vec(),
                    });
                }
            }
        }
        if let Some(extra) = a.forms.keys().find(|s| !self.closure.contains(*s)) {
            return Err(Error::NotInComplex(extra.vertices().to_vec()));
        }
        Ok(())
    }

    /// `f`: integrate the form on each simplex over that simplex.
    pub fn global_f(&self, a: &GlobalForm) -> GlobalCochain {
        let mut out = GlobalCochain::zero();
        for (s, form) in &a.forms {
            out.add_entry(s.clone(), form.integrate_top());
        }
        out
    }

    /// `g`: Whitney forms simplexwise.
    pub fn global_g(&self, c: &GlobalCochain) -> GlobalForm {
        self.map_simplexwise(|s| include_g(&self.restrict(c, s)))
    }

    /// `H = -s` simplexwise.
    pub fn global_h(&self, a: &GlobalForm) -> GlobalForm {
        GlobalForm {
            forms: a
                .forms
                .iter()
                .map(|(s, form)| (s.clone(), homotopy_h(form)))
                .collect(),
        }
    }

    /// Global coboundary.
    pub fn coboundary(&self, c: &GlobalCochain) -> GlobalCochain {
        let mut out = GlobalCochain::zero();
        for s in self.closure.iter().filter(|s| s.dim() > 0) {
            let mut acc = Rational::zero();
            for j in 0..=s.dim() {
                let q = c.coefficient(&s.remove(j));
                if j % 2 == 0 {
                    acc += q;
                } else {
                    acc -= q;
                }
            }
            out.add_entry(s.clone(), acc);
        }
        out
    }

    /// `a ⊔ b = f(g a ∧ g b)`.
    pub fn cup(&self, a: &GlobalCochain, b: &GlobalCochain) -> GlobalCochain {
        let mut out = GlobalCochain::zero();
        for s in &self.closure {
            let ga = include_g(&self.restrict(a, s));
            let gb = include_g(&self.restrict(b, s));
            let top = project_f(&ga.wedge_unchecked(&gb)).coefficient(&(0..=s.dim()).collect::<Vec<_>>());
            out.add_entry(s.clone(), top);
        }
        out
    }

    fn map_simplexwise(&self, op: impl Fn(&Face) -> Form) -> GlobalForm {
        GlobalForm {
            forms: self.closure.iter().map(|s| (s.clone(), op(s))).collect(),
        }
    }

    /// Reads a cochain file, checking that every simplex is in the complex.
    pub fn load_cochain(&self, text: &str) -> Result<GlobalCochain, Error> {
        let c = GlobalCochain::from_json(text)?;
        if let Some(s) = c.coeffs.keys().find(|s| !self.closure.contains(*s)) {
            return Err(Error::NotInComplex(s.vertices().to_vec()));
        }
        Ok(c)
    }
}

/// Parses the complex file format
/// `{"vertices": [..], "simplices": [[..], ..]}`.
pub fn load_complex(text: &str) -> Result<OrderedComplex, Error> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let names = file
        .vertices
        .iter()
        .map(|v| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    OrderedComplex::new(names, file.simplices)
}

/// A cochain on a complex, keyed by simplex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GlobalCochain {
    coeffs: BTreeMap<Face, Rational>,
}

#[derive(Serialize, Deserialize)]
struct CochainFile {
    entries: Vec<CochainEntry>,
}

impl GlobalCochain {
    pub fn zero() -> Self {
        GlobalCochain::default()
    }

    pub fn indicator(s: Face) -> Self {
        let mut c = GlobalCochain::zero();
        c.add_entry(s, Rational::one());
        c
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Face, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, s: &Face) -> Rational {
        self.coeffs.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_entry(&mut self, s: Face, q: Rational) {
        if q.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(s).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = GlobalCochain::zero();
        for (s, c) in &self.coeffs {
            out.add_entry(s.clone(), c * q);
        }
        out
    }

    /// Cochain degree when every entry has the same one.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut dims = self.coeffs.keys().map(Face::dim);
        let first = dims.next()?;
        dims.all(|d| d == first).then_some(first)
    }

    /// The part of cochain degree `k`.
    pub fn degree_part(&self, k: usize) -> Self {
        GlobalCochain {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(s, _)| s.dim() == k)
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.coeffs.keys().map(Face::dim).collect();
        set.into_iter().collect()
    }

    pub fn to_json(&self) -> String {
        let file = CochainFile {
            entries: self
                .coeffs
                .iter()
                .map(|(s, c)| CochainEntry {
                    face: s.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("cochain serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let file: CochainFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = GlobalCochain::zero();
        let mut seen = BTreeSet::new();
        for e in file.entries {
            let s = Face::new(e.face.vertices().to_vec())
                .map_err(|_| Error::NonIncreasingSimplex(e.face.vertices().to_vec()))?;
            if !seen.insert(s.clone()) {
                return Err(Error::DuplicateSimplex(s.vertices().to_vec()));
            }
            out.add_entry(s, e.coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for GlobalCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(s, c)| {
                if c.is_one() {
                    format!("χ{s}")
                } else {
                    format!("{} χ{s}", format_rational(c))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Vector for GlobalCochain {
    fn is_zero(&self) -> bool {
        GlobalCochain::is_zero(self)
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (s, q) in &other.coeffs {
            self.add_entry(s.clone(), q * c);
        }
    }
}

/// A form on every simplex of a complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GlobalForm {
    forms: BTreeMap<Face, Form>,
}

impl GlobalForm {
    pub fn from_forms(forms: BTreeMap<Face, Form>) -> Self {
        GlobalForm { forms }
    }

    pub fn forms(&self) -> &BTreeMap<Face, Form> {
        &self.forms
    }

    pub fn on(&self, s: &Face) -> Option<&Form> {
        self.forms.get(s)
    }

    pub fn is_zero(&self) -> bool {
        self.forms.values().all(Form::is_zero)
    }

    pub fn d(&self) -> GlobalForm {
        self.map(Form::d)
    }

    pub fn wedge(&self, other: &GlobalForm) -> GlobalForm {
        self.zip(other, |a, b| a.wedge_unchecked(b))
    }

    fn map(&self, op: impl Fn(&Form) -> Form) -> GlobalForm {
        GlobalForm {
            forms: self.forms.iter().map(|(s, a)| (s.clone(), op(a))).collect(),
        }
    }

    fn zip(&self, other: &GlobalForm, op: impl Fn(&Form, &Form) -> Form) -> GlobalForm {
        GlobalForm {
            forms: self
                .forms
                .iter()
                .map(|(s, a)| {
                    let b = other.forms.get(s).cloned().unwrap_or_else(|| Form::zero(s.dim()));
                    (s.clone(), op(a, &b))
                })
                .collect(),
        }
    }
}

impl fmt::Display for GlobalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .forms
            .iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(s, a)| format!("{s}: {a}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            write!(f, "{{{}}}", parts.join("; "))
        }
    }
}

impl Vector for GlobalForm {
    fn is_zero(&self) -> bool {
        GlobalForm::is_zero(self)
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (s, b) in &other.forms {
            let slot = self
                .forms
                .entry(s.clone())
                .or_insert_with(|| Form::zero(s.dim()));
            *slot += &b.scale(c);
        }
    }
}

impl Contraction for OrderedComplex {
    type A = GlobalForm;
    type B = GlobalCochain;

    fn zero_a(&self) -> GlobalForm {
        self.map_simplexwise(|s| Form::zero(s.dim()))
    }

    fn zero_b(&self) -> GlobalCochain {
        GlobalCochain::zero()
    }

    fn unit_a(&self) -> GlobalForm {
        self.unit_form()
    }

    fn d_a(&self, a: &GlobalForm) -> GlobalForm {
        a.d()
    }

    fn d_b(&self, b: &GlobalCochain) -> GlobalCochain {
        self.coboundary(b)
    }

    fn product(&self, args: &[Homog<GlobalForm>]) -> Option<GlobalForm> {
        match args {
            [a, b] => Some(a.value.zip(&b.value, signed_wedge)),
            _ => None,
        }
    }

    fn f(&self, a: &GlobalForm) -> GlobalCochain {
        self.global_f(a)
    }

    fn g(&self, b: &GlobalCochain) -> GlobalForm {
        self.global_g(b)
    }

    fn h(&self, a: &GlobalForm) -> GlobalForm {
        self.global_h(a)
    }

    fn degree_b(&self, b: &GlobalCochain) -> i64 {
        let k = b
            .homogeneous_degree()
            .unwrap_or_else(|| panic!("inhomogeneous cochain {b}"));
        k as i64 - 1
    }
}

/// `m_n` on a word of arbitrary cochains, expanded multilinearly over
/// the degree parts of each argument.
pub fn transferred_global_m(
    tr: &Transfer<'_, OrderedComplex>,
    n: usize,
    word: &[GlobalCochain],
) -> Result<GlobalCochain, Error> {
    if word.len() != n || n == 0 {
        return Err(Error::ArityMismatch {
            expected: n,
            got: word.len(),
        });
    }
    let mut acc = GlobalCochain::zero();
    let mut stack: Vec<Vec<GlobalCochain>> = vec![Vec::new()];
    for c in word {
        let parts: Vec<GlobalCochain> = c.degrees().into_iter().map(|k| c.degree_part(k)).collect();
        stack = stack
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |p| {
                    let mut w = prefix.clone();
                    w.push(p.clone());
                    w
                })
            })
            .collect();
    }
    for w in stack {
        acc.add_scaled(&tr.transferred_m(n, &w)?, &Rational::one());
    }
    Ok(acc)
}

/// Outcome of [`check_whitney_conditions`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhitneyReport {
    pub simplices: usize,
    pub checks: Vec<VerificationReport>,
    pub nonassociativity_witness: Option<String>,
}

impl WhitneyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for WhitneyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex with {} simplices", self.simplices)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        match &self.nonassociativity_witness {
            Some(w) => writeln!(f, "witness: {w}"),
            None => writeln!(f, "witness: none"),
        }
    }
}

fn report(family: &str, arity: &str, checked: usize, failures: Vec<String>) -> VerificationReport {
    VerificationReport {
        family: family.to_string(),
        arity_range: arity.to_string(),
        basis: "X".to_string(),
        words_checked: checked,
        passed: failures.is_empty(),
        counterexamples: failures.into_iter().take(crate::transfer::MAX_COUNTEREXAMPLES).collect(),
    }
}

fn sign_power(odd: bool, c: &GlobalCochain) -> GlobalCochain {
    if odd {
        c.scale(&-Rational::one())
    } else {
        c.clone()
    }
}

/// Whitney's product conditions on the basis of `X`: levelwise contraction
/// identities, locality, the Leibniz rule, the unit law, graded
/// commutativity, a nonassociativity witness and relation (I_3).
pub fn check_whitney_conditions(x: &OrderedComplex) -> WhitneyReport {
    use rayon::prelude::*;

    let basis = x.basis();
    let pairs: Vec<(&GlobalCochain, &GlobalCochain)> = basis
        .iter()
        .flat_map(|a| basis.iter().map(move |b| (a, b)))
        .collect();
    let deg = |c: &GlobalCochain| c.homogeneous_degree().expect("basis element");
    let mut checks = Vec::new();

    let contraction: Vec<String> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let ga = x.global_g(a);
            if &x.global_f(&ga) != *a {
                return Some(format!("f g {a} != {a}"));
            }
            if !x.global_h(&ga).is_zero() {
                return Some(format!("H g {a} != 0"));
            }
            let w = ga.wedge(&x.global_g(b));
            if x.check_compatible(&w).is_err() {
                return Some(format!("g {a} ∧ g {b} is not compatible"));
            }
            let hw = x.global_h(&w);
            if x.check_compatible(&hw).is_err() {
                return Some(format!("H(g {a} ∧ g {b}) is not compatible"));
            }
            let mut lhs = x.global_g(&x.global_f(&w));
            lhs.add_scaled(&w, &-Rational::one());
            let mut rhs = hw.d();
            rhs.add_scaled(&x.global_h(&w.d()), &Rational::one());
            if lhs != rhs {
                return Some(format!("g f - 1 != dH + Hd on g {a} ∧ g {b}"));
            }
            if !x.global_f(&hw).is_zero() || !x.global_h(&hw).is_zero() {
                return Some(format!("side conditions fail on g {a} ∧ g {b}"));
            }
            None
        })
        .collect();
    checks.push(report("contraction", "-", pairs.len(), contraction));

    let locality: Vec<String> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let p = x.cup(a, b);
            let in_star = |s: &Face, c: &GlobalCochain| c.entries().any(|(t, _)| s.contains(t));
            let outside = p
                .entries()
                .find(|(s, _)| !(in_star(s, a) && in_star(s, b)))
                .map(|(s, _)| format!("{a} ⊔ {b} is nonzero on {s}"));
            outside
        })
        .collect();
    checks.push(report("locality", "2", pairs.len(), locality));

    let leibniz: Vec<String> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let lhs = x.coboundary(&x.cup(a, b));
            let mut rhs = x.cup(&x.coboundary(a), b);
            rhs.add_scaled(&sign_power(deg(a) % 2 == 1, &x.cup(a, &x.coboundary(b))), &Rational::one());
            (lhs != rhs).then(|| format!("δ({a} ⊔ {b}) = {lhs} but the rule gives {rhs}"))
        })
        .collect();
    checks.push(report("leibniz", "2", pairs.len(), leibniz));

    let one = x.unit_cochain();
    let unit: Vec<String> = basis
        .iter()
        .filter_map(|b| {
            let l = x.cup(&one, b);
            let r = x.cup(b, &one);
            (l != *b || r != *b).then(|| format!("1 ⊔ {b} = {l}, {b} ⊔ 1 = {r}"))
        })
        .collect();
    checks.push(report("unit", "2", basis.len(), unit));

    let commutative: Vec<String> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let ab = x.cup(a, b);
            let ba = sign_power(deg(a) * deg(b) % 2 == 1, &x.cup(b, a));
            (ab != ba).then(|| format!("{a} ⊔ {b} = {ab}, sign-swapped {ba}"))
        })
        .collect();
    checks.push(report("commutative", "2", pairs.len(), commutative));

    let triples: Vec<[&GlobalCochain; 3]> = basis
        .iter()
        .flat_map(|a| pairs.iter().map(move |(b, c)| [a, *b, *c]))
        .collect();
    let witness = triples.iter().find_map(|[a, b, c]| {
        let left = x.cup(&x.cup(a, b), c);
        let right = x.cup(a, &x.cup(b, c));
        (left != right).then(|| format!("({a} ⊔ {b}) ⊔ {c} = {left}, {a} ⊔ ({b} ⊔ {c}) = {right}"))
    });
    checks.push(report(
        "nonassoc",
        "3",
        triples.len(),
        if witness.is_some() {
            Vec::new()
        } else {
            vec!["no nonassociative basis triple".to_string()]
        },
    ));

    let tr = Transfer::new(x);
    let i3: Vec<String> = triples
        .par_iter()
        .filter_map(|[a, b, c]| {
            let w = [(*a).clone(), (*b).clone(), (*c).clone()];
            let defect = tr.a_infinity_defect(&w);
            (!defect.is_zero()).then(|| format!("(I_3) on {} gives {defect}", format_word(&w)))
        })
        .collect();
    checks.push(report("(I_3)", "3", triples.len(), i3));

    WhitneyReport {
        simplices: x.len(),
        checks,
        nonassociativity_witness: witness,
    }
}

//! The transferred products on the interval `N_1 = span{1, t, dt}`, and
//! the polynomials `p_n` behind them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{words, Transfer, WhitneyDupont};
use crate::cochain::{interval_coordinates, Cochain};
use crate::dupont::s_operator;
use crate::form::Form;
use crate::scalar::{
    bernoulli_number, bernoulli_numbers, bernoulli_polynomial, binomial, exp_series_ratio,
    factorial, format_rational, serde_rational, Rational, UniPoly,
};

/// Letters of the interval table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalLetter {
    T,
    Dt,
}

impl IntervalLetter {
    pub fn cochain(self) -> Cochain {
        match self {
            IntervalLetter::T => Cochain::basis(1, &[1]).expect("vertex of the interval"),
            IntervalLetter::Dt => Cochain::basis(1, &[0, 1]).expect("edge of the interval"),
        }
    }
}

impl fmt::Display for IntervalLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalLetter::T => "t",
            IntervalLetter::Dt => "dt",
        })
    }
}

/// `a + b t + c dt` written out.
pub fn format_interval(c: &Cochain) -> String {
    let [one, t, dt] = interval_coordinates(c).expect("interval cochain");
    let mut parts = Vec::new();
    for (coeff, name) in [(one, "1"), (t, "t"), (dt, "dt")] {
        if coeff.is_zero() {
            continue;
        }
        parts.push(match (name, coeff == Rational::from_integer(1.into())) {
            ("1", _) => format_rational(&coeff),
            (_, true) => name.to_string(),
            _ => format!("{} {name}", format_rational(&coeff)),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn word_text(word: &[IntervalLetter]) -> String {
    let parts: Vec<String> = word.iter().map(|l| l.to_string()).collect();
    parts.join(",")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub arity: usize,
    pub word: String,
    pub value: String,
}

/// `m_{n+1}(t, dt, .., dt)` against `|B_n| / n!`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BernoulliRow {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub dt_coefficient: Rational,
    #[serde(with = "serde_rational")]
    pub bernoulli_over_factorial: Rational,
    pub magnitude_matches: bool,
    /// `+1` when the coefficient equals `B_n/n!`, `-1` when it equals
    /// `-B_n/n!`, `0` when both vanish.
    pub sign_relative_to_bernoulli: i32,
}

/// `m_{n+1}(dt^i, t, dt^{n-i})` against `m_{n+1}(t, dt^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialRow {
    pub n: usize,
    pub i: usize,
    #[serde(with = "serde_rational")]
    pub dt_coefficient: Rational,
    #[serde(with = "serde_rational")]
    pub reference: Rational,
    pub binomial: String,
    pub ratio_matches: bool,
}

/// Observed sign of `m(dt^i, t, dt^{n-i}) / m(t, dt^n)` against two
/// candidate exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignFinding {
    pub n: usize,
    pub i: usize,
    pub observed: i32,
    pub minus_one_to_n_minus_i: i32,
    pub minus_one_to_i: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalTable {
    pub max_arity: usize,
    pub entries: Vec<TableEntry>,
    pub bernoulli_rows: Vec<BernoulliRow>,
    pub binomial_rows: Vec<BinomialRow>,
    pub checks: Vec<TableCheck>,
    pub sign_findings: Vec<SignFinding>,
    pub findings_summary: Vec<String>,
}

impl IntervalTable {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn value(&self, word: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.word == word)
            .map(|e| e.value.as_str())
    }
}

fn sign_of(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_negative() {
        -1
    } else {
        1
    }
}

fn parity_sign(e: usize) -> i32 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Largest `n` for which `m_{n+1}(t, dt^n)` enters the Bernoulli rows.
pub const BERNOULLI_ROW_MAX: usize = 6;
/// Largest `n` for which the binomial ratios are compared.
pub const BINOMIAL_ROW_MAX: usize = 4;

/// Every `m_k`, `1 <= k <= max_arity`, on every word over `{t, dt}`, with
/// the derived checks. Rows needing larger arity than the table are
/// computed separately.
pub fn interval_product_table(max_arity: usize) -> IntervalTable {
    let ctx = WhitneyDupont::new(1);
    let tr = Transfer::new(&ctx);
    let letters = [IntervalLetter::T, IntervalLetter::Dt];
    let eval = |w: &[IntervalLetter]| -> Cochain {
        let cochains: Vec<Cochain> = w.iter().map(|l| l.cochain()).collect();
        tr.m_unchecked(&cochains)
    };
    let dt_coeff = |w: &[IntervalLetter]| eval(w).coefficient(&[0, 1]);
    let one_t_word = |n: usize, i: usize| -> Vec<IntervalLetter> {
        let mut w = vec![IntervalLetter::Dt; n + 1];
        w[i] = IntervalLetter::T;
        w
    };

    let mut entries = Vec::new();
    let mut vanishing_ok = true;
    let mut vanishing_detail = String::from("all vanish");
    let t_cochain = IntervalLetter::T.cochain();
    let mut mtt_ok = false;
    for k in 1..=max_arity {
        for w in words(&letters, k) {
            let value = eval(&w);
            let text = word_text(&w);
            let t_count = w.iter().filter(|l| **l == IntervalLetter::T).count();
            if k == 2 && t_count == 2 {
                mtt_ok = value == t_cochain;
            } else if k >= 2 && t_count != 1 && !value.is_zero() && vanishing_ok {
                vanishing_ok = false;
                vanishing_detail = format!("m_{k}({text}) = {}", format_interval(&value));
            }
            entries.push(TableEntry {
                arity: k,
                word: text,
                value: format_interval(&value),
            });
        }
    }

    let bernoulli = bernoulli_numbers(BERNOULLI_ROW_MAX as u32);
    let mut bernoulli_rows = Vec::new();
    for n in 1..=BERNOULLI_ROW_MAX {
        let c = dt_coeff(&one_t_word(n, 0));
        let expected = &bernoulli[n] / Rational::from_integer(factorial(n as u32));
        let sign = if c.is_zero() && expected.is_zero() {
            0
        } else if c == expected {
            1
        } else if c == -expected.clone() {
            -1
        } else {
            2
        };
        bernoulli_rows.push(BernoulliRow {
            n,
            magnitude_matches: c.abs() == expected.abs(),
            dt_coefficient: c,
            bernoulli_over_factorial: expected,
            sign_relative_to_bernoulli: sign,
        });
    }

    let mut binomial_rows = Vec::new();
    let mut sign_findings = Vec::new();
    for n in 1..=BINOMIAL_ROW_MAX {
        let reference = dt_coeff(&one_t_word(n, 0));
        for i in 0..=n {
            let c = dt_coeff(&one_t_word(n, i));
            let b = binomial(n as u32, i as i64);
            let ratio_matches = if reference.is_zero() {
                true
            } else {
                (&c / &reference).abs() == Rational::from_integer(b.clone())
            };
            if !reference.is_zero() && !c.is_zero() {
                sign_findings.push(SignFinding {
                    n,
                    i,
                    observed: sign_of(&(&c / &reference)),
                    minus_one_to_n_minus_i: parity_sign(n - i),
                    minus_one_to_i: parity_sign(i),
                });
            }
            binomial_rows.push(BinomialRow {
                n,
                i,
                dt_coefficient: c,
                reference: reference.clone(),
                binomial: b.to_string(),
                ratio_matches,
            });
        }
    }

    let checks = vec![
        TableCheck {
            name: "m_2(t,t) = t".into(),
            passed: max_arity >= 2 && mtt_ok,
            detail: tr_value(&entries, "t,t"),
        },
        TableCheck {
            name: format!("|m_(n+1)(t,dt^n)| = |B_n|/n! for n <= {BERNOULLI_ROW_MAX}"),
            passed: bernoulli_rows.iter().all(|r| r.magnitude_matches),
            detail: bernoulli_rows
                .iter()
                .map(|r| format!("n={}: {}", r.n, format_rational(&r.dt_coefficient)))
                .collect::<Vec<_>>()
                .join(", "),
        },
        TableCheck {
            name: format!("other products vanish up to arity {max_arity}"),
            passed: vanishing_ok,
            detail: vanishing_detail,
        },
        TableCheck {
            name: format!("|m(dt^i,t,dt^(n-i))| = C(n,i) |m(t,dt^n)| for n <= {BINOMIAL_ROW_MAX}"),
            passed: binomial_rows.iter().all(|r| r.ratio_matches),
            detail: format!("{} rows", binomial_rows.len()),
        },
    ];

    let findings_summary = summarize_findings(&sign_findings, &bernoulli_rows);
    IntervalTable {
        max_arity,
        entries,
        bernoulli_rows,
        binomial_rows,
        checks,
        sign_findings,
        findings_summary,
    }
}

fn tr_value(entries: &[TableEntry], word: &str) -> String {
    entries
        .iter()
        .find(|e| e.word == word)
        .map_or_else(|| "not computed".to_string(), |e| format!("m_2(t,t) = {}", e.value))
}

fn summarize_findings(findings: &[SignFinding], rows: &[BernoulliRow]) -> Vec<String> {
    let with_n_minus_i = findings
        .iter()
        .filter(|f| f.observed == f.minus_one_to_n_minus_i)
        .count();
    let with_i = findings.iter().filter(|f| f.observed == f.minus_one_to_i).count();
    let mut out = vec![
        format!(
            "observed sign agrees with (-1)^(n-i) in {with_n_minus_i} of {} cases",
            findings.len()
        ),
        format!(
            "observed sign agrees with (-1)^i in {with_i} of {} cases",
            findings.len()
        ),
    ];
    let signs: Vec<String> = rows
        .iter()
        .filter(|r| r.sign_relative_to_bernoulli != 0)
        .map(|r| format!("n={}: {:+}", r.n, r.sign_relative_to_bernoulli))
        .collect();
    out.push(format!(
        "m_(n+1)(t,dt^n) relative to B_n/n!: {}",
        signs.join(", ")
    ));
    out
}

impl fmt::Display for IntervalTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "products on the interval up to arity {}", self.max_arity)?;
        let width = self.entries.iter().map(|e| e.word.len()).max().unwrap_or(0) + 5;
        for e in &self.entries {
            let call = format!("m_{}({})", e.arity, e.word);
            writeln!(f, "  {call:<width$} = {}", e.value)?;
        }
        writeln!(f, "bernoulli row")?;
        for r in &self.bernoulli_rows {
            writeln!(
                f,
                "  n={}  dt coefficient {:<8} B_n/n! {:<8} {}",
                r.n,
                format_rational(&r.dt_coefficient),
                format_rational(&r.bernoulli_over_factorial),
                if r.magnitude_matches { "ok" } else { "MISMATCH" }
            )?;
        }
        writeln!(f, "binomial rows")?;
        for r in &self.binomial_rows {
            writeln!(
                f,
                "  n={} i={}  {:<8} C(n,i)={:<3} {}",
                r.n,
                r.i,
                format_rational(&r.dt_coefficient),
                r.binomial,
                if r.ratio_matches { "ok" } else { "MISMATCH" }
            )?;
        }
        writeln!(f, "checks")?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<4} {}  [{}]",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        writeln!(f, "sign findings")?;
        for s in &self.sign_findings {
            writeln!(
                f,
                "  n={} i={}  observed {:+}  (-1)^(n-i) {:+}  (-1)^i {:+}",
                s.n, s.i, s.observed, s.minus_one_to_n_minus_i, s.minus_one_to_i
            )?;
        }
        for line in &self.findings_summary {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// One step of the `p_n` recursion with its two oracles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialRow {
    pub n: usize,
    pub p: String,
    pub closed_form: String,
    pub matches_closed_form: bool,
    pub matches_series: bool,
    #[serde(with = "serde_rational")]
    pub integral: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub expected_b: Rational,
    pub b_matches: bool,
    #[serde(skip)]
    pub poly: UniPoly,
}

/// A 0-form on `Ω_1` as a polynomial in `t = t_1`.
pub fn form_to_poly(form: &Form) -> Option<UniPoly> {
    if form.dim() != 1 {
        return None;
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    for (m, c) in form.terms() {
        if m.form_degree() != 0 {
            return None;
        }
        let k = m.exponents()[0] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] += c;
    }
    Some(UniPoly::new(coeffs))
}

/// Inverse of [`form_to_poly`].
pub fn poly_to_form(p: &UniPoly) -> Form {
    let mut out = Form::zero(1);
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out += &Form::term(1, c.clone(), &[k as u32], &[]).expect("t_1 monomial");
        }
    }
    out
}

/// `p_1 = t`, `p_n = s(p_{n-1} dt)`, compared with `(B_n(t) - B_n)/n!`,
/// with the series `z (e^{zt} - 1)/(e^z - 1)` and with
/// `b_n = (-1)^{n-1} ∫ p_n = (-1)^n B_n / n!`.
pub fn p_polynomial_sequence(n_max: usize) -> Vec<PolynomialRow> {
    let series = exp_series_ratio(n_max);
    let mut out = Vec::with_capacity(n_max);
    let mut current = Form::t(1, 1);
    for n in 1..=n_max {
        if n > 1 {
            current = s_operator(&current.wedge_unchecked(&Form::dt(1, 1)));
        }
        let poly = form_to_poly(&current).expect("0-form on the interval");
        let bn = bernoulli_number(n as u32);
        let nf = Rational::from_integer(factorial(n as u32));
        let closed = bernoulli_polynomial(n as u32)
            .sub(&UniPoly::constant(bn.clone()))
            .scale(&(Rational::from_integer(BigInt::from(1)) / &nf));
        let integral = poly.integrate_unit();
        let b = if n % 2 == 1 { integral.clone() } else { -integral.clone() };
        let expected_b = if n % 2 == 0 { &bn / &nf } else { -(&bn / &nf) };
        out.push(PolynomialRow {
            n,
            p: poly.to_string(),
            closed_form: closed.to_string(),
            matches_closed_form: poly == closed,
            matches_series: poly == series[n],
            integral,
            b_matches: b == expected_b,
            b,
            expected_b,
            poly,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn table_examples() {
        let table = interval_product_table(4);
        assert_eq!(table.value("t,t"), Some("t"));
        let m3 = table.value("t,dt,dt").unwrap();
        assert!(m3 == "1/12 dt" || m3 == "-1/12 dt", "{m3}");
        assert_eq!(table.value("t,dt,dt,dt"), Some("0"));
        assert_eq!(table.value("t,t,dt"), Some("0"));
        assert!(table.all_passed(), "{table}");
    }

    #[test]
    fn p_polynomials() {
        let rows = p_polynomial_sequence(4);
        assert_eq!(rows[0].p, "t");
        assert_eq!(rows[1].poly, UniPoly::new(vec![ratio(0, 1), ratio(-1, 2), ratio(1, 2)]));
        assert_eq!(rows[1].b, ratio(1, 12));
        assert_eq!(rows[1].integral, ratio(-1, 12));
        assert!(rows.iter().all(|r| r.matches_closed_form && r.matches_series && r.b_matches));
    }

    #[test]
    fn poly_form_round_trip() {
        let p = UniPoly::new(vec![ratio(1, 3), ratio(0, 1), ratio(-2, 5)]);
        assert_eq!(form_to_poly(&poly_to_form(&p)), Some(p));
    }
}

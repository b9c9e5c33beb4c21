mod common;

use num_traits::Zero;

use cinfty::scalar::{bernoulli_number, bernoulli_polynomial, format_rational, Rational};
use cinfty::transfer::{interval_product_table, p_polynomial_sequence};
use cinfty::tree::{count_trees, enumerate_trees, path_trees};

use common::{bernoulli, interval_coefficient, q};

#[test]
fn bernoulli_numbers_agree_with_akiyama_tanigawa() {
    for n in 0..=20 {
        assert_eq!(bernoulli_number(n as u32), bernoulli(n), "B_{n}");
    }
}

#[test]
fn frozen_bernoulli_values() {
    let frozen = [
        (0, q(1, 1)),
        (1, q(-1, 2)),
        (2, q(1, 6)),
        (4, q(-1, 30)),
        (6, q(1, 42)),
        (8, q(-1, 30)),
        (10, q(5, 66)),
        (12, q(-691, 2730)),
    ];
    for (n, b) in frozen {
        assert_eq!(bernoulli(n), b);
        assert_eq!(bernoulli_number(n as u32), b);
    }
    assert_eq!(bernoulli(3), Rational::zero());
}

#[test]
fn bernoulli_polynomial_at_one() {
    for n in 2..=10u32 {
        assert_eq!(bernoulli_polynomial(n).eval(&q(1, 1)), bernoulli(n as usize));
    }
    assert_eq!(bernoulli_polynomial(1).eval(&q(1, 1)), q(1, 2));
}

#[test]
fn p_polynomials_take_power_sum_values() {
    for row in p_polynomial_sequence(8) {
        for m in 0..=10usize {
            assert_eq!(
                row.poly.eval(&Rational::from_integer((m as i64).into())),
                common::power_sum_value(row.n, m),
                "p_{}({m})",
                row.n
            );
        }
    }
}

#[test]
fn interval_products_match_frozen_oracle() {
    let table = interval_product_table(5);
    for row in &table.binomial_rows {
        assert_eq!(row.dt_coefficient, interval_coefficient(row.n, row.i), "n={} i={}", row.n, row.i);
    }
    for row in &table.bernoulli_rows {
        assert_eq!(row.dt_coefficient, interval_coefficient(row.n, 0), "n={}", row.n);
    }
    let frozen = [
        ("t,dt", "1/2 dt"),
        ("dt,t", "-1/2 dt"),
        ("t,dt,dt", "1/12 dt"),
        ("dt,t,dt", "-1/6 dt"),
        ("dt,dt,t", "1/12 dt"),
        ("t,dt,dt,dt", "0"),
        ("dt,dt,t,dt,dt", "-1/120 dt"),
    ];
    for (word, value) in frozen {
        assert_eq!(table.value(word), Some(value), "{word}");
    }
    assert_eq!(format_rational(&interval_coefficient(6, 0)), "1/30240");
}

#[test]
fn tree_counts_agree_with_brute_force() {
    for n in 1..=8 {
        let brute = common::brute_force_tree_count(n);
        assert_eq!(enumerate_trees(n).len(), brute, "n={n}");
        assert_eq!(count_trees(n), brute.into());
    }
    assert_eq!(count_trees(10).to_string(), "103049");
}

#[test]
fn path_tree_counts_are_binomial() {
    for leaves in 2..=7usize {
        let n = leaves - 1;
        for i in 0..=n {
            let trees = path_trees(leaves, i + 1).unwrap();
            assert_eq!(trees.len().to_string(), common::binomial(n, i).to_string());
            for t in &trees {
                let word = t.lr_word(i + 1);
                assert_eq!(word.matches('R').count(), i, "{t}");
            }
        }
    }
}

//! Oracles that share no code with the library beyond the rational type.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};

use cinfty::scalar::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Akiyama–Tanigawa; returns `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(q(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
    }
    let b = a[0].clone();
    if n == 1 {
        -b
    } else {
        b
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `Σ_{j<m} j^(n-1) / (n-1)!`, which is `p_n(m)` for integers `m >= 0`.
pub fn power_sum_value(n: usize, m: usize) -> Rational {
    let mut acc = BigInt::zero();
    for j in 0..m {
        acc += BigInt::from(j).pow(n as u32 - 1);
    }
    Rational::new(acc, factorial(n - 1))
}

/// Expected dt-coefficient of `m_{n+1}(dt^i, t, dt^{n-i})` on the interval:
/// `(-1)^i C(n,i) B_n(1) / n!`, where `B_n(1) = B_n` except `B_1(1) = 1/2`.
pub fn interval_coefficient(n: usize, i: usize) -> Rational {
    let b1 = if n == 1 { -bernoulli(1) } else { bernoulli(n) };
    let v = b1 * Rational::from_integer(binomial(n, i)) / Rational::from_integer(factorial(n));
    if i % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Counts planar trees with `n` tails and no unary vertex by scanning
/// every preorder arity sequence.
pub fn brute_force_tree_count(n: usize) -> usize {
    fn extend(open: usize, leaves: usize, n: usize, count: &mut usize) {
        if open == 0 {
            if leaves == n {
                *count += 1;
            }
            return;
        }
        if leaves + open > n {
            return;
        }
        // a tail closes one open slot
        extend(open - 1, leaves + 1, n, count);
        // a vertex of arity a replaces a slot by a slots
        for a in 2..=n {
            if leaves + open - 1 + a > n {
                break;
            }
            extend(open - 1 + a, leaves, n, count);
        }
    }
    let mut count = 0;
    extend(1, 0, n, &mut count);
    count
}

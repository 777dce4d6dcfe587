use super::TruncationPolicy;
use crate::special::{binomial_decay_constant, gen_binomial, symmetric_binomial};

const MAX_TERMS: usize = 1 << 16;

/// Difference value with the estimated size of the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceValue {
    pub value: f64,
    /// `None` when the sum is finite and exact.
    pub tail_bound: Option<f64>,
    /// Number of summed terms on each side.
    pub terms: usize,
}

#[inline]
fn alt(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn is_nonneg_integer(beta: f64) -> bool {
    beta >= 0.0 && beta.fract() == 0.0
}

/// Tail estimate for `Σ_{k>K} |c_k f(x∓k)|` with `|c_k| ≈ C k^{-β-1}` and
/// `|f|` frozen at its last sampled magnitude.
fn tail_estimate(beta: f64, k: usize, f_last: f64) -> f64 {
    let kf = k as f64;
    let c = binomial_decay_constant(beta).abs();
    if beta > 0.0 {
        c * f_last * kf.powf(-beta) / beta
    } else {
        f64::INFINITY
    }
}

/// `Δ₊^β f(x) = Σ_{k≥0} (-1)^k binom(β, k) f(x-k)`.
///
/// Finite for nonnegative integer `β`; otherwise the window doubles from
/// `trunc.max_terms` until the tail estimate meets `trunc.tail_tolerance`.
pub fn forward_difference(
    beta: f64,
    f: impl Fn(f64) -> f64,
    x: f64,
    trunc: &TruncationPolicy,
) -> DifferenceValue {
    if is_nonneg_integer(beta) {
        let n = beta as i64;
        let value = (0..=n)
            .map(|k| alt(k) * gen_binomial(beta, k as f64).value() * f(x - k as f64))
            .sum();
        return DifferenceValue {
            value,
            tail_bound: None,
            terms: n as usize + 1,
        };
    }
    let mut acc = 0.0;
    let mut done = 0usize;
    let mut k_max = trunc.max_terms;
    loop {
        let mut last = 0.0f64;
        for k in done..k_max {
            let t = f(x - k as f64);
            acc += alt(k as i64) * gen_binomial(beta, k as f64).value() * t;
            last = t.abs();
        }
        done = k_max;
        let bound = tail_estimate(beta, k_max, last);
        if bound <= trunc.tail_tolerance || k_max >= MAX_TERMS {
            return DifferenceValue {
                value: acc,
                tail_bound: Some(bound),
                terms: k_max,
            };
        }
        k_max *= 2;
    }
}

/// `Δ₊^β f(x)` for `f` vanishing on `(-∞, left)`: exact finite sum over `x - k >= left`.
pub fn forward_difference_supported(beta: f64, f: impl Fn(f64) -> f64, x: f64, left: f64) -> f64 {
    if x < left {
        return 0.0;
    }
    let mut n = (x - left).floor() as i64;
    if is_nonneg_integer(beta) {
        n = n.min(beta as i64);
    }
    (0..=n)
        .map(|k| alt(k) * gen_binomial(beta, k as f64).value() * f(x - k as f64))
        .sum()
}

/// `Δ*^β f(x) = Σ_k (-1)^k binom(β, k + β/2) f(x-k)`, summed in `(k, -k)` pairs.
pub fn symmetric_difference(
    beta: f64,
    f: impl Fn(f64) -> f64,
    x: f64,
    trunc: &TruncationPolicy,
) -> DifferenceValue {
    let c = |k: i64| alt(k) * symmetric_binomial(beta, k).value();
    let pair = |k: i64| c(k) * f(x - k as f64) + c(-k) * f(x + k as f64);
    if is_nonneg_integer(beta) && beta as i64 % 2 == 0 {
        let h = beta as i64 / 2;
        let value = c(0) * f(x) + (1..=h).map(pair).sum::<f64>();
        return DifferenceValue {
            value,
            tail_bound: None,
            terms: h as usize,
        };
    }
    let mut acc = c(0) * f(x);
    let mut done = 1usize;
    let mut k_max = trunc.max_terms;
    loop {
        let mut last = 0.0f64;
        for k in done..=k_max {
            acc += pair(k as i64);
            last = f(x - k as f64).abs().max(f(x + k as f64).abs());
        }
        done = k_max + 1;
        let bound = 2.0 * tail_estimate(beta, k_max, last);
        if bound <= trunc.tail_tolerance || k_max >= MAX_TERMS {
            return DifferenceValue {
                value: acc,
                tail_bound: Some(bound),
                terms: k_max,
            };
        }
        k_max *= 2;
    }
}

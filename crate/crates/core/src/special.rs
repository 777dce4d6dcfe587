//! Gamma-function plumbing and generalized binomial coefficients.
//!
//! Poles are reported as data ([`BinomialValue::Zero`] / [`BinomialValue::Infinite`])
//! because series generators consume them as coefficient values.

use std::f64::consts::PI;

use thiserror::Error;

/// Arguments within this distance of a non-positive integer are treated as Gamma poles.
pub const NEAR_POLE: f64 = 1e-9;

/// Largest integer `n` for which binomials use the falling-factorial product.
const PRODUCT_LIMIT: i64 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("Gamma pole at x = {0}")]
    Pole(f64),
    #[error("order must be a finite real greater than -1, got {0}")]
    InvalidOrder(f64),
}

/// Sign of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// A validated spline / monomial order `alpha > -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order {
    alpha: f64,
}

impl Order {
    pub fn new(alpha: f64) -> Result<Self, SpecialError> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(SpecialError::InvalidOrder(alpha));
        }
        Ok(Order { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_integer(&self) -> bool {
        self.alpha.fract() == 0.0
    }

    pub fn is_even_nonneg(&self) -> bool {
        self.is_integer() && self.alpha >= 0.0 && (self.alpha as i64) % 2 == 0
    }

    pub fn is_odd_nonneg(&self) -> bool {
        self.is_integer() && self.alpha >= 0.0 && (self.alpha as i64) % 2 == 1
    }

    pub fn ceil(&self) -> i64 {
        self.alpha.ceil() as i64
    }
}

/// Generalized binomial coefficient with explicit pole bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinomialValue {
    Finite(f64),
    Zero,
    Infinite(Sign),
}

impl BinomialValue {
    /// Numeric value, with `Zero` as `0.0` and `Infinite` as a signed infinity.
    pub fn value(&self) -> f64 {
        match *self {
            BinomialValue::Finite(v) => v,
            BinomialValue::Zero => 0.0,
            BinomialValue::Infinite(s) => s.as_f64() * f64::INFINITY,
        }
    }

    /// `Some(value)` unless the coefficient is infinite.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            BinomialValue::Finite(v) => Some(v),
            BinomialValue::Zero => Some(0.0),
            BinomialValue::Infinite(_) => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BinomialValue::Infinite(_))
    }
}

/// Returns the integer `n` if `x` lies within [`NEAR_POLE`] of it.
fn near_integer(x: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() < NEAR_POLE && r.abs() < 9.0e15 {
        Some(r as i64)
    } else {
        None
    }
}

fn is_pole(x: f64) -> bool {
    matches!(near_integer(x), Some(n) if n <= 0)
}

/// Sign of Γ(x) for a non-pole argument.
fn gamma_sign(x: f64) -> Sign {
    if x > 0.0 {
        Sign::Plus
    } else {
        // Γ alternates sign between consecutive negative integers; (-1, 0) is negative.
        let m = (-x).ceil() as i64;
        if m % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`.
pub fn log_gamma(x: f64) -> Result<(f64, Sign), SpecialError> {
    if x.is_nan() || is_pole(x) {
        return Err(SpecialError::Pole(x));
    }
    if x > 0.0 {
        return Ok((log_gamma_positive(x), Sign::Plus));
    }
    // Reflection: Γ(x)Γ(1−x) = π / sin(πx).
    let s = sin_pi(x);
    let (lg1, _) = log_gamma(1.0 - x)?;
    let log_abs = PI.ln() - s.abs().ln() - lg1;
    Ok((log_abs, Sign::of(s)))
}

fn log_gamma_positive(x: f64) -> f64 {
    if x >= 171.0 {
        return libm::lgamma_r(x).0;
    }
    // Γ itself is representable here; take its log and apply one Newton
    // correction so the rounding of a large log_abs stays within half an ulp.
    let g = libm::tgamma(x);
    let l0 = g.ln();
    l0 + (g / l0.exp() - 1.0)
}

/// Γ(x) as a float; poles map to NaN.
pub fn gamma(x: f64) -> f64 {
    match log_gamma(x) {
        Ok((l, s)) => s.as_f64() * l.exp(),
        Err(_) => f64::NAN,
    }
}

/// sin(πx) with exact zeros at integers and argument reduction mod 2.
pub fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0;
    if r == r.trunc() {
        return 0.0;
    }
    let r = if r < -1.0 {
        r + 2.0
    } else if r > 1.0 {
        r - 2.0
    } else {
        r
    };
    // r ∈ [-1, 1]; fold onto [-1/2, 1/2] for accuracy.
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// m(m−1)…(m−n+1)/n! for integer `n >= 0`.
fn falling_ratio(m: f64, n: i64) -> f64 {
    let mut v = 1.0;
    for i in 0..n {
        v *= (m - i as f64) / (i + 1) as f64;
    }
    v
}

/// Γ(m+1) / (Γ(n+1) Γ(m−n+1)) with pole bookkeeping.
///
/// When `m+1` is a pole and `n` is an integer the value is the limit in `m`:
/// the falling factorial for `n >= 0`, zero for `n < 0`. When `m+1` is a pole
/// and `n` is not an integer the coefficient is infinite; the sign is the
/// right-hand limit in `m`.
pub fn gen_binomial(m: f64, n: f64) -> BinomialValue {
    if m.is_nan() || n.is_nan() {
        return BinomialValue::Finite(f64::NAN);
    }
    let num_pole = is_pole(m + 1.0);
    if num_pole {
        let mi = near_integer(m).expect("pole implies integer");
        return match near_integer(n) {
            Some(ni) if ni < 0 => BinomialValue::Zero,
            Some(ni) => {
                let v = falling_ratio(mi as f64, ni);
                if v == 0.0 {
                    BinomialValue::Zero
                } else {
                    BinomialValue::Finite(v)
                }
            }
            None => {
                // Γ(−j+ε) ≈ (−1)^j / (j! ε) with m + 1 = −j.
                let j = -(mi + 1);
                let num = if j % 2 == 0 { Sign::Plus } else { Sign::Minus };
                let den = gamma_sign(n + 1.0).times(gamma_sign(m - n + 1.0));
                BinomialValue::Infinite(num.times(den))
            }
        };
    }
    let d1 = n;
    let d2 = m - n;
    if is_pole(d1 + 1.0) || is_pole(d2 + 1.0) {
        return BinomialValue::Zero;
    }
    // Small nonnegative integer lower index: product formula (symmetric in n ↔ m−n).
    let small = |d: f64| match near_integer(d) {
        Some(i) if (0..=PRODUCT_LIMIT).contains(&i) && d == i as f64 => Some(i),
        _ => None,
    };
    let pick = match (small(d1), small(d2)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    };
    if let Some(j) = pick {
        return BinomialValue::Finite(falling_ratio(m, j));
    }
    let (ln, sn) = log_gamma(m + 1.0).expect("checked pole");
    // Order the denominator terms canonically so that n ↔ m−n gives identical rounding.
    let (a, b) = if d1 + 1.0 <= d2 + 1.0 {
        (d1 + 1.0, d2 + 1.0)
    } else {
        (d2 + 1.0, d1 + 1.0)
    };
    let (la, sa) = log_gamma(a).expect("checked pole");
    let (lb, sb) = log_gamma(b).expect("checked pole");
    let sign = sn.times(sa).times(sb);
    BinomialValue::Finite(sign.as_f64() * (ln - (la + lb)).exp())
}

/// binom(alpha, k + alpha/2), with the |k| redefinition for even negative `alpha`.
pub fn symmetric_binomial(alpha: f64, k: i64) -> BinomialValue {
    if let Some(a) = near_integer(alpha) {
        if a < 0 {
            if a % 2 == 0 {
                return gen_binomial(alpha, k.abs() as f64 + alpha / 2.0);
            }
            return match gen_binomial(alpha, k as f64 + alpha / 2.0) {
                BinomialValue::Infinite(s) => BinomialValue::Infinite(s),
                // Half-integer lower index always hits the uncancelled pole.
                _ => BinomialValue::Infinite(Sign::Plus),
            };
        }
    }
    // binom(α, n) = binom(α, α − n) away from numerator poles, so |k| gives
    // the same value with bitwise evenness.
    gen_binomial(alpha, k.abs() as f64 + alpha / 2.0)
}

/// Constant `C` with `|binom(alpha+1, k)| <= C k^{-alpha-2}` for all `k >= 2`.
///
/// The ratio tends to `Γ(alpha+2)|sin(πalpha)|/π`; the maximum over an initial
/// range is combined with that limit.
pub fn binomial_decay_constant(alpha: f64) -> f64 {
    let limit = gamma(alpha + 2.0) * sin_pi(alpha).abs() / PI;
    let mut c = limit;
    for k in 2..=512i64 {
        let v = gen_binomial(alpha + 1.0, k as f64).value().abs();
        c = c.max(v * (k as f64).powf(alpha + 2.0));
    }
    c * (1.0 + 1e-12)
}

/// Γ(x + a) / Γ(x + b) for large positive `x`, computed via log-Gamma.
pub fn gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    let (la, sa) = log_gamma(x + a).unwrap_or((f64::INFINITY, Sign::Plus));
    let (lb, sb) = log_gamma(x + b).unwrap_or((f64::INFINITY, Sign::Plus));
    sa.times(sb).as_f64() * (la - lb).exp()
}

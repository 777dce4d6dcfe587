use super::SplineError;
use crate::special::Order;

/// `x₊^α`: `x^α` for `x > 0`, zero for `x < 0`; at `x = 0` it is `1` for
/// `α = 0` (right-continuous indicator), `0` for `α > 0` and `+∞` for `α < 0`.
pub fn causal_monomial(order: Order, x: f64) -> f64 {
    causal_power(order.alpha(), x)
}

#[inline]
pub(crate) fn causal_power(alpha: f64, x: f64) -> f64 {
    if x > 0.0 {
        x.powf(alpha)
    } else if x < 0.0 {
        0.0
    } else if alpha == 0.0 {
        1.0
    } else if alpha > 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// `|x|^α`, or `x^α log|x|` when `α` is an even nonnegative integer.
pub fn symmetric_monomial(order: Order, x: f64) -> Result<f64, SplineError> {
    if order.alpha() == 0.0 && x == 0.0 {
        return Err(SplineError::Domain);
    }
    Ok(symmetric_power(order.alpha(), order.is_even_nonneg(), x))
}

/// Unchecked symmetric monomial; the log branch returns `-∞` at `x = 0` for `α = 0`.
#[inline]
pub(crate) fn symmetric_power(alpha: f64, log_branch: bool, x: f64) -> f64 {
    let a = x.abs();
    if log_branch {
        if a == 0.0 {
            return if alpha == 0.0 { f64::NEG_INFINITY } else { 0.0 };
        }
        a.powf(alpha) * a.ln()
    } else if a == 0.0 {
        if alpha > 0.0 {
            0.0
        } else if alpha == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a.powf(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn causal_examples() {
        assert_eq!(causal_monomial(ord(0.5), 4.0), 2.0);
        assert_eq!(causal_monomial(ord(0.5), -1.0), 0.0);
        assert_eq!(causal_monomial(ord(0.0), 0.0), 1.0);
        assert_eq!(causal_monomial(ord(1.5), 0.0), 0.0);
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(symmetric_monomial(ord(1.5), -4.0).unwrap(), 8.0);
        assert!((symmetric_monomial(ord(2.0), E).unwrap() - E * E).abs() < 1e-14);
        assert_eq!(symmetric_monomial(ord(2.0), -1.0).unwrap(), 0.0);
        assert_eq!(symmetric_monomial(ord(2.0), 0.0).unwrap(), 0.0);
        assert_eq!(symmetric_monomial(ord(0.0), 0.0), Err(SplineError::Domain));
        assert_eq!(symmetric_monomial(ord(0.0), E).unwrap(), 1.0);
    }
}

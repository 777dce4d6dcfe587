use super::monomial::causal_power;
use crate::special::{gen_binomial, Order};

#[inline]
fn signed_binomial(alpha: f64, k: i64) -> f64 {
    let b = gen_binomial(alpha + 1.0, k as f64).value();
    if k % 2 == 0 {
        b
    } else {
        -b
    }
}

/// Number of nonzero binomial terms for `x`: `⌊x⌋ + 1`, capped at `α + 2` for integer `α`.
#[inline]
fn term_count(order: Order, x: f64) -> i64 {
    let n = x.floor() as i64 + 1;
    if order.is_integer() {
        n.min(order.alpha() as i64 + 2)
    } else {
        n
    }
}

/// Integer orders: the `(n+1)`-th difference annihilates degree-`n` pieces
/// right of the support, so those values are exactly zero.
#[inline]
fn beyond_support(order: Order, x: f64) -> bool {
    order.is_integer() && x >= order.alpha() + 1.0
}

/// `B₊^α(x) = Σ_{k=0}^{⌊x⌋} (-1)^k binom(α+1, k) (x-k)^α`, zero for `x < 0`.
///
/// The sum is finite: every term with `k > x` vanishes.
pub fn eval_causal_spline(order: Order, x: f64) -> f64 {
    if x < 0.0 || x.is_nan() {
        return if x.is_nan() { f64::NAN } else { 0.0 };
    }
    let a = order.alpha();
    if beyond_support(order, x) {
        return 0.0;
    }
    let mut acc = 0.0;
    for k in 0..term_count(order, x) {
        acc += signed_binomial(a, k) * causal_power(a, x - k as f64);
    }
    acc
}

/// Causal spline with a precomputed coefficient table, bitwise identical to
/// [`eval_causal_spline`].
#[derive(Debug, Clone)]
pub struct CausalSpline {
    order: Order,
    coeffs: Vec<f64>,
}

impl CausalSpline {
    /// Table sized for arguments up to `x_max`.
    pub fn new(order: Order, x_max: f64) -> Self {
        let n = if x_max >= 0.0 {
            x_max.floor() as i64 + 1
        } else {
            1
        };
        let n = term_count(order, n as f64).max(1);
        let coeffs = (0..n).map(|k| signed_binomial(order.alpha(), k)).collect();
        CausalSpline { order, coeffs }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 || x.is_nan() {
            return if x.is_nan() { f64::NAN } else { 0.0 };
        }
        let a = self.order.alpha();
        if beyond_support(self.order, x) {
            return 0.0;
        }
        let n = term_count(self.order, x) as usize;
        let mut acc = 0.0;
        for k in 0..n {
            let c = if k < self.coeffs.len() {
                self.coeffs[k]
            } else {
                signed_binomial(a, k as i64)
            };
            acc += c * causal_power(a, x - k as f64);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(eval_causal_spline(ord(0.0), 0.5), 1.0);
        assert_eq!(eval_causal_spline(ord(0.0), 1.0), 0.0);
        assert_eq!(eval_causal_spline(ord(1.0), 1.0), 1.0);
        assert_eq!(eval_causal_spline(ord(0.5), 1.0), 1.0);
        assert_eq!(eval_causal_spline(ord(0.5), -0.1), 0.0);
    }

    #[test]
    fn integer_orders_have_compact_support() {
        for n in 0..4 {
            let o = ord(n as f64);
            for i in 0..200 {
                let x = n as f64 + 1.0 + i as f64 * 0.05;
                assert_eq!(eval_causal_spline(o, x), 0.0, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn table_matches_direct_bitwise() {
        let o = ord(0.37);
        let s = CausalSpline::new(o, 5.0);
        for i in 0..400 {
            let x = -1.0 + i as f64 * 0.0371;
            assert_eq!(s.eval(x).to_bits(), eval_causal_spline(o, x).to_bits());
        }
    }
}

use super::{symmetric_target, ReproductionError, ReproductionResult, ShiftCache, Truncation};
use crate::grid::Grid1D;
use crate::sequences::difference_sequence;
use crate::special::Order;
use crate::splines::SymmetricSpline;
use crate::Kind;

fn odd_negative_integer(b: f64) -> bool {
    b < 0.0 && b.fract() == 0.0 && (b as i64) % 2 != 0
}

/// `x^α log|x| ≈ Δ*^{β₁} Δ*^{β₂} B*^α` for even integer `α`, `β₁ + β₂ = -(α+1)`.
///
/// The inner sum `I(y) = Σ_{|j| <= 2H} q⁽²⁾_j B*^α(y - j)` is formed on a window
/// extended by the outer reach `H`, then `R(x) = Σ_{|k| <= H} q⁽¹⁾_k I(x - k)`.
/// The raw sums drift by even polynomials of degree at most `α` that grow with
/// `H`, so the reported error is taken modulo those; convergence in `H` is slow.
pub fn reproduce_even_symmetric_factorized(
    alpha_even: Order,
    split: (f64, f64),
    grid: &Grid1D,
    half_width: usize,
) -> Result<ReproductionResult, ReproductionError> {
    let a = alpha_even.alpha();
    let (b1, b2) = split;
    let invalid = ReproductionError::InvalidSplit {
        beta1: b1,
        beta2: b2,
        alpha: a,
    };
    if !alpha_even.is_even_nonneg()
        || (b1 + b2 + a + 1.0).abs() > 1e-12
        || odd_negative_integer(b1)
        || odd_negative_integer(b2)
    {
        return Err(invalid);
    }
    if half_width < 2 {
        return Err(ReproductionError::PreconditionViolated(
            "half_width >= 2".into(),
        ));
    }
    let q1 = difference_sequence(Kind::Symmetric, b1)?;
    let q2 = difference_sequence(Kind::Symmetric, b2)?;
    let h = half_width as i64;
    let outer = q1.materialize(-h, h);
    let inner = q2.materialize(-2 * h, 2 * h);
    let s = SymmetricSpline::new(alpha_even);
    let mut cache = ShiftCache::new(grid, |y| s.eval(y));
    let n = grid.count();
    let mut values = vec![0.0; n];
    let mut halfway = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        let mut acc_half = 0.0;
        for k in -h..=h {
            let mut inner_sum = 0.0;
            for j in -2 * h..=2 * h {
                inner_sum += inner[(j + 2 * h) as usize] * cache.at(i, k + j);
            }
            let t = outer[(k + h) as usize] * inner_sum;
            acc += t;
            if 2 * k.abs() <= h {
                acc_half += t;
            }
        }
        values[i] = acc;
        halfway[i] = acc_half;
    }
    let target: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| symmetric_target(alpha_even, x))
        .collect();
    let degree = Some(a as usize);
    let e_half = ReproductionResult::assemble(*grid, halfway.clone(), target.clone(), degree, None)
        .max_error;
    let e_full =
        ReproductionResult::assemble(*grid, values.clone(), target.clone(), degree, None).max_error;
    // Change from H/2 to H, modulo the same even polynomials as the error.
    let tail_bound =
        ReproductionResult::assemble(*grid, values.clone(), halfway.clone(), degree, None)
            .max_error;
    let truncation = Truncation {
        half_width,
        tail_bound,
        checkpoints: vec![(half_width / 2, e_half), (half_width, e_full)],
        slope: (e_half > 0.0 && e_full > 0.0).then(|| (e_half / e_full).log2()),
        condition_estimate: None,
    };
    let mut r = ReproductionResult::assemble(*grid, values, target, degree, Some(truncation));
    r.notes
        .push("slow convergence: factorized even-order series".into());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_validation() {
        let two = Order::new(2.0).unwrap();
        let g = Grid1D::inclusive(-2.0, 2.0, 0.5).unwrap();
        assert!(matches!(
            reproduce_even_symmetric_factorized(two, (-1.0, -2.0), &g, 10),
            Err(ReproductionError::InvalidSplit { .. })
        ));
        assert!(reproduce_even_symmetric_factorized(two, (-1.5, -1.0), &g, 10).is_err());
        let half = Order::new(0.5).unwrap();
        assert!(reproduce_even_symmetric_factorized(half, (-0.75, -0.75), &g, 10).is_err());
    }

    #[test]
    fn error_decreases_with_width() {
        let two = Order::new(2.0).unwrap();
        let g = Grid1D::inclusive(-4.0, 4.0, 0.5).unwrap();
        let e: Vec<f64> = [10usize, 20, 40]
            .iter()
            .map(|&h| {
                reproduce_even_symmetric_factorized(two, (-1.5, -1.5), &g, h)
                    .unwrap()
                    .error_near(1.5)
            })
            .collect();
        assert!(e[1] < e[0] && e[2] < e[1], "{e:?}");
    }
}

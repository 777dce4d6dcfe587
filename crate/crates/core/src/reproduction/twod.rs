//! Tensor-product splines and separable 2D reproduction.

use super::{
    reproduce_causal, reproduce_symmetric, symmetric_coefficients, symmetric_target,
    ReproductionError, ReproductionResult, ShiftCache, Truncation,
};
use crate::grid::{Grid1D, Grid2D};
use crate::special::Order;
use crate::splines::{
    eval_causal_spline, eval_symmetric_spline, SymmetricSpline, TruncationPolicy,
};
use crate::Kind;

/// `B^{α₁}(x) B^{α₂}(y)`.
pub fn eval_2d_spline(
    kind: Kind,
    order1: Order,
    order2: Order,
    x: f64,
    y: f64,
    trunc: &TruncationPolicy,
) -> f64 {
    match kind {
        Kind::Causal => eval_causal_spline(order1, x) * eval_causal_spline(order2, y),
        Kind::Symmetric => {
            eval_symmetric_spline(order1, x, trunc).value
                * eval_symmetric_spline(order2, y, trunc).value
        }
    }
}

/// Samples on a [`Grid2D`], row-major with `x` slow.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionResult2D {
    pub grid: Grid2D,
    pub target: Vec<f64>,
    pub values: Vec<f64>,
    pub error: Vec<f64>,
    pub max_error: f64,
    /// Per-axis truncation metadata (symmetric kind).
    pub truncation: Option<(Truncation, Truncation)>,
    /// Share of `Σ|values|` in quadrants I ∪ III (`xy > 0`) and II ∪ IV (`xy < 0`).
    pub mass_fraction: Option<(f64, f64)>,
}

fn outer(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for u in a {
        for v in b {
            out.push(u * v);
        }
    }
    out
}

fn abs_error(values: &[f64], target: &[f64]) -> (Vec<f64>, f64) {
    let error: Vec<f64> = values
        .iter()
        .zip(target)
        .map(|(v, t)| (v - t).abs())
        .collect();
    let max = error
        .iter()
        .filter(|e| !e.is_nan())
        .fold(0.0f64, |m, e| m.max(*e));
    (error, max)
}

/// Separable double sum; equals the outer product of the per-axis 1D
/// reproductions bit for bit.
pub fn reproduce_2d(
    kind: Kind,
    order1: Order,
    order2: Order,
    grid: &Grid2D,
    half_width: usize,
) -> Result<ReproductionResult2D, ReproductionError> {
    let (rx, ry): (ReproductionResult, ReproductionResult) = match kind {
        Kind::Causal => (
            reproduce_causal(order1, &grid.x)?,
            reproduce_causal(order2, &grid.y)?,
        ),
        Kind::Symmetric => (
            reproduce_symmetric(order1, &grid.x, half_width)?,
            reproduce_symmetric(order2, &grid.y, half_width)?,
        ),
    };
    let values = outer(&rx.values, &ry.values);
    let target = outer(&rx.target, &ry.target);
    let (error, max_error) = abs_error(&values, &target);
    let truncation = match (rx.truncation, ry.truncation) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    Ok(ReproductionResult2D {
        grid: *grid,
        target,
        values,
        error,
        max_error,
        truncation,
        mass_fraction: None,
    })
}

/// Index-set restriction of the symmetric double sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadrantMode {
    /// `k₁ k₂ >= 0`.
    Same,
    /// `k₁ k₂ <= 0`.
    Opposite,
    /// All `|k₁|, |k₂| <= H`.
    Full,
}

/// Per-axis partial sums over `0 <= k <= H`, `-H <= k <= 0` and `k = 0`.
struct AxisParts {
    plus: Vec<f64>,
    minus: Vec<f64>,
    zero: Vec<f64>,
}

fn axis_parts(
    order: Order,
    grid: &Grid1D,
    half_width: usize,
) -> Result<AxisParts, ReproductionError> {
    let (p, _) = symmetric_coefficients(order, half_width)?;
    let s = SymmetricSpline::new(order);
    let mut cache = ShiftCache::new(grid, |y| s.eval(y));
    let h = half_width as i64;
    let n = grid.count();
    let mut parts = AxisParts {
        plus: vec![0.0; n],
        minus: vec![0.0; n],
        zero: vec![0.0; n],
    };
    for i in 0..n {
        let z = p.coeff(0) * cache.at(i, 0);
        let (mut pl, mut mi) = (z, z);
        for k in 1..=h {
            pl += p.coeff(k) * cache.at(i, k);
            mi += p.coeff(-k) * cache.at(i, -k);
        }
        parts.plus[i] = pl;
        parts.minus[i] = mi;
        parts.zero[i] = z;
    }
    Ok(parts)
}

/// Symmetric double sum restricted to `k₁k₂ >= 0`, `k₁k₂ <= 0`, or unrestricted,
/// over `|k₁|, |k₂| <= H`.
///
/// With `P±` the one-sided axis sums and `U` the `k = 0` term,
/// Same is `P⁺P⁺ + P⁻P⁻ - UU` and Opposite is `P⁺P⁻ + P⁻P⁺ - UU`.
pub fn reproduce_2d_quadrant(
    order1: Order,
    order2: Order,
    grid: &Grid2D,
    mode: QuadrantMode,
    half_width: usize,
) -> Result<ReproductionResult2D, ReproductionError> {
    let ax = axis_parts(order1, &grid.x, half_width)?;
    let ay = axis_parts(order2, &grid.y, half_width)?;
    let (nx, ny) = (grid.x.count(), grid.y.count());
    let mut values = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let uv = ax.zero[i] * ay.zero[j];
            let v = match mode {
                QuadrantMode::Same => ax.plus[i] * ay.plus[j] + ax.minus[i] * ay.minus[j] - uv,
                QuadrantMode::Opposite => ax.plus[i] * ay.minus[j] + ax.minus[i] * ay.plus[j] - uv,
                QuadrantMode::Full => {
                    (ax.plus[i] + ax.minus[i] - ax.zero[i])
                        * (ay.plus[j] + ay.minus[j] - ay.zero[j])
                }
            };
            values.push(v);
        }
    }
    let tx: Vec<f64> = grid
        .x
        .points()
        .iter()
        .map(|&x| symmetric_target(order1, x))
        .collect();
    let ty: Vec<f64> = grid
        .y
        .points()
        .iter()
        .map(|&y| symmetric_target(order2, y))
        .collect();
    let target = outer(&tx, &ty);
    let (error, max_error) = abs_error(&values, &target);
    let (mut same, mut opposite) = (0.0, 0.0);
    for i in 0..nx {
        for j in 0..ny {
            let xy = grid.x.point(i) * grid.y.point(j);
            let m = values[grid.index(i, j)].abs();
            if xy > 0.0 {
                same += m;
            } else if xy < 0.0 {
                opposite += m;
            }
        }
    }
    let total = same + opposite;
    let mass_fraction = (total > 0.0).then(|| (same / total, opposite / total));
    Ok(ReproductionResult2D {
        grid: *grid,
        target,
        values,
        error,
        max_error,
        truncation: None,
        mass_fraction,
    })
}

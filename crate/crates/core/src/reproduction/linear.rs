//! Ordinary linear reproduction `Σ (k+c) B₊^α(x-k) = x` and the pointwise
//! versus uniform convergence probes.

use super::{ReproductionError, ReproductionResult};
use crate::grid::Grid1D;
use crate::special::{gamma, Order};
use crate::splines::CausalSpline;

/// Series-normalized causal spline divided by `Γ(α+1)`, i.e. the spline with
/// unit integral.
struct UnitSpline {
    spline: CausalSpline,
    scale: f64,
}

impl UnitSpline {
    fn new(order: Order, x_max: f64) -> Self {
        UnitSpline {
            spline: CausalSpline::new(order, x_max),
            scale: 1.0 / gamma(order.alpha() + 1.0),
        }
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        self.spline.eval(x) * self.scale
    }
}

/// Sums `(Σ_k (k + c0) B(x-k), Σ_k B(x-k))` over `k_min..=min(k_max, ⌊x⌋)`.
fn linear_parts(s: &UnitSpline, x: f64, k_min: i64, k_max: i64, c0: f64) -> (f64, f64) {
    let hi = k_max.min(x.floor() as i64);
    let mut lin = 0.0;
    let mut unit = 0.0;
    for k in k_min..=hi {
        let b = s.eval(x - k as f64);
        lin += (k as f64 + c0) * b;
        unit += b;
    }
    (lin, unit)
}

/// `Σ_{k=k_min}^{k_max} (k + c) B₊^α(x-k) / Γ(α+1)` against `x`, with
/// `c = (α+1)/2`.
pub fn reproduce_linear_ordinary(
    order: Order,
    grid: &Grid1D,
    k_min: i64,
    k_max: i64,
) -> Result<ReproductionResult, ReproductionError> {
    reproduce_linear_with_shift(order, grid, k_min, k_max, (order.alpha() + 1.0) / 2.0)
}

/// As [`reproduce_linear_ordinary`] with an explicit shift constant `c`.
pub fn reproduce_linear_with_shift(
    order: Order,
    grid: &Grid1D,
    k_min: i64,
    k_max: i64,
    c: f64,
) -> Result<ReproductionResult, ReproductionError> {
    if k_max < k_min {
        return Err(ReproductionError::PreconditionViolated(format!(
            "empty shift window [{k_min}, {k_max}]"
        )));
    }
    let s = UnitSpline::new(order, grid.end() - k_min as f64);
    let values = grid
        .points()
        .iter()
        .map(|&x| linear_parts(&s, x, k_min, k_max, c).0)
        .collect();
    let target = grid.points();
    Ok(ReproductionResult::assemble(
        *grid, values, target, None, None,
    ))
}

/// Result of scanning the shift constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftScan {
    /// Minimizer of the RMS error over the sample grid.
    pub best_c: f64,
    pub best_rms: f64,
    /// `(c, rms)` for every scanned value.
    pub table: Vec<(f64, f64)>,
}

/// Dense scan of `c` over `[c_lo, c_hi]` (`steps + 1` values) minimizing the
/// RMS error of the windowed linear sum on `grid`.
///
/// The error is affine in `c`, `e_c(x) = e_0(x) + c u(x)` with
/// `u = Σ B(x-k)`, so both parts are summed once.
pub fn scan_linear_shift(
    order: Order,
    grid: &Grid1D,
    k_min: i64,
    k_max: i64,
    c_lo: f64,
    c_hi: f64,
    steps: usize,
) -> Result<ShiftScan, ReproductionError> {
    if c_hi.is_nan() || c_lo.is_nan() || c_hi <= c_lo || steps == 0 {
        return Err(ReproductionError::PreconditionViolated(
            "scan needs c_hi > c_lo and steps >= 1".into(),
        ));
    }
    let s = UnitSpline::new(order, grid.end() - k_min as f64);
    let parts: Vec<(f64, f64)> = grid
        .points()
        .iter()
        .map(|&x| {
            let (lin, unit) = linear_parts(&s, x, k_min, k_max, 0.0);
            (lin - x, unit)
        })
        .collect();
    let n = parts.len() as f64;
    let mut table = Vec::with_capacity(steps + 1);
    let mut best = (c_lo, f64::INFINITY);
    for i in 0..=steps {
        let c = c_lo + (c_hi - c_lo) * i as f64 / steps as f64;
        let ss: f64 = parts.iter().map(|(e0, u)| (e0 + c * u).powi(2)).sum();
        let rms = (ss / n).sqrt();
        if rms < best.1 {
            best = (c, rms);
        }
        table.push((c, rms));
    }
    Ok(ShiftScan {
        best_c: best.0,
        best_rms: best.1,
        table,
    })
}

/// `Σ_{k=k_min}^{⌊x⌋} B₊^α(x-k) / Γ(α+1) - 1`.
pub fn partition_of_unity_error(order: Order, x: f64, k_min: i64) -> f64 {
    let s = UnitSpline::new(order, x - k_min as f64);
    linear_parts(&s, x, k_min, i64::MAX, 0.0).1 - 1.0
}

/// One row of [`probe_nonuniform_convergence`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub window: (i64, i64),
    /// Signed error of the linear sum at the probe point.
    pub pointwise_error: f64,
    /// Largest error over `[0, (k_max - k_min)/2]` sampled at the given step.
    pub sup_error: f64,
    pub sup_at: f64,
    /// Signed partition-of-unity error at the probe point.
    pub partition_error: f64,
}

/// Measures, for each window, the linear-reproduction error at `x_probe`
/// and its supremum over a domain growing with the window.
pub fn probe_nonuniform_convergence(
    order: Order,
    windows: &[(i64, i64)],
    x_probe: f64,
    step: f64,
) -> Result<Vec<ProbeRow>, ReproductionError> {
    let c = (order.alpha() + 1.0) / 2.0;
    let mut rows = Vec::with_capacity(windows.len());
    for &(k_min, k_max) in windows {
        if k_max < k_min {
            return Err(ReproductionError::PreconditionViolated(format!(
                "empty shift window [{k_min}, {k_max}]"
            )));
        }
        let half = ((k_max - k_min) as f64 / 2.0).max(step);
        let grid = Grid1D::inclusive(0.0, half, step)?;
        let s = UnitSpline::new(order, half.max(x_probe) - k_min as f64);
        let pointwise_error = linear_parts(&s, x_probe, k_min, k_max, c).0 - x_probe;
        let mut sup_error = 0.0f64;
        let mut sup_at = 0.0;
        for x in grid.points() {
            let e = (linear_parts(&s, x, k_min, k_max, c).0 - x).abs();
            if e > sup_error {
                sup_error = e;
                sup_at = x;
            }
        }
        let partition_error = linear_parts(&s, x_probe, k_min, k_max, 0.0).1 - 1.0;
        rows.push(ProbeRow {
            window: (k_min, k_max),
            pointwise_error,
            sup_error,
            sup_at,
            partition_error,
        });
    }
    Ok(rows)
}

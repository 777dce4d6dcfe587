use super::causal::CausalSpline;
use super::difference::forward_difference_supported;
use super::fourier::{
    fourier_causal_spline, fourier_symmetric_spline, fractional_derivative_spectral,
};
use super::{SplineError, TruncationPolicy};
use crate::grid::{FrequencyGrid, Grid1D};
use crate::report::CheckReport;
use crate::special::{gamma, Order};
use crate::Kind;

/// Numerical settings of [`check_derivative_relation_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeOptions {
    /// Internal refinement of the caller's step before the FFT.
    pub oversample: usize,
    /// Zero-padding factor of the refined samples.
    pub padding: usize,
    /// Fraction of points excluded at each end.
    pub band: f64,
    pub tolerance: f64,
}

impl Default for DerivativeOptions {
    fn default() -> Self {
        DerivativeOptions {
            oversample: 8,
            padding: 16,
            band: 0.1,
            tolerance: 1e-3,
        }
    }
}

/// `D^β B₊^α` against `Γ(α+1)/Γ(α-β+1) Δ₊^β B₊^{α-β}` with default options.
pub fn check_derivative_relation(
    alpha: Order,
    beta: f64,
    grid: &Grid1D,
    trunc: &TruncationPolicy,
) -> Result<CheckReport, SplineError> {
    check_derivative_relation_with(alpha, beta, grid, trunc, &DerivativeOptions::default())
}

/// Interior sup-difference between the spectral derivative of exact causal
/// samples and the fractional difference of the lower-order spline.
///
/// The left side is computed on the grid refined `oversample` times and read
/// back at the caller's points. The right side is a finite sum because
/// `B₊^{α-β}` vanishes for negative arguments, so `trunc` only matters for
/// reporting.
pub fn check_derivative_relation_with(
    alpha: Order,
    beta: f64,
    grid: &Grid1D,
    trunc: &TruncationPolicy,
    opts: &DerivativeOptions,
) -> Result<CheckReport, SplineError> {
    let a = alpha.alpha();
    if beta >= a + 1.0 {
        return Err(SplineError::PreconditionViolated(format!(
            "beta = {beta} must be below alpha + 1 = {}",
            a + 1.0
        )));
    }
    let lower =
        Order::new(a - beta).map_err(|e| SplineError::PreconditionViolated(e.to_string()))?;
    let os = opts.oversample.max(1);
    let fine = Grid1D::new(
        grid.start(),
        grid.step() / os as f64,
        (grid.count() - 1) * os + 1,
    )?;
    let hi = CausalSpline::new(alpha, fine.end().max(0.0));
    let samples: Vec<f64> = fine.points().iter().map(|&x| hi.eval(x)).collect();
    let lhs = fractional_derivative_spectral(&samples, &fine, beta, Kind::Causal, opts.padding)?;

    let ratio = gamma(a + 1.0) / gamma(a - beta + 1.0);
    let lo = CausalSpline::new(lower, grid.end().max(0.0));
    let mut worst = 0.0f64;
    let mut at = f64::NAN;
    for i in grid.interior(opts.band) {
        let x = grid.point(i);
        let rhs = ratio * forward_difference_supported(beta, |t| lo.eval(t), x, 0.0);
        let d = (lhs[i * os] - rhs).abs();
        if d > worst || d.is_nan() {
            worst = d;
            at = x;
        }
    }
    let _ = trunc;
    Ok(
        CheckReport::new("derivative_relation", worst, opts.tolerance)
            .at(at)
            .with("alpha", a)
            .with("beta", beta)
            .with("gamma_ratio", ratio),
    )
}

/// Largest `|B̂^{α₁} B̂^{α₂} - B̂^{α₁+α₂+1}|` over the grid, both kinds.
pub fn convolution_identity_residual(
    alpha1: Order,
    alpha2: Order,
    grid: &FrequencyGrid,
) -> CheckReport {
    let sum = Order::new(alpha1.alpha() + alpha2.alpha() + 1.0).expect("sum of valid orders");
    let mut causal = 0.0f64;
    let mut symmetric = 0.0f64;
    let mut at = 0.0;
    for &w in grid.samples() {
        let c = (fourier_causal_spline(alpha1, w) * fourier_causal_spline(alpha2, w)
            - fourier_causal_spline(sum, w))
        .norm();
        let s = (fourier_symmetric_spline(alpha1, w) * fourier_symmetric_spline(alpha2, w)
            - fourier_symmetric_spline(sum, w))
        .abs();
        if c.max(s) > causal.max(symmetric) {
            at = w;
        }
        causal = causal.max(c);
        symmetric = symmetric.max(s);
    }
    CheckReport::new("convolution_identity", causal.max(symmetric), 1e-12)
        .at(at)
        .with("causal", causal)
        .with("symmetric", symmetric)
}

/// Midpoint-rule `B₊^{α₁} * B₊^{α₂}` against `B₊^{α₁+α₂+1}` on a grid
/// starting at 0, with series normalizations aligned by
/// `Γ(α₁+1)Γ(α₂+1)/Γ(α₁+α₂+2)`. Tolerance is `step^{1+min(α₁, α₂, 1)}`,
/// the midpoint-rule rate for integrands behaving like `t^α` at the knots.
pub fn convolution_time_domain_residual(
    alpha1: Order,
    alpha2: Order,
    grid: &Grid1D,
) -> Result<CheckReport, SplineError> {
    if grid.start() != 0.0 {
        return Err(SplineError::PreconditionViolated(
            "grid must start at 0".into(),
        ));
    }
    let (a1, a2) = (alpha1.alpha(), alpha2.alpha());
    let sum = Order::new(a1 + a2 + 1.0).expect("sum of valid orders");
    let h = grid.step();
    let n = grid.count();
    let s1 = CausalSpline::new(alpha1, grid.end());
    let s2 = CausalSpline::new(alpha2, grid.end());
    let s3 = CausalSpline::new(sum, grid.end());
    let left: Vec<f64> = (0..n).map(|m| s1.eval((m as f64 + 0.5) * h)).collect();
    let ratio = gamma(a1 + 1.0) * gamma(a2 + 1.0) / gamma(a1 + a2 + 2.0);
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for i in 0..n {
        let x = grid.point(i);
        let conv: f64 = (0..i)
            .map(|m| left[m] * s2.eval(x - (m as f64 + 0.5) * h))
            .sum::<f64>()
            * h;
        let d = (conv - ratio * s3.eval(x)).abs();
        if d > worst {
            worst = d;
            at = x;
        }
    }
    let rate = 1.0 + a1.min(a2).min(1.0);
    Ok(CheckReport::new("convolution_time_domain", worst, h.powf(rate)).at(at))
}

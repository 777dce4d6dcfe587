//! Closed-form Fourier transforms (spectral normalization, value 1 at ω = 0),
//! numerical inverse transforms and FFT-based fractional derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{eval_symmetric_spline, SplineError, TruncationPolicy};
use crate::grid::Grid1D;
use crate::special::{gamma, Order};
use crate::Kind;

/// Default frequency count for numerical inverse transforms.
pub const DEFAULT_FREQUENCIES: usize = 1 << 16;

/// `sin(t)/t`.
fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// Reduces an angle to `(-π, π]`.
fn principal_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// `((1 - e^{-iω}) / (iω))^{α+1}`, principal branch; 1 at ω = 0.
///
/// Uses `(1 - e^{-iω})/(iω) = sinc(ω/2) e^{-iω/2}`, so the modulus and
/// argument are formed without cancellation.
pub fn fourier_causal_spline(order: Order, omega: f64) -> Complex64 {
    if omega == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let s = sinc(omega / 2.0);
    let mut theta = -omega / 2.0;
    if s < 0.0 {
        theta += PI;
    }
    let theta = principal_angle(theta);
    let p = order.alpha() + 1.0;
    Complex64::from_polar(s.abs().powf(p), p * theta)
}

/// `|(1 - e^{-iω}) / ω|^{α+1}`; 1 at ω = 0.
pub fn fourier_symmetric_spline(order: Order, omega: f64) -> f64 {
    if omega == 0.0 {
        return 1.0;
    }
    sinc(omega / 2.0).abs().powf(order.alpha() + 1.0)
}

/// Ratio between the series-defined symmetric spline and the inverse of
/// [`fourier_symmetric_spline`]: the transform constant of `|x|^α`, or of
/// `x^{2n} log|x|` for even integer orders.
pub fn symmetric_series_constant(order: Order) -> f64 {
    let a = order.alpha();
    if order.is_even_nonneg() {
        let n = (a / 2.0) as i32;
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        sign * PI * gamma(a + 1.0)
    } else {
        -2.0 * gamma(a + 1.0) * (PI * a / 2.0).sin()
    }
}

/// Trapezoid inverse transform of the closed form at each `x`.
///
/// Frequencies `ω_j = j dω`, `j <= n_freq`, with `dω = 2π / L` and
/// `L = 16 max(max|x|, 4)`; the cutoff is `n_freq dω`.
pub fn eval_spectral_inverse(kind: Kind, order: Order, xs: &[f64], n_freq: usize) -> Vec<f64> {
    let xmax = xs.iter().fold(4.0f64, |m, x| m.max(x.abs()));
    let dw = 2.0 * PI / (16.0 * xmax);
    let spectrum: Vec<Complex64> = (0..=n_freq)
        .map(|j| {
            let w = j as f64 * dw;
            let v = match kind {
                Kind::Causal => fourier_causal_spline(order, w),
                Kind::Symmetric => Complex64::new(fourier_symmetric_spline(order, w), 0.0),
            };
            if j == 0 || j == n_freq {
                v * 0.5
            } else {
                v
            }
        })
        .collect();
    xs.iter()
        .map(|&x| {
            // Phase by rotation recurrence, resynchronized to bound drift.
            let step = Complex64::from_polar(1.0, dw * x);
            let mut ph = Complex64::new(1.0, 0.0);
            let mut acc = 0.0;
            for (j, v) in spectrum.iter().enumerate() {
                if j % 256 == 0 {
                    ph = Complex64::from_polar(1.0, (j as f64 * dw * x).rem_euclid(2.0 * PI));
                }
                acc += (v * ph).re;
                ph *= step;
            }
            acc * dw / PI
        })
        .collect()
}

/// Spectral samples of the symmetric spline with the estimated series scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSamples {
    pub values: Vec<f64>,
    /// Least-squares factor `s` minimizing `|series - s · values|`.
    pub scale: f64,
    /// Frequency cutoff of the inverse transform.
    pub cutoff: f64,
    pub n_freq: usize,
}

/// Inverse transform of [`fourier_symmetric_spline`] on a grid symmetric about 0.
pub fn eval_symmetric_spline_spectral(
    order: Order,
    grid: &Grid1D,
    n_freq: usize,
) -> Result<SpectralSamples, SplineError> {
    if !grid.is_symmetric() {
        return Err(SplineError::PreconditionViolated(
            "grid must be symmetric about 0".into(),
        ));
    }
    if !n_freq.is_power_of_two() {
        return Err(SplineError::PreconditionViolated(
            "n_freq must be a power of two".into(),
        ));
    }
    let xs = grid.points();
    let values = eval_spectral_inverse(Kind::Symmetric, order, &xs, n_freq);
    let policy = TruncationPolicy::default();
    let (mut num, mut den) = (0.0, 0.0);
    for (x, v) in xs.iter().zip(&values) {
        let s = eval_symmetric_spline(order, *x, &policy).value;
        num += s * v;
        den += v * v;
    }
    let xmax = xs.iter().fold(4.0f64, |m, x| m.max(x.abs()));
    Ok(SpectralSamples {
        values,
        scale: num / den,
        cutoff: n_freq as f64 * 2.0 * PI / (16.0 * xmax),
        n_freq,
    })
}

/// `D^β` (causal, multiplier `(iω)^β`) or `D*^β` (symmetric, `|ω|^β`) of
/// grid samples by FFT after zero padding to `padding ×` the sample count.
///
/// `padding = 1` treats the samples as one period of a periodic function.
/// The Nyquist bin keeps the real part of the multiplier so the output is real.
pub fn fractional_derivative_spectral(
    samples: &[f64],
    grid: &Grid1D,
    beta: f64,
    kind: Kind,
    padding: usize,
) -> Result<Vec<f64>, SplineError> {
    if samples.len() != grid.count() {
        return Err(SplineError::PreconditionViolated(
            "sample count differs from grid".into(),
        ));
    }
    if padding == 0 {
        return Err(SplineError::PreconditionViolated("padding >= 1".into()));
    }
    let m = samples.len();
    let n = if padding == 1 {
        m
    } else {
        (m * padding).next_power_of_two()
    };
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(n, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let h = grid.step();
    for (j, c) in buf.iter_mut().enumerate() {
        *c *= multiplier(j, n, h, beta, kind);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    Ok(buf[..m].iter().map(|c| c.re * scale).collect())
}

fn multiplier(j: usize, n: usize, h: f64, beta: f64, kind: Kind) -> Complex64 {
    if beta == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if j == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let signed = if 2 * j <= n {
        j as f64
    } else {
        j as f64 - n as f64
    };
    let w = 2.0 * PI * signed / (n as f64 * h);
    let m = match kind {
        Kind::Symmetric => Complex64::new(w.abs().powf(beta), 0.0),
        Kind::Causal => Complex64::from_polar(w.abs().powf(beta), w.signum() * PI * beta / 2.0),
    };
    if 2 * j == n {
        Complex64::new(m.re, 0.0)
    } else {
        m
    }
}

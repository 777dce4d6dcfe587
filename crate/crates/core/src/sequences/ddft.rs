use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{CoefficientSequence, SequenceError, Support, TailShape};
use crate::grid::FrequencyGrid;
use crate::special::Order;

/// `e^{-ikω}` with the phase reduced modulo 2π before evaluation.
fn phase(k: i64, omega: f64) -> Complex64 {
    let t = ((k as f64) * omega) % TAU;
    let (s, c) = t.sin_cos();
    Complex64::new(c, -s)
}

fn direct(values: &[f64], lo: i64, omegas: &[f64]) -> Vec<Complex64> {
    omegas
        .iter()
        .map(|&w| {
            if w == 0.0 {
                return Complex64::new(values.iter().sum(), 0.0);
            }
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, &v)| v * phase(lo + i as i64, w))
                .sum()
        })
        .collect()
}

/// Folds the window modulo `n` and evaluates all `2πj/n` bins with one FFT.
fn folded_fft(values: &[f64], lo: i64, n: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, &v) in values.iter().enumerate() {
        let idx = (lo + i as i64).rem_euclid(n as i64) as usize;
        buf[idx].re += v;
    }
    let fft = FftPlanner::new().plan_fft_forward(n);
    fft.process(&mut buf);
    buf
}

fn transform(values: &[f64], lo: i64, grid: &FrequencyGrid) -> Vec<Complex64> {
    if grid.is_uniform() && grid.count() >= 16 {
        folded_fft(values, lo, grid.count())
    } else {
        direct(values, lo, grid.samples())
    }
}

fn check_window(window: (i64, i64)) -> Result<(), SequenceError> {
    if window.1 < window.0 {
        return Err(SequenceError::EmptyWindow(window.0, window.1));
    }
    Ok(())
}

/// Truncated transform `Σ_{k=k_min}^{k_max} c_k e^{-ikω}` on every grid frequency.
pub fn ddft(
    seq: &CoefficientSequence,
    grid: &FrequencyGrid,
    window: (i64, i64),
) -> Result<Vec<Complex64>, SequenceError> {
    check_window(window)?;
    let values = seq.materialize(window.0, window.1);
    Ok(transform(&values, window.0, grid))
}

/// `Σ_{k≥m} g_k w^k` by repeated summation by parts:
/// `w^m/(1-w) Σ_n (w/(1-w))^n Δ^n g_m`.
fn tail_sum(g: &dyn Fn(i64) -> f64, m: i64, w: Complex64, orders: usize) -> Complex64 {
    let mut diffs: Vec<f64> = (0..=orders as i64).map(|i| g(m + i)).collect();
    let one = Complex64::new(1.0, 0.0);
    let r = w / (one - w);
    let t = ((m as f64) * w.arg()) % TAU;
    let wm = Complex64::from_polar(w.norm().powf(m as f64), t);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut rn = one;
    for n in 0..=orders {
        acc += rn * diffs[0];
        rn *= r;
        for i in 0..diffs.len() - 1 - n {
            diffs[i] = diffs[i + 1] - diffs[i];
        }
    }
    wm / (one - w) * acc
}

/// Windowed transform plus summation-by-parts estimates of both tails.
///
/// The tails are summed in the Abel sense, so polynomially growing sequences
/// (symmetric reproduction coefficients) get their distributional transform
/// away from the singular frequency. `orders` finite differences are used.
pub fn ddft_tail_corrected(
    seq: &CoefficientSequence,
    grid: &FrequencyGrid,
    window: (i64, i64),
    orders: usize,
) -> Result<Vec<Complex64>, SequenceError> {
    let mut out = ddft(seq, grid, window)?;
    let s = match seq.tail() {
        TailShape::Finite => return Ok(out),
        TailShape::Smooth => 1.0,
        TailShape::Alternating => -1.0,
    };
    let sgn = |k: i64| if k.rem_euclid(2) == 0 { 1.0 } else { s };
    for (o, &omega) in out.iter_mut().zip(grid.samples()) {
        let z = Complex64::from_polar(1.0, -omega);
        let right = |k: i64| sgn(k) * seq.coeff(k);
        *o += tail_sum(&right, window.1 + 1, s * z, orders);
        if seq.support() == Support::AllIntegers {
            let left = |j: i64| sgn(j) * seq.coeff(-j);
            *o += tail_sum(&left, 1 - window.0, s * z.conj(), orders);
        }
    }
    Ok(out)
}

/// Determinant `â(ω) b̂(ω+π) − â(ω+π) b̂(ω)` over a frequency grid.
#[derive(Debug, Clone)]
pub struct DetReport {
    pub min_abs: f64,
    pub argmin: f64,
    pub values: Vec<Complex64>,
}

impl DetReport {
    /// Determinant at the first grid frequency (ω = 0 for uniform grids).
    pub fn first(&self) -> Complex64 {
        self.values[0]
    }
}

pub fn det_condition(
    a: &CoefficientSequence,
    b: &CoefficientSequence,
    grid: &FrequencyGrid,
    window: (i64, i64),
) -> Result<DetReport, SequenceError> {
    check_window(window)?;
    let av = a.materialize(window.0, window.1);
    let bv = b.materialize(window.0, window.1);
    let n = grid.count();
    let (a0, b0, a1, b1) = if grid.is_uniform() && n.is_multiple_of(2) && n >= 16 {
        let fa = folded_fft(&av, window.0, n);
        let fb = folded_fft(&bv, window.0, n);
        let sh = |f: &Vec<Complex64>| (0..n).map(|j| f[(j + n / 2) % n]).collect::<Vec<_>>();
        let (sa, sb) = (sh(&fa), sh(&fb));
        (fa, fb, sa, sb)
    } else {
        let shifted: Vec<f64> = grid.samples().iter().map(|w| (w + PI) % TAU).collect();
        (
            direct(&av, window.0, grid.samples()),
            direct(&bv, window.0, grid.samples()),
            direct(&av, window.0, &shifted),
            direct(&bv, window.0, &shifted),
        )
    };
    let values: Vec<Complex64> = (0..n).map(|j| a0[j] * b1[j] - a1[j] * b0[j]).collect();
    let (mut min_abs, mut argmin) = (f64::INFINITY, 0.0);
    for (j, d) in values.iter().enumerate() {
        if d.norm() < min_abs {
            min_abs = d.norm();
            argmin = grid.samples()[j];
        }
    }
    Ok(DetReport {
        min_abs,
        argmin,
        values,
    })
}

/// Causal mask symbol `((1 + e^{-iω})/2)^{α+1}`, principal branch.
pub fn causal_mask_symbol(order: Order, omega: f64) -> Complex64 {
    let z = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -omega)) / 2.0;
    if z.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    z.powf(order.alpha() + 1.0)
}

/// Determinant of the causal mask against its normalized detail mask,
/// `â(ω)² − â(ω+π)²` from the closed-form symbol.
pub fn causal_det_closed_form(order: Order, omega: f64) -> Complex64 {
    let a0 = causal_mask_symbol(order, omega);
    let a1 = causal_mask_symbol(order, omega + PI);
    a0 * a0 - a1 * a1
}

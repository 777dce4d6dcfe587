//! Reproduction of causal and symmetric fractional monomials from integer
//! shifts of B-splines, in one and two dimensions.

mod factorized;
mod linear;
mod twod;

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub use factorized::reproduce_even_symmetric_factorized;
pub use linear::{
    partition_of_unity_error, probe_nonuniform_convergence, reproduce_linear_ordinary,
    reproduce_linear_with_shift, scan_linear_shift, ProbeRow, ShiftScan,
};
pub use twod::{
    eval_2d_spline, reproduce_2d, reproduce_2d_quadrant, QuadrantMode, ReproductionResult2D,
};

use crate::grid::{Grid1D, GridError};
use crate::sequences::{
    reproduction_coeffs_causal, reproduction_coeffs_symmetric, solve_weak_strang_fix_symmetric,
    symmetric_detail_mask, CoefficientSequence, SequenceError,
};
use crate::special::Order;
use crate::splines::{
    causal_monomial, CausalSpline, FractionalSpline, SplineError, SymmetricSpline,
};
use crate::Kind;

/// Tikhonov parameter for the symmetric solver route.
pub const SOLVER_REGULARIZATION: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReproductionError {
    #[error("invalid split ({beta1}, {beta2}) for order {alpha}: need beta1 + beta2 = -(alpha + 1) and no odd negative integer part")]
    InvalidSplit { beta1: f64, beta2: f64, alpha: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Function being reproduced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// `x₊^α`.
    Causal(Order),
    /// `|x|^α`, or `x^α log|x|` for even integer `α`.
    Symmetric(Order),
    /// `x`.
    Linear,
}

impl Target {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Target::Causal(o) => causal_monomial(*o, x),
            Target::Symmetric(o) => symmetric_target(*o, x),
            Target::Linear => x,
        }
    }
}

fn symmetric_target(order: Order, x: f64) -> f64 {
    let a = order.alpha();
    if order.is_even_nonneg() {
        if x == 0.0 {
            return if a == 0.0 { f64::NEG_INFINITY } else { 0.0 };
        }
        x.abs().powf(a) * x.abs().ln()
    } else if x == 0.0 {
        if a > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        x.abs().powf(a)
    }
}

/// Pairing of a spline with its reproduction coefficients over a shift window.
#[derive(Debug, Clone)]
pub struct ReproductionPlan {
    pub spline: FractionalSpline,
    pub coeffs: CoefficientSequence,
    /// Causal plans use `[0, ⌊x⌋]` per point; symmetric plans `round(x) ± half_width`.
    pub shift_window: (i64, i64),
    pub target: Target,
    /// Set when the coefficients come from the even solver.
    pub condition_estimate: Option<f64>,
}

impl ReproductionPlan {
    /// Exact causal plan for a domain ending at `x_max`.
    pub fn causal(order: Order, x_max: f64) -> Self {
        ReproductionPlan {
            spline: FractionalSpline::standard(Kind::Causal, order),
            coeffs: reproduction_coeffs_causal(order),
            shift_window: (0, x_max.max(0.0).floor() as i64),
            target: Target::Causal(order),
            condition_estimate: None,
        }
    }

    /// Symmetric plan with closed-form or solver coefficients.
    pub fn symmetric(
        order: Order,
        half_width: usize,
        x_reach: f64,
    ) -> Result<Self, ReproductionError> {
        let h = half_width as i64;
        let reach = x_reach.abs().ceil() as i64;
        let (coeffs, condition_estimate) =
            symmetric_coefficients(order, half_width + reach as usize + 1)?;
        Ok(ReproductionPlan {
            spline: FractionalSpline::standard(Kind::Symmetric, order),
            coeffs,
            shift_window: (-h, h),
            target: Target::Symmetric(order),
            condition_estimate,
        })
    }
}

/// Truncation metadata of a symmetric reproduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub half_width: usize,
    /// `max_x |S_H(x) - S_{H/2}(x)|`, an estimate of the neglected tail.
    pub tail_bound: f64,
    /// `(half_width, max error)` for the partial sums along the way.
    pub checkpoints: Vec<(usize, f64)>,
    /// `log₂ (e(H/2) / e(H))`; about 1 for the expected `1/H` decay.
    pub slope: Option<f64>,
    /// Condition estimate of the solver, when the solver supplied the coefficients.
    pub condition_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionResult {
    pub grid: Grid1D,
    pub target: Vec<f64>,
    pub values: Vec<f64>,
    /// Pointwise absolute error (after alignment when `aligned`).
    pub error: Vec<f64>,
    /// Maximum of `error` outside `excluded`.
    pub max_error: f64,
    pub max_error_at: f64,
    /// Indices left out of `max_error`: off-lattice points within one step
    /// of the monomial's kink at 0, points with a non-finite target, and
    /// integer knots where a negative-order spline is infinite.
    pub excluded: Vec<usize>,
    /// True when the error is measured modulo the even polynomials `x^{2j}`,
    /// `2j <= α`, that the truncated solver solution may add.
    pub aligned: bool,
    pub truncation: Option<Truncation>,
    /// Free-form flags, e.g. known slow convergence.
    pub notes: Vec<String>,
}

impl ReproductionResult {
    fn assemble(
        grid: Grid1D,
        values: Vec<f64>,
        target: Vec<f64>,
        align_degree: Option<usize>,
        truncation: Option<Truncation>,
    ) -> Self {
        let excluded = exclusions(&grid, &target, &values);
        let resid: Vec<f64> = values.iter().zip(&target).map(|(v, t)| v - t).collect();
        let resid = match align_degree {
            Some(d) => remove_even_fit(&grid, &resid, &excluded, d),
            None => resid,
        };
        let error: Vec<f64> = resid.iter().map(|r| r.abs()).collect();
        let (max_error, max_error_at) = max_over(&grid, &error, &excluded);
        ReproductionResult {
            grid,
            target,
            values,
            error,
            max_error,
            max_error_at,
            excluded,
            aligned: align_degree.is_some(),
            truncation,
            notes: Vec::new(),
        }
    }

    /// Error at the grid point nearest `x`.
    pub fn error_near(&self, x: f64) -> f64 {
        let i = ((x - self.grid.start()) / self.grid.step()).round();
        let i = (i.max(0.0) as usize).min(self.grid.count() - 1);
        self.error[i]
    }
}

fn exclusions(grid: &Grid1D, target: &[f64], values: &[f64]) -> Vec<usize> {
    let h = grid.step();
    (0..grid.count())
        .filter(|&i| {
            let x = grid.point(i);
            // Negative orders make every spline singular at its knots.
            let singular_knot = !values[i].is_finite() && x == x.round();
            !target[i].is_finite() || (x != 0.0 && x.abs() < h) || singular_knot
        })
        .collect()
}

fn max_over(grid: &Grid1D, error: &[f64], excluded: &[usize]) -> (f64, f64) {
    let mut worst = 0.0f64;
    let mut at = f64::NAN;
    for (i, e) in error.iter().enumerate() {
        if excluded.binary_search(&i).is_ok() {
            continue;
        }
        if *e > worst || e.is_nan() {
            worst = *e;
            at = grid.point(i);
            if e.is_nan() {
                break;
            }
        }
    }
    (worst, at)
}

/// Subtracts the least-squares fit by `x^0, x^2, …, x^{2⌊d/2⌋}`.
fn remove_even_fit(grid: &Grid1D, resid: &[f64], excluded: &[usize], degree: usize) -> Vec<f64> {
    let powers: Vec<i32> = (0..=degree / 2).map(|j| 2 * j as i32).collect();
    let rows: Vec<usize> = (0..grid.count())
        .filter(|i| excluded.binary_search(i).is_err())
        .collect();
    if rows.len() < powers.len() {
        return resid.to_vec();
    }
    let m = DMatrix::from_fn(rows.len(), powers.len(), |r, c| {
        grid.point(rows[r]).powi(powers[c])
    });
    let v = DVector::from_iterator(rows.len(), rows.iter().map(|&i| resid[i]));
    let coef = m.svd(true, true).solve(&v, 1e-14).expect("least squares");
    (0..grid.count())
        .map(|i| {
            let x = grid.point(i);
            let fit: f64 = powers
                .iter()
                .zip(coef.iter())
                .map(|(p, c)| c * x.powi(*p))
                .sum();
            resid[i] - fit
        })
        .collect()
}

/// Closed-form symmetric coefficients, or the even solver solution on
/// `|k| <= solver_half_width` for integer orders together with its
/// condition estimate.
pub fn symmetric_coefficients(
    order: Order,
    solver_half_width: usize,
) -> Result<(CoefficientSequence, Option<f64>), ReproductionError> {
    match reproduction_coeffs_symmetric(order) {
        Ok(p) => Ok((p, None)),
        Err(SequenceError::ClosedFormUnavailable(_)) => {
            let b = symmetric_detail_mask(order, false);
            let sol =
                solve_weak_strang_fix_symmetric(&b, solver_half_width, SOLVER_REGULARIZATION)?;
            Ok((sol.to_sequence(), Some(sol.condition_estimate)))
        }
        Err(e) => Err(e.into()),
    }
}

/// Values of `f(x_i - k)` memoized on the lattice `nh` when the grid start and
/// `1` are both multiples of the step; otherwise evaluated directly.
pub(crate) struct ShiftCache<F: Fn(f64) -> f64> {
    f: F,
    grid: Grid1D,
    lattice: Option<(i64, i64)>,
    memo: HashMap<i64, f64>,
}

impl<F: Fn(f64) -> f64> ShiftCache<F> {
    pub(crate) fn new(grid: &Grid1D, f: F) -> Self {
        let h = grid.step();
        let m = (1.0 / h).round();
        let n0 = (grid.start() / h).round();
        let lattice = if m >= 1.0
            && (m * h - 1.0).abs() < 1e-12
            && (n0 * h - grid.start()).abs() < 1e-9 * h
        {
            Some((n0 as i64, m as i64))
        } else {
            None
        };
        ShiftCache {
            f,
            grid: *grid,
            lattice,
            memo: HashMap::new(),
        }
    }

    #[inline]
    pub(crate) fn at(&mut self, i: usize, k: i64) -> f64 {
        match self.lattice {
            Some((n0, m)) => {
                let n = n0 + i as i64 - k * m;
                let h = self.grid.step();
                let f = &self.f;
                *self.memo.entry(n).or_insert_with(|| f(n as f64 * h))
            }
            None => (self.f)(self.grid.point(i) - k as f64),
        }
    }
}

/// `Σ_{k ∈ window} p_k B^α(x - k)` on the grid, with `p` the coefficients of
/// `Δ^{-α-1}`.
///
/// Causal windows are clipped to `[0, ⌊x⌋]` per point, where the sum is exact.
/// Symmetric orders need the closed-form coefficients.
pub fn inverse_difference_apply(
    order: Order,
    kind: Kind,
    grid: &Grid1D,
    window: (i64, i64),
) -> Result<Vec<f64>, ReproductionError> {
    if window.1 < window.0 {
        return Err(SequenceError::EmptyWindow(window.0, window.1).into());
    }
    match kind {
        Kind::Causal => {
            let spline = CausalSpline::new(order, grid.end().max(0.0) - window.0.min(0) as f64);
            let p = reproduction_coeffs_causal(order);
            let lo = window.0.max(0);
            Ok(grid
                .points()
                .iter()
                .map(|&x| {
                    let hi = window.1.min(x.floor() as i64);
                    let mut acc = 0.0;
                    for k in lo..=hi {
                        acc += p.coeff(k) * spline.eval(x - k as f64);
                    }
                    acc
                })
                .collect())
        }
        Kind::Symmetric => {
            let p = reproduction_coeffs_symmetric(order)?;
            let pv = p.materialize(window.0, window.1);
            let s = SymmetricSpline::new(order);
            let mut cache = ShiftCache::new(grid, |y| s.eval(y));
            Ok((0..grid.count())
                .map(|i| {
                    let mut acc = 0.0;
                    for (j, k) in (window.0..=window.1).enumerate() {
                        acc += pv[j] * cache.at(i, k);
                    }
                    acc
                })
                .collect())
        }
    }
}

/// `Σ_{k=0}^{⌊x⌋} binom(k+α, k) B₊^α(x-k)`, exact up to roundoff.
pub fn reproduce_causal(
    order: Order,
    grid: &Grid1D,
) -> Result<ReproductionResult, ReproductionError> {
    if grid.start() < 0.0 {
        return Err(ReproductionError::PreconditionViolated(
            "causal reproduction needs grid start >= 0".into(),
        ));
    }
    let values =
        inverse_difference_apply(order, Kind::Causal, grid, (0, grid.end().floor() as i64))?;
    let target = grid
        .points()
        .iter()
        .map(|&x| causal_monomial(order, x))
        .collect();
    Ok(ReproductionResult::assemble(
        *grid, values, target, None, None,
    ))
}

fn checkpoints(h: usize) -> Vec<usize> {
    let mut c: Vec<usize> = [h / 4, h / 2, h].into_iter().filter(|&v| v >= 1).collect();
    c.dedup();
    c
}

/// Two-sided sum `Σ_{|j| <= H} p_{c+j} B*^α(x - c - j)`, `c = round(x)`.
///
/// Terms are added in `(c+j, c-j)` pairs so mirrored grid points give
/// bitwise mirrored sums. Integer orders take their coefficients from the
/// even solver and report the error modulo the even polynomials of degree
/// at most `α`.
pub fn reproduce_symmetric(
    order: Order,
    grid: &Grid1D,
    half_width: usize,
) -> Result<ReproductionResult, ReproductionError> {
    let x_reach = grid.start().abs().max(grid.end().abs());
    let plan = ReproductionPlan::symmetric(order, half_width, x_reach)?;
    let integer = order.is_integer();
    let p = &plan.coeffs;
    let s = SymmetricSpline::new(order);
    let mut cache = ShiftCache::new(grid, |y| s.eval(y));
    let marks = checkpoints(half_width);
    let n = grid.count();
    let mut partial = vec![vec![0.0; n]; marks.len()];
    let mut values = vec![0.0; n];
    let h = half_width as i64;
    for i in 0..n {
        let c = grid.point(i).round() as i64;
        let mut acc = p.coeff(c) * cache.at(i, c);
        let mut next = 0;
        for j in 1..=h {
            acc += p.coeff(c + j) * cache.at(i, c + j) + p.coeff(c - j) * cache.at(i, c - j);
            if next < marks.len() && j as usize == marks[next] {
                partial[next][i] = acc;
                next += 1;
            }
        }
        values[i] = acc;
    }
    let target: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| symmetric_target(order, x))
        .collect();
    let align = if integer {
        Some(order.alpha() as usize)
    } else {
        None
    };
    let mut cps = Vec::with_capacity(marks.len());
    for (m, vals) in marks.iter().zip(&partial) {
        let r = ReproductionResult::assemble(*grid, vals.clone(), target.clone(), align, None);
        cps.push((*m, r.max_error));
    }
    let slope = if cps.len() >= 2 {
        let (e1, e2) = (cps[cps.len() - 2].1, cps[cps.len() - 1].1);
        (e1 > 0.0 && e2 > 0.0).then(|| (e1 / e2).log2())
    } else {
        None
    };
    let tail_bound = if marks.len() >= 2 {
        let half = &partial[marks.len() - 2];
        values
            .iter()
            .zip(half)
            .map(|(a, b)| (a - b).abs())
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let truncation = Truncation {
        half_width,
        tail_bound,
        checkpoints: cps,
        slope,
        condition_estimate: plan.condition_estimate,
    };
    Ok(ReproductionResult::assemble(
        *grid,
        values,
        target,
        align,
        Some(truncation),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn causal_examples() {
        let g = Grid1D::inclusive(0.0, 4.0, 0.25).unwrap();
        let r = reproduce_causal(ord(0.5), &g).unwrap();
        assert!(r.max_error <= 1e-10, "{}", r.max_error);
        let i = 10;
        assert_eq!(g.point(i), 2.5);
        assert!((r.values[i] - 2.5f64.sqrt()).abs() <= 1e-10);
        let g = Grid1D::inclusive(0.0, 8.0, 0.01).unwrap();
        assert!(reproduce_causal(ord(1.0), &g).unwrap().max_error <= 1e-10);
        assert!(reproduce_causal(ord(0.3), &Grid1D::inclusive(-1.0, 1.0, 0.5).unwrap()).is_err());
    }

    #[test]
    fn causal_unit_interval_is_single_term() {
        let g = Grid1D::half_open(0.0, 1.0, 0.125).unwrap();
        let r = reproduce_causal(ord(0.37), &g).unwrap();
        for (x, v) in g.points().iter().zip(&r.values) {
            assert_eq!(*v, x.powf(0.37));
        }
    }

    #[test]
    fn window_extension_changes_nothing() {
        let g = Grid1D::inclusive(0.0, 5.0, 0.1).unwrap();
        let a = inverse_difference_apply(ord(0.6), Kind::Causal, &g, (0, 5)).unwrap();
        let b = inverse_difference_apply(ord(0.6), Kind::Causal, &g, (0, 50)).unwrap();
        assert_eq!(a, b);
        let r = reproduce_causal(ord(0.6), &g).unwrap();
        assert_eq!(a, r.values);
    }

    #[test]
    fn symmetric_half_order() {
        let g = Grid1D::inclusive(-4.0, 4.0, 0.1).unwrap();
        let r = reproduce_symmetric(ord(0.5), &g, 50).unwrap();
        assert!(r.max_error < 1e-2, "{}", r.max_error);
        let n = g.count();
        for i in 0..n {
            assert_eq!(r.values[i].to_bits(), r.values[n - 1 - i].to_bits());
        }
        let t = r.truncation.unwrap();
        assert!(t.slope.unwrap() > 0.5);
    }

    #[test]
    fn hat_reproduces_abs_up_to_constant() {
        let g = Grid1D::inclusive(-3.0, 3.0, 0.25).unwrap();
        let r = reproduce_symmetric(ord(1.0), &g, 20).unwrap();
        assert!(r.aligned);
        // Residual bias from the Tikhonov term only.
        assert!(r.max_error < 1e-6, "{}", r.max_error);
    }
}

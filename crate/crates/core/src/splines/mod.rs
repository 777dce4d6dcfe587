//! Fractional monomials, finite differences, causal and symmetric B-spline
//! evaluation, closed-form Fourier transforms and spectral derivatives.

mod causal;
mod checks;
mod difference;
mod fourier;
mod monomial;
mod symmetric;

use thiserror::Error;

pub use causal::{eval_causal_spline, CausalSpline};
pub use checks::{
    check_derivative_relation, check_derivative_relation_with, convolution_identity_residual,
    convolution_time_domain_residual, DerivativeOptions,
};
pub use difference::{
    forward_difference, forward_difference_supported, symmetric_difference, DifferenceValue,
};
pub use fourier::{
    eval_spectral_inverse, eval_symmetric_spline_spectral, fourier_causal_spline,
    fourier_symmetric_spline, fractional_derivative_spectral, symmetric_series_constant,
    SpectralSamples,
};
pub use monomial::{causal_monomial, symmetric_monomial};
pub use symmetric::{eval_symmetric_spline, eval_symmetric_spline_raw, SymmetricSpline};

use crate::grid::{Grid1D, GridError};
use crate::special::Order;
use crate::Kind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplineError {
    #[error("symmetric monomial of order 0 is log|x|, undefined at x = 0")]
    Domain,
    #[error("exact finite sums need a causal spline or an odd nonnegative integer order, got alpha = {0}")]
    StrategyNotExact(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// How a [`FractionalSpline`] is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    ExactFiniteSum,
    TruncatedSeries,
    SpectralGrid,
}

/// Truncation controls for infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Minimum half-width `K` of explicitly summed terms.
    pub max_terms: usize,
    /// Target bound on the neglected tail.
    pub tail_tolerance: f64,
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, tail_tolerance: f64) -> Result<Self, SplineError> {
        if max_terms < 1 || tail_tolerance.is_nan() || tail_tolerance <= 0.0 {
            return Err(SplineError::PreconditionViolated(
                "max_terms >= 1 and tail_tolerance > 0".into(),
            ));
        }
        Ok(TruncationPolicy {
            max_terms,
            tail_tolerance,
        })
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_terms: 64,
            tail_tolerance: 1e-12,
        }
    }
}

/// Spline value together with the truncation metadata of its evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineValue {
    pub value: f64,
    /// Estimated bound on the neglected tail; `None` for exact finite sums.
    pub tail_bound: Option<f64>,
    /// Half-width of the explicitly summed window (0 for exact sums).
    pub terms: usize,
}

impl SplineValue {
    pub fn exact(value: f64) -> Self {
        SplineValue {
            value,
            tail_bound: None,
            terms: 0,
        }
    }
}

/// A causal or symmetric fractional B-spline with its evaluation strategy.
#[derive(Debug, Clone)]
pub struct FractionalSpline {
    kind: Kind,
    order: Order,
    strategy: Strategy,
    truncation: TruncationPolicy,
}

impl FractionalSpline {
    pub fn new(
        kind: Kind,
        order: Order,
        strategy: Strategy,
        truncation: TruncationPolicy,
    ) -> Result<Self, SplineError> {
        if kind == Kind::Symmetric && strategy == Strategy::ExactFiniteSum && !order.is_odd_nonneg()
        {
            return Err(SplineError::StrategyNotExact(order.alpha()));
        }
        Ok(FractionalSpline {
            kind,
            order,
            strategy,
            truncation,
        })
    }

    /// Series-normalized spline with the natural strategy for its kind.
    pub fn standard(kind: Kind, order: Order) -> Self {
        let strategy = match kind {
            Kind::Causal => Strategy::ExactFiniteSum,
            Kind::Symmetric if order.is_odd_nonneg() => Strategy::ExactFiniteSum,
            Kind::Symmetric => Strategy::TruncatedSeries,
        };
        FractionalSpline {
            kind,
            order,
            strategy,
            truncation: TruncationPolicy::default(),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn truncation(&self) -> TruncationPolicy {
        self.truncation
    }

    /// Value at `x`. Series strategies use the series normalization; the
    /// spectral strategy returns the inverse transform of the closed-form
    /// Fourier transform, i.e. the normalization with transform 1 at ω = 0.
    pub fn eval(&self, x: f64) -> SplineValue {
        match (self.kind, self.strategy) {
            (Kind::Causal, Strategy::SpectralGrid) | (Kind::Symmetric, Strategy::SpectralGrid) => {
                let v = eval_spectral_inverse(
                    self.kind,
                    self.order,
                    &[x],
                    fourier::DEFAULT_FREQUENCIES,
                );
                SplineValue {
                    value: v[0],
                    tail_bound: None,
                    terms: fourier::DEFAULT_FREQUENCIES,
                }
            }
            (Kind::Causal, _) => SplineValue::exact(eval_causal_spline(self.order, x)),
            (Kind::Symmetric, _) => eval_symmetric_spline(self.order, x, &self.truncation),
        }
    }

    pub fn eval_grid(&self, grid: &Grid1D) -> Vec<SplineValue> {
        match self.strategy {
            Strategy::SpectralGrid => {
                let xs = grid.points();
                eval_spectral_inverse(self.kind, self.order, &xs, fourier::DEFAULT_FREQUENCIES)
                    .into_iter()
                    .map(|v| SplineValue {
                        value: v,
                        tail_bound: None,
                        terms: fourier::DEFAULT_FREQUENCIES,
                    })
                    .collect()
            }
            _ => match self.kind {
                Kind::Causal => {
                    let s = CausalSpline::new(self.order, grid.end().max(0.0));
                    grid.points()
                        .into_iter()
                        .map(|x| SplineValue::exact(s.eval(x)))
                        .collect()
                }
                Kind::Symmetric => {
                    let s = SymmetricSpline::new(self.order);
                    grid.points()
                        .into_iter()
                        .map(|x| s.eval_with(x, &self.truncation))
                        .collect()
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_invariants() {
        let half = Order::new(0.5).unwrap();
        let one = Order::new(1.0).unwrap();
        let p = TruncationPolicy::default();
        assert!(FractionalSpline::new(Kind::Symmetric, half, Strategy::ExactFiniteSum, p).is_err());
        assert!(FractionalSpline::new(Kind::Symmetric, one, Strategy::ExactFiniteSum, p).is_ok());
        assert!(FractionalSpline::new(Kind::Causal, half, Strategy::ExactFiniteSum, p).is_ok());
        assert!(TruncationPolicy::new(0, 1e-3).is_err());
        assert!(TruncationPolicy::new(4, 0.0).is_err());
    }

    #[test]
    fn causal_zero_left_of_support() {
        let s = FractionalSpline::standard(Kind::Causal, Order::new(0.3).unwrap());
        assert_eq!(s.eval(-1e-9).value, 0.0);
        assert_eq!(s.eval(-5.0).value, 0.0);
    }
}

//! Integer-indexed coefficient sequences: masks, detail masks, reproduction
//! coefficients, discrete Fourier transforms, convolution and the
//! deconvolution solvers for `b ⊛ p = δ`.

mod ddft;
mod solve;

use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

pub use ddft::{
    causal_det_closed_form, causal_mask_symbol, ddft, ddft_tail_corrected, det_condition, DetReport,
};
pub use solve::{
    check_delta, discrete_convolution, solve_weak_strang_fix_causal,
    solve_weak_strang_fix_symmetric, SymmetricSolution,
};

use crate::special::{gen_binomial, symmetric_binomial, BinomialValue, Order};
use crate::Kind;

/// Default inner window used when a two-sided convolution has no finite operand.
pub const DEFAULT_INNER_HALF_WIDTH: i64 = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("coefficient {index} is infinite for order {alpha}")]
    InfiniteCoefficient { alpha: f64, index: i64 },
    #[error("closed-form symmetric reproduction coefficients unavailable for alpha = {0}")]
    ClosedFormUnavailable(f64),
    #[error("singular triangular system: |b_0| = {0:e}")]
    SingularSystem(f64),
    #[error("sequence must be even with support on all integers")]
    NotEven,
    #[error("convolution of two infinitely supported sequences needs an explicit inner window")]
    UnboundedConvolution,
    #[error("empty window [{0}, {1}]")]
    EmptyWindow(i64, i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    NonnegativeOnly,
    AllIntegers,
}

/// Large-|k| sign pattern, used by tail-corrected transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailShape {
    /// Zero outside a finite extent.
    Finite,
    /// Eventually of one sign with smoothly varying magnitude.
    Smooth,
    /// `(-1)^k` times a smooth sequence.
    Alternating,
}

struct Window {
    lo: i64,
    values: Vec<f64>,
}

type Generator = dyn Fn(i64) -> f64 + Send + Sync;

/// Deterministic integer-indexed real sequence with a materialization cache.
#[derive(Clone)]
pub struct CoefficientSequence {
    support: Support,
    extent: Option<(i64, i64)>,
    tail: TailShape,
    even: bool,
    generator: Arc<Generator>,
    cache: Arc<RwLock<Window>>,
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSequence")
            .field("support", &self.support)
            .field("extent", &self.extent)
            .field("tail", &self.tail)
            .field("even", &self.even)
            .finish()
    }
}

impl CoefficientSequence {
    pub fn from_fn(
        support: Support,
        tail: TailShape,
        f: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CoefficientSequence {
            support,
            extent: None,
            tail,
            even: false,
            generator: Arc::new(f),
            cache: Arc::new(RwLock::new(Window {
                lo: 0,
                values: Vec::new(),
            })),
        }
    }

    /// Even sequence on all integers built from its values at `|k|`.
    pub fn even_from_fn(tail: TailShape, f: impl Fn(i64) -> f64 + Send + Sync + 'static) -> Self {
        let mut s = Self::from_fn(Support::AllIntegers, tail, move |k| f(k.abs()));
        s.even = true;
        s
    }

    /// Finitely supported sequence with `values[i]` at index `offset + i`.
    pub fn finite(offset: i64, values: Vec<f64>) -> Self {
        let support = if offset >= 0 {
            Support::NonnegativeOnly
        } else {
            Support::AllIntegers
        };
        let hi = offset + values.len() as i64 - 1;
        let stored = values.clone();
        let mut s = Self::from_fn(support, TailShape::Finite, move |k| {
            if k < offset || k > hi {
                0.0
            } else {
                stored[(k - offset) as usize]
            }
        });
        s.extent = Some((offset, hi.max(offset)));
        s.even = (0..values.len() as i64).all(|i| {
            let k = offset + i;
            let m = -k;
            let mirror = if m < offset || m > hi {
                0.0
            } else {
                values[(m - offset) as usize]
            };
            mirror == values[i as usize]
        });
        s
    }

    /// Kronecker delta at index 0.
    pub fn delta() -> Self {
        Self::finite(0, vec![1.0])
    }

    /// Restricts the effective support to `[lo, hi]`.
    pub fn with_extent(mut self, lo: i64, hi: i64) -> Self {
        self.extent = Some((lo, hi));
        self.tail = TailShape::Finite;
        self
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn extent(&self) -> Option<(i64, i64)> {
        self.extent
    }

    pub fn tail(&self) -> TailShape {
        self.tail
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    fn outside(&self, k: i64) -> bool {
        if self.support == Support::NonnegativeOnly && k < 0 {
            return true;
        }
        matches!(self.extent, Some((lo, hi)) if k < lo || k > hi)
    }

    pub fn coeff(&self, k: i64) -> f64 {
        if self.outside(k) {
            return 0.0;
        }
        {
            let w = self.cache.read().expect("cache lock");
            let i = k - w.lo;
            if i >= 0 && (i as usize) < w.values.len() {
                return w.values[i as usize];
            }
        }
        (self.generator)(k)
    }

    /// Values on `[lo, hi]`, caching the covering window.
    pub fn materialize(&self, lo: i64, hi: i64) -> Vec<f64> {
        if hi < lo {
            return Vec::new();
        }
        {
            let w = self.cache.read().expect("cache lock");
            let wl = w.lo;
            let wh = w.lo + w.values.len() as i64 - 1;
            if !w.values.is_empty() && lo >= wl && hi <= wh {
                return w.values[(lo - wl) as usize..=(hi - wl) as usize].to_vec();
            }
        }
        let mut w = self.cache.write().expect("cache lock");
        let (nl, nh) = if w.values.is_empty() {
            (lo, hi)
        } else {
            (lo.min(w.lo), hi.max(w.lo + w.values.len() as i64 - 1))
        };
        let old_lo = w.lo;
        let old_len = w.values.len() as i64;
        let mut values = Vec::with_capacity((nh - nl + 1) as usize);
        for k in nl..=nh {
            let j = k - old_lo;
            let v = if j >= 0 && j < old_len {
                w.values[j as usize]
            } else if self.outside(k) {
                0.0
            } else {
                (self.generator)(k)
            };
            values.push(v);
        }
        w.lo = nl;
        w.values = values;
        w.values[(lo - nl) as usize..=(hi - nl) as usize].to_vec()
    }
}

fn finite_or_err(v: BinomialValue, alpha: f64, index: i64) -> f64 {
    match v.finite() {
        Some(x) => x,
        None => panic!("{}", SequenceError::InfiniteCoefficient { alpha, index }),
    }
}

fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Causal refinement mask `a_k = 2^{-(α+1)} binom(α+1, k)`.
pub fn causal_mask(order: Order) -> CoefficientSequence {
    let a = order.alpha();
    let scale = (-(a + 1.0)).exp2();
    let s =
        CoefficientSequence::from_fn(Support::NonnegativeOnly, TailShape::Alternating, move |k| {
            scale * gen_binomial(a + 1.0, k as f64).value()
        });
    finite_if_integer(s, order)
}

fn finite_if_integer(s: CoefficientSequence, order: Order) -> CoefficientSequence {
    if order.is_integer() {
        let hi = order.alpha() as i64 + 1;
        s.with_extent(0, hi)
    } else {
        s
    }
}

/// Detail mask `b_k = (-1)^k a_k`; with `normalized = false` the factor `2^{α+1}` is removed.
pub fn causal_detail_mask(order: Order, normalized: bool) -> CoefficientSequence {
    let a = order.alpha();
    let scale = if normalized { (-(a + 1.0)).exp2() } else { 1.0 };
    let s = CoefficientSequence::from_fn(Support::NonnegativeOnly, TailShape::Smooth, move |k| {
        sign(k) * scale * gen_binomial(a + 1.0, k as f64).value()
    });
    finite_if_integer(s, order)
}

/// Symmetric mask `a*_k = 2^{-(α+1)} binom(α+1, k + (α+1)/2)`.
pub fn symmetric_mask(order: Order) -> CoefficientSequence {
    let a = order.alpha();
    let scale = (-(a + 1.0)).exp2();
    let s = CoefficientSequence::even_from_fn(TailShape::Alternating, move |k| {
        scale * finite_or_err(symmetric_binomial(a + 1.0, k), a, k)
    });
    symmetric_extent(s, order)
}

fn symmetric_extent(s: CoefficientSequence, order: Order) -> CoefficientSequence {
    if order.is_odd_nonneg() {
        let h = (order.alpha() as i64 + 1) / 2;
        let mut s = s.with_extent(-h, h);
        s.even = true;
        s
    } else {
        s
    }
}

/// Symmetric detail mask `b_k = (-1)^k a*_k`, optionally without the `2^{-(α+1)}` factor.
pub fn symmetric_detail_mask(order: Order, normalized: bool) -> CoefficientSequence {
    let a = order.alpha();
    let scale = if normalized { (-(a + 1.0)).exp2() } else { 1.0 };
    let s = CoefficientSequence::even_from_fn(TailShape::Smooth, move |k| {
        sign(k) * scale * finite_or_err(symmetric_binomial(a + 1.0, k), a, k)
    });
    symmetric_extent(s, order)
}

/// Causal reproduction coefficients `p_k = binom(k+α, k)`.
pub fn reproduction_coeffs_causal(order: Order) -> CoefficientSequence {
    let a = order.alpha();
    CoefficientSequence::from_fn(Support::NonnegativeOnly, TailShape::Smooth, move |k| {
        gen_binomial(k as f64 + a, k as f64).value()
    })
}

/// Closed-form symmetric reproduction coefficients `(-1)^k binom(-α-1, k-(α+1)/2)`.
///
/// Unavailable for odd positive integers and even nonnegative integers; those
/// orders go through [`solve_weak_strang_fix_symmetric`] or the factorized path.
pub fn reproduction_coeffs_symmetric(order: Order) -> Result<CoefficientSequence, SequenceError> {
    let a = order.alpha();
    if order.is_even_nonneg() || (order.is_odd_nonneg() && a > 0.0) {
        return Err(SequenceError::ClosedFormUnavailable(a));
    }
    Ok(CoefficientSequence::even_from_fn(
        TailShape::Smooth,
        move |k| sign(k) * finite_or_err(symmetric_binomial(-a - 1.0, k), a, k),
    ))
}

/// Coefficients of the difference operator `Δ^β`: causal `(-1)^k binom(β, k)`,
/// symmetric `(-1)^k binom(β, k + β/2)` (with the `|k|` rule for even negative `β`).
pub fn difference_sequence(kind: Kind, beta: f64) -> Result<CoefficientSequence, SequenceError> {
    match kind {
        Kind::Causal => {
            let s = CoefficientSequence::from_fn(
                Support::NonnegativeOnly,
                if beta < 0.0 {
                    TailShape::Smooth
                } else {
                    TailShape::Alternating
                },
                move |k| sign(k) * gen_binomial(beta, k as f64).value(),
            );
            if beta >= 0.0 && beta.fract() == 0.0 {
                Ok(s.with_extent(0, beta as i64))
            } else {
                Ok(s)
            }
        }
        Kind::Symmetric => {
            if symmetric_binomial(beta, 0).is_infinite() {
                return Err(SequenceError::InfiniteCoefficient {
                    alpha: beta,
                    index: 0,
                });
            }
            let tail = if beta < 0.0 {
                TailShape::Smooth
            } else {
                TailShape::Alternating
            };
            let s = CoefficientSequence::even_from_fn(tail, move |k| {
                sign(k) * symmetric_binomial(beta, k).value()
            });
            if beta >= 0.0 && beta.fract() == 0.0 && (beta as i64) % 2 == 0 {
                let h = beta as i64 / 2;
                let mut s = s.with_extent(-h, h);
                s.even = true;
                Ok(s)
            } else {
                Ok(s)
            }
        }
    }
}

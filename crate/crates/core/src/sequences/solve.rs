use nalgebra::{DMatrix, DVector};

use super::{CoefficientSequence, SequenceError, Support, DEFAULT_INNER_HALF_WIDTH};
use crate::report::CheckReport;

/// Inner summation range of `Σ_k p_{n-k} q_k` for one output index.
fn inner_range(
    p: &CoefficientSequence,
    q: &CoefficientSequence,
    n: i64,
    inner: Option<(i64, i64)>,
) -> Result<(i64, i64), SequenceError> {
    let (mut lo, mut hi) = if let Some(w) = inner {
        w
    } else if let Some(e) = q.extent() {
        e
    } else if let Some((plo, phi)) = p.extent() {
        (n - phi, n - plo)
    } else if p.support() == Support::NonnegativeOnly && q.support() == Support::NonnegativeOnly {
        (0, n)
    } else {
        return Err(SequenceError::UnboundedConvolution);
    };
    if q.support() == Support::NonnegativeOnly {
        lo = lo.max(0);
    }
    if p.support() == Support::NonnegativeOnly {
        hi = hi.min(n);
    }
    Ok((lo, hi))
}

/// `(p ⊛ q)_n` for `n` in `out_window`, returned as a finitely supported sequence.
///
/// The inner sum runs over the explicit `inner` window when given, otherwise
/// over the finite extent of one operand or `[0, n]` for two causal operands.
pub fn discrete_convolution(
    p: &CoefficientSequence,
    q: &CoefficientSequence,
    out_window: (i64, i64),
    inner: Option<(i64, i64)>,
) -> Result<CoefficientSequence, SequenceError> {
    let (n0, n1) = out_window;
    if n1 < n0 {
        return Err(SequenceError::EmptyWindow(n0, n1));
    }
    let mut out = Vec::with_capacity((n1 - n0 + 1) as usize);
    for n in n0..=n1 {
        let (lo, hi) = inner_range(p, q, n, inner)?;
        let mut acc = 0.0;
        for k in lo..=hi {
            acc += p.coeff(n - k) * q.coeff(k);
        }
        out.push(acc);
    }
    Ok(CoefficientSequence::finite(n0, out))
}

/// Forward substitution on the lower-triangular Toeplitz system `b ⊛ p = δ`.
pub fn solve_weak_strang_fix_causal(
    b: &CoefficientSequence,
    n_terms: usize,
) -> Result<Vec<f64>, SequenceError> {
    let bv = b.materialize(0, n_terms as i64);
    if bv[0].abs() < 1e-300 {
        return Err(SequenceError::SingularSystem(bv[0]));
    }
    let mut p = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        let mut acc = if n == 0 { 1.0 } else { 0.0 };
        for k in 1..=n {
            acc -= bv[k] * p[n - k];
        }
        p.push(acc / bv[0]);
    }
    Ok(p)
}

/// Even solution of the truncated two-sided system `T[b] p = δ`.
#[derive(Debug, Clone)]
pub struct SymmetricSolution {
    pub half_width: usize,
    /// `p_k` for `k = -half_width ..= half_width`.
    pub coeffs: Vec<f64>,
    /// Ratio of extreme singular values of the even-reduced system.
    pub condition_estimate: f64,
    pub ill_conditioned: bool,
    pub regularization: f64,
    /// `max |T p − δ|` over all rows `|n| <= half_width`.
    pub residual: f64,
    /// The same over `|n| <= half_width / 2`.
    pub interior_residual: f64,
}

impl SymmetricSolution {
    pub fn coeff(&self, k: i64) -> f64 {
        let h = self.half_width as i64;
        if k.abs() > h {
            0.0
        } else {
            self.coeffs[(k + h) as usize]
        }
    }

    pub fn to_sequence(&self) -> CoefficientSequence {
        CoefficientSequence::finite(-(self.half_width as i64), self.coeffs.clone())
    }
}

/// Condition numbers above this are flagged as ill-conditioned.
const ILL_CONDITIONED: f64 = 1e10;

/// Tikhonov-regularized least-squares solve of `T[b] p = δ` on `|k| <= half_width`.
///
/// Evenness is imposed by solving for `p_0..p_H` only; the reduced system is
/// weighted so that its norms equal those of the full two-sided system.
pub fn solve_weak_strang_fix_symmetric(
    b: &CoefficientSequence,
    half_width: usize,
    regularization: f64,
) -> Result<SymmetricSolution, SequenceError> {
    if b.support() != Support::AllIntegers {
        return Err(SequenceError::NotEven);
    }
    let h = half_width as i64;
    let bv = b.materialize(-2 * h, 2 * h);
    let at = |k: i64| bv[(k + 2 * h) as usize];
    if (0..=2 * h).any(|k| at(k) != at(-k)) {
        return Err(SequenceError::NotEven);
    }
    let n = half_width + 1;
    let w = |i: usize| if i == 0 { 1.0f64 } else { 2.0 };
    // M = W^{1/2} S W^{-1/2}, with S the even-reduced Toeplitz matrix.
    let m = DMatrix::from_fn(n, n, |r, j| {
        let (ri, ji) = (r as i64, j as i64);
        let s = if j == 0 {
            at(ri)
        } else {
            at(ri - ji) + at(ri + ji)
        };
        s * (w(r) / w(j)).sqrt()
    });
    let svd = m.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition_estimate = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    // rhs W^{1/2} e_0 = e_0
    let mut coef = DVector::zeros(n);
    for i in 0..n {
        let s = sv[i];
        let f = s / (s * s + regularization);
        coef[i] = f * u[(0, i)];
    }
    let y = vt.transpose() * coef;
    let mut half = vec![0.0; n];
    for j in 0..n {
        half[j] = y[j] / w(j).sqrt();
    }
    let mut coeffs = vec![0.0; 2 * half_width + 1];
    for k in -h..=h {
        coeffs[(k + h) as usize] = half[k.unsigned_abs() as usize];
    }
    let mut residual = 0.0f64;
    let mut interior_residual = 0.0f64;
    for r in -h..=h {
        let mut acc = 0.0;
        for k in -h..=h {
            acc += at(r - k) * coeffs[(k + h) as usize];
        }
        let e = (acc - if r == 0 { 1.0 } else { 0.0 }).abs();
        residual = residual.max(e);
        if r.abs() <= h / 2 {
            interior_residual = interior_residual.max(e);
        }
    }
    Ok(SymmetricSolution {
        half_width,
        coeffs,
        condition_estimate,
        ill_conditioned: condition_estimate > ILL_CONDITIONED,
        regularization,
        residual,
        interior_residual,
    })
}

/// `max_n |(b ⊛ p)_n − δ_{n0}|` over `0 <= n < n_terms`.
///
/// Details record `(b⊛p)_0`, which equals `2^{-(α+1)}` when the normalized
/// detail mask is paired with the reproduction coefficients.
pub fn check_delta(
    b: &CoefficientSequence,
    p: &CoefficientSequence,
    n_terms: usize,
    tol: f64,
) -> CheckReport {
    let n_max = n_terms.max(1) as i64 - 1;
    let inner = match inner_range(b, p, 0, None) {
        Ok(_) => None,
        Err(_) => Some((-DEFAULT_INNER_HALF_WIDTH, DEFAULT_INNER_HALF_WIDTH)),
    };
    let conv = discrete_convolution(b, p, (0, n_max), inner).expect("inner window resolved");
    let mut worst = 0.0f64;
    let mut at = 0i64;
    for n in 0..=n_max {
        let e = (conv.coeff(n) - if n == 0 { 1.0 } else { 0.0 }).abs();
        if e > worst {
            worst = e;
            at = n;
        }
    }
    let mut off = 0.0f64;
    for n in 1..=n_max {
        off = off.max(conv.coeff(n).abs());
    }
    CheckReport::new("delta", worst, tol)
        .at(at as f64)
        .with("conv_at_0", conv.coeff(0))
        .with("max_off_center", off)
        .with("n_terms", n_terms as f64)
}

//! Symmetric spline `B*^α(x) = Σ_k w_k (x-k)_*^α`, `w_k = (-1)^k binom(α+1, k+(α+1)/2)`.
//!
//! Terms are summed in `(k, -k)` pairs over `|k| <= K`. For `|x| < K` the
//! neglected tail is an even power series in `x` whose coefficients are
//! lattice sums `Σ_{k>K} w_k k^p (log k)`; these are computed once per `K`
//! from partial sums extrapolated in the cutoff.
//!
//! Away from the origin every term is of size `|x|^α` while the sum decays
//! like `|x|^{-α-2}`. There the degree-`⌊α⌋` Taylor polynomial of the monomial
//! at `x` is subtracted from each term; its lattice sum vanishes because the
//! weights annihilate polynomials of degree below `α+1`. The near remainders
//! come from their power series and the far part picks up moment sums.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};

use super::monomial::symmetric_power;
use super::{SplineValue, TruncationPolicy};
use crate::special::{gen_binomial, symmetric_binomial, Order};

/// Number of even powers kept in the tail expansion.
const TAIL_TERMS: usize = 14;
/// Weights below this index are taken directly from the Gamma formula.
const EXACT_WEIGHTS: usize = 64;
const MAX_HALF_WIDTH: usize = 1 << 16;
/// Taylor subtraction is used for `|x|` at or above this.
const SUBTRACT_FROM: f64 = 4.0;
/// Highest power kept in the near-remainder series, used for `k/|x| < 1/2`.
const REMAINDER_DEGREE: usize = 64;

struct Tail {
    /// Coefficient of `x^{2j}`.
    coeffs: Vec<f64>,
    /// Extrapolation error estimate per coefficient.
    errors: Vec<f64>,
    /// `Σ_{k>K} w_k k^i` and its error for even `i <= ⌊α⌋`.
    moments: Vec<(f64, f64)>,
}

/// Coefficient of `u^m` in `(1+u)^{2n} log(1+u)`.
fn log_coeff(two_n: f64, m: usize) -> f64 {
    let mut e = 0.0;
    for i in 0..m.min(two_n as usize + 1) {
        let c = gen_binomial(two_n, i as f64).value();
        let l = (m - i) as f64;
        let sgn = if (m - i) % 2 == 1 { 1.0 } else { -1.0 };
        e += c * sgn / l;
    }
    e
}

/// Pieces of the subtracted Taylor polynomial for orders `α > 0`.
struct Taylor {
    /// Even `m > degree` with the `u^m` coefficient of the unit monomial `(1+u)^α` (log-weighted).
    remainder: Vec<(i32, f64)>,
    /// For even `i <= degree`: `binom(α, i)` and, on the log branch, the log coefficient.
    poly: Vec<(f64, f64)>,
}

struct Engine {
    alpha: f64,
    s: f64,
    log_branch: bool,
    /// Half-support for odd integer orders, where the weights vanish for `|k| > s`.
    compact: Option<usize>,
    weights: RwLock<Arc<Vec<f64>>>,
    tails: Mutex<HashMap<usize, Arc<Tail>>>,
    taylor: Option<Taylor>,
}

fn engines() -> &'static Mutex<HashMap<u64, Arc<Engine>>> {
    static CELL: OnceLock<Mutex<HashMap<u64, Arc<Engine>>>> = OnceLock::new();
    CELL.get_or_init(|| Mutex::new(HashMap::new()))
}

fn engine(order: Order) -> Arc<Engine> {
    let mut map = engines().lock().expect("engine cache");
    map.entry(order.alpha().to_bits())
        .or_insert_with(|| Arc::new(Engine::new(order)))
        .clone()
}

/// Solves the (possibly overdetermined) system `basis · c = vals` and returns `c_0`.
fn leading_coefficient(rows: &[Vec<f64>], vals: &[f64]) -> f64 {
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let v = DVector::from_column_slice(vals);
    let sol = m.svd(true, true).solve(&v, 1e-300).expect("svd solve");
    sol[0]
}

/// Limit of partial sums `S(M_i)` with `x_i = M_0 / M_i`, modelling the
/// remainder by powers `x^{p+m}`, `m >= 0` (and `x^{p+m} log x` when `log` is set).
fn extrapolate(xs: &[f64], sums: &[f64], log: bool, p: f64) -> (f64, f64) {
    let basis = |x: f64, nb: usize| -> Vec<f64> {
        let mut r = vec![1.0];
        let mut m = 0;
        while r.len() < nb {
            let xm = x.powf(p + m as f64);
            r.push(xm);
            if log && r.len() < nb {
                r.push(xm * x.ln());
            }
            m += 1;
        }
        r
    };
    let n = xs.len();
    let full: Vec<Vec<f64>> = xs.iter().map(|&x| basis(x, n)).collect();
    let v_full = leading_coefficient(&full, sums);
    let reduced: Vec<Vec<f64>> = xs[1..].iter().map(|&x| basis(x, n - 1)).collect();
    let v_red = leading_coefficient(&reduced, &sums[1..]);
    (v_full, (v_full - v_red).abs())
}

impl Engine {
    fn new(order: Order) -> Self {
        let alpha = order.alpha();
        let s = (alpha + 1.0) / 2.0;
        let compact = if order.is_odd_nonneg() {
            Some(s as usize)
        } else {
            None
        };
        let log_branch = order.is_even_nonneg();
        let taylor = (alpha > 0.0 && compact.is_none()).then(|| {
            let degree = alpha.floor() as usize;
            let coeff = |m: usize| {
                if log_branch {
                    log_coeff(alpha, m)
                } else {
                    gen_binomial(alpha, m as f64).value()
                }
            };
            Taylor {
                remainder: ((degree + 1)..=REMAINDER_DEGREE)
                    .filter(|m| m % 2 == 0)
                    .map(|m| (m as i32, coeff(m)))
                    .collect(),
                poly: (0..=degree)
                    .step_by(2)
                    .map(|i| {
                        let b = gen_binomial(alpha, i as f64).value();
                        if log_branch {
                            (b, log_coeff(alpha, i))
                        } else {
                            (b, 0.0)
                        }
                    })
                    .collect(),
            }
        });
        Engine {
            alpha,
            s,
            log_branch,
            compact,
            weights: RwLock::new(Arc::new(Vec::new())),
            tails: Mutex::new(HashMap::new()),
            taylor,
        }
    }

    fn exact_weight(&self, k: i64) -> f64 {
        let b = symmetric_binomial(self.alpha + 1.0, k).value();
        if k.rem_euclid(2) == 0 {
            b
        } else {
            -b
        }
    }

    /// `w_0..=w_k`; beyond [`EXACT_WEIGHTS`] by the ratio `w_{k+1}/w_k = (k-s)/(k+s+1)`.
    fn weights(&self, k: usize) -> Arc<Vec<f64>> {
        {
            let w = self.weights.read().expect("weights");
            if w.len() > k {
                return w.clone();
            }
        }
        let mut guard = self.weights.write().expect("weights");
        if guard.len() > k {
            return guard.clone();
        }
        let mut v: Vec<f64> = guard.as_ref().clone();
        let target = (k + 1).next_power_of_two();
        while v.len() < target {
            let i = v.len();
            let w = if i <= EXACT_WEIGHTS || self.compact.is_some() {
                self.exact_weight(i as i64)
            } else {
                let j = (i - 1) as f64;
                v[i - 1] * (j - self.s) / (j + self.s + 1.0)
            };
            v.push(w);
        }
        let arc = Arc::new(v);
        *guard = arc.clone();
        arc
    }

    #[inline]
    fn mono(&self, y: f64) -> f64 {
        symmetric_power(self.alpha, self.log_branch, y)
    }

    /// Paired sum over `|k| <= k_max`; returns the sum and `Σ |terms|`.
    fn paired_sum(&self, y: f64, k_max: usize) -> (f64, f64) {
        let w = self.weights(k_max);
        let mut acc = w[0] * self.mono(y);
        let mut mag = acc.abs();
        for k in 1..=k_max {
            let kf = k as f64;
            let t = w[k] * (self.mono(y - kf) + self.mono(y + kf));
            acc += t;
            mag += t.abs();
        }
        (acc, mag)
    }

    fn tail(&self, k: usize) -> Arc<Tail> {
        if let Some(t) = self.tails.lock().expect("tails").get(&k) {
            return t.clone();
        }
        let t = Arc::new(self.compute_tail(k));
        self.tails.lock().expect("tails").insert(k, t.clone());
        t
    }

    fn compute_tail(&self, k_cut: usize) -> Tail {
        let levels = if self.log_branch { 7 } else { 6 };
        let m0 = (2 * k_cut).max(256);
        let m_max = m0 << (levels - 1);
        let p0 = self.alpha;
        let n_log = if self.log_branch {
            self.alpha as usize / 2 + 1
        } else {
            0
        };
        let mut tau = [0.0f64; TAIL_TERMS];
        let mut sig = vec![0.0f64; n_log];
        let mut tau_at: Vec<Vec<f64>> = (0..TAIL_TERMS)
            .map(|_| Vec::with_capacity(levels))
            .collect();
        let mut sig_at: Vec<Vec<f64>> = (0..n_log).map(|_| Vec::with_capacity(levels)).collect();
        let n_mom = self
            .taylor
            .as_ref()
            .filter(|_| !self.log_branch)
            .map_or(0, |t| t.poly.len());
        let mut mu = vec![0.0f64; n_mom];
        let mut mu_at: Vec<Vec<f64>> = (0..n_mom).map(|_| Vec::with_capacity(levels)).collect();
        let mut next_level = m0;
        let weights = self.weights(k_cut + 1);
        let mut w = weights[k_cut + 1];
        for k in (k_cut + 1)..=m_max {
            if k > k_cut + 1 {
                let j = (k - 1) as f64;
                w *= (j - self.s) / (j + self.s + 1.0);
            }
            let kf = k as f64;
            let inv2 = 1.0 / (kf * kf);
            let mut t = w * kf.powf(p0);
            let lk = kf.ln();
            for j in 0..TAIL_TERMS {
                tau[j] += t;
                if j < n_log {
                    sig[j] += t * lk;
                }
                t *= inv2;
            }
            let mut t = w;
            for m in mu.iter_mut() {
                *m += t;
                t *= kf * kf;
            }
            if k == next_level {
                for j in 0..TAIL_TERMS {
                    tau_at[j].push(tau[j]);
                }
                for j in 0..n_log {
                    sig_at[j].push(sig[j]);
                }
                for (at, m) in mu_at.iter_mut().zip(&mu) {
                    at.push(*m);
                }
                next_level *= 2;
            }
        }
        let xs: Vec<f64> = (0..levels).map(|i| 1.0 / (1u64 << i) as f64).collect();
        // The j-th sums have remainders starting at M^{-1-2j}.
        let tau_lim: Vec<(f64, f64)> = tau_at
            .iter()
            .enumerate()
            .map(|(j, s)| extrapolate(&xs, s, false, (1 + 2 * j) as f64))
            .collect();
        let sig_lim: Vec<(f64, f64)> = sig_at
            .iter()
            .enumerate()
            .map(|(j, s)| extrapolate(&xs, s, true, (1 + 2 * j) as f64))
            .collect();
        // Σ_{k>M} w_k k^i decays like M^{i-α-1}.
        let mu_lim: Vec<(f64, f64)> = mu_at
            .iter()
            .enumerate()
            .map(|(h, s)| extrapolate(&xs, s, false, self.alpha + 1.0 - (2 * h) as f64))
            .collect();

        let mut coeffs = vec![0.0; TAIL_TERMS];
        let mut errors = vec![0.0; TAIL_TERMS];
        if self.log_branch {
            let two_n = self.alpha;
            for j in 0..TAIL_TERMS {
                let m = 2 * j;
                let e = log_coeff(two_n, m);
                let mut a = 2.0 * e * tau_lim[j].0;
                let mut err = (2.0 * e * tau_lim[j].1).abs();
                if j < n_log {
                    let c = gen_binomial(two_n, m as f64).value();
                    a += 2.0 * c * sig_lim[j].0;
                    err += (2.0 * c * sig_lim[j].1).abs();
                }
                coeffs[j] = a;
                errors[j] = err;
            }
        } else {
            for j in 0..TAIL_TERMS {
                let c = gen_binomial(self.alpha, (2 * j) as f64).value();
                coeffs[j] = 2.0 * c * tau_lim[j].0;
                errors[j] = (2.0 * c * tau_lim[j].1).abs();
            }
        }
        // On the log branch the moments k^{2n-2j} are the τ sums already at hand.
        let moments = if self.log_branch {
            let n = self.alpha as usize / 2;
            (0..=n).map(|h| tau_lim[n - h]).collect()
        } else {
            mu_lim
        };
        Tail {
            coeffs,
            errors,
            moments,
        }
    }

    fn eval(&self, x: f64, policy: &TruncationPolicy) -> SplineValue {
        let y = x.abs();
        if let Some(h) = self.compact {
            if y >= self.s {
                return SplineValue::exact(0.0);
            }
            let (v, _) = self.paired_sum(y, h);
            return SplineValue::exact(v);
        }
        let need = (4.0 * y.ceil()).max(policy.max_terms as f64);
        let mut k = if need >= MAX_HALF_WIDTH as f64 {
            MAX_HALF_WIDTH
        } else {
            (need as usize).next_power_of_two()
        };
        loop {
            let (v, trunc, round) = self.eval_at(y, k);
            // Widening cannot push the error below the rounding floor.
            if trunc <= policy.tail_tolerance.max(round) || k >= MAX_HALF_WIDTH {
                return SplineValue {
                    value: v,
                    tail_bound: Some(trunc + round),
                    terms: k,
                };
            }
            k *= 2;
        }
    }

    /// Paired sum of `w_k (m(y-k) - T(y-k))` over `0 < |k| <= k_max`, with `T`
    /// the Taylor polynomial of the monomial `m` at `y`, and `Σ |terms|`.
    /// `tpoly[h]` is the `k^{2h}` coefficient of `T(y-k) + T(y+k)`.
    fn subtracted_sum(&self, t: &Taylor, y: f64, tpoly: &[f64], k_max: usize) -> (f64, f64) {
        let w = self.weights(k_max);
        let scale = if self.log_branch {
            y.powi(self.alpha as i32)
        } else {
            y.powf(self.alpha)
        };
        let mut acc = 0.0;
        let mut mag = 0.0;
        for k in 1..=k_max {
            let kf = k as f64;
            let u = kf / y;
            let (r, size) = if u < 0.5 {
                let u2 = u * u;
                let mut s = 0.0;
                for &(_, g) in t.remainder.iter().rev() {
                    s = s * u2 + g;
                }
                let r = 2.0 * scale * s * u.powi(t.remainder[0].0);
                (r, r.abs())
            } else {
                let k2 = kf * kf;
                let mut p = 0.0;
                for c in tpoly.iter().rev() {
                    p = p * k2 + c;
                }
                let (a, b) = (self.mono(y - kf), self.mono(y + kf));
                (a + b - p, a.abs() + b.abs() + p.abs())
            };
            acc += w[k] * r;
            mag += (w[k] * size).abs();
        }
        (acc, mag)
    }

    /// Value, truncation error bound and rounding error bound.
    fn eval_at(&self, y: f64, k: usize) -> (f64, f64, f64) {
        let tail = self.tail(k);
        let (s, mag) = match &self.taylor {
            Some(t) if y >= SUBTRACT_FROM => {
                let ln_y = y.ln();
                let tpoly: Vec<f64> = t
                    .poly
                    .iter()
                    .enumerate()
                    .map(|(h, &(b, e))| {
                        let i = 2 * h;
                        let c = if self.log_branch { b * ln_y + e } else { b };
                        2.0 * c * y.powf(self.alpha - i as f64)
                    })
                    .collect();
                let (s, mag) = self.subtracted_sum(t, y, &tpoly, k);
                // Far part of the subtracted polynomials.
                let far: f64 = tpoly
                    .iter()
                    .zip(&tail.moments)
                    .map(|(c, (m, _))| c * m)
                    .sum();
                let far_err: f64 = tpoly
                    .iter()
                    .zip(&tail.moments)
                    .map(|(c, (_, e))| (c * e).abs())
                    .sum();
                let (v, trunc, round) = self.finish(s - far, mag + far.abs(), &tail, y);
                return (v, trunc + far_err, round);
            }
            _ => self.paired_sum(y, k),
        };
        self.finish(s, mag, &tail, y)
    }

    /// Adds the tail series to a partial sum.
    fn finish(&self, s: f64, mag: f64, tail: &Tail, y: f64) -> (f64, f64, f64) {
        let y2 = y * y;
        let mut p = 1.0;
        let mut corr = 0.0;
        let mut err = 0.0;
        for j in 0..TAIL_TERMS {
            corr += tail.coeffs[j] * p;
            err += tail.errors[j] * p;
            p *= y2;
        }
        let last = (tail.coeffs[TAIL_TERMS - 1] * p / y2.max(f64::MIN_POSITIVE)).abs();
        (s + corr, err + last.min(1.0), 4.0 * f64::EPSILON * mag)
    }
}

/// Handle to the shared evaluator for one order.
#[derive(Clone)]
pub struct SymmetricSpline {
    order: Order,
    engine: Arc<Engine>,
}

impl std::fmt::Debug for SymmetricSpline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymmetricSpline")
            .field("order", &self.order)
            .finish()
    }
}

impl SymmetricSpline {
    pub fn new(order: Order) -> Self {
        SymmetricSpline {
            order,
            engine: engine(order),
        }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Value with the default truncation policy.
    pub fn eval(&self, x: f64) -> f64 {
        self.engine.eval(x, &TruncationPolicy::default()).value
    }

    pub fn eval_with(&self, x: f64, policy: &TruncationPolicy) -> SplineValue {
        self.engine.eval(x, policy)
    }

    /// Plain paired partial sum over `|k| <= half_width`, no tail estimate.
    pub fn eval_raw(&self, x: f64, half_width: usize) -> f64 {
        let h = self
            .engine
            .compact
            .map_or(half_width, |c| c.min(half_width));
        self.engine.paired_sum(x.abs(), h).0
    }
}

/// Symmetric B-spline value with its tail bound.
///
/// Odd nonnegative integer orders are compactly supported and summed exactly.
pub fn eval_symmetric_spline(order: Order, x: f64, trunc: &TruncationPolicy) -> SplineValue {
    engine(order).eval(x, trunc)
}

/// Paired partial sum over `|k| <= half_width` without tail correction.
pub fn eval_symmetric_spline_raw(order: Order, x: f64, half_width: usize) -> f64 {
    SymmetricSpline::new(order).eval_raw(x, half_width)
}

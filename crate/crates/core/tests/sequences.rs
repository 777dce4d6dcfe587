use std::f64::consts::PI;

use fracspline::grid::FrequencyGrid;
use fracspline::sequences::*;
use fracspline::special::Order;
use num_complex::Complex64;
use proptest::prelude::*;

fn ord(a: f64) -> Order {
    Order::new(a).unwrap()
}

/// Lower-triangular Toeplitz inverse of `b` by forward substitution, written
/// out independently of the library solver.
fn toeplitz_inverse(b: &[f64], n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    for i in 0..n {
        let mut acc = if i == 0 { 1.0 } else { 0.0 };
        for k in 1..=i {
            acc -= b[k] * p[i - k];
        }
        p[i] = acc / b[0];
    }
    p
}

/// `(-1)^k binom(α+1, k)` by the product recurrence.
fn detail_by_recurrence(alpha: f64, n: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for k in 1..n {
        let prev = c[k - 1];
        c.push(-prev * (alpha + 1.0 - (k as f64 - 1.0)) / k as f64);
    }
    c
}

#[test]
fn delta_identity_against_substitution_oracle() {
    let b = causal_detail_mask(ord(0.5), false);
    let p = reproduction_coeffs_causal(ord(0.5));
    let conv = discrete_convolution(&b, &p, (0, 63), None).unwrap();
    for n in 0..=63 {
        let want = if n == 0 { 1.0 } else { 0.0 };
        assert!((conv.coeff(n) - want).abs() < 1e-12, "n={n}");
    }
    let oracle = toeplitz_inverse(&detail_by_recurrence(0.5, 64), 64);
    for (k, o) in oracle.iter().enumerate() {
        assert!((p.coeff(k as i64) - o).abs() <= 1e-12 * o.abs().max(1.0));
    }
}

#[test]
fn solver_matches_closed_form() {
    for a in [0.2, 0.5, 1.0, 1.75, 2.5] {
        let b = causal_detail_mask(ord(a), false);
        let solved = solve_weak_strang_fix_causal(&b, 64).unwrap();
        let p = reproduction_coeffs_causal(ord(a));
        for (k, s) in solved.iter().enumerate() {
            let c = p.coeff(k as i64);
            assert!((s - c).abs() <= 1e-10 * c.abs(), "alpha={a} k={k}");
        }
    }
}

#[test]
fn convolution_identity_element_and_telescoping() {
    let p = reproduction_coeffs_causal(ord(0.3));
    let c = discrete_convolution(&p, &CoefficientSequence::delta(), (0, 30), None).unwrap();
    for n in 0..=30 {
        assert_eq!(c.coeff(n), p.coeff(n));
    }
    let d = CoefficientSequence::finite(0, vec![1.0, -1.0]);
    let ones = CoefficientSequence::from_fn(Support::NonnegativeOnly, TailShape::Smooth, |_| 1.0);
    let t = discrete_convolution(&d, &ones, (0, 8), None).unwrap();
    assert_eq!(
        t.materialize(0, 8),
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    );
}

#[test]
fn causal_mask_transform_closed_form() {
    let g = FrequencyGrid::from_samples(vec![PI / 2.0]).unwrap();
    let v = ddft(&causal_mask(ord(0.5)), &g, (0, 1024)).unwrap()[0];
    assert!((v - causal_mask_symbol(ord(0.5), PI / 2.0)).norm() < 1e-6);
}

#[test]
fn symmetric_reproduction_symbol_needs_tail_summation() {
    let p = reproduction_coeffs_symmetric(ord(0.5)).unwrap();
    let ws: Vec<f64> = (0..20).map(|i| 0.55 + 0.13 * i as f64).collect();
    let g = FrequencyGrid::from_samples(ws.clone()).unwrap();
    let raw = ddft(&p, &g, (-4096, 4096)).unwrap();
    let summed = ddft_tail_corrected(&p, &g, (-4096, 4096), 4).unwrap();
    let mut raw_err = 0.0f64;
    for ((r, s), w) in raw.iter().zip(&summed).zip(&ws) {
        let want = (2.0 * (w / 2.0).sin()).abs().powf(-1.5);
        assert!((s - want).norm() < 1e-6, "omega={w}");
        raw_err = raw_err.max((r - want).norm());
    }
    // Coefficients grow like |k|^{1/2}; the plain partial sum does not settle.
    assert!(raw_err > 1.0);
}

#[test]
fn symmetric_solver_output_is_even() {
    for a in [1.0, 2.0, 3.0] {
        let b = symmetric_detail_mask(ord(a), false);
        let s = solve_weak_strang_fix_symmetric(&b, 40, 1e-12).unwrap();
        for k in 1..=40 {
            assert_eq!(s.coeff(k).to_bits(), s.coeff(-k).to_bits());
        }
    }
}

#[test]
fn determinant_examples() {
    let g = FrequencyGrid::uniform(512).unwrap();
    let haar = causal_mask(ord(0.0));
    let r = det_condition(&haar, &causal_detail_mask(ord(0.0), true), &g, (0, 4)).unwrap();
    assert!((r.first() - 1.0).norm() < 1e-15);
    let same = det_condition(&haar, &haar, &g, (0, 4)).unwrap();
    assert!(same.values.iter().all(|d| d.norm() == 0.0));
    let a = causal_mask(ord(0.5));
    let r = det_condition(&a, &causal_detail_mask(ord(0.5), true), &g, (0, 1 << 16)).unwrap();
    assert!(r.min_abs > 1e-6);
    for (d, &w) in r.values.iter().zip(g.samples()) {
        assert!((d - causal_det_closed_form(ord(0.5), w)).norm() < 1e-10);
    }
}

fn finite_seq() -> impl Strategy<Value = (i64, Vec<f64>)> {
    (-20i64..20, prop::collection::vec(-1.0f64..1.0, 1..24))
}

proptest! {
    #[test]
    fn ddft_shift((off, vals) in finite_seq(), shift in -15i64..15) {
        let g = FrequencyGrid::uniform(64).unwrap();
        let n = vals.len() as i64;
        // |p̂(ω)| <= Σ|p_k|, the scale of the rounding in both transforms.
        let l1: f64 = vals.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        let p = CoefficientSequence::finite(off, vals.clone());
        let q = CoefficientSequence::finite(off + shift, vals);
        let fp = ddft(&p, &g, (off, off + n - 1)).unwrap();
        let fq = ddft(&q, &g, (off + shift, off + shift + n - 1)).unwrap();
        for (j, (a, b)) in fp.iter().zip(&fq).enumerate() {
            // Phase reduced in integers so the oracle adds no rounding of its own.
            let turns = (j as i64 * shift).rem_euclid(64) as f64 / 64.0;
            let rot = Complex64::from_polar(1.0, -2.0 * PI * turns);
            prop_assert!((b - rot * a).norm() < 1e-14 * l1);
        }
    }

    #[test]
    fn convolution_is_product_of_transforms((o1, v1) in finite_seq(), (o2, v2) in finite_seq()) {
        let g = FrequencyGrid::uniform(128).unwrap();
        let (n1, n2) = (v1.len() as i64, v2.len() as i64);
        let p = CoefficientSequence::finite(o1, v1);
        let q = CoefficientSequence::finite(o2, v2);
        let lo = o1 + o2;
        let hi = lo + n1 + n2 - 2;
        let c = discrete_convolution(&p, &q, (lo, hi), None).unwrap();
        let fc = ddft(&c, &g, (lo, hi)).unwrap();
        let fp = ddft(&p, &g, (o1, o1 + n1 - 1)).unwrap();
        let fq = ddft(&q, &g, (o2, o2 + n2 - 1)).unwrap();
        for ((c, a), b) in fc.iter().zip(&fp).zip(&fq) {
            prop_assert!((c - a * b).norm() < 1e-12 * (1.0 + a.norm() * b.norm()));
        }
    }

    #[test]
    fn symmetric_masks_are_even(alpha in -0.9f64..4.0, k in 1i64..64) {
        let a = symmetric_mask(ord(alpha));
        prop_assert_eq!(a.coeff(k).to_bits(), a.coeff(-k).to_bits());
    }
}

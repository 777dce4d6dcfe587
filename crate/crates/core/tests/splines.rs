use std::f64::consts::PI;

use fracspline::grid::{FrequencyGrid, Grid1D};
use fracspline::special::{gamma, Order};
use fracspline::splines::*;
use fracspline::Kind;
use proptest::prelude::*;

fn ord(a: f64) -> Order {
    Order::new(a).unwrap()
}

/// Unit-integral cardinal B-spline of integer degree `n` on `[0, n+1]` by the
/// Cox–de Boor recurrence.
fn cox_de_boor(n: usize, x: f64) -> f64 {
    if n == 0 {
        return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    (x * cox_de_boor(n - 1, x) + (nf + 1.0 - x) * cox_de_boor(n - 1, x - 1.0)) / nf
}

#[test]
fn integer_orders_match_classical_splines() {
    for n in 0..=5usize {
        let g = Grid1D::inclusive(0.0, n as f64 + 2.0, 1.0 / 32.0).unwrap();
        let scale = gamma(n as f64 + 1.0);
        for x in g.points() {
            let v = eval_causal_spline(ord(n as f64), x) / scale;
            assert!((v - cox_de_boor(n, x)).abs() < 1e-12, "n={n} x={x}");
        }
    }
}

#[test]
fn causal_examples() {
    assert_eq!(eval_causal_spline(ord(0.0), 0.5), 1.0);
    assert_eq!(eval_causal_spline(ord(1.0), 1.0), 1.0);
    assert_eq!(eval_causal_spline(ord(0.5), 1.0), 1.0);
    assert_eq!(causal_monomial(ord(0.5), 4.0), 2.0);
    assert_eq!(causal_monomial(ord(0.0), 0.0), 1.0);
    assert_eq!(symmetric_monomial(ord(1.5), -4.0).unwrap(), 8.0);
    assert!(symmetric_monomial(ord(0.0), 0.0).is_err());
}

#[test]
fn difference_examples() {
    let p = TruncationPolicy::default();
    assert_eq!(forward_difference(1.0, |x| x * x, 3.0, &p).value, 5.0);
    assert_eq!(forward_difference(2.0, |x| x, 7.5, &p).value, 0.0);
    let v = forward_difference_supported(1.5, |x| causal_monomial(ord(0.5), x), 1.0, 0.0);
    assert_eq!(v, 1.0);
    assert_eq!(symmetric_difference(2.0, f64::abs, 0.0, &p).value, -2.0);
    assert_eq!(symmetric_difference(2.0, |_| 3.25, 1.7, &p).value, 0.0);
}

#[test]
fn symmetric_examples() {
    let p = TruncationPolicy::default();
    assert_eq!(eval_symmetric_spline(ord(1.0), 0.0, &p).value, -2.0);
    assert_eq!(eval_symmetric_spline(ord(1.0), 2.0, &p).value, 0.0);
    for x in [0.25, 1.5] {
        let a = eval_symmetric_spline(ord(0.5), x, &p);
        let b = eval_symmetric_spline(ord(0.5), -x, &p);
        assert_eq!(a.value, b.value);
        assert!(a.tail_bound.unwrap() <= p.tail_tolerance);
    }
}

#[test]
fn transform_examples() {
    let c = fourier_causal_spline(ord(0.0), PI);
    assert!((c - num_complex::Complex64::new(0.0, -2.0 / PI)).norm() < 1e-15);
    let m = fourier_causal_spline(ord(0.5), PI / 2.0).norm();
    assert!((m - (2.0 * (PI / 4.0).sin() / (PI / 2.0)).powf(1.5)).abs() < 1e-15);
    assert!((fourier_symmetric_spline(ord(1.0), PI) - 4.0 / (PI * PI)).abs() < 1e-15);
    assert_eq!(fourier_symmetric_spline(ord(0.7), 0.0), 1.0);
    assert_eq!(fourier_causal_spline(ord(0.7), 0.0), 1.0.into());
}

#[test]
fn series_and_spectral_normalizations_agree() {
    let xs = [0.25, 0.5, 1.3, 2.7, 3.5, 5.0];
    let o = ord(1.5);
    let p = TruncationPolicy::default();
    let causal = eval_spectral_inverse(Kind::Causal, o, &xs, 1 << 16);
    let sym = eval_spectral_inverse(Kind::Symmetric, o, &xs, 1 << 16);
    let c = symmetric_series_constant(o);
    for ((&x, cv), sv) in xs.iter().zip(&causal).zip(&sym) {
        assert!(
            (eval_causal_spline(o, x) - gamma(2.5) * cv).abs() < 1e-7,
            "x={x}"
        );
        assert!(
            (eval_symmetric_spline(o, x, &p).value - c * sv).abs() < 1e-7,
            "x={x}"
        );
    }
}

#[test]
fn time_domain_convolution() {
    let g = Grid1D::inclusive(0.0, 3.0, 1.0 / 64.0).unwrap();
    for (a, b) in [(0.0, 0.0), (0.5, 0.25), (1.0, 0.3)] {
        let r = convolution_time_domain_residual(ord(a), ord(b), &g).unwrap();
        assert!(r.passed, "{r}");
    }
}

#[test]
fn derivative_relation_degenerate_and_half() {
    let g = Grid1D::inclusive(0.0, 12.0, 1.0 / 64.0).unwrap();
    let p = TruncationPolicy::default();
    let r0 = check_derivative_relation(ord(1.5), 0.0, &g, &p).unwrap();
    assert!(r0.residual <= 1e-12, "{r0}");
    let r = check_derivative_relation(ord(1.5), 0.5, &g, &p).unwrap();
    assert!(r.residual <= 1e-3, "{r}");
    assert!(check_derivative_relation(ord(0.5), 1.5, &g, &p).is_err());
}

#[test]
fn exact_strategy_rules() {
    let t = TruncationPolicy::default();
    assert!(FractionalSpline::new(
        Kind::Symmetric,
        ord(0.5),
        fracspline::splines::Strategy::ExactFiniteSum,
        t
    )
    .is_err());
    assert!(FractionalSpline::new(
        Kind::Symmetric,
        ord(3.0),
        fracspline::splines::Strategy::ExactFiniteSum,
        t
    )
    .is_ok());
    assert!(FractionalSpline::new(
        Kind::Causal,
        ord(0.5),
        fracspline::splines::Strategy::ExactFiniteSum,
        t
    )
    .is_ok());
}

proptest! {
    #[test]
    fn symmetric_transform_nonnegative(alpha in -0.99f64..6.0, w in -40.0f64..40.0) {
        let v = fourier_symmetric_spline(ord(alpha), w);
        prop_assert!(v >= 0.0);
        let c = fourier_causal_spline(ord(alpha), w).norm();
        prop_assert!((c - v).abs() <= 1e-13 * (1.0 + v));
    }

    #[test]
    fn convolution_identity_random_pairs(a in -0.95f64..3.0, b in -0.95f64..3.0) {
        let g = FrequencyGrid::uniform(512).unwrap();
        let r = convolution_identity_residual(ord(a), ord(b), &g);
        prop_assert!(r.residual <= 1e-12, "{}", r);
    }

    #[test]
    fn causal_vanishes_left_of_support(alpha in -0.95f64..5.0, x in -50.0f64..0.0) {
        prop_assume!(x < 0.0);
        prop_assert_eq!(eval_causal_spline(ord(alpha), x), 0.0);
    }

    #[test]
    fn integer_causal_vanishes_beyond_support(n in 0u32..6, t in 0.0f64..20.0) {
        let x = n as f64 + 1.0 + t;
        prop_assert_eq!(eval_causal_spline(ord(n as f64), x), 0.0);
    }

    #[test]
    fn symmetric_spline_even(alpha in -0.9f64..3.5, x in 0.0f64..12.0) {
        let s = SymmetricSpline::new(ord(alpha));
        prop_assert_eq!(s.eval(x).to_bits(), s.eval(-x).to_bits());
    }
}

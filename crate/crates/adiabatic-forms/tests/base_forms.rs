use adiabatic_forms::base_forms::{FourierForm, TorusGeometry};
use adiabatic_forms::sampling::{random_form, rng};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn skewed(n: usize) -> TorusGeometry {
    let mut g = DMatrix::identity(n, n);
    for i in 0..n {
        g[(i, i)] = 1.0 + 0.25 * i as f64;
        if i + 1 < n {
            g[(i, i + 1)] = -0.15;
            g[(i + 1, i)] = -0.15;
        }
    }
    TorusGeometry::new(g, 1).unwrap()
}

fn close(a: &FourierForm, b: &FourierForm, tol: f64) -> bool {
    (a - b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

/// Central-difference derivative of the coefficient functions, as an independent check of `d`.
fn numeric_d_component(w: &FourierForm, x: &[f64], axis: usize) -> Vec<f64> {
    let h = 1e-5;
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[axis] += h;
    xm[axis] -= h;
    w.evaluate(&xp).iter().zip(w.evaluate(&xm)).map(|(a, b)| (a - b) / (2.0 * h)).collect()
}

#[test]
fn exterior_derivative_matches_finite_differences() {
    // w = f dx1 + g dx2 on T², dw = (∂1 g − ∂2 f) dx1∧dx2
    let mut r = rng(3);
    let w = random_form(&mut r, 2, 1, 2, 1.0);
    let dw = w.d();
    for x in [[0.3, 1.1], [2.0, -0.7], [5.5, 4.4]] {
        let d1 = numeric_d_component(&w, &x, 0);
        let d2 = numeric_d_component(&w, &x, 1);
        let want = d1[1] - d2[0];
        assert!((dw.evaluate(&x)[0] - want).abs() < 1e-7, "{} vs {want}", dw.evaluate(&x)[0]);
    }
}

#[test]
fn wedge_matches_pointwise_product() {
    let a = FourierForm::cos_term(3, &[1, 0, 0], &[0], 1.5);
    let b = FourierForm::sin_term(3, &[0, 1, 1], &[2], 0.5);
    let ab = a.wedge(&b).unwrap();
    for x in [[0.1f64, 0.2, 0.3], [1.0, 2.0, 3.0]] {
        let want = 1.5 * x[0].cos() * 0.5 * (x[1] + x[2]).sin();
        // dx1∧dx3 is the second 2-subset of {1,2,3}
        assert!((ab.evaluate(&x)[1] - want).abs() < 1e-14);
    }
}

#[test]
fn volume_and_metric_norms() {
    let geo = skewed(3);
    let want = (2.0 * std::f64::consts::PI).powi(3) * geo.metric.determinant().sqrt();
    assert!((geo.volume() - want).abs() < 1e-9 * want);
    let one = FourierForm::constant(3, 0, &[(vec![], 1.0)]);
    assert!((geo.norm(&one).powi(2) - want).abs() < 1e-9 * want);
}

#[test]
fn degree_one_on_t2_is_not_exact_but_oscillation_is() {
    let geo = TorusGeometry::flat(2);
    let harmonic = FourierForm::constant(2, 1, &[(vec![0], 1.0)]);
    assert!(geo.coexact_primitive(&harmonic).is_err());
    let exact = FourierForm::sin_term(2, &[2, 1], &[], 1.0).d();
    let h = geo.coexact_primitive(&exact).unwrap();
    assert!(close(&h.d(), &exact, 1e-13));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_is_zero(seed in 0u64..10_000, n in 2usize..5, deg in 0usize..3) {
        let w = random_form(&mut rng(seed), n, deg.min(n), 2, 1.0);
        prop_assert!(w.d().d().max_abs() < 1e-12 * (1.0 + w.max_abs()));
    }

    #[test]
    fn leibniz_rule(seed in 0u64..10_000, n in 2usize..5, p in 0usize..2, q in 0usize..2) {
        let mut r = rng(seed);
        let a = random_form(&mut r, n, p, 1, 1.0);
        let b = random_form(&mut r, n, q, 1, 1.0);
        prop_assume!(p + q + 1 <= n);
        let lhs = a.wedge(&b).unwrap().d();
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = &a.d().wedge(&b).unwrap() + &a.wedge(&b.d()).unwrap().scale(sign);
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn graded_commutativity(seed in 0u64..10_000, p in 0usize..3, q in 0usize..3) {
        let mut r = rng(seed);
        let a = random_form(&mut r, 4, p, 1, 1.0);
        let b = random_form(&mut r, 4, q, 1, 1.0);
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(close(&a.wedge(&b).unwrap(), &b.wedge(&a).unwrap().scale(sign), 1e-13));
    }

    #[test]
    fn star_star_is_plus_minus_one(seed in 0u64..10_000, n in 2usize..5, k in 0usize..5) {
        prop_assume!(k <= n);
        let geo = skewed(n);
        let w = random_form(&mut rng(seed), n, k, 1, 1.0);
        let sign = if (k * (n - k)) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(close(&geo.star(&geo.star(&w)), &w.scale(sign), 1e-12));
    }

    #[test]
    fn codifferential_is_adjoint(seed in 0u64..10_000, n in 2usize..5, k in 0usize..4) {
        prop_assume!(k < n);
        let geo = skewed(n);
        let mut r = rng(seed);
        let a = random_form(&mut r, n, k, 2, 1.0);
        let b = random_form(&mut r, n, k + 1, 2, 1.0);
        let lhs = geo.inner(&a.d(), &b).unwrap();
        let rhs = geo.inner(&a, &geo.codifferential(&b).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn hodge_parts_reassemble_orthogonally(seed in 0u64..10_000, n in 2usize..5, k in 0usize..5) {
        prop_assume!(k <= n);
        let geo = skewed(n);
        let w = random_form(&mut rng(seed), n, k, 2, 1.0);
        let parts = geo.hodge_decompose(&w);
        let sum = &(&parts.exact + &parts.coexact) + &parts.harmonic;
        prop_assert!(close(&sum, &w, 1e-12));
        let scale = geo.norm(&w).powi(2);
        prop_assert!(geo.inner(&parts.exact, &parts.coexact).unwrap().abs() < 1e-11 * scale);
        prop_assert!(geo.inner(&parts.exact, &parts.harmonic).unwrap().abs() < 1e-11 * scale);
        prop_assert!(parts.harmonic.oscillating_part().max_abs() == 0.0);
        // exact parts are closed, coexact parts coclosed
        prop_assert!(parts.exact.d().max_abs() < 1e-11 * (1.0 + w.max_abs()));
        if k > 0 {
            prop_assert!(geo.codifferential(&parts.coexact).unwrap().max_abs() < 1e-11 * (1.0 + w.max_abs()));
        }
    }

    #[test]
    fn coexact_primitive_solves_d(seed in 0u64..10_000, n in 2usize..5, k in 1usize..4) {
        prop_assume!(k <= n);
        let geo = skewed(n);
        let w = random_form(&mut rng(seed), n, k - 1, 2, 1.0).d();
        let h = geo.coexact_primitive(&w).unwrap();
        prop_assert!(close(&h.d(), &w, 1e-11));
        if k > 1 {
            prop_assert!(geo.codifferential(&h).unwrap().max_abs() < 1e-11 * (1.0 + w.max_abs()));
        }
        prop_assert!(h.constant_part().max_abs() == 0.0);
    }
}

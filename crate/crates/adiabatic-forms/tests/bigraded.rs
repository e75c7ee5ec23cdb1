use adiabatic_forms::base_forms::TorusGeometry;
use adiabatic_forms::bigraded::{galerkin_operator, BigradedForm, Connection, DeltaPolynomial};
use adiabatic_forms::chern_weil::{self, InvariantPolynomial};
use adiabatic_forms::lie_algebra::{make_abelian, make_su2, make_su2_scaled, make_su3, LieAlgebraData};
use adiabatic_forms::sampling::{random_bigraded, random_connection, rng};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn skewed_metric(n: usize) -> TorusGeometry {
    let mut g = DMatrix::identity(n, n);
    for i in 0..n {
        g[(i, i)] = 1.0 + 0.3 * i as f64;
        if i + 1 < n {
            g[(i, i + 1)] = 0.2;
            g[(i + 1, i)] = 0.2;
        }
    }
    TorusGeometry::new(g, 1).unwrap()
}

fn setup(n: usize, alg: LieAlgebraData, seed: u64) -> Connection {
    let mut r = rng(seed);
    random_connection(&mut r, skewed_metric(n), alg, 1, 0.6).unwrap()
}

fn rel(a: &BigradedForm, scale: f64) -> f64 {
    a.max_abs() / (1.0 + scale)
}

fn check_identities(conn: &Connection, seed: u64) {
    let d = conn.differentials();
    let (n, m) = (conn.geometry().n, conn.alg().dim);
    let mut r = rng(seed);
    for p in 0..n + m {
        let w = random_bigraded(&mut r, n, m, p, 1);
        let s = w.max_abs() * 10.0;
        let (a, b, c) = (&d.d01, &d.d10, &d.d2m1);
        let e0 = a.apply(&a.apply(&w));
        let e1 = a.apply(&b.apply(&w)).add(&b.apply(&a.apply(&w)));
        let e2 = b.apply(&b.apply(&w)).add(&a.apply(&c.apply(&w))).add(&c.apply(&a.apply(&w)));
        let e3 = b.apply(&c.apply(&w)).add(&c.apply(&b.apply(&w)));
        let e4 = c.apply(&c.apply(&w));
        for (name, e) in [("d01²", e0), ("[d01,d10]", e1), ("d10²+[d01,d2-1]", e2), ("[d10,d2-1]", e3), ("d2-1²", e4)] {
            assert!(rel(&e, s) < 1e-11, "{name} residual {} at p={p}", e.max_abs());
        }
    }
}

#[test]
fn d_squared_vanishes_su2_t3() {
    check_identities(&setup(3, make_su2(), 1), 11);
}

#[test]
fn d_squared_vanishes_su2_t4() {
    check_identities(&setup(4, make_su2_scaled(1.7), 2), 12);
}

#[test]
fn d_squared_vanishes_su3_t2() {
    check_identities(&setup(2, make_su3(), 3), 13);
}

#[test]
fn d_squared_vanishes_abelian() {
    check_identities(&setup(3, make_abelian(2), 4), 14);
}

#[test]
fn adjoints_are_adjoint() {
    let conn = setup(3, make_su2(), 5);
    let d = conn.differentials();
    let (n, m) = (3, 3);
    let mut r = rng(99);
    for p in 0..n + m {
        let w = random_bigraded(&mut r, n, m, p, 1);
        for (op, star, shift) in [(&d.d01, &d.d01_star, 1), (&d.d10, &d.d10_star, 1), (&d.d2m1, &d.d2m1_star, 1)] {
            let v = random_bigraded(&mut r, n, m, p + shift, 2);
            let lhs = d.space.inner(&op.apply(&w), &v).unwrap();
            let rhs = d.space.inner(&w, &star.apply(&v)).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()), "p={p}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn rescaling_conjugates_total_differential() {
    let conn = setup(3, make_su2(), 6);
    let d = conn.differentials();
    let w = random_bigraded(&mut rng(7), 3, 3, 2, 1);
    for delta in [0.3, 1.0, 2.5] {
        // ρ_δ d ρ_δ⁻¹ = d_δ
        let direct = d.d_at(&w, delta);
        let via = d.d_total(&w.rho(1.0 / delta)).rho(delta);
        assert!(direct.sub(&via).max_abs() < 1e-10 * (1.0 + direct.max_abs()));
    }
}

#[test]
fn delta_series_matches_numeric_evaluation() {
    let conn = setup(3, make_su2(), 8);
    let d = conn.differentials();
    let mut r = rng(21);
    let poly = DeltaPolynomial::new(vec![random_bigraded(&mut r, 3, 3, 2, 1), random_bigraded(&mut r, 3, 3, 2, 1)]);
    let series = d.d_delta(&poly);
    for delta in [0.1, 0.7] {
        let a = series.evaluate(delta, 3, 3);
        let b = d.d_at(&poly.evaluate(delta, 3, 3), delta);
        assert!(a.sub(&b).max_abs() < 1e-12 * (1.0 + b.max_abs()));
    }
}

#[test]
fn bianchi_identity_holds() {
    let conn = setup(3, make_su2(), 9);
    let f = conn.curvature();
    for res in chern_weil::bianchi_residual(&conn, &f) {
        assert!(res.max_abs() < 1e-12);
    }
}

#[test]
fn transgression_of_second_chern_form() {
    for (n, alg, band) in [(4, make_su2(), 1), (4, make_su2_scaled(0.5), 1), (4, make_su3(), 0)] {
        let conn = random_connection(&mut rng(10), skewed_metric(n), alg, band, 0.6).unwrap();
        let p = InvariantPolynomial::second_chern(conn.alg()).unwrap();
        let cs = chern_weil::cs3(&p, &conn).unwrap();
        let dcs = conn.differentials().d_total(&cs);
        let cw = chern_weil::cw4(&p, &conn.curvature()).unwrap();
        let expect = BigradedForm::from_component(n, conn.alg().dim, 4, 0, &[cw]).unwrap();
        let diff = dcs.sub(&expect);
        assert!(diff.max_abs() < 1e-12, "d cs3 - cw4 = {}", diff.max_abs());
    }
}

#[test]
fn transgression_of_first_chern_form() {
    let geometry = skewed_metric(2);
    let alg = make_abelian(1);
    let f = adiabatic_forms::base_forms::FourierForm::constant(2, 2, &[(vec![0, 1], 1.3)]);
    let conn = chern_weil::abelian_scenario(geometry, alg, vec![f.clone()]).unwrap();
    let p = InvariantPolynomial::first_chern_u1(conn.alg()).unwrap();
    let dcs = conn.differentials().d_total(&chern_weil::cs1(&p, &conn).unwrap());
    let cw = chern_weil::cw2(&p, &[f]).unwrap();
    let expect = BigradedForm::from_component(2, 1, 2, 0, &[cw]).unwrap();
    assert!(dcs.sub(&expect).max_abs() < 1e-14);
}

#[test]
fn galerkin_blocks_hermitian_and_nonnegative() {
    let conn = setup(3, make_su2(), 12);
    for p in [1, 2, 3] {
        let op = galerkin_operator(&conn, p, 0.4, 1).unwrap();
        assert!(op.hermitian_residual() < 1e-12);
        let ev = op.eigenvalues();
        assert_eq!(ev.len(), op.dim());
        assert!(ev[0] > -1e-10, "min eigenvalue {}", ev[0]);
    }
}

#[test]
fn galerkin_rejects_small_band() {
    let conn = setup(2, make_su2(), 13);
    assert!(galerkin_operator(&conn, 1, 0.5, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn d_squared_random_connections(seed in 0u64..1000, n in 2usize..4) {
        let conn = setup(n, make_su2(), seed);
        let d = conn.differentials();
        let w = random_bigraded(&mut rng(seed + 1), n, 3, 2, 1);
        let dd = d.d_total(&d.d_total(&w));
        prop_assert!(dd.max_abs() < 1e-10 * (1.0 + w.max_abs()));
        for delta in [0.2, 1.3] {
            let dd = d.d_at(&d.d_at(&w, delta), delta);
            prop_assert!(dd.max_abs() < 1e-10 * (1.0 + w.max_abs()));
        }
    }

    #[test]
    fn real_forms_stay_real(seed in 0u64..1000) {
        let conn = setup(3, make_su2(), seed);
        let d = conn.differentials();
        let w = random_bigraded(&mut rng(seed ^ 7), 3, 3, 2, 1);
        prop_assert!(d.d_at(&w, 0.5).reality_residual() < 1e-12);
        prop_assert!(d.dstar_at(&w, 0.5).reality_residual() < 1e-12);
    }
}

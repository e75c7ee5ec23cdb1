use std::path::PathBuf;

use adiabatic_forms::adiabatic_ss::{
    compute_pages, compute_pages_with, harmonic_limit, solve_exact, DEFAULT_BASIS_LIMIT, spectrum_sweep, verify_formal_harmonic, zero_eigenvalue_count, PageOptions,
};
use adiabatic_forms::base_forms::TorusGeometry;
use adiabatic_forms::bigraded::Connection;
use adiabatic_forms::error::Error;
use adiabatic_forms::harness::scenario::{kunneth_dims, Scenario};
use adiabatic_forms::lie_algebra::{betti_numbers, make_su2};
use adiabatic_forms::sampling::{random_form, rng};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn fixture(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"));
    Scenario::load(&path).unwrap()
}

fn dim(page: &adiabatic_forms::adiabatic_ss::PageBasis, slot: (usize, usize)) -> usize {
    page.dims.get(&slot).copied().unwrap_or(0)
}

#[test]
fn pages_shrink_monotonically() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    for p in 0..=3 {
        let pages = compute_pages(&conn, p, 6, s.band).unwrap();
        let t = pages.totals();
        assert!(t.windows(2).all(|w| w[0] >= w[1]), "p={p}: {t:?}");
        for page in &pages.pages {
            assert_eq!(page.dims.values().sum::<usize>(), page.total);
        }
        assert!(pages.stabilized());
    }
}

#[test]
fn page_lifts_are_formally_harmonic_to_their_order() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    let pages = compute_pages(&conn, 2, 5, s.band).unwrap();
    for page in &pages.pages {
        if page.total <= DEFAULT_BASIS_LIMIT {
            assert_eq!(page.entries.len(), page.total);
        }
        for e in &page.entries {
            let r = verify_formal_harmonic(&e.lift, &conn, page.k);
            assert!(r.pass, "E_{} slot {:?}: {:?}", page.k, e.slot, r.orders);
            assert!(e.vector.reality_residual() < 1e-12);
        }
    }
}

#[test]
fn flat_bundle_pages_collapse_to_kunneth() {
    let conn = Connection::trivial(TorusGeometry::flat(2), make_su2());
    let betti = betti_numbers(&make_su2());
    for p in 0..=5 {
        let pages = compute_pages(&conn, p, 3, 0).unwrap();
        let want = kunneth_dims(2, &betti, p);
        for page in &pages.pages[1..] {
            for &(slot, d) in &want {
                assert_eq!(dim(page, slot), d, "p={p} K={} slot {slot:?}", page.k);
            }
        }
    }
}

#[test]
fn flat_limits_are_the_basis_forms() {
    let conn = Connection::trivial(TorusGeometry::flat(2), make_su2());
    let limits = harmonic_limit(&conn, 3, 0).unwrap();
    // H³ = H⁰(T²)⊗H³(su2) ⊕ H²(T²)⊗H¹(su2) = 1
    assert_eq!(limits.len(), 1);
    let l = &limits[0];
    assert!(l.sub(&l.slot_part(0, 3)).max_abs() < 1e-12);
    assert!((conn.space.norm(l) - 1.0).abs() < 1e-10);
}

#[test]
fn limits_are_independent() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    let limits = harmonic_limit(&conn, 3, s.band).unwrap();
    assert_eq!(limits.len(), 2);
    let g = DMatrix::from_fn(2, 2, |i, j| conn.space.inner(&limits[i], &limits[j]).unwrap());
    assert!(g.determinant() > 1e-6, "{g}");
}

#[test]
fn nonzero_class_kills_fiber_degree_one() {
    let s = fixture("t2_u1_c1nonzero");
    let conn = s.connection().unwrap();
    let pages = compute_pages(&conn, 1, 4, s.band).unwrap();
    assert_eq!((dim(&pages.pages[2], (1, 0)), dim(&pages.pages[2], (0, 1))), (2, 1));
    assert_eq!((dim(&pages.pages[3], (1, 0)), dim(&pages.pages[3], (0, 1))), (2, 0));
    assert!(pages.stabilized());
}

#[test]
fn zero_class_keeps_fiber_degree_one() {
    let s = fixture("t2_u1_c1zero");
    let conn = s.connection().unwrap();
    let pages = compute_pages(&conn, 1, 6, s.band).unwrap();
    assert!(pages.stabilized());
    assert_eq!(pages.infinity().total, 3);
    assert_eq!(dim(pages.infinity(), (0, 1)), 1);
}

#[test]
fn infinity_page_is_independent_of_k_max() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    let a = compute_pages(&conn, 1, 6, s.band).unwrap();
    let b = compute_pages(&conn, 1, 7, s.band).unwrap();
    assert_eq!(a.infinity().dims, b.infinity().dims);
    // the leading vectors span the same space
    for e in &b.infinity().entries {
        let proj: f64 = a.infinity().entries.iter().map(|f| conn.space.inner(&e.vector, &f.vector).unwrap().powi(2)).sum();
        assert!((proj - conn.space.norm(&e.vector).powi(2)).abs() < 1e-8);
    }
}

#[test]
fn band_below_connection_is_rejected() {
    let s = fixture("t4_su2_cs3");
    let conn = s.connection().unwrap();
    assert!(matches!(compute_pages(&conn, 1, 3, 0), Err(Error::BandTooSmall { .. })));
}

#[test]
fn galerkin_zero_count_matches_infinity_page() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    for p in 0..=3 {
        let pages = compute_pages_with(&conn, p, s.band, &PageOptions::default()).unwrap();
        let zeros = zero_eigenvalue_count(&conn, p, 0.5, s.band, 1e-9).unwrap();
        assert_eq!(zeros, pages.infinity().total, "p={p}");
    }
}

#[test]
fn eigenvalue_decay_matches_page_differences() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    let pages = compute_pages(&conn, 1, 6, s.band).unwrap();
    let mut rep = spectrum_sweep(&conn, 1, &[0.4, 0.2, 0.1, 0.05], s.band).unwrap();
    rep.compare_with_pages(&pages);
    assert!(rep.matches(0.3), "{:?}", rep.groups);
}

fn skewed_geometry(n: usize) -> TorusGeometry {
    let mut g = DMatrix::identity(n, n);
    for i in 0..n - 1 {
        g[(i, i + 1)] = 0.2;
        g[(i + 1, i)] = 0.2;
    }
    TorusGeometry::new(g, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solve_exact_returns_coclosed_primitive(seed in 0u64..10_000, n in 2usize..5, q in 1usize..5) {
        prop_assume!(q <= n);
        let geo = skewed_geometry(n);
        let conn = Connection::trivial(geo.clone(), make_su2());
        let w = random_form(&mut rng(seed), n, q - 1, 2, 1.0).d();
        let x = solve_exact(&conn, &w).unwrap();
        prop_assert!((&x.d() - &w).max_abs() < 1e-11 * (1.0 + w.max_abs()));
        if q >= 2 {
            prop_assert!(geo.codifferential(&x).unwrap().max_abs() < 1e-11 * (1.0 + w.max_abs()));
        }
        // agrees with the Hodge-theoretic coexact primitive
        prop_assert!((&x - &geo.coexact_primitive(&w).unwrap()).max_abs() < 1e-10 * (1.0 + w.max_abs()));
    }
}

/// `π_K d_K` applied to every `E_K^p` basis vector, as coordinates in the `E_K^{p+1}` basis.
fn induced_differential(conn: &Connection, src: &adiabatic_forms::adiabatic_ss::PageBasis, dst: &adiabatic_forms::adiabatic_ss::PageBasis) -> DMatrix<f64> {
    let k = src.k;
    DMatrix::from_fn(dst.entries.len(), src.entries.len(), |r, c| {
        let d = conn.differentials().d_delta(&src.entries[c].lift);
        let lead = d.coefficient(k).cloned().unwrap_or_else(|| conn.space.zero());
        conn.space.inner(&dst.entries[r].vector, &lead).unwrap()
    })
}

#[test]
fn page_differentials_square_to_zero_and_shift_bigrade() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    let all: Vec<_> = (0..=6).map(|p| compute_pages(&conn, p, 4, 0).unwrap()).collect();
    let mut nonzero = 0;
    for k in 0..=3 {
        for p in 0..=6 {
            let src = &all[p].pages[k];
            assert_eq!(src.entries.len(), src.total);
            // orthonormal basis whose lifts start at the basis vector
            for (a, e) in src.entries.iter().enumerate() {
                assert!(e.lift.coefficient(0).unwrap().sub(&e.vector).max_abs() < 1e-12);
                for (b, f) in src.entries.iter().enumerate() {
                    let g = conn.space.inner(&e.vector, &f.vector).unwrap();
                    assert!((g - if a == b { 1.0 } else { 0.0 }).abs() < 1e-9);
                }
            }
            if p == 6 {
                continue;
            }
            let dst = &all[p + 1].pages[k];
            let dk = induced_differential(&conn, src, dst);
            let scale = 1.0 + dk.amax();
            for (c, e) in src.entries.iter().enumerate() {
                for (r, f) in dst.entries.iter().enumerate() {
                    let shifted = (e.slot.0 + k, (e.slot.1 + 1).wrapping_sub(k));
                    if f.slot != shifted {
                        assert!(dk[(r, c)].abs() < 1e-9 * scale, "K={k} {:?} -> {:?}: {}", e.slot, f.slot, dk[(r, c)]);
                    }
                }
            }
            if dk.amax() > 1e-6 {
                nonzero += 1;
            }
            if p + 2 <= 6 {
                let next = induced_differential(&conn, dst, &all[p + 2].pages[k]);
                let sq = &next * &dk;
                assert!(sq.amax() < 1e-9 * scale * (1.0 + next.amax()), "K={k} p={p}: {}", sq.amax());
            }
        }
    }
    // the fixture has curvature, so some page differential is nontrivial
    assert!(nonzero > 0);
}

#[test]
fn lifts_are_unique_across_independent_runs() {
    let s = fixture("t3_su2_pages");
    let conn = s.connection().unwrap();
    let sp = &conn.space;
    for p in 0..=3 {
        let a = compute_pages(&conn, p, 6, s.band).unwrap();
        let b = compute_pages(&conn, p, 7, s.band).unwrap();
        let (ea, eb) = (&a.infinity().entries, &b.infinity().entries);
        let k = a.infinity().k;
        for f in eb {
            // lifts are linear in the leading vector, so expand f in the basis of the other run
            let coeffs: Vec<f64> = ea.iter().map(|e| sp.inner(&e.vector, &f.vector).unwrap()).collect();
            // residual orders below K pin down ω_0 … ω_{K-1}
            for m in 0..k {
                let want = ea.iter().zip(&coeffs).fold(sp.zero(), |acc, (e, &c)| {
                    acc.axpy(c, e.lift.coefficient(m).unwrap_or(&sp.zero()))
                });
                let got = f.lift.coefficient(m).cloned().unwrap_or_else(|| sp.zero());
                assert!(sp.norm(&got.sub(&want)) < 1e-8, "p={p} order {m}: {}", sp.norm(&got.sub(&want)));
            }
        }
    }
}

//! Numerical check suites shared by the commands and the acceptance tests.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::adiabatic_ss::{recover_omega3, residual_orders, series_norm, OrderNorms};
use crate::bigraded::{self, BigradedForm, Connection, DeltaPolynomial, Operator};
use crate::chern_weil::{self, InvariantPolynomial};
use crate::error::{Error, Result};
use crate::lie_algebra::{self, LieAlgebraData, LieCochain};
use crate::linalg;
use crate::multi_index::binomial;
use crate::sampling::{random_bigraded, random_connection, rng};

/// Residuals of the structural identities of one Lie algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieSuite {
    pub dim: usize,
    pub antisymmetry: f64,
    pub jacobi: f64,
    pub metric_invariance: f64,
    pub ce_square: f64,
    pub betti: Vec<usize>,
    pub harmonic_dims: Vec<usize>,
    pub invariant_dims: Vec<usize>,
    /// Largest `‖ad*_a h‖ / ‖h‖` over harmonic basis cochains.
    pub harmonic_invariance: f64,
    /// `max ‖d*_𝔤 G ψ − ψ‖` over basis 1-cochains; `None` when `H¹ ≠ 0`.
    pub green_residual: Option<f64>,
    /// `max ‖d_𝔤 G ψ‖`, the exactness of the Green solution.
    pub green_closedness: Option<f64>,
}

impl LieSuite {
    pub fn pass(&self, tol: f64) -> bool {
        self.antisymmetry <= tol
            && self.jacobi <= tol
            && self.metric_invariance <= tol
            && self.ce_square <= tol
            && self.betti == self.harmonic_dims
            && self.harmonic_dims == self.invariant_dims
            && self.harmonic_invariance <= tol
            && self.green_residual.map_or(true, |r| r <= tol)
            && self.green_closedness.map_or(true, |r| r <= tol)
    }
}

fn invariant_dim(alg: &LieAlgebraData, j: usize) -> usize {
    let nj = binomial(alg.dim, j);
    if alg.dim == 0 || nj == 0 {
        return nj;
    }
    let mut stacked = DMatrix::zeros(alg.dim * nj, nj);
    for a in 0..alg.dim {
        stacked.view_mut((a * nj, 0), (nj, nj)).copy_from(&lie_algebra::coadjoint(alg, a, j));
    }
    let s = linalg::spectral_norm(&stacked);
    if s == 0.0 {
        return nj;
    }
    nj - linalg::decompose(&stacked, 1e-10 * s).rank
}

pub fn lie_suite(alg: &LieAlgebraData) -> Result<LieSuite> {
    let m = alg.dim;
    let mut ce_square: f64 = 0.0;
    for j in 0..m.saturating_sub(1) {
        let dd = lie_algebra::ce_differential(alg, j + 1)? * lie_algebra::ce_differential(alg, j)?;
        ce_square = ce_square.max(dd.amax());
    }
    let mut harmonic_dims = Vec::new();
    let mut invariant_dims = Vec::new();
    let mut harmonic_invariance: f64 = 0.0;
    for j in 0..=m {
        let h = lie_algebra::harmonic_subspace(alg, j)?;
        harmonic_dims.push(h.len());
        invariant_dims.push(invariant_dim(alg, j));
        for c in &h {
            let nrm = lie_algebra::cochain_norm(alg, c);
            for a in 0..m {
                let moved = lie_algebra::apply(&lie_algebra::coadjoint(alg, a, j), c, j);
                harmonic_invariance = harmonic_invariance.max(lie_algebra::cochain_norm(alg, &moved) / nrm);
            }
        }
    }
    let semisimple = m >= 2 && harmonic_dims.get(1) == Some(&0);
    let (green_residual, green_closedness) = if semisimple {
        let (mut r, mut c): (f64, f64) = (0.0, 0.0);
        let dstar = lie_algebra::ce_adjoint(alg, 2)?;
        let d2 = if m > 2 { Some(lie_algebra::ce_differential(alg, 2)?) } else { None };
        for a in 0..m {
            let psi = LieCochain::basis(alg, &[a]);
            let beta = lie_algebra::green_inverse(alg, &psi)?;
            let back = lie_algebra::apply(&dstar, &beta, 1);
            r = r.max((&back.coefficients - &psi.coefficients).amax());
            if let Some(d2) = &d2 {
                c = c.max((d2 * &beta.coefficients).amax());
            }
        }
        (Some(r), Some(c))
    } else {
        (None, None)
    };
    Ok(LieSuite {
        dim: m,
        antisymmetry: alg.antisymmetry_residual(),
        jacobi: alg.jacobi_residual(),
        metric_invariance: alg.invariance_residual(&alg.metric),
        ce_square,
        betti: lie_algebra::betti_numbers(alg),
        harmonic_dims,
        invariant_dims,
        harmonic_invariance,
        green_residual,
        green_closedness,
    })
}

/// Worst relative residuals over a batch of random forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactnessSuite {
    pub forms: usize,
    pub band: usize,
    /// Per identity, `d01², [d01,d10], d10²+[d01,d2-1], [d10,d2-1], d2-1²`.
    pub identities: [f64; 5],
    /// The same five identities for the adjoint operators.
    pub adjoint_identities: [f64; 5],
    /// `|⟨Dw,v⟩ − ⟨w,D*v⟩|` relative, for the three parts.
    pub adjointness: f64,
}

impl ExactnessSuite {
    pub fn worst(&self) -> f64 {
        self.identities.iter().chain(&self.adjoint_identities).fold(self.adjointness, |m, &v| m.max(v))
    }
}

/// `‖Σ_t X_t Y_t w‖` relative to the magnitudes of `w`, `Y_t w` and `X_t Y_t w`.
fn identity_residual(space: &bigraded::BigradedSpace, w: &BigradedForm, terms: &[(&Operator, &Operator)]) -> f64 {
    let mut sum = BigradedForm::zero(w.n, w.m);
    let mut scale = space.norm(w);
    for (x, y) in terms {
        let yw = y.apply(w);
        let xyw = x.apply(&yw);
        scale += space.norm(&yw) + space.norm(&xyw);
        sum = sum.add(&xyw);
    }
    if scale == 0.0 {
        0.0
    } else {
        space.norm(&sum) / scale
    }
}

fn five_identities(space: &bigraded::BigradedSpace, w: &BigradedForm, [a, b, c]: [&Operator; 3]) -> [f64; 5] {
    [
        identity_residual(space, w, &[(a, a)]),
        identity_residual(space, w, &[(a, b), (b, a)]),
        identity_residual(space, w, &[(b, b), (a, c), (c, a)]),
        identity_residual(space, w, &[(b, c), (c, b)]),
        identity_residual(space, w, &[(c, c)]),
    ]
}

/// The five component identities of `d² = 0`, their adjoint counterparts and adjointness,
/// on `count` seeded random forms of every total degree in turn.
pub fn exactness_suite(conn: &Connection, count: usize, band: usize, seed: u64) -> Result<ExactnessSuite> {
    let d = conn.differentials();
    let (n, m) = (conn.geometry().n, conn.alg().dim);
    let mut r = rng(seed);
    let mut identities = [0.0; 5];
    let mut adjoint_identities = [0.0; 5];
    let mut adjointness: f64 = 0.0;
    for t in 0..count {
        let p = t % (n + m + 1);
        let w = random_bigraded(&mut r, n, m, p, band);
        let v = random_bigraded(&mut r, n, m, p + 1, band);
        for (slot, val) in identities.iter_mut().zip(five_identities(&d.space, &w, d.d_parts())) {
            *slot = val.max(*slot);
        }
        for (slot, val) in adjoint_identities.iter_mut().zip(five_identities(&d.space, &w, d.dstar_parts())) {
            *slot = val.max(*slot);
        }
        for (op, star) in d.d_parts().into_iter().zip(d.dstar_parts()) {
            let dw = op.apply(&w);
            let sv = star.apply(&v);
            let lhs = d.space.inner(&dw, &v)?;
            let rhs = d.space.inner(&w, &sv)?;
            let scale = d.space.norm(&dw) * d.space.norm(&v) + d.space.norm(&w) * d.space.norm(&sv);
            if scale > 0.0 {
                adjointness = adjointness.max((lhs - rhs).abs() / scale);
            }
        }
    }
    Ok(ExactnessSuite { forms: count, band, identities, adjoint_identities, adjointness })
}

/// Harmonic part of `cw4(A₀) − cw4(A₁)` for two seeded random connections.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassInvariance {
    pub seeds: [u64; 2],
    pub cw4_norms: [f64; 2],
    pub harmonic_difference: f64,
}

pub fn class_invariance(conn: &Connection, pair: &InvariantPolynomial, seed: u64) -> Result<ClassInvariance> {
    let seeds = [seed, seed.wrapping_add(1)];
    let mut forms = Vec::new();
    for s in seeds {
        let c = random_connection(&mut rng(s), conn.geometry().clone(), conn.alg().clone(), 1, 0.5)?;
        forms.push(chern_weil::cw4(pair, &c.curvature())?);
    }
    let geo = conn.geometry();
    let diff = &forms[0] - &forms[1];
    let harmonic = geo.norm(&geo.hodge_decompose(&diff).harmonic);
    Ok(ClassInvariance { seeds, cw4_norms: [geo.norm(&forms[0]), geo.norm(&forms[1])], harmonic_difference: harmonic })
}

/// Everything measured about the degree-one Chern–Simons form of an abelian scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cs1Run {
    pub input_norm: f64,
    pub d_orders: OrderNorms,
    pub dstar_orders: OrderNorms,
    /// `(δ, ‖d(φ(Θ) − h)‖_{g_δ}, ‖d*(φ(Θ) − h)‖_{g_δ})`.
    pub unscaled: Vec<(f64, f64, f64)>,
}

/// `‖η‖_{g_δ} = δ^{-n/2} ‖ρ_δ η‖`, so `‖dω‖_{g_δ} = δ^{-n/2} ‖d_δ ρ_δ ω‖` and likewise for `d*`.
pub fn metric_residuals(conn: &Connection, w: &BigradedForm, delta: f64) -> (f64, f64) {
    let d = conn.differentials();
    let scaled = w.rho(delta);
    let vol = delta.powf(-(conn.geometry().n as f64) / 2.0);
    (vol * d.space.norm(&d.d_at(&scaled, delta)), vol * d.space.norm(&d.dstar_at(&scaled, delta)))
}

/// Returns `NotExact` when `c₁ ≠ 0`.
pub fn cs1_run(conn: &Connection, phi: &InvariantPolynomial, deltas: &[f64]) -> Result<Cs1Run> {
    if !conn.alg().is_abelian() {
        return Err(Error::InvalidAlgebra("degree-one Chern–Simons check needs an abelian algebra".into()));
    }
    let geo = conn.geometry();
    let (n, m) = (geo.n, conn.alg().dim);
    let cw = chern_weil::cw2(phi, &conn.curvature())?;
    let h = chern_weil::primitive_h(geo, &cw)?;
    let cs = chern_weil::cs1(phi, conn)?;
    let h10 = BigradedForm::from_component(n, m, 1, 0, &[h])?;
    let series = DeltaPolynomial::new(vec![cs.clone(), h10.scale(-1.0)]);
    let (d_orders, dstar_orders) = residual_orders(&series, conn);
    let w = cs.sub(&h10);
    let unscaled = deltas
        .iter()
        .map(|&delta| {
            let (a, b) = metric_residuals(conn, &w, delta);
            (delta, a, b)
        })
        .collect();
    Ok(Cs1Run { input_norm: series_norm(&series, conn), d_orders, dstar_orders, unscaled })
}

/// Everything measured about the corrected degree-three Chern–Simons series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cs3Run {
    pub cw4_norm: f64,
    pub cw4_harmonic: f64,
    pub input_norm: f64,
    pub d_orders: OrderNorms,
    pub dstar_orders: OrderNorms,
    pub d_orders_without_beta: OrderNorms,
    pub dstar_orders_without_beta: OrderNorms,
    /// `‖d*_∇ α^{2,1}‖`.
    pub necessity_witness: f64,
    /// `‖d^{0,1*} β − d^{1,0*} α^{2,1}‖` and `‖d^{0,1} β‖`.
    pub beta_posts: (f64, f64),
    pub h_norm: f64,
    /// `‖ω₃ + h‖ / ‖h‖` for the recovered `ω₃^{3,0}`.
    pub recovery_error: f64,
}

pub fn order_at(v: &OrderNorms, m: usize) -> f64 {
    v.iter().find(|x| x.0 == m).map_or(0.0, |x| x.1)
}

/// Returns `NotExact` when the Chern–Weil form has a harmonic part.
pub fn cs3_run(conn: &Connection, pair: &InvariantPolynomial) -> Result<Cs3Run> {
    let geo = conn.geometry();
    let (n, m) = (geo.n, conn.alg().dim);
    if n != 4 {
        return Err(Error::InvalidGeometry(format!("degree-three check runs on T⁴, got T^{n}")));
    }
    let cw = chern_weil::cw4(pair, &conn.curvature())?;
    let cw4_harmonic = geo.norm(&geo.hodge_decompose(&cw).harmonic);
    let h = chern_weil::primitive_h(geo, &cw)?;
    let a03 = chern_weil::cs3_alpha03(pair, conn)?;
    let a21 = chern_weil::cs3_alpha21(pair, conn)?;
    let beta = chern_weil::beta_correction(conn, pair)?;
    let h30 = BigradedForm::from_component(n, m, 3, 0, &[h.clone()])?;
    let zero = BigradedForm::zero(n, m);
    let with = DeltaPolynomial::new(vec![a03.clone(), zero.clone(), a21.clone(), h30.add(&beta).scale(-1.0)]);
    let without = DeltaPolynomial::new(vec![a03, zero, a21.clone(), h30.scale(-1.0)]);
    let (d_orders, dstar_orders) = residual_orders(&with, conn);
    let (d_orders_without_beta, dstar_orders_without_beta) = residual_orders(&without, conn);
    let space = &conn.space;
    let witness = space.norm(&bigraded::covariant_dstar(&a21, conn));
    let post1 = space.norm(&bigraded::vertical_dstar(&beta, space).sub(&bigraded::covariant_dstar(&a21, conn).slot_part(1, 1)));
    let post2 = space.norm(&bigraded::vertical_d(&beta, space));
    let omega3 = recover_omega3(conn, &with)?;
    let h_norm = geo.norm(&h);
    let recovery_error = geo.norm(&(&omega3 + &h)) / h_norm.max(f64::MIN_POSITIVE);
    Ok(Cs3Run {
        cw4_norm: geo.norm(&cw),
        cw4_harmonic,
        input_norm: series_norm(&with, conn),
        d_orders,
        dstar_orders,
        d_orders_without_beta,
        dstar_orders_without_beta,
        necessity_witness: witness,
        beta_posts: (post1, post2),
        h_norm,
        recovery_error,
    })
}

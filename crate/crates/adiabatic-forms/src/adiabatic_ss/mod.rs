//! Formal δ-series harmonicity, Forman pages and eigenvalue decay in the adiabatic limit.

mod pages;
mod spectrum;

pub use pages::{
    compute_pages, compute_pages_with, harmonic_limit, limit_of, PageBasis, PageDims, PageEntry, PageOptions, PageReport, Pages, SlotDim,
    DEFAULT_BASIS_LIMIT,
};
pub use spectrum::{spectrum_sweep, zero_eigenvalue_count, DecayGroup, SpectrumReport};

use serde::{Deserialize, Serialize};

use crate::base_forms::FourierForm;
use crate::bigraded::{Connection, DeltaPolynomial};
use crate::error::{Error, Result};

/// Default formal-harmonicity tolerance factor: `τ = TAU_FORMAL · (1 + ‖ω_δ‖)`.
pub const TAU_FORMAL: f64 = 1e-10;

/// `(power, norm of the δ^power coefficient)` for `d_δ ω` and `d*_δ ω`.
pub type OrderNorms = Vec<(usize, f64)>;

pub fn residual_orders(w: &DeltaPolynomial, conn: &Connection) -> (OrderNorms, OrderNorms) {
    let d = conn.differentials();
    let norms = |p: DeltaPolynomial| p.coefficients.iter().enumerate().map(|(m, c)| (m, d.space.norm(c))).collect::<Vec<_>>();
    (norms(d.d_delta(w)), norms(d.dstar_delta(w)))
}

/// `‖ω_δ‖` as the root sum of squares of its coefficient norms.
pub fn series_norm(w: &DeltaPolynomial, conn: &Connection) -> f64 {
    w.coefficients.iter().map(|c| conn.space.norm(c).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderCheck {
    pub order: usize,
    pub d_norm: f64,
    pub dstar_norm: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormalReport {
    pub k: usize,
    pub tolerance: f64,
    pub orders: Vec<OrderCheck>,
    pub pass: bool,
}

/// Passes iff every residual order below `k` is under `τ_formal (1 + ‖ω_δ‖)`.
pub fn verify_formal_harmonic(w: &DeltaPolynomial, conn: &Connection, k: usize) -> FormalReport {
    verify_formal_harmonic_with(w, conn, k, TAU_FORMAL)
}

pub fn verify_formal_harmonic_with(w: &DeltaPolynomial, conn: &Connection, k: usize, tau: f64) -> FormalReport {
    let (d, s) = residual_orders(w, conn);
    let tolerance = tau * (1.0 + series_norm(w, conn));
    let at = |v: &OrderNorms, m: usize| v.iter().find(|x| x.0 == m).map_or(0.0, |x| x.1);
    let orders: Vec<OrderCheck> = (0..k)
        .map(|m| {
            let (dn, sn) = (at(&d, m), at(&s, m));
            OrderCheck { order: m, d_norm: dn, dstar_norm: sn, pass: dn <= tolerance && sn <= tolerance }
        })
        .collect();
    let pass = orders.iter().all(|o| o.pass);
    FormalReport { k, tolerance, orders, pass }
}

/// Solves `d x = rhs`, `d* x = 0`, `x ⊥ harmonics` on the base.
pub fn solve_exact(conn: &Connection, rhs: &FourierForm) -> Result<FourierForm> {
    let n = conn.geometry().n;
    if rhs.degree == 0 || rhs.degree > n {
        return Err(Error::DegreeOutOfRange { degree: rhs.degree, max: n });
    }
    conn.geometry().coexact_primitive(rhs)
}

/// `ω₃^{3,0}` recovered from the order-δ⁴ cancellation `d_M ω₃^{3,0} = -(δ⁴ coefficient in the (4,0) slot)`.
///
/// `lift` is the Chern–Simons series; any `(3,0)` part it carries is ignored.
pub fn recover_omega3(conn: &Connection, lift: &DeltaPolynomial) -> Result<FourierForm> {
    let n = conn.geometry().n;
    if n < 4 {
        return Err(Error::DegreeOverflow(4, n));
    }
    let stripped = DeltaPolynomial::new(
        lift.coefficients
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.components.remove(&(3, 0));
                c
            })
            .collect(),
    );
    let d4 = conn.differentials().d_delta(&stripped);
    let rhs = d4.coefficient(4).map(|c| c.component(4, 0).remove(0)).unwrap_or_else(|| FourierForm::zero(n, 4, 0));
    solve_exact(conn, &rhs.scale(-1.0))
}

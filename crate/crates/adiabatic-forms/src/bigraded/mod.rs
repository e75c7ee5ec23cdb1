//! The invariant bigraded complex `Ω^i(Tⁿ; Λ^j 𝔤*)` of a trivial bundle
//! `Tⁿ × G` with connection `A`, its three differentials
//! `d^{0,1}`, `d^{1,0}`, `d^{2,-1}`, their adjoints, and the δ-rescaled
//! operators `d_δ = d^{0,1} + δ d^{1,0} + δ² d^{2,-1}`.

mod form;
pub mod galerkin;
mod operator;

pub use form::{BigradedForm, BigradedFormJson, BigradedSpace, ComponentJson, DeltaPolynomial, SlotField};
pub use galerkin::{block_families, frequency_blocks, galerkin_operator, BlockFamily, GalerkinOperator};
pub use operator::{covariant_operator, curvature_operator, left_wedge, vertical_operator, CMat, Operator, SlotMap, Term};

use crate::base_forms::{FourierForm, TorusGeometry};
use crate::error::{Error, Result};
use crate::lie_algebra::LieAlgebraData;

/// A connection on the trivial bundle: one real 1-form per generator of 𝔤.
///
/// For abelian algebras the curvature may instead be supplied directly,
/// which models bundles whose first Chern class is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub space: BigradedSpace,
    pub a: Vec<FourierForm>,
    pub curvature_override: Option<Vec<FourierForm>>,
}

impl Connection {
    pub fn new(geometry: TorusGeometry, alg: LieAlgebraData, a: Vec<FourierForm>) -> Result<Self> {
        let n = geometry.n;
        if a.len() != alg.dim {
            return Err(Error::DimensionMismatch(format!("connection needs {} components, got {}", alg.dim, a.len())));
        }
        for f in &a {
            if f.degree != 1 || f.n != n {
                return Err(Error::DimensionMismatch("connection components must be 1-forms on the base".into()));
            }
            if f.reality_residual() > 1e-12 * (1.0 + f.max_abs()) {
                return Err(Error::RealityViolated(vec![]));
            }
        }
        let band = a.iter().map(|f| f.effective_band()).max().unwrap_or(0);
        let a = a.iter().map(|f| f.with_band(band.max(f.band)).trimmed()).collect();
        Ok(Connection { space: BigradedSpace::new(geometry, alg), a, curvature_override: None })
    }

    pub fn trivial(geometry: TorusGeometry, alg: LieAlgebraData) -> Self {
        let a = (0..alg.dim).map(|_| FourierForm::zero(geometry.n, 1, 0)).collect();
        Self::new(geometry, alg, a).expect("zero connection is valid")
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.space.geometry
    }

    pub fn alg(&self) -> &LieAlgebraData {
        &self.space.alg
    }

    /// Largest frequency present in `A` (and in a supplied curvature).
    pub fn band(&self) -> usize {
        let a = self.a.iter().map(|f| f.effective_band()).max().unwrap_or(0);
        let f = self.curvature_override.as_ref().map_or(0, |fs| fs.iter().map(|f| f.effective_band()).max().unwrap_or(0));
        a.max(f)
    }

    pub fn curvature(&self) -> Vec<FourierForm> {
        match &self.curvature_override {
            Some(f) => f.clone(),
            None => crate::chern_weil::curvature(self),
        }
    }

    pub fn differentials(&self) -> Differentials {
        Differentials::new(self)
    }
}

/// The three differentials of a connection and their adjoints.
#[derive(Debug, Clone)]
pub struct Differentials {
    pub space: BigradedSpace,
    pub d01: Operator,
    pub d10: Operator,
    pub d2m1: Operator,
    pub d01_star: Operator,
    pub d10_star: Operator,
    pub d2m1_star: Operator,
}

impl Differentials {
    pub fn new(conn: &Connection) -> Self {
        let space = conn.space.clone();
        // with a supplied abelian curvature the coadjoint coupling vanishes anyway
        let d01 = vertical_operator(&space);
        let d10 = covariant_operator(&space, &conn.a);
        let d2m1 = curvature_operator(&space, &conn.curvature());
        let d01_star = d01.adjoint(&space);
        let d10_star = d10.adjoint(&space);
        let d2m1_star = d2m1.adjoint(&space);
        Differentials { space, d01, d10, d2m1, d01_star, d10_star, d2m1_star }
    }

    /// `[d^{0,1}, d^{1,0}, d^{2,-1}]`, the coefficients of `δ⁰, δ¹, δ²` in `d_δ`.
    pub fn d_parts(&self) -> [&Operator; 3] {
        [&self.d01, &self.d10, &self.d2m1]
    }

    pub fn dstar_parts(&self) -> [&Operator; 3] {
        [&self.d01_star, &self.d10_star, &self.d2m1_star]
    }

    /// Un-rescaled exterior derivative on `P`.
    pub fn d_total(&self, w: &BigradedForm) -> BigradedForm {
        self.d01.apply(w).add(&self.d10.apply(w)).add(&self.d2m1.apply(w))
    }

    /// `d_δ ω` at a numeric δ.
    pub fn d_at(&self, w: &BigradedForm, delta: f64) -> BigradedForm {
        self.d01.apply(w).axpy(delta, &self.d10.apply(w)).axpy(delta * delta, &self.d2m1.apply(w))
    }

    pub fn dstar_at(&self, w: &BigradedForm, delta: f64) -> BigradedForm {
        self.d01_star.apply(w).axpy(delta, &self.d10_star.apply(w)).axpy(delta * delta, &self.d2m1_star.apply(w))
    }

    fn series(&self, parts: [&Operator; 3], w: &DeltaPolynomial) -> DeltaPolynomial {
        let (n, m) = (self.space.n(), self.space.m());
        let len = w.coefficients.len() + 2;
        let mut out = vec![BigradedForm::zero(n, m); len];
        for (p, c) in w.coefficients.iter().enumerate() {
            for (l, op) in parts.iter().enumerate() {
                out[p + l] = out[p + l].add(&op.apply(c));
            }
        }
        DeltaPolynomial::new(out)
    }

    pub fn d_delta(&self, w: &DeltaPolynomial) -> DeltaPolynomial {
        self.series(self.d_parts(), w)
    }

    pub fn dstar_delta(&self, w: &DeltaPolynomial) -> DeltaPolynomial {
        self.series(self.dstar_parts(), w)
    }

    pub fn laplacian_delta(&self, w: &DeltaPolynomial) -> DeltaPolynomial {
        let a = self.d_delta(&self.dstar_delta(w));
        let b = self.dstar_delta(&self.d_delta(w));
        let len = a.coefficients.len().max(b.coefficients.len());
        let (n, m) = (self.space.n(), self.space.m());
        let zero = BigradedForm::zero(n, m);
        DeltaPolynomial::new(
            (0..len)
                .map(|p| a.coefficient(p).unwrap_or(&zero).add(b.coefficient(p).unwrap_or(&zero)))
                .collect(),
        )
    }
}

pub fn vertical_d(w: &BigradedForm, space: &BigradedSpace) -> BigradedForm {
    vertical_operator(space).apply(w)
}

pub fn vertical_dstar(w: &BigradedForm, space: &BigradedSpace) -> BigradedForm {
    vertical_operator(space).adjoint(space).apply(w)
}

pub fn covariant_d(w: &BigradedForm, conn: &Connection) -> BigradedForm {
    covariant_operator(&conn.space, &conn.a).apply(w)
}

pub fn covariant_dstar(w: &BigradedForm, conn: &Connection) -> BigradedForm {
    covariant_operator(&conn.space, &conn.a).adjoint(&conn.space).apply(w)
}

pub fn curvature_contraction(w: &BigradedForm, f: &[FourierForm], space: &BigradedSpace) -> BigradedForm {
    curvature_operator(space, f).apply(w)
}

pub fn curvature_contraction_star(w: &BigradedForm, f: &[FourierForm], space: &BigradedSpace) -> BigradedForm {
    curvature_operator(space, f).adjoint(space).apply(w)
}

pub fn bigraded_inner_product(space: &BigradedSpace, a: &BigradedForm, b: &BigradedForm) -> Result<f64> {
    space.inner(a, b)
}

pub fn d_delta(w: &DeltaPolynomial, conn: &Connection) -> DeltaPolynomial {
    conn.differentials().d_delta(w)
}

pub fn dstar_delta(w: &DeltaPolynomial, conn: &Connection) -> DeltaPolynomial {
    conn.differentials().dstar_delta(w)
}

pub fn laplacian_delta(w: &DeltaPolynomial, conn: &Connection) -> DeltaPolynomial {
    conn.differentials().laplacian_delta(w)
}

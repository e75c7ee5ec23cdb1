//! Curvature, Chern–Weil forms and Chern–Simons forms in bigraded coordinates.

use nalgebra::{DMatrix, DVector};

use crate::base_forms::{FourierForm, TorusGeometry};
use crate::bigraded::{BigradedForm, Connection};
use crate::error::{Error, Result};
use crate::lie_algebra::{self, LieAlgebraData};

const INVARIANCE_TOL: f64 = 1e-12;

/// `F = dA + ½[A∧A]`, one 2-form per generator.
pub fn curvature(conn: &Connection) -> Vec<FourierForm> {
    let alg = conn.alg();
    let n = conn.geometry().n;
    let m = alg.dim;
    let mut f: Vec<FourierForm> = conn.a.iter().map(|a| a.d()).collect();
    for a in 0..m {
        for b in 0..m {
            if conn.a[a].is_zero() || conn.a[b].is_zero() {
                continue;
            }
            let mut ab: Option<FourierForm> = None;
            for c in 0..m {
                let s = alg.c(a, b, c);
                if s == 0.0 {
                    continue;
                }
                let w = ab.get_or_insert_with(|| conn.a[a].wedge(&conn.a[b]).expect("1+1 <= n"));
                f[c] = &f[c] + &w.scale(0.5 * s);
            }
        }
    }
    f.into_iter().map(|x| if x.n == n { x.trimmed() } else { x }).collect()
}

/// `[A∧F]` for a 𝔤-valued 1-form `A` and `p`-form `F`.
pub fn bracket_wedge(alg: &LieAlgebraData, a: &[FourierForm], f: &[FourierForm]) -> Result<Vec<FourierForm>> {
    let m = alg.dim;
    let n = f[0].n;
    let deg = a[0].degree + f[0].degree;
    if deg > n {
        return Err(Error::DegreeOverflow(deg, n));
    }
    let mut out: Vec<FourierForm> = (0..m).map(|_| FourierForm::zero(n, deg, 0)).collect();
    for x in 0..m {
        for y in 0..m {
            if a[x].is_zero() || f[y].is_zero() {
                continue;
            }
            let w = a[x].wedge(&f[y])?;
            for (c, o) in out.iter_mut().enumerate() {
                let s = alg.c(x, y, c);
                if s != 0.0 {
                    *o = &*o + &w.scale(s);
                }
            }
        }
    }
    Ok(out)
}

/// Bianchi residual `dF + [A∧F]`.
pub fn bianchi_residual(conn: &Connection, f: &[FourierForm]) -> Vec<FourierForm> {
    let br = bracket_wedge(conn.alg(), &conn.a, f).expect("degree 3 fits when n >= 3");
    f.iter().zip(br).map(|(x, y)| x.d() + y).collect()
}

/// An Ad-invariant polynomial of degree one or two on 𝔤, with its normalization.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantPolynomial {
    Linear { phi: DVector<f64>, normalization: f64 },
    Bilinear { form: DMatrix<f64>, normalization: f64 },
}

impl InvariantPolynomial {
    /// Rejects `φ` unless `φ ∘ ad_x = 0` for every generator.
    pub fn linear(alg: &LieAlgebraData, phi: DVector<f64>, normalization: f64) -> Result<Self> {
        if phi.len() != alg.dim {
            return Err(Error::DimensionMismatch("functional length".into()));
        }
        let mut r: f64 = 0.0;
        for x in 0..alg.dim {
            for a in 0..alg.dim {
                let s: f64 = (0..alg.dim).map(|k| phi[k] * alg.c(x, a, k)).sum();
                r = r.max(s.abs());
            }
        }
        if r > INVARIANCE_TOL {
            return Err(Error::NotInvariant(format!("φ∘ad residual {r:.3e}")));
        }
        Ok(InvariantPolynomial::Linear { phi, normalization })
    }

    pub fn bilinear(alg: &LieAlgebraData, form: DMatrix<f64>, normalization: f64) -> Result<Self> {
        if form.shape() != (alg.dim, alg.dim) || (&form - form.transpose()).amax() > INVARIANCE_TOL {
            return Err(Error::NotInvariant("bilinear form must be symmetric of size dim 𝔤".into()));
        }
        let r = alg.invariance_residual(&form);
        if r > INVARIANCE_TOL {
            return Err(Error::NotInvariant(format!("ad-invariance residual {r:.3e}")));
        }
        Ok(InvariantPolynomial::Bilinear { form, normalization })
    }

    /// `(i/2π) tr` on u(1) with generator `i`: `φ(e) = -1/2π`.
    pub fn first_chern_u1(alg: &LieAlgebraData) -> Result<Self> {
        if alg.dim != 1 {
            return Err(Error::WrongPolynomial("first_chern is defined on u(1)".into()));
        }
        Self::linear(alg, DVector::from_element(1, -1.0 / (2.0 * std::f64::consts::PI)), 1.0)
    }

    /// `(1/8π²) tr(X Y)` in the fundamental representation of su(N), via Killing/(2N).
    pub fn second_chern(alg: &LieAlgebraData) -> Result<Self> {
        let big_n = ((alg.dim + 1) as f64).sqrt().round() as usize;
        if big_n < 2 || big_n * big_n != alg.dim + 1 {
            return Err(Error::WrongPolynomial(format!("second_chern needs su(N); dim {} is not N²-1", alg.dim)));
        }
        let trace = alg.killing_form() / (2.0 * big_n as f64);
        let pi = std::f64::consts::PI;
        Self::bilinear(alg, trace, 1.0 / (8.0 * pi * pi))
    }

    /// The functional `normalization · φ`.
    pub fn scaled_linear(&self) -> Result<DVector<f64>> {
        match self {
            InvariantPolynomial::Linear { phi, normalization } => Ok(phi * *normalization),
            _ => Err(Error::WrongPolynomial("expected a degree-one polynomial".into())),
        }
    }

    /// The pairing `normalization · B`.
    pub fn scaled_bilinear(&self) -> Result<DMatrix<f64>> {
        match self {
            InvariantPolynomial::Bilinear { form, normalization } => Ok(form * *normalization),
            _ => Err(Error::WrongPolynomial("expected a bilinear polynomial".into())),
        }
    }
}

/// `φ(F)`.
pub fn cw2(phi: &InvariantPolynomial, f: &[FourierForm]) -> Result<FourierForm> {
    let v = phi.scaled_linear()?;
    let n = f[0].n;
    Ok(f.iter().enumerate().fold(FourierForm::zero(n, 2, 0), |acc, (a, fa)| &acc + &fa.scale(v[a])))
}

/// `⟨F∧F⟩`; needs a 4-dimensional base.
pub fn cw4(pair: &InvariantPolynomial, f: &[FourierForm]) -> Result<FourierForm> {
    let b = pair.scaled_bilinear()?;
    let n = f[0].n;
    if n < 4 {
        return Err(Error::DegreeOverflow(4, n));
    }
    let mut out = FourierForm::zero(n, 4, 0);
    for a in 0..f.len() {
        for c in 0..f.len() {
            if b[(a, c)] != 0.0 && !f[a].is_zero() && !f[c].is_zero() {
                out = &out + &f[a].wedge(&f[c])?.scale(b[(a, c)]);
            }
        }
    }
    Ok(out)
}

/// `φ(Θ)`: the constant `(0,1)` component `φ`.
pub fn cs1(phi: &InvariantPolynomial, conn: &Connection) -> Result<BigradedForm> {
    let v = phi.scaled_linear()?;
    let n = conn.geometry().n;
    let forms: Vec<FourierForm> = v.iter().map(|&c| FourierForm::constant(n, 0, &[(vec![], c)])).collect();
    BigradedForm::from_component(n, conn.alg().dim, 0, 1, &forms)
}

/// `α^{2,1} = ⟨F, ·⟩`.
pub fn cs3_alpha21(pair: &InvariantPolynomial, conn: &Connection) -> Result<BigradedForm> {
    let b = pair.scaled_bilinear()?;
    let f = conn.curvature();
    let n = conn.geometry().n;
    let m = conn.alg().dim;
    let forms: Vec<FourierForm> = (0..m)
        .map(|a| (0..m).fold(FourierForm::zero(n, 2, 0), |acc, c| &acc + &f[c].scale(b[(c, a)])))
        .collect();
    BigradedForm::from_component(n, m, 2, 1, &forms)
}

/// `α^{0,3} = -(1/6)⟨Θ∧[Θ∧Θ]⟩` as a constant `(0,3)` component.
pub fn cs3_alpha03(pair: &InvariantPolynomial, conn: &Connection) -> Result<BigradedForm> {
    let b = pair.scaled_bilinear()?;
    let n = conn.geometry().n;
    let alg = conn.alg();
    if alg.dim < 3 {
        return Ok(BigradedForm::zero(n, alg.dim));
    }
    let t = lie_algebra::fiber_term_with(alg, &b);
    let forms: Vec<FourierForm> = t.coefficients.iter().map(|&c| FourierForm::constant(n, 0, &[(vec![], c)])).collect();
    BigradedForm::from_component(n, alg.dim, 0, 3, &forms)
}

/// `α^{2,1} + α^{0,3}`.
pub fn cs3(pair: &InvariantPolynomial, conn: &Connection) -> Result<BigradedForm> {
    Ok(cs3_alpha21(pair, conn)?.add(&cs3_alpha03(pair, conn)?))
}

/// The coexact primitive of a Chern–Weil form.
pub fn primitive_h(geometry: &TorusGeometry, cw: &FourierForm) -> Result<FourierForm> {
    geometry.coexact_primitive(cw)
}

/// `β^{1,2}` solving `d^{0,1*} β = d^{1,0*} α^{2,1}` with `β` fiberwise exact.
pub fn beta_correction(conn: &Connection, pair: &InvariantPolynomial) -> Result<BigradedForm> {
    let alg = conn.alg();
    let h1 = lie_algebra::harmonic_subspace(alg, 1)?.len();
    if h1 != 0 || alg.dim < 2 {
        return Err(Error::NotSemisimple(h1.max(1)));
    }
    let alpha = cs3_alpha21(pair, conn)?;
    let gamma = crate::bigraded::covariant_dstar(&alpha, conn).component(1, 1);
    // on i = 1 the vertical adjoint is +d*_CE, so β = G γ with G the Green map
    let g = lie_algebra::green_matrix(alg);
    let n = conn.geometry().n;
    let forms: Vec<FourierForm> = (0..g.nrows())
        .map(|jj| (0..alg.dim).fold(FourierForm::zero(n, 1, 0), |acc, a| &acc + &gamma[a].scale(g[(jj, a)])))
        .collect();
    BigradedForm::from_component(n, alg.dim, 1, 2, &forms)
}

/// Abelian bundle described by its curvature alone (possibly with nonzero class).
pub fn abelian_scenario(geometry: TorusGeometry, alg: LieAlgebraData, f: Vec<FourierForm>) -> Result<Connection> {
    if !alg.is_abelian() {
        return Err(Error::InvalidAlgebra("abelian scenario needs an abelian algebra".into()));
    }
    if f.len() != alg.dim || f.iter().any(|x| x.degree != 2 || x.n != geometry.n) {
        return Err(Error::DimensionMismatch("one curvature 2-form per generator".into()));
    }
    for x in &f {
        let d = x.d().max_abs();
        if d > 1e-12 * (1.0 + x.max_abs()) {
            return Err(Error::NotClosed(d));
        }
    }
    let mut conn = Connection::trivial(geometry, alg);
    conn.curvature_override = Some(f.into_iter().map(|x| x.trimmed()).collect());
    Ok(conn)
}

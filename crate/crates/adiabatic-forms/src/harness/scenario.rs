//! Declarative scenario files.
//!
//! Floating-point values are written as decimal strings (`"0.25"`, `"1e-10"`);
//! integers (dimensions, indices, bands) are plain TOML integers.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::base_forms::{FourierForm, TorusGeometry};
use crate::bigraded::Connection;
use crate::chern_weil::{self, InvariantPolynomial};
use crate::error::{Error, Result};
use crate::lie_algebra::{self, LieAlgebraData};
use crate::multi_index::subsets;

/// A float carried as its decimal text.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Decimal(pub String);

impl Decimal {
    pub fn value(&self) -> Result<f64> {
        let v: f64 = self.0.trim().parse().map_err(|_| Error::Config(format!("not a decimal number: {:?}", self.0)))?;
        if !v.is_finite() {
            return Err(Error::Config(format!("non-finite number {:?}", self.0)));
        }
        Ok(v)
    }
}

fn values(v: &[Decimal]) -> Result<Vec<f64>> {
    v.iter().map(Decimal::value).collect()
}

fn matrix(rows: &[Vec<Decimal>], n: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Config(format!("{what} must be {n}×{n}")));
    }
    let flat: Vec<f64> = rows.iter().map(|r| values(r)).collect::<Result<Vec<_>>>()?.concat();
    Ok(DMatrix::from_row_slice(n, n, &flat))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    dim: usize,
    metric: Option<Vec<Vec<Decimal>>>,
    orientation: Option<i8>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: Option<String>,
    scale: Option<Decimal>,
    dim: Option<usize>,
    structure_constants: Option<Vec<(usize, usize, usize, Decimal)>>,
    metric: Option<Vec<Vec<Decimal>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub freq: Vec<i64>,
    pub index: Vec<usize>,
    pub re: Decimal,
    pub im: Option<Decimal>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    generator: usize,
    terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    entries: Vec<EntryFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialFile {
    kind: String,
    normalization: Option<Decimal>,
    linear: Option<Vec<Decimal>>,
    bilinear: Option<Vec<Vec<Decimal>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunFile {
    band: usize,
    k_max: Option<usize>,
    #[serde(default)]
    degrees: Vec<usize>,
    #[serde(default)]
    deltas: Vec<Decimal>,
    spectrum_degree: Option<usize>,
    spectrum_deltas: Option<Vec<Decimal>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolFile {
    formal: Option<Decimal>,
    rank: Option<Decimal>,
    spectral: Option<Decimal>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct EInfFile {
    criterion: Option<String>,
    p: usize,
    total: usize,
    #[serde(default)]
    slots: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectFile {
    #[serde(default)]
    e_infinity: Vec<EInfFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(default)]
    criteria: Vec<String>,
    geometry: GeometryFile,
    algebra: AlgebraFile,
    connection: Option<FieldFile>,
    curvature: Option<FieldFile>,
    polynomial: Option<PolynomialFile>,
    run: RunFile,
    tolerances: Option<TolFile>,
    output: Option<String>,
    expect: Option<ExpectFile>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub formal: f64,
    pub rank: f64,
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { formal: 1e-10, rank: 1e-9, spectral: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    /// One 1-form per generator.
    Connection(Vec<FourierForm>),
    /// One closed 2-form per generator (abelian algebras only).
    Curvature(Vec<FourierForm>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedLimit {
    pub criterion: Option<String>,
    pub p: usize,
    pub total: usize,
    pub slots: Vec<((usize, usize), usize)>,
}

/// Everything one run needs: base, algebra, connection, polynomial, grids and tolerances.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub criteria: Vec<String>,
    pub geometry: TorusGeometry,
    pub algebra: LieAlgebraData,
    pub algebra_name: String,
    pub field: FieldSource,
    pub polynomial: Option<InvariantPolynomial>,
    pub polynomial_kind: Option<String>,
    pub band: usize,
    pub k_max: usize,
    pub degrees: Vec<usize>,
    pub deltas: Vec<f64>,
    pub spectrum_degree: usize,
    pub spectrum_deltas: Vec<f64>,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub expected_limits: Vec<ExpectedLimit>,
}

fn build_algebra(a: &AlgebraFile) -> Result<(LieAlgebraData, String)> {
    if let Some(name) = &a.name {
        let scale = a.scale.as_ref().map(Decimal::value).transpose()?;
        let alg = match name.as_str() {
            "su2" => lie_algebra::make_su2_scaled(scale.unwrap_or(1.0)),
            "su3" => lie_algebra::make_su3(),
            "u1" => lie_algebra::make_u1(),
            "abelian" => lie_algebra::make_abelian(a.dim.ok_or_else(|| Error::Config("abelian algebra needs dim".into()))?),
            other => return Err(Error::Config(format!("unknown algebra {other:?} (su2, su3, u1, abelian)"))),
        };
        return Ok((alg, name.clone()));
    }
    let dim = a.dim.ok_or_else(|| Error::Config("custom algebra needs dim".into()))?;
    let entries: Vec<(usize, usize, usize, f64)> = a
        .structure_constants
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .map(|(i, j, k, v)| Ok((*i, *j, *k, v.value()?)))
        .collect::<Result<_>>()?;
    let metric = match &a.metric {
        Some(m) => matrix(m, dim, "algebra metric")?,
        None => DMatrix::identity(dim, dim),
    };
    Ok((LieAlgebraData::from_entries(dim, &entries, metric)?, "custom".into()))
}

fn build_form(n: usize, degree: usize, terms: &[TermFile]) -> Result<FourierForm> {
    let band = terms.iter().map(|t| crate::base_forms::sup_norm(&t.freq)).max().unwrap_or(0);
    let entries = terms
        .iter()
        .map(|t| {
            Ok(crate::base_forms::FourierEntry {
                freq: t.freq.clone(),
                index: t.index.clone(),
                re: t.re.value()?,
                im: t.im.as_ref().map(Decimal::value).transpose()?.unwrap_or(0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FourierForm::from_json(&crate::base_forms::FourierFormJson { dim: n, degree, band, entries })
}

fn build_field(f: &FieldFile, n: usize, m: usize, degree: usize) -> Result<Vec<FourierForm>> {
    let mut out: Vec<FourierForm> = (0..m).map(|_| FourierForm::zero(n, degree, 0)).collect();
    for e in &f.entries {
        if e.generator >= m {
            return Err(Error::Config(format!("generator {} out of range for dim {m}", e.generator)));
        }
        out[e.generator] = &out[e.generator] + &build_form(n, degree, &e.terms)?;
    }
    Ok(out)
}

fn build_polynomial(p: &PolynomialFile, alg: &LieAlgebraData) -> Result<InvariantPolynomial> {
    let norm = p.normalization.as_ref().map(Decimal::value).transpose()?;
    let poly = match p.kind.as_str() {
        "first_chern" => InvariantPolynomial::first_chern_u1(alg)?,
        "second_chern" => InvariantPolynomial::second_chern(alg)?,
        "custom_linear" => {
            let v = values(p.linear.as_deref().ok_or_else(|| Error::Config("custom_linear needs `linear`".into()))?)?;
            InvariantPolynomial::linear(alg, DVector::from_vec(v), 1.0)?
        }
        "custom_bilinear" => {
            let b = matrix(p.bilinear.as_deref().ok_or_else(|| Error::Config("custom_bilinear needs `bilinear`".into()))?, alg.dim, "bilinear form")?;
            InvariantPolynomial::bilinear(alg, b, 1.0)?
        }
        other => return Err(Error::Config(format!("unknown polynomial {other:?}"))),
    };
    Ok(match (poly, norm) {
        (InvariantPolynomial::Linear { phi, normalization }, Some(s)) => InvariantPolynomial::Linear { phi, normalization: normalization * s },
        (InvariantPolynomial::Bilinear { form, normalization }, Some(s)) => InvariantPolynomial::Bilinear { form, normalization: normalization * s },
        (poly, None) => poly,
    })
}

fn positive(v: f64, what: &str) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Config(format!("{what} must be positive")))
    }
}

fn deltas(v: &[Decimal], what: &str) -> Result<Vec<f64>> {
    let d = values(v)?;
    if d.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::Config(format!("{what} must lie in (0, 1]")));
    }
    Ok(d)
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let f: ScenarioFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let n = f.geometry.dim;
        let metric = match &f.geometry.metric {
            Some(m) => matrix(m, n, "geometry metric")?,
            None => DMatrix::identity(n, n),
        };
        let geometry = TorusGeometry::new(metric, f.geometry.orientation.unwrap_or(1))?;
        let (algebra, algebra_name) = build_algebra(&f.algebra)?;
        let m = algebra.dim;
        let field = match (&f.connection, &f.curvature) {
            (Some(c), None) => FieldSource::Connection(build_field(c, n, m, 1)?),
            (None, Some(c)) => FieldSource::Curvature(build_field(c, n, m, 2)?),
            (None, None) => FieldSource::Connection((0..m).map(|_| FourierForm::zero(n, 1, 0)).collect()),
            (Some(_), Some(_)) => return Err(Error::Config("give either [connection] or [curvature], not both".into())),
        };
        let polynomial = f.polynomial.as_ref().map(|p| build_polynomial(p, &algebra)).transpose()?;
        let tol = Tolerances::default();
        let tolerances = match &f.tolerances {
            None => tol,
            Some(t) => Tolerances {
                formal: positive(t.formal.as_ref().map_or(Ok(tol.formal), Decimal::value)?, "formal tolerance")?,
                rank: positive(t.rank.as_ref().map_or(Ok(tol.rank), Decimal::value)?, "rank tolerance")?,
                spectral: positive(t.spectral.as_ref().map_or(Ok(tol.spectral), Decimal::value)?, "spectral tolerance")?,
            },
        };
        let expected_limits = f
            .expect
            .map(|e| e.e_infinity)
            .unwrap_or_default()
            .into_iter()
            .map(|e| ExpectedLimit { criterion: e.criterion, p: e.p, total: e.total, slots: e.slots.into_iter().map(|(i, j, d)| ((i, j), d)).collect() })
            .collect();
        let s = Scenario {
            name: f.name,
            criteria: f.criteria,
            geometry,
            algebra,
            algebra_name,
            field,
            polynomial,
            polynomial_kind: f.polynomial.map(|p| p.kind),
            band: f.run.band,
            k_max: f.run.k_max.unwrap_or(6),
            degrees: f.run.degrees,
            deltas: deltas(&f.run.deltas, "deltas")?,
            spectrum_degree: f.run.spectrum_degree.unwrap_or(0),
            spectrum_deltas: deltas(f.run.spectrum_deltas.as_deref().unwrap_or(&[]), "spectrum deltas")?,
            tolerances,
            output: f.output.map(PathBuf::from),
            expected_limits,
        };
        s.connection()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn connection(&self) -> Result<Connection> {
        match &self.field {
            FieldSource::Connection(a) => Connection::new(self.geometry.clone(), self.algebra.clone(), a.clone()),
            FieldSource::Curvature(f) => chern_weil::abelian_scenario(self.geometry.clone(), self.algebra.clone(), f.clone()),
        }
    }

    /// True when both the connection and any supplied curvature vanish.
    pub fn is_flat_trivial(&self) -> bool {
        match &self.field {
            FieldSource::Connection(a) => a.iter().all(|f| f.is_zero()),
            FieldSource::Curvature(f) => f.iter().all(|f| f.is_zero()),
        }
    }

    pub fn polynomial(&self) -> Result<&InvariantPolynomial> {
        self.polynomial.as_ref().ok_or_else(|| Error::Config(format!("scenario {} has no [polynomial]", self.name)))
    }

    pub fn lists(&self, criterion: &str) -> bool {
        self.criteria.iter().any(|c| c == criterion)
    }
}

/// Künneth dimensions `Σ_{i+j=p} C(n,i)·b_j(𝔤)` per slot.
pub fn kunneth_dims(n: usize, betti: &[usize], p: usize) -> Vec<((usize, usize), usize)> {
    (0..=p.min(n))
        .filter(|&i| p - i < betti.len())
        .map(|i| ((i, p - i), subsets(n, i).len() * betti[p - i]))
        .collect()
}

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::base_forms::{freq_count, freq_index, sup_norm, FourierForm, FourierFormJson, TorusGeometry};
use crate::error::{Error, Result};
use crate::lie_algebra::{self, LieAlgebraData};
use crate::multi_index::{binomial, subsets};

/// Coefficients of a `Λ^j 𝔤*`-valued `i`-form, laid out `[freq][I][J]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotField {
    pub band: usize,
    pub data: Vec<Complex64>,
}

/// An element of `⊕ Ω^i(Tⁿ; Λ^j 𝔤*)`; absent slots are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BigradedForm {
    pub n: usize,
    pub m: usize,
    pub components: BTreeMap<(usize, usize), SlotField>,
}

/// Geometry and algebra shared by every bigraded form of one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BigradedSpace {
    pub geometry: TorusGeometry,
    pub alg: LieAlgebraData,
    base_gram: Vec<DMatrix<f64>>,
    fiber_gram: Vec<DMatrix<f64>>,
}

impl BigradedSpace {
    pub fn new(geometry: TorusGeometry, alg: LieAlgebraData) -> Self {
        let base_gram = (0..=geometry.n).map(|i| geometry.gram(i)).collect();
        let fiber_gram = (0..=alg.dim).map(|j| lie_algebra::gram(&alg, j)).collect();
        BigradedSpace { geometry, alg, base_gram, fiber_gram }
    }

    pub fn n(&self) -> usize {
        self.geometry.n
    }

    pub fn m(&self) -> usize {
        self.alg.dim
    }

    pub fn slot_dim(&self, i: usize, j: usize) -> usize {
        binomial(self.n(), i) * binomial(self.m(), j)
    }

    /// Slots `(i, j)` with `i + j = p`, in increasing `i`.
    pub fn slots(&self, p: usize) -> Vec<(usize, usize)> {
        (0..=self.n().min(p)).filter(|&i| p - i <= self.m()).map(|i| (i, p - i)).collect()
    }

    /// `Λ^i g_M^* ⊗ Λ^j g_G^*` Gram matrix of one slot.
    pub fn slot_gram(&self, i: usize, j: usize) -> DMatrix<f64> {
        self.base_gram[i].kronecker(&self.fiber_gram[j])
    }

    pub fn zero(&self) -> BigradedForm {
        BigradedForm::zero(self.n(), self.m())
    }

    pub fn inner(&self, a: &BigradedForm, b: &BigradedForm) -> Result<f64> {
        if (a.n, a.m) != (b.n, b.m) || a.n != self.n() || a.m != self.m() {
            return Err(Error::DimensionMismatch("bigraded forms from different spaces".into()));
        }
        let mut total = 0.0;
        for (&(i, j), fa) in &a.components {
            let Some(fb) = b.components.get(&(i, j)) else { continue };
            let g = self.slot_gram(i, j);
            let d = g.nrows();
            let band = fa.band.max(fb.band);
            let xa = a.slot_with_band(i, j, band);
            let xb = b.slot_with_band(i, j, band);
            let mut s = Complex64::new(0.0, 0.0);
            for f in 0..freq_count(self.n(), band) {
                let (u, v) = (&xa[f * d..(f + 1) * d], &xb[f * d..(f + 1) * d]);
                for r in 0..d {
                    if u[r].norm() == 0.0 {
                        continue;
                    }
                    for c in 0..d {
                        s += u[r].conj() * g[(r, c)] * v[c];
                    }
                }
            }
            total += s.re;
        }
        Ok(self.geometry.volume() * total)
    }

    pub fn norm(&self, a: &BigradedForm) -> f64 {
        self.inner(a, a).unwrap_or(0.0).max(0.0).sqrt()
    }
}

impl BigradedForm {
    pub fn zero(n: usize, m: usize) -> Self {
        BigradedForm { n, m, components: BTreeMap::new() }
    }

    pub fn slot_dim(&self, i: usize, j: usize) -> usize {
        binomial(self.n, i) * binomial(self.m, j)
    }

    /// Builds the `(i, j)` slot from one degree-`i` form per `Λ^j` multi-index.
    pub fn from_component(n: usize, m: usize, i: usize, j: usize, forms: &[FourierForm]) -> Result<Self> {
        let mut out = Self::zero(n, m);
        out.set_component(i, j, forms)?;
        Ok(out)
    }

    pub fn set_component(&mut self, i: usize, j: usize, forms: &[FourierForm]) -> Result<()> {
        let cj = binomial(self.m, j);
        if forms.len() != cj || i > self.n || j > self.m {
            return Err(Error::DimensionMismatch(format!("slot ({i},{j}) needs {cj} forms, got {}", forms.len())));
        }
        if forms.iter().any(|f| f.degree != i || f.n != self.n) {
            return Err(Error::DimensionMismatch(format!("slot ({i},{j}) needs degree-{i} forms")));
        }
        let band = forms.iter().map(|f| f.band).max().unwrap_or(0);
        let ci = binomial(self.n, i);
        let d = ci * cj;
        let mut data = vec![Complex64::new(0.0, 0.0); freq_count(self.n, band) * d];
        for (jj, f) in forms.iter().enumerate() {
            let f = f.with_band(band);
            for fr in 0..f.freq_count() {
                let blk = f.block(fr);
                for ii in 0..ci {
                    data[fr * d + ii * cj + jj] = blk[ii];
                }
            }
        }
        self.components.insert((i, j), SlotField { band, data });
        Ok(())
    }

    /// One degree-`i` form per `Λ^j` multi-index.
    pub fn component(&self, i: usize, j: usize) -> Vec<FourierForm> {
        let cj = binomial(self.m, j);
        let ci = binomial(self.n, i);
        match self.components.get(&(i, j)) {
            None => (0..cj).map(|_| FourierForm::zero(self.n, i, 0)).collect(),
            Some(s) => (0..cj)
                .map(|jj| {
                    let mut f = FourierForm::zero(self.n, i, s.band);
                    let d = ci * cj;
                    for fr in 0..f.freq_count() {
                        for ii in 0..ci {
                            f.coeffs_mut()[fr * ci + ii] = s.data[fr * d + ii * cj + jj];
                        }
                    }
                    f
                })
                .collect(),
        }
    }

    /// Slot data re-embedded at `band` (zeros if absent).
    pub fn slot_with_band(&self, i: usize, j: usize, band: usize) -> Vec<Complex64> {
        let d = self.slot_dim(i, j);
        let mut out = vec![Complex64::new(0.0, 0.0); freq_count(self.n, band) * d];
        if let Some(s) = self.components.get(&(i, j)) {
            for f in 0..freq_count(self.n, s.band) {
                let k = crate::base_forms::freq_of(self.n, s.band, f);
                if let Some(g) = freq_index(band, &k) {
                    out[g * d..(g + 1) * d].copy_from_slice(&s.data[f * d..(f + 1) * d]);
                }
            }
        }
        out
    }

    /// Accumulates `v` into slot `(i, j)` at frequency `k`, growing storage as needed.
    pub fn add_block(&mut self, i: usize, j: usize, k: &[i64], v: &[Complex64]) {
        let d = self.slot_dim(i, j);
        let need = sup_norm(k);
        let n = self.n;
        let cur = self.components.get(&(i, j)).map(|s| s.band);
        let band = match cur {
            Some(b) if b >= need => b,
            Some(b) => {
                let data = self.slot_with_band(i, j, need.max(b));
                self.components.insert((i, j), SlotField { band: need.max(b), data });
                need.max(b)
            }
            None => {
                self.components.insert((i, j), SlotField { band: need, data: vec![Complex64::new(0.0, 0.0); freq_count(n, need) * d] });
                need
            }
        };
        let f = freq_index(band, k).expect("band grown");
        let slot = self.components.get_mut(&(i, j)).expect("inserted");
        for (o, x) in slot.data[f * d..(f + 1) * d].iter_mut().zip(v) {
            *o += x;
        }
    }

    pub fn band(&self) -> usize {
        self.components.values().map(|s| s.band).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.values().flat_map(|s| s.data.iter()).fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for slot in out.components.values_mut() {
            slot.data.iter_mut().for_each(|c| *c *= s);
        }
        out
    }

    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        self.axpy_complex(Complex64::new(s, 0.0), other)
    }

    pub fn axpy_complex(&self, s: Complex64, other: &Self) -> Self {
        assert_eq!((self.n, self.m), (other.n, other.m), "bigraded shape mismatch");
        let mut out = self.clone();
        for (&(i, j), slot) in &other.components {
            let d = self.slot_dim(i, j);
            for f in 0..freq_count(self.n, slot.band) {
                let blk = &slot.data[f * d..(f + 1) * d];
                if blk.iter().all(|c| c.norm() == 0.0) {
                    continue;
                }
                let k = crate::base_forms::freq_of(self.n, slot.band, f);
                let v: Vec<Complex64> = blk.iter().map(|c| c * s).collect();
                out.add_block(i, j, &k, &v);
            }
        }
        out
    }

    /// `k ↦ conj(c_{-k})`; real forms are its fixed points.
    pub fn conj_reflect(&self) -> Self {
        let mut out = self.clone();
        for (&(i, j), slot) in out.components.iter_mut() {
            let d = binomial(self.n, i) * binomial(self.m, j);
            let src = &self.components[&(i, j)].data;
            for f in 0..freq_count(self.n, slot.band) {
                let minus: Vec<i64> = crate::base_forms::freq_of(self.n, slot.band, f).iter().map(|v| -v).collect();
                let g = freq_index(slot.band, &minus).expect("cube is symmetric");
                for r in 0..d {
                    slot.data[f * d + r] = src[g * d + r].conj();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    /// Keeps only the slot `(i, j)`.
    pub fn slot_part(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.m);
        if let Some(s) = self.components.get(&(i, j)) {
            out.components.insert((i, j), s.clone());
        }
        out
    }

    /// Keeps the slots of total degree `p`.
    pub fn degree_part(&self, p: usize) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for (&(i, j), s) in &self.components {
            if i + j == p {
                out.components.insert((i, j), s.clone());
            }
        }
        out
    }

    /// `ρ_δ`: scales the `(i, j)` slot by `δ^i`.
    pub fn rho(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for (&(i, _), slot) in out.components.iter_mut() {
            let s = delta.powi(i as i32);
            slot.data.iter_mut().for_each(|c| *c *= s);
        }
        out
    }

    pub fn reality_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for (&(i, j), _) in &self.components {
            for f in self.component(i, j) {
                r = r.max(f.reality_residual());
            }
        }
        r
    }

    pub fn to_json(&self) -> BigradedFormJson {
        let mut components = Vec::new();
        for &(i, j) in self.components.keys() {
            for (jj, f) in self.component(i, j).into_iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                components.push(ComponentJson { i, j, fiber_index: subsets(self.m, j)[jj].clone(), form: f.trimmed().to_json() });
            }
        }
        BigradedFormJson { base_dim: self.n, algebra_dim: self.m, components }
    }

    pub fn from_json(js: &BigradedFormJson) -> Result<Self> {
        let mut out = Self::zero(js.base_dim, js.algebra_dim);
        for c in &js.components {
            if c.fiber_index.len() != c.j {
                return Err(Error::Config(format!("fiber index {:?} does not have size {}", c.fiber_index, c.j)));
            }
            let f = FourierForm::from_json(&c.form)?;
            let mut forms: Vec<FourierForm> = (0..binomial(js.algebra_dim, c.j)).map(|_| FourierForm::zero(js.base_dim, c.i, 0)).collect();
            let pos = crate::multi_index::rank(js.algebra_dim, &c.fiber_index);
            forms[pos] = f;
            let single = Self::from_component(js.base_dim, js.algebra_dim, c.i, c.j, &forms)?;
            out = out.add(&single);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub i: usize,
    pub j: usize,
    pub fiber_index: Vec<usize>,
    pub form: FourierFormJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigradedFormJson {
    pub base_dim: usize,
    pub algebra_dim: usize,
    pub components: Vec<ComponentJson>,
}

/// `ω_0 + δ ω_1 + δ² ω_2 + …` with trailing zero coefficients removed.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPolynomial {
    pub coefficients: Vec<BigradedForm>,
}

impl DeltaPolynomial {
    pub fn new(mut coefficients: Vec<BigradedForm>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        DeltaPolynomial { coefficients }
    }

    pub fn constant(w: BigradedForm) -> Self {
        Self::new(vec![w])
    }

    pub fn coefficient(&self, m: usize) -> Option<&BigradedForm> {
        self.coefficients.get(m)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// `Σ_r s_r · P_r`, coefficientwise.
    pub fn combination(terms: &[(Complex64, &DeltaPolynomial)], n: usize, m: usize) -> Self {
        let len = terms.iter().map(|t| t.1.coefficients.len()).max().unwrap_or(0);
        let mut out = vec![BigradedForm::zero(n, m); len];
        for (s, poly) in terms {
            for (o, c) in out.iter_mut().zip(&poly.coefficients) {
                *o = o.axpy_complex(*s, c);
            }
        }
        Self::new(out)
    }

    pub fn conj_reflect(&self) -> Self {
        DeltaPolynomial { coefficients: self.coefficients.iter().map(|c| c.conj_reflect()).collect() }
    }

    pub fn evaluate(&self, delta: f64, n: usize, m: usize) -> BigradedForm {
        let mut out = BigradedForm::zero(n, m);
        for (p, c) in self.coefficients.iter().enumerate() {
            out = out.axpy(delta.powi(p as i32), c);
        }
        out
    }
}

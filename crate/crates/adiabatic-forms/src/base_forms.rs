//! Band-limited differential forms on the flat torus `Tⁿ = ℝⁿ / 2πℤⁿ`.
//!
//! A [`FourierForm`] of degree `i` stores `c_{k,I}` for every frequency
//! `k ∈ ℤⁿ` with `‖k‖_∞ ≤ band` and every sorted multi-index `|I| = i`,
//! representing `Σ c_{k,I} e^{i k·x} dx^I`. Coefficients are complex but the
//! forms are real: `c_{-k,I} = conj(c_{k,I})`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_algebra::exterior_gram;
use crate::multi_index::{binomial, merge, rank, subsets};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct FourierForm {
    pub n: usize,
    pub degree: usize,
    pub band: usize,
    coeffs: Vec<Complex64>,
}

/// Number of frequencies in the cube `‖k‖_∞ ≤ band`.
pub fn freq_count(n: usize, band: usize) -> usize {
    (2 * band + 1).pow(n as u32)
}

pub fn freq_of(n: usize, band: usize, mut idx: usize) -> Vec<i64> {
    let w = 2 * band + 1;
    let mut k = vec![0i64; n];
    for a in (0..n).rev() {
        k[a] = (idx % w) as i64 - band as i64;
        idx /= w;
    }
    k
}

pub fn freq_index(band: usize, k: &[i64]) -> Option<usize> {
    let w = (2 * band + 1) as i64;
    let mut idx = 0i64;
    for &ka in k {
        if ka.unsigned_abs() as usize > band {
            return None;
        }
        idx = idx * w + ka + band as i64;
    }
    Some(idx as usize)
}

pub fn sup_norm(k: &[i64]) -> usize {
    k.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0)
}

impl FourierForm {
    pub fn zero(n: usize, degree: usize, band: usize) -> Self {
        FourierForm { n, degree, band, coeffs: vec![Complex64::new(0.0, 0.0); freq_count(n, band) * binomial(n, degree)] }
    }

    pub fn index_count(&self) -> usize {
        binomial(self.n, self.degree)
    }

    pub fn freq_count(&self) -> usize {
        freq_count(self.n, self.band)
    }

    pub fn freq(&self, idx: usize) -> Vec<i64> {
        freq_of(self.n, self.band, idx)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient block (over multi-indices) at frequency slot `f`.
    pub fn block(&self, f: usize) -> &[Complex64] {
        let m = self.index_count();
        &self.coeffs[f * m..(f + 1) * m]
    }

    pub fn get(&self, k: &[i64], idx: &[usize]) -> Complex64 {
        match freq_index(self.band, k) {
            Some(f) => self.coeffs[f * self.index_count() + rank(self.n, idx)],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Adds to `c_{k,I}`, growing the band when `k` lies outside it.
    pub fn add_at(&mut self, k: &[i64], idx: &[usize], v: Complex64) {
        let need = sup_norm(k);
        if need > self.band {
            *self = self.with_band(need);
        }
        let m = self.index_count();
        let f = freq_index(self.band, k).expect("band grown");
        self.coeffs[f * m + rank(self.n, idx)] += v;
    }

    /// Real constant form `Σ v_I dx^I`.
    pub fn constant(n: usize, degree: usize, values: &[(Vec<usize>, f64)]) -> Self {
        let mut f = Self::zero(n, degree, 0);
        for (idx, v) in values {
            f.add_at(&vec![0; n], idx, Complex64::new(*v, 0.0));
        }
        f
    }

    /// `amp · cos(k·x) dx^I`.
    pub fn cos_term(n: usize, k: &[i64], idx: &[usize], amp: f64) -> Self {
        let mut f = Self::zero(n, idx.len(), sup_norm(k));
        let minus: Vec<i64> = k.iter().map(|v| -v).collect();
        f.add_at(k, idx, Complex64::new(amp / 2.0, 0.0));
        f.add_at(&minus, idx, Complex64::new(amp / 2.0, 0.0));
        f
    }

    /// `amp · sin(k·x) dx^I`.
    pub fn sin_term(n: usize, k: &[i64], idx: &[usize], amp: f64) -> Self {
        let mut f = Self::zero(n, idx.len(), sup_norm(k));
        let minus: Vec<i64> = k.iter().map(|v| -v).collect();
        f.add_at(k, idx, Complex64::new(0.0, -amp / 2.0));
        f.add_at(&minus, idx, Complex64::new(0.0, amp / 2.0));
        f
    }

    /// Copy re-embedded in a larger (or equal) band.
    pub fn with_band(&self, band: usize) -> Self {
        if band == self.band {
            return self.clone();
        }
        let mut out = Self::zero(self.n, self.degree, band);
        let m = self.index_count();
        for f in 0..self.freq_count() {
            let k = self.freq(f);
            if let Some(g) = freq_index(band, &k) {
                out.coeffs[g * m..(g + 1) * m].copy_from_slice(self.block(f));
            }
        }
        out
    }

    /// Smallest band holding every nonzero coefficient.
    pub fn effective_band(&self) -> usize {
        let m = self.index_count();
        (0..self.freq_count())
            .filter(|&f| self.coeffs[f * m..(f + 1) * m].iter().any(|c| c.norm() > 0.0))
            .map(|f| sup_norm(&self.freq(f)))
            .max()
            .unwrap_or(0)
    }

    pub fn trimmed(&self) -> Self {
        self.with_band(self.effective_band())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    fn combine(&self, other: &Self, s: f64) -> Self {
        assert_eq!((self.n, self.degree), (other.n, other.degree), "form shape mismatch");
        let band = self.band.max(other.band);
        let mut out = self.with_band(band);
        let b = other.with_band(band);
        for (o, v) in out.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *o += v * s;
        }
        out
    }

    /// Largest `|c_{-k} - conj(c_k)|`.
    pub fn reality_residual(&self) -> f64 {
        let m = self.index_count();
        let mut r: f64 = 0.0;
        for f in 0..self.freq_count() {
            let minus: Vec<i64> = self.freq(f).iter().map(|v| -v).collect();
            let g = freq_index(self.band, &minus).expect("cube is symmetric");
            for i in 0..m {
                r = r.max((self.coeffs[g * m + i] - self.coeffs[f * m + i].conj()).norm());
            }
        }
        r
    }

    /// Projects onto real forms: `(ω + conj-reflect(ω)) / 2`.
    pub fn realified(&self) -> Self {
        let m = self.index_count();
        let mut out = self.clone();
        for f in 0..self.freq_count() {
            let minus: Vec<i64> = self.freq(f).iter().map(|v| -v).collect();
            let g = freq_index(self.band, &minus).expect("cube is symmetric");
            for i in 0..m {
                out.coeffs[f * m + i] = (self.coeffs[f * m + i] + self.coeffs[g * m + i].conj()) * 0.5;
            }
        }
        out
    }

    /// Exterior derivative; exact in the frequency domain.
    pub fn d(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.degree + 1, self.band);
        if self.degree >= n {
            return out;
        }
        let src = subsets(n, self.degree);
        let m_src = src.len();
        let m_dst = out.index_count();
        for f in 0..self.freq_count() {
            let k = self.freq(f);
            for (col, idx) in src.iter().enumerate() {
                let c = self.coeffs[f * m_src + col];
                if c.norm() == 0.0 {
                    continue;
                }
                for (a, &ka) in k.iter().enumerate() {
                    if ka == 0 {
                        continue;
                    }
                    if let Some((s, merged)) = merge(&[a], idx) {
                        out.coeffs[f * m_dst + rank(n, &merged)] += I * (ka as f64 * s) * c;
                    }
                }
            }
        }
        out
    }

    /// Exact product; the band of the result is the sum of the bands.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("torus dims {} and {}", self.n, other.n)));
        }
        let n = self.n;
        let deg = self.degree + other.degree;
        if deg > n {
            return Err(Error::DegreeOverflow(deg, n));
        }
        let a = self.trimmed();
        let b = other.trimmed();
        let mut out = Self::zero(n, deg, a.band + b.band);
        let ia = subsets(n, a.degree);
        let ib = subsets(n, b.degree);
        // precompute index products
        let mut table = Vec::new();
        for (x, i1) in ia.iter().enumerate() {
            for (y, i2) in ib.iter().enumerate() {
                if let Some((s, merged)) = merge(i1, i2) {
                    table.push((x, y, s, rank(n, &merged)));
                }
            }
        }
        let (ma, mb, mo) = (ia.len(), ib.len(), out.index_count());
        let kb: Vec<Vec<i64>> = (0..b.freq_count()).map(|g| b.freq(g)).collect();
        for f in 0..a.freq_count() {
            let blk_a = a.block(f);
            if blk_a.iter().all(|c| c.norm() == 0.0) {
                continue;
            }
            let ka = a.freq(f);
            for (g, kbg) in kb.iter().enumerate() {
                let blk_b = &b.coeffs[g * mb..(g + 1) * mb];
                if blk_b.iter().all(|c| c.norm() == 0.0) {
                    continue;
                }
                let k: Vec<i64> = ka.iter().zip(kbg).map(|(x, y)| x + y).collect();
                let h = freq_index(out.band, &k).expect("band sum");
                for &(x, y, s, r) in &table {
                    let _ = ma;
                    out.coeffs[h * mo + r] += blk_a[x] * blk_b[y] * s;
                }
            }
        }
        Ok(out)
    }

    /// Pointwise values of the coefficient functions `Σ_k c_{k,I} e^{ik·x}`, one per `I`.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let m = self.index_count();
        let mut out = vec![0.0; m];
        for f in 0..self.freq_count() {
            let k = self.freq(f);
            let phase: f64 = k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum();
            let e = Complex64::from_polar(1.0, phase);
            for (i, o) in out.iter_mut().enumerate() {
                *o += (self.coeffs[f * m + i] * e).re;
            }
        }
        out
    }

    /// Only the `k = 0` slice.
    pub fn constant_part(&self) -> Self {
        let mut out = Self::zero(self.n, self.degree, 0);
        let f = freq_index(self.band, &vec![0; self.n]).expect("zero frequency");
        out.coeffs.copy_from_slice(self.block(f));
        out
    }

    /// Everything except the `k = 0` slice.
    pub fn oscillating_part(&self) -> Self {
        self.clone() - self.constant_part()
    }

    pub fn to_json(&self) -> FourierFormJson {
        let m = self.index_count();
        let idx = subsets(self.n, self.degree);
        let mut entries = Vec::new();
        for f in 0..self.freq_count() {
            for (i, multi) in idx.iter().enumerate() {
                let c = self.coeffs[f * m + i];
                if c.norm() != 0.0 {
                    entries.push(FourierEntry { freq: self.freq(f), index: multi.clone(), re: c.re, im: c.im });
                }
            }
        }
        FourierFormJson { dim: self.n, degree: self.degree, band: self.band, entries }
    }

    /// Rebuilds from entries; absent mirror partners are implied, contradictory ones rejected.
    pub fn from_json(j: &FourierFormJson) -> Result<Self> {
        let mut out = Self::zero(j.dim, j.degree, j.band);
        let mut seen = std::collections::BTreeMap::new();
        for e in &j.entries {
            if e.index.len() != j.degree || e.freq.len() != j.dim {
                return Err(Error::Config(format!("entry {:?}/{:?} does not match degree/dimension", e.freq, e.index)));
            }
            if e.index.windows(2).any(|w| w[0] >= w[1]) || e.index.iter().any(|&a| a >= j.dim) {
                return Err(Error::Config(format!("multi-index {:?} not strictly increasing in range", e.index)));
            }
            if sup_norm(&e.freq) > j.band {
                return Err(Error::Config(format!("frequency {:?} outside band {}", e.freq, j.band)));
            }
            seen.insert((e.freq.clone(), e.index.clone()), Complex64::new(e.re, e.im));
        }
        for ((k, idx), c) in &seen {
            let minus: Vec<i64> = k.iter().map(|v| -v).collect();
            match seen.get(&(minus.clone(), idx.clone())) {
                Some(p) => {
                    if (p - c.conj()).norm() > 1e-12 * (1.0 + c.norm()) {
                        return Err(Error::RealityViolated(k.clone()));
                    }
                    out.add_at(k, idx, *c);
                }
                None => {
                    if minus == *k {
                        if c.im.abs() > 1e-12 * (1.0 + c.norm()) {
                            return Err(Error::RealityViolated(k.clone()));
                        }
                        out.add_at(k, idx, Complex64::new(c.re, 0.0));
                    } else {
                        out.add_at(k, idx, *c);
                        out.add_at(&minus, idx, c.conj());
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Add for FourierForm {
    type Output = FourierForm;
    fn add(self, rhs: FourierForm) -> FourierForm {
        self.combine(&rhs, 1.0)
    }
}

impl Sub for FourierForm {
    type Output = FourierForm;
    fn sub(self, rhs: FourierForm) -> FourierForm {
        self.combine(&rhs, -1.0)
    }
}

impl<'a> Add<&'a FourierForm> for &'a FourierForm {
    type Output = FourierForm;
    fn add(self, rhs: &FourierForm) -> FourierForm {
        self.combine(rhs, 1.0)
    }
}

impl<'a> Sub<&'a FourierForm> for &'a FourierForm {
    type Output = FourierForm;
    fn sub(self, rhs: &FourierForm) -> FourierForm {
        self.combine(rhs, -1.0)
    }
}

impl Neg for FourierForm {
    type Output = FourierForm;
    fn neg(self) -> FourierForm {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &FourierForm {
    type Output = FourierForm;
    fn mul(self, s: f64) -> FourierForm {
        self.scale(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierEntry {
    pub freq: Vec<i64>,
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierFormJson {
    pub dim: usize,
    pub degree: usize,
    pub band: usize,
    pub entries: Vec<FourierEntry>,
}

/// Flat torus with a constant metric.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusGeometry {
    pub n: usize,
    pub metric: DMatrix<f64>,
    pub orientation: i8,
    inverse: DMatrix<f64>,
    sqrt_det: f64,
}

/// `ω = exact + coexact + harmonic`.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeParts {
    pub exact: FourierForm,
    pub coexact: FourierForm,
    pub harmonic: FourierForm,
}

impl TorusGeometry {
    pub fn new(metric: DMatrix<f64>, orientation: i8) -> Result<Self> {
        let n = metric.nrows();
        if !(2..=4).contains(&n) || metric.ncols() != n {
            return Err(Error::InvalidGeometry(format!("torus dimension {n} outside 2..=4")));
        }
        if (&metric - metric.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidGeometry("metric not symmetric".into()));
        }
        let eig = metric.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidGeometry("metric not positive definite".into()));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidGeometry("orientation must be ±1".into()));
        }
        let inverse = metric.clone().try_inverse().expect("SPD");
        let sqrt_det = metric.determinant().sqrt();
        Ok(TorusGeometry { n, metric, orientation, inverse, sqrt_det })
    }

    pub fn flat(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n), 1).expect("identity metric")
    }

    pub fn inverse_metric(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    /// `(2π)ⁿ √det g`.
    pub fn volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powi(self.n as i32) * self.sqrt_det
    }

    /// Gram matrix of `Λ^i` under the inverse metric.
    pub fn gram(&self, i: usize) -> DMatrix<f64> {
        exterior_gram(&self.inverse, i)
    }

    /// `|k|² = kᵀ g⁻¹ k`, the symbol of the Laplacian.
    pub fn symbol(&self, k: &[i64]) -> f64 {
        let mut s = 0.0;
        for a in 0..self.n {
            for b in 0..self.n {
                s += k[a] as f64 * self.inverse[(a, b)] * k[b] as f64;
            }
        }
        s
    }

    /// Constant matrix of `*` from degree `i` to degree `n - i`.
    pub fn star_matrix(&self, i: usize) -> DMatrix<f64> {
        let n = self.n;
        let src = subsets(n, i);
        let g = self.gram(i);
        let mut s = DMatrix::zeros(binomial(n, n - i), src.len());
        let o = self.orientation as f64 * self.sqrt_det;
        for (r, idx) in src.iter().enumerate() {
            let comp: Vec<usize> = (0..n).filter(|a| !idx.contains(a)).collect();
            let (sign, _) = merge(idx, &comp).expect("complement is disjoint");
            let row = rank(n, &comp);
            for col in 0..src.len() {
                s[(row, col)] = o * sign * g[(r, col)];
            }
        }
        s
    }

    pub fn star(&self, w: &FourierForm) -> FourierForm {
        let s = self.star_matrix(w.degree);
        let mut out = FourierForm::zero(w.n, w.n - w.degree, w.band);
        let (mi, mo) = (w.index_count(), out.index_count());
        for f in 0..w.freq_count() {
            let blk = w.block(f);
            for r in 0..mo {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..mi {
                    acc += blk[c] * s[(r, c)];
                }
                out.coeffs[f * mo + r] = acc;
            }
        }
        out
    }

    /// `d* = (-1)^{n(k+1)+1} * d *` on `k`-forms.
    pub fn codifferential(&self, w: &FourierForm) -> Result<FourierForm> {
        if w.degree == 0 {
            return Err(Error::DegreeOutOfRange { degree: 0, max: self.n });
        }
        let k = w.degree;
        let sign = if (self.n * (k + 1) + 1) % 2 == 0 { 1.0 } else { -1.0 };
        Ok(self.star(&self.star(w).d()).scale(sign))
    }

    pub fn inner(&self, a: &FourierForm, b: &FourierForm) -> Result<f64> {
        if a.degree != b.degree {
            return Err(Error::DegreeMismatch(a.degree, b.degree));
        }
        let band = a.band.max(b.band);
        let (a, b) = (a.with_band(band), b.with_band(band));
        let g = self.gram(a.degree);
        let m = a.index_count();
        let mut s = Complex64::new(0.0, 0.0);
        for f in 0..a.freq_count() {
            let (x, y) = (a.block(f), b.block(f));
            for r in 0..m {
                if x[r].norm() == 0.0 {
                    continue;
                }
                for c in 0..m {
                    s += x[r].conj() * g[(r, c)] * y[c];
                }
            }
        }
        Ok(self.volume() * s.re)
    }

    pub fn norm(&self, a: &FourierForm) -> f64 {
        self.inner(a, a).unwrap_or(0.0).max(0.0).sqrt()
    }

    /// Multiplies each nonzero frequency by `1/|k|²`, zeroing `k = 0`.
    pub fn inverse_laplacian(&self, w: &FourierForm) -> FourierForm {
        let mut out = w.clone();
        let m = w.index_count();
        for f in 0..w.freq_count() {
            let k = w.freq(f);
            let s = self.symbol(&k);
            let factor = if k.iter().all(|&v| v == 0) { 0.0 } else { 1.0 / s };
            out.coeffs[f * m..(f + 1) * m].iter_mut().for_each(|c| *c *= factor);
        }
        out
    }

    pub fn hodge_decompose(&self, w: &FourierForm) -> HodgeParts {
        let harmonic = w.constant_part().with_band(w.band);
        let g = self.inverse_laplacian(w);
        let exact = if w.degree == 0 {
            FourierForm::zero(w.n, 0, w.band)
        } else {
            self.codifferential(&g).expect("degree >= 1").d()
        };
        let coexact = if w.degree == w.n {
            FourierForm::zero(w.n, w.degree, w.band)
        } else {
            self.codifferential(&g.d()).expect("degree >= 1")
        };
        HodgeParts { exact, coexact, harmonic }
    }

    /// The unique `h` with `dh = ω`, `d*h = 0`, `h ⊥ harmonics`.
    pub fn coexact_primitive(&self, w: &FourierForm) -> Result<FourierForm> {
        if w.degree == 0 {
            return Err(Error::DegreeOutOfRange { degree: 0, max: self.n });
        }
        let parts = self.hodge_decompose(w);
        let total = self.norm(w);
        let coexact = self.norm(&parts.coexact);
        let harmonic = self.norm(&parts.harmonic);
        if coexact > 1e-10 * total || harmonic > 1e-10 * total {
            return Err(Error::NotExact { coexact, harmonic, total });
        }
        self.codifferential(&self.inverse_laplacian(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_sine() {
        let f = FourierForm::sin_term(2, &[1, 0], &[], 1.0);
        let df = f.d();
        let want = FourierForm::cos_term(2, &[1, 0], &[0], 1.0);
        assert!((df - want).max_abs() < 1e-15);
        assert!(FourierForm::constant(2, 0, &[(vec![], 3.0)]).d().is_zero());
    }

    #[test]
    fn antisymmetry_of_wedge() {
        let a = FourierForm::constant(2, 1, &[(vec![0], 1.0)]);
        let b = FourierForm::constant(2, 1, &[(vec![1], 1.0)]);
        let s = a.wedge(&b).unwrap() + b.wedge(&a).unwrap();
        assert!(s.is_zero());
        let one = FourierForm::constant(2, 0, &[(vec![], 1.0)]);
        assert_eq!(one.wedge(&a).unwrap(), a);
        assert!(matches!(a.wedge(&FourierForm::zero(2, 2, 0)), Err(Error::DegreeOverflow(3, 2))));
    }

    #[test]
    fn star_squares_to_sign() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 1.5]);
        let g = TorusGeometry::new(m, -1).unwrap();
        for i in 0..=3 {
            let ss = g.star_matrix(3 - i) * g.star_matrix(i);
            let sign = if (i * (3 - i)) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((ss - DMatrix::identity(binomial(3, i), binomial(3, i)) * sign).amax() < 1e-12);
        }
    }

    #[test]
    fn constant_one_form_is_harmonic() {
        let g = TorusGeometry::flat(2);
        let w = FourierForm::constant(2, 1, &[(vec![0], 0.5), (vec![1], -2.0)]);
        let p = g.hodge_decompose(&w);
        assert!(p.exact.is_zero() && p.coexact.is_zero());
        assert_eq!(p.harmonic, w);
    }

    #[test]
    fn volume_form_is_not_exact() {
        let g = TorusGeometry::flat(2);
        let vol = FourierForm::constant(2, 2, &[(vec![0, 1], 1.0)]);
        assert!(matches!(g.coexact_primitive(&vol), Err(Error::NotExact { .. })));
        assert!(g.coexact_primitive(&FourierForm::zero(2, 2, 1)).unwrap().is_zero());
    }

    #[test]
    fn json_roundtrip_and_reality() {
        let w = FourierForm::sin_term(3, &[1, -1, 0], &[0, 2], 0.7) + FourierForm::constant(3, 2, &[(vec![1, 2], 1.0)]);
        let back = FourierForm::from_json(&w.to_json()).unwrap();
        assert!((back - w).max_abs() < 1e-15);
        let bad = FourierFormJson {
            dim: 2,
            degree: 0,
            band: 1,
            entries: vec![
                FourierEntry { freq: vec![1, 0], index: vec![], re: 1.0, im: 0.0 },
                FourierEntry { freq: vec![-1, 0], index: vec![], re: 2.0, im: 0.0 },
            ],
        };
        assert!(matches!(FourierForm::from_json(&bad), Err(Error::RealityViolated(_))));
    }
}

//! Pages `E_K` of the adiabatic spectral sequence on a band-limited domain.
//!
//! `E_K` is the set of `ω₀` admitting a lift `ω(δ) = ω₀ + δω₁ + …` with
//! `T(δ)ω(δ) = O(δ^K)`, where `T = [d_δ; d*_δ]`. On each frequency block this
//! is solved by repeated reduction: split off the kernel `Z` of the leading
//! coefficient, solve the range equations order by order with the
//! pseudo-inverse (minimal-norm corrections), and pass the leftover
//! cokernel components to the next level as a new δ-series acting on `Z`.
//! The kernel found at level `L` is `E_{L+1}` in the coordinates of level `L`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bigraded::{BigradedForm, BigradedSpace, BlockFamily, Connection, DeltaPolynomial};
use crate::bigraded::galerkin::block_families;
use crate::bigraded::CMat;
use crate::error::{Error, Result};
use crate::linalg::{decompose, spectral_norm};

/// Pages with at most this many dimensions carry explicit basis vectors by default.
pub const DEFAULT_BASIS_LIMIT: usize = 64;

#[derive(Debug, Clone)]
pub struct PageEntry {
    pub slot: (usize, usize),
    pub vector: BigradedForm,
    pub lift: DeltaPolynomial,
}

/// One page `E^p_K`: dimensions per slot and, for small pages, a real orthonormal basis with lifts.
#[derive(Debug, Clone)]
pub struct PageBasis {
    pub p: usize,
    pub k: usize,
    pub dims: BTreeMap<(usize, usize), usize>,
    pub total: usize,
    pub entries: Vec<PageEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageOptions {
    pub k_max: usize,
    pub tau_rank: f64,
    pub basis_limit: usize,
}

impl Default for PageOptions {
    fn default() -> Self {
        PageOptions { k_max: 6, tau_rank: 1e-9, basis_limit: DEFAULT_BASIS_LIMIT }
    }
}

/// Output of [`compute_pages`]: `pages[K]` is `E_K` for `K = 0..=k_max`.
#[derive(Debug, Clone)]
pub struct Pages {
    pub p: usize,
    pub band: usize,
    pub pages: Vec<PageBasis>,
    /// Rank threshold actually used (absolute).
    pub tolerance: f64,
}

impl Pages {
    /// True when the last two pages agree in every slot.
    pub fn stabilized(&self) -> bool {
        let n = self.pages.len();
        n >= 2 && self.pages[n - 1].dims == self.pages[n - 2].dims
    }

    pub fn infinity(&self) -> &PageBasis {
        self.pages.last().expect("at least E_0")
    }

    pub fn totals(&self) -> Vec<usize> {
        self.pages.iter().map(|p| p.total).collect()
    }
}

struct Level {
    /// Orthonormal kernel of the leading coefficient.
    z: CMat,
    /// `W_0 = z, W_1, …`: the level's lift series.
    w: Vec<CMat>,
}

/// Jet reduction of one block family.
fn reduce(family: &[CMat], k_max: usize, tol: f64) -> Result<Vec<Level>> {
    let mut levels = Vec::new();
    let mut fam: Vec<CMat> = family.to_vec();
    for level in 0..k_max {
        let orders = k_max - level; // W_0 … W_{orders-1}
        let rows = fam[0].nrows();
        let cols = fam[0].ncols();
        if cols == 0 {
            levels.push(Level { z: CMat::zeros(0, 0), w: vec![CMat::zeros(0, 0)] });
            fam = vec![CMat::zeros(rows, 0); orders.saturating_sub(1).max(1)];
            continue;
        }
        let dec = decompose(&fam[0], tol);
        if let Some(&s) = dec.singular.iter().find(|&&s| s > tol && s <= 10.0 * tol) {
            return Err(Error::SolverFailure {
                order: level,
                reason: format!("singular value {s:.3e} within a decade of the rank threshold {tol:.3e}"),
            });
        }
        let z = dec.kernel.clone();
        let r = z.ncols();
        let mut w = vec![z.clone()];
        let mut next = Vec::new();
        for m in 1..orders {
            let mut rm = CMat::zeros(rows, r);
            for l in 1..=m {
                if l < fam.len() {
                    rm += &fam[l] * &w[m - l];
                }
            }
            let wm = -(&dec.pinv * &rm);
            let out = &rm - &dec.range * (dec.range.adjoint() * &rm);
            w.push(wm);
            next.push(out);
        }
        if next.is_empty() {
            next.push(CMat::zeros(rows, r));
        }
        levels.push(Level { z, w });
        fam = next;
    }
    Ok(levels)
}

fn series_mul(a: &[CMat], b: &[CMat], max_deg: usize) -> Vec<CMat> {
    let mut out = vec![CMat::zeros(a[0].nrows(), b[0].ncols()); max_deg + 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            if i + j <= max_deg && ai.ncols() > 0 && bj.ncols() > 0 {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Basis of `E_K` in block coordinates (`K ≥ 1`) and its lift series truncated at `δ^{K-1}`.
fn page_lift(levels: &[Level], k: usize, ncols: usize) -> Vec<CMat> {
    if k == 0 {
        return vec![CMat::identity(ncols, ncols)];
    }
    let top = levels[k - 1].z.ncols();
    let mut prod = vec![CMat::identity(top, top)];
    for l in (0..k).rev() {
        if levels[l].z.ncols() == 0 {
            return vec![CMat::zeros(ncols, 0)];
        }
        prod = series_mul(&levels[l].w, &prod, k - 1);
    }
    prod
}

fn block_slot_dims(fam: &BlockFamily, space: &BigradedSpace, basis: &CMat, tol: f64) -> BTreeMap<(usize, usize), (usize, CMat)> {
    let mut out = BTreeMap::new();
    for slot in space.slots(fam.p) {
        let inside = fam.slot_columns(slot, space);
        let outside: Vec<usize> = (0..fam.ncols()).filter(|c| !inside.contains(c)).collect();
        let restricted = basis.select_rows(outside.iter());
        let dec = decompose(&restricted, tol);
        let kernel = if outside.is_empty() { CMat::identity(basis.ncols(), basis.ncols()) } else { dec.kernel };
        out.insert(slot, (kernel.ncols(), kernel));
    }
    out
}

/// Real orthonormal combinations of complex candidate vectors (and the same combinations of their lifts).
fn realify(space: &BigradedSpace, vecs: Vec<(BigradedForm, DeltaPolynomial)>, want: usize) -> Vec<(BigradedForm, DeltaPolynomial)> {
    let (n, m) = (space.n(), space.m());
    let half = Complex64::new(0.5, 0.0);
    let mut cands: Vec<(BigradedForm, DeltaPolynomial)> = Vec::new();
    for (v, l) in &vecs {
        let (jv, jl) = (v.conj_reflect(), l.conj_reflect());
        let re = (BigradedForm::zero(n, m).axpy_complex(half, v).axpy_complex(half, &jv), DeltaPolynomial::combination(&[(half, l), (half, &jl)], n, m));
        let mi = Complex64::new(0.0, -0.5);
        let im = (
            BigradedForm::zero(n, m).axpy_complex(mi, v).axpy_complex(-mi, &jv),
            DeltaPolynomial::combination(&[(mi, l), (-mi, &jl)], n, m),
        );
        cands.push(re);
        cands.push(im);
    }
    let c = cands.len();
    if c == 0 || want == 0 {
        return vec![];
    }
    let mut gram = DMatrix::<f64>::zeros(c, c);
    for a in 0..c {
        for b in a..c {
            let v = space.inner(&cands[a].0, &cands[b].0).unwrap_or(0.0);
            gram[(a, b)] = v;
            gram[(b, a)] = v;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    order
        .into_iter()
        .take(want)
        .map(|e| {
            let lam = eig.eigenvalues[e].max(f64::MIN_POSITIVE);
            let coef: Vec<Complex64> = (0..c).map(|r| Complex64::new(eig.eigenvectors[(r, e)] / lam.sqrt(), 0.0)).collect();
            let mut v = BigradedForm::zero(n, m);
            for (r, cand) in cands.iter().enumerate() {
                v = v.axpy_complex(coef[r], &cand.0);
            }
            let terms: Vec<(Complex64, &DeltaPolynomial)> = cands.iter().enumerate().map(|(r, cand)| (coef[r], &cand.1)).collect();
            (v, DeltaPolynomial::combination(&terms, n, m))
        })
        .collect()
}

fn series_to_poly(fam: &BlockFamily, space: &BigradedSpace, series: &[CMat], col: &CMat, scale: f64) -> DeltaPolynomial {
    let coeffs = series
        .iter()
        .map(|s| {
            let u = s * col * Complex64::new(scale, 0.0);
            fam.to_form(space, u.as_slice())
        })
        .collect();
    DeltaPolynomial::new(coeffs)
}

/// Pages `E^{i,j}_K`, `i + j = p`, for `K = 0..=k_max` on the band-`band` domain.
pub fn compute_pages_with(conn: &Connection, p: usize, band: usize, opts: &PageOptions) -> Result<Pages> {
    if band < conn.band() {
        return Err(Error::BandTooSmall { band, needed: conn.band() });
    }
    let diffs = conn.differentials();
    let space = &diffs.space;
    let fams = block_families(&diffs, p, band);
    let scale = fams
        .iter()
        .map(|f| f.coeffs.iter().map(spectral_norm).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1.0);
    let tol = opts.tau_rank * scale;
    let inv_sqrt_vol = 1.0 / space.geometry.volume().sqrt();
    let reduced: Vec<Vec<Level>> = fams.iter().map(|f| reduce(&f.coeffs, opts.k_max, tol)).collect::<Result<_>>()?;
    let mut pages = Vec::new();
    for k in 0..=opts.k_max {
        let mut dims: BTreeMap<(usize, usize), usize> = space.slots(p).into_iter().map(|s| (s, 0)).collect();
        let mut total = 0;
        let mut per_block = Vec::new();
        for (fam, levels) in fams.iter().zip(&reduced) {
            let series = page_lift(levels, k, fam.ncols());
            let basis = series[0].clone();
            total += basis.ncols();
            let sd = block_slot_dims(fam, space, &basis, tol);
            for (slot, (d, _)) in &sd {
                *dims.get_mut(slot).expect("slot of degree p") += d;
            }
            per_block.push((series, sd));
        }
        let mut entries = Vec::new();
        if total <= opts.basis_limit || (k == opts.k_max && total <= 4 * opts.basis_limit) {
            for slot in space.slots(p) {
                let mut vecs = Vec::new();
                for (fam, (series, sd)) in fams.iter().zip(&per_block) {
                    let kernel = &sd[&slot].1;
                    for c in 0..kernel.ncols() {
                        let col = CMat::from_column_slice(kernel.nrows(), 1, kernel.column(c).as_slice());
                        let lift = series_to_poly(fam, space, series, &col, inv_sqrt_vol);
                        let v = lift.coefficient(0).cloned().unwrap_or_else(|| space.zero());
                        vecs.push((v, lift));
                    }
                }
                let want = dims[&slot];
                for (v, lift) in realify(space, vecs, want) {
                    entries.push(PageEntry { slot, vector: v, lift });
                }
            }
        }
        pages.push(PageBasis { p, k, dims, total, entries });
    }
    Ok(Pages { p, band, pages, tolerance: tol })
}

pub fn compute_pages(conn: &Connection, p: usize, k_max: usize, band: usize) -> Result<Pages> {
    compute_pages_with(conn, p, band, &PageOptions { k_max, ..PageOptions::default() })
}

/// `ω₀^{0,p} + ω₁^{1,p-1} + … + ω_p^{p,0}` for every `E_∞` lift (generalized as in [`limit_of`]).
pub fn harmonic_limit(conn: &Connection, p: usize, band: usize) -> Result<Vec<BigradedForm>> {
    let opts = PageOptions { k_max: PageOptions::default().k_max.max(p + 1), ..PageOptions::default() };
    let pages = compute_pages_with(conn, p, band, &PageOptions { basis_limit: usize::MAX / 8, ..opts })?;
    if !pages.stabilized() {
        return Err(Error::NotStabilized(opts.k_max));
    }
    Ok(pages.infinity().entries.iter().map(|e| limit_of(&e.lift, e.slot, conn)).collect())
}

/// Constant term of `δ^i ρ_δ⁻¹ ω(δ)` for a lift whose leading vector sits in `slot = (i, j)`:
/// `Σ_m ω_m^{i+m, j-m}`. For `i = 0` this is `ω₀^{0,p} + ω₁^{1,p-1} + … + ω_p^{p,0}`.
pub fn limit_of(lift: &DeltaPolynomial, slot: (usize, usize), conn: &Connection) -> BigradedForm {
    let (n, m) = (conn.geometry().n, conn.alg().dim);
    let (i0, j0) = slot;
    let mut out = BigradedForm::zero(n, m);
    for s in 0..=j0.min(n.saturating_sub(i0)) {
        if let Some(c) = lift.coefficient(s) {
            out = out.add(&c.slot_part(i0 + s, j0 - s));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlotDim {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PageDims {
    pub k: usize,
    pub total: usize,
    pub slots: Vec<SlotDim>,
}

/// JSON view of page dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PageReport {
    pub p: usize,
    pub band: usize,
    pub stabilized: bool,
    pub rank_tolerance: f64,
    pub pages: Vec<PageDims>,
}

impl From<&Pages> for PageReport {
    fn from(p: &Pages) -> Self {
        PageReport {
            p: p.p,
            band: p.band,
            stabilized: p.stabilized(),
            rank_tolerance: p.tolerance,
            pages: p
                .pages
                .iter()
                .map(|pg| PageDims {
                    k: pg.k,
                    total: pg.total,
                    slots: pg.dims.iter().map(|(&(i, j), &dim)| SlotDim { i, j, dim }).collect(),
                })
                .collect(),
        }
    }
}

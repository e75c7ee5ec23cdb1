//! Eigenvalue sweeps of the compressed Laplacian and their decay exponents.
//!
//! Eigenvalues of `Π_B L_δ Π_B` are computed as squared singular values of
//! `T(δ) = [d_δ; d*_δ]` on each frequency block, which keeps the tiny
//! eigenvalues `O(δ^{2K})` accurate to roughly machine precision relative to `‖T‖`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bigraded::galerkin::{block_families, galerkin_operator};
use crate::bigraded::{BlockFamily, CMat, Connection};
use crate::error::{Error, Result};

use super::Pages;

/// Branches with slope above this count as decaying.
const DECAY_SLOPE: f64 = 1.0;
/// Eigenvalues below this multiple of the spectral norm count as zero.
pub const ZERO_REL: f64 = 1e-8;
const GAP_REL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Branch {
    pub block: usize,
    pub index: usize,
    pub values: Vec<f64>,
    /// `None` for branches that vanish at every δ.
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayGroup {
    /// `None` is the group of exact zeros (`E_∞`).
    pub k: Option<usize>,
    pub count: usize,
    pub expected: Option<usize>,
    pub max_slope_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub p: usize,
    pub band: usize,
    pub deltas: Vec<f64>,
    /// Ascending eigenvalues per δ.
    pub eigenvalues: Vec<Vec<f64>>,
    pub spectral_norms: Vec<f64>,
    /// Decaying and vanishing branches only.
    pub branches: Vec<Branch>,
    pub groups: Vec<DecayGroup>,
    /// Adjacent eigenvalue pairs closer than `1e-3` relative, summed over δ.
    pub small_gaps: usize,
}

fn block_spectrum(fam: &BlockFamily, delta: f64) -> Result<Vec<f64>> {
    let t = fam.at(delta);
    let (r, c) = t.shape();
    if c == 0 {
        return Ok(vec![]);
    }
    let m: CMat = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(&t);
        p
    } else {
        t
    };
    let sv = m
        .try_svd(false, false, 1e-15, 10_000)
        .ok_or_else(|| Error::SolverFailure { order: 0, reason: format!("SVD did not converge at δ = {delta}") })?
        .singular_values;
    let mut ev: Vec<f64> = sv.iter().map(|s| s * s).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ev)
}

fn fit_slope(deltas: &[f64], values: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = deltas.iter().zip(values).filter(|(_, &v)| v > floor).map(|(&d, &v)| (d.ln(), v.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Eigenvalues of the band-`band` compression at each δ, with log-log decay fits per branch.
pub fn spectrum_sweep(conn: &Connection, p: usize, deltas: &[f64], band: usize) -> Result<SpectrumReport> {
    if band < conn.band() {
        return Err(Error::BandTooSmall { band, needed: conn.band() });
    }
    if deltas.len() < 2 || deltas.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
        return Err(Error::Config("spectrum sweep needs at least two δ values in (0, 1]".into()));
    }
    let diffs = conn.differentials();
    let fams = block_families(&diffs, p, band);
    let per_delta: Vec<Vec<Vec<f64>>> = deltas.iter().map(|&d| fams.iter().map(|f| block_spectrum(f, d)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let spectral_norms: Vec<f64> = per_delta.iter().map(|blocks| blocks.iter().flatten().fold(0.0, |m: f64, &v| m.max(v))).collect();
    let mut eigenvalues = Vec::new();
    let mut small_gaps = 0;
    for (blocks, &norm) in per_delta.iter().zip(&spectral_norms) {
        let mut all: Vec<f64> = blocks.iter().flatten().copied().collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in all.windows(2) {
            let scale = w[1].abs().max(ZERO_REL * norm);
            if w[1] > ZERO_REL * norm && (w[1] - w[0]) < GAP_REL * scale {
                small_gaps += 1;
            }
        }
        eigenvalues.push(all);
    }
    let mut branches = Vec::new();
    for b in 0..fams.len() {
        let count = per_delta[0][b].len();
        for i in 0..count {
            let values: Vec<f64> = per_delta.iter().map(|blocks| blocks[b][i]).collect();
            let zero = values.iter().zip(&spectral_norms).all(|(&v, &nrm)| v <= ZERO_REL * nrm);
            if zero {
                branches.push(Branch { block: b, index: i, values, slope: None });
                continue;
            }
            let floor = 1e-14 * spectral_norms.iter().cloned().fold(0.0, f64::max);
            if let Some(s) = fit_slope(deltas, &values, floor) {
                if s > DECAY_SLOPE {
                    branches.push(Branch { block: b, index: i, values, slope: Some(s) });
                }
            }
        }
    }
    let mut groups: Vec<DecayGroup> = Vec::new();
    for br in &branches {
        let (k, err) = match br.slope {
            None => (None, 0.0),
            Some(s) => {
                let k = (s / 2.0).round().max(1.0) as usize;
                (Some(k), (s - 2.0 * k as f64).abs())
            }
        };
        match groups.iter_mut().find(|g| g.k == k) {
            Some(g) => {
                g.count += 1;
                g.max_slope_error = g.max_slope_error.max(err);
            }
            None => groups.push(DecayGroup { k, count: 1, expected: None, max_slope_error: err }),
        }
    }
    groups.sort_by_key(|g| g.k.map_or(usize::MAX, |k| k));
    Ok(SpectrumReport { p, band, deltas: deltas.to_vec(), eigenvalues, spectral_norms, branches, groups, small_gaps })
}

impl SpectrumReport {
    /// Fills `expected` from page dimensions: `dim E_K − dim E_{K+1}` for finite `K`, `dim E_∞` for zeros.
    pub fn compare_with_pages(&mut self, pages: &Pages) {
        let totals = pages.totals();
        let last = *totals.last().unwrap_or(&0);
        for k in 1..totals.len().saturating_sub(1) {
            if totals[k] > totals[k + 1] && !self.groups.iter().any(|g| g.k == Some(k)) {
                self.groups.push(DecayGroup { k: Some(k), count: 0, expected: None, max_slope_error: 0.0 });
            }
        }
        if !self.groups.iter().any(|g| g.k.is_none()) && last > 0 {
            self.groups.push(DecayGroup { k: None, count: 0, expected: None, max_slope_error: 0.0 });
        }
        for g in &mut self.groups {
            g.expected = Some(match g.k {
                None => last,
                Some(k) if k + 1 < totals.len() => totals[k] - totals[k + 1],
                Some(_) => 0,
            });
        }
        self.groups.sort_by_key(|g| g.k.map_or(usize::MAX, |k| k));
    }

    /// True when every group's count matches and slopes sit within `tol` of `2K`.
    pub fn matches(&self, tol: f64) -> bool {
        self.groups.iter().all(|g| g.expected == Some(g.count) && g.max_slope_error <= tol)
    }

    /// `delta,eigenvalue_index,eigenvalue` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("delta,eigenvalue_index,eigenvalue\n");
        for (d, ev) in self.deltas.iter().zip(&self.eigenvalues) {
            for (i, v) in ev.iter().enumerate() {
                let _ = writeln!(s, "{d},{i},{v:e}");
            }
        }
        s
    }
}

/// Number of eigenvalues of the compressed `L_δ` below `rel` times its spectral norm.
pub fn zero_eigenvalue_count(conn: &Connection, p: usize, delta: f64, band: usize, rel: f64) -> Result<usize> {
    let op = galerkin_operator(conn, p, delta, band)?;
    let ev = op.eigenvalues();
    let norm = ev.iter().fold(0.0, |m: f64, &v| m.max(v.abs()));
    Ok(ev.iter().filter(|&&v| v <= rel * norm).count())
}

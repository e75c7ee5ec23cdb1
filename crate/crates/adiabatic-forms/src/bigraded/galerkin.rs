//! Finite-dimensional compressions of `d_δ`, `d*_δ` and `L_δ`.
//!
//! The domain is truncated to frequencies `‖k‖_∞ ≤ B`; images are kept in
//! full, so `T(δ) = [d_δ; d*_δ]` restricted to the band satisfies
//! `T(δ)^H T(δ) = Π_B L_δ Π_B`. Frequencies only couple through the shifts
//! present in `A` and `F`, so the compression splits into independent
//! blocks, each assembled densely in coordinates orthonormal for the
//! bigraded inner product (up to the constant volume factor).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::base_forms::{freq_count, freq_index, freq_of};
use crate::error::{Error, Result};

use super::form::{BigradedForm, BigradedSpace};
use super::operator::{CMat, SlotMap};
use super::{Connection, Differentials};

/// Groups the frequencies of the band-`band` cube into classes connected by `steps`.
pub fn frequency_blocks(n: usize, band: usize, steps: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let count = freq_count(n, band);
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for f in 0..count {
        let k = freq_of(n, band, f);
        for s in steps {
            if s.iter().all(|&v| v == 0) {
                continue;
            }
            let k2: Vec<i64> = k.iter().zip(s).map(|(a, b)| a + b).collect();
            if let Some(g) = freq_index(band, &k2) {
                let (ra, rb) = (find(&mut parent, f), find(&mut parent, g));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<i64>>> = BTreeMap::new();
    for f in 0..count {
        let r = find(&mut parent, f);
        groups.entry(r).or_default().push(freq_of(n, band, f));
    }
    groups.into_values().collect()
}

fn ortho_factor(space: &BigradedSpace, slot: (usize, usize)) -> DMatrix<f64> {
    space.slot_gram(slot.0, slot.1).cholesky().expect("gram positive definite").l().transpose()
}

fn cmat(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

/// `T(δ) = T₀ + δT₁ + δ²T₂` on one frequency block of total degree `p`.
#[derive(Debug, Clone)]
pub struct BlockFamily {
    pub p: usize,
    pub domain: Vec<Vec<i64>>,
    /// `(domain frequency position, slot, column offset)` for each domain block.
    pub columns: Vec<(usize, (usize, usize), usize)>,
    /// `(target frequency, slot, row offset)`; slots of degree `p+1` then `p-1`.
    pub rows: Vec<(Vec<i64>, (usize, usize), usize)>,
    pub coeffs: [CMat; 3],
    r_inv: BTreeMap<(usize, usize), DMatrix<f64>>,
}

impl BlockFamily {
    pub fn ncols(&self) -> usize {
        self.coeffs[0].ncols()
    }

    pub fn at(&self, delta: f64) -> CMat {
        let d = Complex64::new(delta, 0.0);
        &self.coeffs[0] + &self.coeffs[1] * d + &self.coeffs[2] * (d * d)
    }

    /// Column ranges belonging to a slot.
    pub fn slot_columns(&self, slot: (usize, usize), space: &BigradedSpace) -> Vec<usize> {
        let w = space.slot_dim(slot.0, slot.1);
        self.columns.iter().filter(|c| c.1 == slot).flat_map(|c| c.2..c.2 + w).collect()
    }

    /// Converts orthonormal domain coordinates back to a (complex) bigraded form.
    pub fn to_form(&self, space: &BigradedSpace, u: &[Complex64]) -> BigradedForm {
        let mut out = space.zero();
        for &(fpos, slot, off) in &self.columns {
            let w = space.slot_dim(slot.0, slot.1);
            let r_inv = cmat(&self.r_inv[&slot]);
            let v = DMatrix::from_column_slice(w, 1, &u[off..off + w]);
            let c = r_inv * v;
            if c.iter().any(|x| x.norm() > 0.0) {
                out.add_block(slot.0, slot.1, &self.domain[fpos], c.as_slice());
            }
        }
        out
    }

    /// Orthonormal domain coordinates of a form (components outside the block are ignored).
    pub fn coordinates(&self, space: &BigradedSpace, w: &BigradedForm) -> Vec<Complex64> {
        let mut u = vec![Complex64::new(0.0, 0.0); self.ncols()];
        for &(fpos, slot, off) in &self.columns {
            let Some(s) = w.components.get(&slot) else { continue };
            let Some(f) = freq_index(s.band, &self.domain[fpos]) else { continue };
            let d = space.slot_dim(slot.0, slot.1);
            let r = ortho_factor(space, slot);
            let c = DMatrix::from_column_slice(d, 1, &s.data[f * d..(f + 1) * d]);
            let x = cmat(&r) * c;
            u[off..off + d].copy_from_slice(x.as_slice());
        }
        u
    }
}

fn maps_from<'a>(diffs: &'a Differentials, p: usize) -> [Vec<&'a SlotMap>; 3] {
    let d = diffs.d_parts();
    let s = diffs.dstar_parts();
    [0, 1, 2].map(|l| {
        let mut v = d[l].from_degree(p);
        v.extend(s[l].from_degree(p));
        v
    })
}

/// Splits the band-`band` compression of `T(δ)` on degree `p` into blocks.
pub fn block_families(diffs: &Differentials, p: usize, band: usize) -> Vec<BlockFamily> {
    let space = &diffs.space;
    let n = space.n();
    let maps = maps_from(diffs, p);
    let mut shifts: Vec<Vec<i64>> = vec![vec![0; n]];
    for group in &maps {
        for m in group {
            for t in &m.terms {
                if !shifts.contains(&t.shift) {
                    shifts.push(t.shift.clone());
                }
            }
        }
    }
    let mut steps = Vec::new();
    for a in &shifts {
        for b in &shifts {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if !steps.contains(&s) {
                steps.push(s);
            }
        }
    }
    let slots = space.slots(p);
    let mut r_inv = BTreeMap::new();
    let mut r_fwd = BTreeMap::new();
    for deg in [p.wrapping_sub(1), p, p + 1] {
        if deg > space.n() + space.m() {
            continue;
        }
        for s in space.slots(deg) {
            let r = ortho_factor(space, s);
            r_inv.insert(s, r.clone().try_inverse().expect("invertible"));
            r_fwd.insert(s, r);
        }
    }
    frequency_blocks(n, band, &steps)
        .into_iter()
        .map(|domain| {
            let mut columns = Vec::new();
            let mut off = 0;
            for (fpos, _) in domain.iter().enumerate() {
                for &s in &slots {
                    columns.push((fpos, s, off));
                    off += space.slot_dim(s.0, s.1);
                }
            }
            let ncols = off;
            // target rows: degree p+1 first, then p-1
            let mut keys: BTreeMap<(bool, Vec<i64>, (usize, usize)), ()> = BTreeMap::new();
            for group in &maps {
                for m in group {
                    for k in &domain {
                        for t in &m.terms {
                            let tgt: Vec<i64> = k.iter().zip(&t.shift).map(|(a, b)| a + b).collect();
                            keys.insert((m.dst.0 + m.dst.1 < p, tgt, m.dst), ());
                        }
                    }
                }
            }
            let mut rows = Vec::new();
            let mut row_of = BTreeMap::new();
            let mut roff = 0;
            for (lower, tgt, slot) in keys.into_keys() {
                let _ = lower;
                row_of.insert((tgt.clone(), slot), roff);
                rows.push((tgt, slot, roff));
                roff += space.slot_dim(slot.0, slot.1);
            }
            let col_of: BTreeMap<(usize, (usize, usize)), usize> = columns.iter().map(|&(f, s, o)| ((f, s), o)).collect();
            let coeffs = [0, 1, 2].map(|l| {
                let mut t = CMat::zeros(roff, ncols);
                for m in &maps[l] {
                    let rs_inv = cmat(&r_inv[&m.src]);
                    let rd = cmat(&r_fwd[&m.dst]);
                    for (fpos, k) in domain.iter().enumerate() {
                        let c0 = col_of[&(fpos, m.src)];
                        for term in &m.terms {
                            let tgt: Vec<i64> = k.iter().zip(&term.shift).map(|(a, b)| a + b).collect();
                            let r0 = row_of[&(tgt, m.dst)];
                            let blk = &rd * term.matrix_at(k) * &rs_inv;
                            let mut view = t.view_mut((r0, c0), (blk.nrows(), blk.ncols()));
                            view += &blk;
                        }
                    }
                }
                t
            });
            BlockFamily { p, domain, columns, rows, coeffs, r_inv: r_inv.clone() }
        })
        .collect()
}

/// Block-diagonal Hermitian matrix of `Π_B L_δ Π_B` on total degree `p`.
#[derive(Debug, Clone)]
pub struct GalerkinOperator {
    pub p: usize,
    pub delta: f64,
    pub blocks: Vec<(Vec<Vec<i64>>, CMat)>,
}

impl GalerkinOperator {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.1.nrows()).sum()
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|(_, m)| {
                if m.nrows() == 0 {
                    return vec![];
                }
                SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect::<Vec<f64>>()
            })
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// `max ‖M - M^H‖ / ‖M‖` over blocks.
    pub fn hermitian_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|(_, m)| {
                let s = m.norm().max(f64::MIN_POSITIVE);
                (m - m.adjoint()).norm() / s
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        let mut off = 0;
        for (_, m) in &self.blocks {
            out.view_mut((off, off), (m.nrows(), m.ncols())).copy_from(m);
            off += m.nrows();
        }
        out
    }
}

/// Compression of `L_δ` to frequencies `‖k‖_∞ ≤ band` in total degree `p`.
pub fn galerkin_operator(conn: &Connection, p: usize, delta: f64, band: usize) -> Result<GalerkinOperator> {
    if band < conn.band() {
        return Err(Error::BandTooSmall { band, needed: conn.band() });
    }
    let diffs = conn.differentials();
    Ok(galerkin_from_families(&block_families(&diffs, p, band), p, delta))
}

pub fn galerkin_from_families(families: &[BlockFamily], p: usize, delta: f64) -> GalerkinOperator {
    let blocks = families
        .iter()
        .map(|fam| {
            let t = fam.at(delta);
            (fam.domain.clone(), t.adjoint() * t)
        })
        .collect();
    GalerkinOperator { p, delta, blocks }
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::base_forms::{freq_count, freq_of, FourierForm};
use crate::lie_algebra;
use crate::multi_index::{binomial, merge, rank, subsets};

use super::form::{BigradedForm, BigradedSpace};

pub type CMat = DMatrix<Complex64>;

/// Frequency `k` maps to `k + shift` through `m0 + Σ_a k_a mk[a]`.
#[derive(Debug, Clone)]
pub struct Term {
    pub shift: Vec<i64>,
    pub m0: CMat,
    pub mk: Vec<CMat>,
}

impl Term {
    pub fn matrix_at(&self, k: &[i64]) -> CMat {
        let mut m = self.m0.clone();
        for (a, mk) in self.mk.iter().enumerate() {
            if k[a] != 0 {
                m += mk * Complex64::new(k[a] as f64, 0.0);
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct SlotMap {
    pub src: (usize, usize),
    pub dst: (usize, usize),
    pub terms: Vec<Term>,
}

/// A linear operator on bigraded forms acting slot by slot and frequency by frequency.
#[derive(Debug, Clone, Default)]
pub struct Operator {
    pub maps: Vec<SlotMap>,
}

fn real(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Left wedge by `dx^B` from `Λ^i` to `Λ^{i+|B|}`.
pub fn left_wedge(n: usize, b: &[usize], i: usize) -> DMatrix<f64> {
    let src = subsets(n, i);
    let mut m = DMatrix::zeros(binomial(n, i + b.len()), src.len());
    if i + b.len() > n {
        return m;
    }
    for (col, idx) in src.iter().enumerate() {
        if let Some((s, merged)) = merge(b, idx) {
            m[(rank(n, &merged), col)] = s;
        }
    }
    m
}

impl Operator {
    pub fn apply(&self, w: &BigradedForm) -> BigradedForm {
        let mut out = BigradedForm::zero(w.n, w.m);
        for map in &self.maps {
            let Some(slot) = w.components.get(&map.src) else { continue };
            let d = w.slot_dim(map.src.0, map.src.1);
            for f in 0..freq_count(w.n, slot.band) {
                let blk = &slot.data[f * d..(f + 1) * d];
                if blk.iter().all(|c| c.norm() == 0.0) {
                    continue;
                }
                let v = DMatrix::from_column_slice(d, 1, blk);
                let k = freq_of(w.n, slot.band, f);
                for t in &map.terms {
                    let y = t.matrix_at(&k) * &v;
                    let target: Vec<i64> = k.iter().zip(&t.shift).map(|(a, b)| a + b).collect();
                    out.add_block(map.dst.0, map.dst.1, &target, y.as_slice());
                }
            }
        }
        out
    }

    /// Adjoint with respect to the slot Gram matrices of `space`.
    pub fn adjoint(&self, space: &BigradedSpace) -> Operator {
        let maps = self
            .maps
            .iter()
            .map(|map| {
                let gs_inv = real(&space.slot_gram(map.src.0, map.src.1).try_inverse().expect("gram invertible"));
                let gd = real(&space.slot_gram(map.dst.0, map.dst.1));
                let terms = map
                    .terms
                    .iter()
                    .map(|t| {
                        let mut base = t.m0.clone();
                        for (a, mk) in t.mk.iter().enumerate() {
                            if t.shift[a] != 0 {
                                base -= mk * Complex64::new(t.shift[a] as f64, 0.0);
                            }
                        }
                        Term {
                            shift: t.shift.iter().map(|v| -v).collect(),
                            m0: &gs_inv * base.adjoint() * &gd,
                            mk: t.mk.iter().map(|mk| &gs_inv * mk.adjoint() * &gd).collect(),
                        }
                    })
                    .collect();
                SlotMap { src: map.dst, dst: map.src, terms }
            })
            .collect();
        Operator { maps }
    }

    /// Maps leaving slots of total degree `p`.
    pub fn from_degree(&self, p: usize) -> Vec<&SlotMap> {
        self.maps.iter().filter(|m| m.src.0 + m.src.1 == p).collect()
    }

    /// Largest `‖shift‖_∞` over all terms.
    pub fn reach(&self) -> usize {
        self.maps
            .iter()
            .flat_map(|m| m.terms.iter())
            .map(|t| crate::base_forms::sup_norm(&t.shift))
            .max()
            .unwrap_or(0)
    }
}

/// `d^{0,1} = (-1)^i d_𝔤` on every slot.
///
/// `d_𝔤` here is the differential of right-invariant forms on the fiber,
/// which is minus the Chevalley–Eilenberg matrix of [`lie_algebra::ce_differential`].
pub fn vertical_operator(space: &BigradedSpace) -> Operator {
    let (n, m) = (space.n(), space.m());
    let mut maps = Vec::new();
    for j in 0..m {
        let dg = -lie_algebra::ce_differential(&space.alg, j).expect("j < dim");
        for i in 0..=n {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let mat = DMatrix::<f64>::identity(binomial(n, i), binomial(n, i)).kronecker(&dg) * sign;
            maps.push(SlotMap { src: (i, j), dst: (i, j + 1), terms: vec![Term { shift: vec![0; n], m0: real(&mat), mk: vec![] }] });
        }
    }
    Operator { maps }
}

/// Distinct frequencies carrying nonzero coefficients across a list of forms.
fn support(forms: &[FourierForm]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for f in forms {
        for fr in 0..f.freq_count() {
            if f.block(fr).iter().any(|c| c.norm() > 0.0) {
                let k = f.freq(fr);
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        }
    }
    out.sort();
    out
}

/// `d^{1,0} = d_M + A^a ∧ ad*_{e_a}` for a 𝔤-valued 1-form `A` (one entry per generator).
pub fn covariant_operator(space: &BigradedSpace, a: &[FourierForm]) -> Operator {
    let (n, m) = (space.n(), space.m());
    let freqs = support(a);
    let mut maps = Vec::new();
    for i in 0..n {
        for j in 0..=m {
            let cj = binomial(m, j);
            let id_j = DMatrix::<f64>::identity(cj, cj);
            let mk: Vec<CMat> = (0..n)
                .map(|ax| real(&left_wedge(n, &[ax], i).kronecker(&id_j)) * Complex64::new(0.0, 1.0))
                .collect();
            let mut terms = vec![Term { shift: vec![0; n], m0: CMat::zeros(binomial(n, i + 1) * cj, binomial(n, i) * cj), mk }];
            let rhos: Vec<DMatrix<f64>> = (0..m).map(|g| lie_algebra::coadjoint(&space.alg, g, j)).collect();
            for q in &freqs {
                let mut m0 = CMat::zeros(binomial(n, i + 1) * cj, binomial(n, i) * cj);
                for c in 0..n {
                    let mut fib = CMat::zeros(cj, cj);
                    for (g, ag) in a.iter().enumerate() {
                        let coef = ag.get(q, &[c]);
                        if coef.norm() != 0.0 && rhos[g].amax() != 0.0 {
                            fib += real(&rhos[g]) * coef;
                        }
                    }
                    if fib.iter().any(|v| v.norm() > 0.0) {
                        m0 += real(&left_wedge(n, &[c], i)).kronecker(&fib);
                    }
                }
                if m0.iter().any(|v| v.norm() > 0.0) {
                    if q.iter().all(|&v| v == 0) {
                        terms[0].m0 += m0;
                    } else {
                        terms.push(Term { shift: q.clone(), m0, mk: vec![] });
                    }
                }
            }
            maps.push(SlotMap { src: (i, j), dst: (i + 1, j), terms });
        }
    }
    Operator { maps }
}

/// `d^{2,-1} = (-1)^i F^a ∧ ι_{e_a}` for a 𝔤-valued 2-form `F`.
pub fn curvature_operator(space: &BigradedSpace, f: &[FourierForm]) -> Operator {
    let (n, m) = (space.n(), space.m());
    let freqs = support(f);
    let pairs = subsets(n, 2);
    let mut maps = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        for j in 1..=m {
            let iotas: Vec<DMatrix<f64>> = (0..m).map(|g| lie_algebra::contraction(&space.alg, g, j)).collect();
            let mut terms = Vec::new();
            for q in &freqs {
                let mut m0 = CMat::zeros(binomial(n, i + 2) * binomial(m, j - 1), binomial(n, i) * binomial(m, j));
                for b in &pairs {
                    let mut fib = CMat::zeros(binomial(m, j - 1), binomial(m, j));
                    for (g, fg) in f.iter().enumerate() {
                        let coef = fg.get(q, b);
                        if coef.norm() != 0.0 {
                            fib += real(&iotas[g]) * (coef * sign);
                        }
                    }
                    if fib.iter().any(|v| v.norm() > 0.0) {
                        m0 += real(&left_wedge(n, b, i)).kronecker(&fib);
                    }
                }
                if m0.iter().any(|v| v.norm() > 0.0) {
                    terms.push(Term { shift: q.clone(), m0, mk: vec![] });
                }
            }
            if !terms.is_empty() {
                maps.push(SlotMap { src: (i, j), dst: (i + 2, j - 1), terms });
            }
        }
    }
    Operator { maps }
}

//! Chevalley–Eilenberg complex of a metric Lie algebra.
//!
//! Cochains of degree `j` are coefficient vectors on the basis `e^J`, `J`
//! a strictly increasing multi-index. The inner product on `Λ^j 𝔤*` is the
//! Gram-determinant extension of the dual metric.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::multi_index::{binomial, rank, sort_sign, subsets};

const STRUCTURE_TOL: f64 = 1e-12;
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    pub dim: usize,
    /// `c[(i*dim + j)*dim + k]`: `[e_i, e_j] = Σ_k c_ijk e_k`.
    pub structure_constants: Vec<f64>,
    pub metric: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieCochain {
    pub degree: usize,
    pub coefficients: DVector<f64>,
}

impl LieCochain {
    pub fn zero(alg: &LieAlgebraData, degree: usize) -> Self {
        LieCochain { degree, coefficients: DVector::zeros(binomial(alg.dim, degree)) }
    }

    /// The dual basis element `e^J`.
    pub fn basis(alg: &LieAlgebraData, indices: &[usize]) -> Self {
        let mut c = Self::zero(alg, indices.len());
        c.coefficients[rank(alg.dim, indices)] = 1.0;
        c
    }
}

impl LieAlgebraData {
    /// Checks antisymmetry, Jacobi and ad-invariance of the metric.
    pub fn new(dim: usize, structure_constants: Vec<f64>, metric: DMatrix<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if structure_constants.len() != dim * dim * dim || metric.shape() != (dim, dim) {
            return Err(Error::InvalidAlgebra("array shapes do not match dimension".into()));
        }
        let alg = LieAlgebraData { dim, structure_constants, metric };
        if (&alg.metric - alg.metric.transpose()).amax() > STRUCTURE_TOL {
            return Err(Error::InvalidAlgebra("metric not symmetric".into()));
        }
        if alg.metric.clone().cholesky().is_none() {
            return Err(Error::InvalidAlgebra("metric not positive definite".into()));
        }
        let a = alg.antisymmetry_residual();
        if a > STRUCTURE_TOL {
            return Err(Error::InvalidAlgebra(format!("antisymmetry residual {a:.3e}")));
        }
        let j = alg.jacobi_residual();
        if j > STRUCTURE_TOL {
            return Err(Error::InvalidAlgebra(format!("Jacobi residual {j:.3e}")));
        }
        let m = alg.invariance_residual(&alg.metric);
        if m > STRUCTURE_TOL {
            return Err(Error::InvalidAlgebra(format!("metric not ad-invariant: {m:.3e}")));
        }
        Ok(alg)
    }

    /// Builds from nonzero entries `(i, j, k, value)`; the `(j, i, k)` partner is implied.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, f64)], metric: DMatrix<f64>) -> Result<Self> {
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidAlgebra(format!("index ({i},{j},{k}) out of range")));
            }
            c[(i * dim + j) * dim + k] = v;
            c[(j * dim + i) * dim + k] = -v;
        }
        Self::new(dim, c, metric)
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure_constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += x[i] * y[j] * self.c(i, j, k);
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.structure_constants.iter().all(|&v| v == 0.0)
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    r = r.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        r
    }

    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let e = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        let mut r: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t1 = self.bracket(&e(a), &self.bracket(&e(b), &e(c)));
                    let t2 = self.bracket(&e(b), &self.bracket(&e(c), &e(a)));
                    let t3 = self.bracket(&e(c), &self.bracket(&e(a), &e(b)));
                    for k in 0..n {
                        r = r.max((t1[k] + t2[k] + t3[k]).abs());
                    }
                }
            }
        }
        r
    }

    /// Max over basis triples of `|B([x,a],b) + B(a,[x,b])|`.
    pub fn invariance_residual(&self, bilinear: &DMatrix<f64>) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for x in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += self.c(x, a, k) * bilinear[(k, b)] + bilinear[(a, k)] * self.c(x, b, k);
                    }
                    r = r.max(s.abs());
                }
            }
        }
        r
    }

    /// Killing form `tr(ad_x ad_y)`.
    pub fn killing_form(&self) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |a, b| {
            let mut s = 0.0;
            for k in 0..n {
                for l in 0..n {
                    s += self.c(a, l, k) * self.c(b, k, l);
                }
            }
            s
        })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &LieAlgebraData) -> Result<LieAlgebraData> {
        let n = self.dim + other.dim;
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let v = self.c(i, j, k);
                    if v != 0.0 && i < j {
                        entries.push((i, j, k, v));
                    }
                }
            }
        }
        let s = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    let v = other.c(i, j, k);
                    if v != 0.0 && i < j {
                        entries.push((i + s, j + s, k + s, v));
                    }
                }
            }
        }
        let mut metric = DMatrix::zeros(n, n);
        metric.view_mut((0, 0), (s, s)).copy_from(&self.metric);
        metric.view_mut((s, s), (other.dim, other.dim)).copy_from(&other.metric);
        Self::from_entries(n, &entries, metric)
    }
}

/// su(2) with `[e1,e2]=e3` cyclic and metric `λ·I`.
pub fn make_su2_scaled(lambda: f64) -> LieAlgebraData {
    let entries = [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)];
    LieAlgebraData::from_entries(3, &entries, DMatrix::identity(3, 3) * lambda).expect("su(2) is valid")
}

pub fn make_su2() -> LieAlgebraData {
    make_su2_scaled(1.0)
}

/// su(3) in the basis `e_a = -i λ_a / 2` (Gell-Mann), metric identity.
pub fn make_su3() -> LieAlgebraData {
    let h = 0.5;
    let r = 3f64.sqrt() / 2.0;
    let f = [
        (0, 1, 2, 1.0),
        (0, 3, 6, h),
        (0, 4, 5, -h),
        (1, 3, 5, h),
        (1, 4, 6, h),
        (2, 3, 4, h),
        (2, 5, 6, -h),
        (3, 4, 7, r),
        (5, 6, 7, r),
    ];
    // f is totally antisymmetric; expand each triple cyclically
    let mut entries = Vec::new();
    for &(a, b, c, v) in &f {
        entries.push((a, b, c, v));
        entries.push((b, c, a, v));
        entries.push((c, a, b, v));
    }
    LieAlgebraData::from_entries(8, &entries, DMatrix::identity(8, 8)).expect("su(3) is valid")
}

pub fn make_abelian(k: usize) -> LieAlgebraData {
    LieAlgebraData::new(k, vec![0.0; k * k * k], DMatrix::identity(k, k)).expect("abelian is valid")
}

pub fn make_u1() -> LieAlgebraData {
    make_abelian(1)
}

pub fn cochain_basis(alg: &LieAlgebraData, j: usize) -> Vec<Vec<usize>> {
    subsets(alg.dim, j)
}

fn check_degree(alg: &LieAlgebraData, j: usize) -> Result<()> {
    if j > alg.dim {
        return Err(Error::DegreeOutOfRange { degree: j, max: alg.dim });
    }
    Ok(())
}

/// Matrix of `d_𝔤: Λ^j → Λ^{j+1}`.
pub fn ce_differential(alg: &LieAlgebraData, j: usize) -> Result<DMatrix<f64>> {
    check_degree(alg, j)?;
    let n = alg.dim;
    let src = subsets(n, j);
    let dst = subsets(n, j + 1);
    let mut m = DMatrix::zeros(dst.len(), src.len());
    for (row, k) in dst.iter().enumerate() {
        for a in 0..k.len() {
            for b in a + 1..k.len() {
                let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                let rest: Vec<usize> = k.iter().enumerate().filter(|&(l, _)| l != a && l != b).map(|(_, &v)| v).collect();
                for c in 0..n {
                    let coef = alg.c(k[a], k[b], c);
                    if coef == 0.0 {
                        continue;
                    }
                    let mut args = vec![c];
                    args.extend_from_slice(&rest);
                    if let Some((s, sorted)) = sort_sign(&args) {
                        let col = rank(n, &sorted);
                        m[(row, col)] += sign * coef * s;
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Gram matrix of `Λ^j 𝔤*` under the dual metric.
pub fn gram(alg: &LieAlgebraData, j: usize) -> DMatrix<f64> {
    let inv = alg.metric.clone().try_inverse().expect("metric is positive definite");
    exterior_gram(&inv, j)
}

/// Gram-determinant extension of `m` to the `j`-th exterior power.
pub fn exterior_gram(m: &DMatrix<f64>, j: usize) -> DMatrix<f64> {
    let b = subsets(m.nrows(), j);
    DMatrix::from_fn(b.len(), b.len(), |r, c| {
        let sub = DMatrix::from_fn(j, j, |x, y| m[(b[r][x], b[c][y])]);
        if j == 0 {
            1.0
        } else {
            sub.determinant()
        }
    })
}

/// Matrix of `d*_𝔤: Λ^j → Λ^{j-1}`, the Gram adjoint of `d_𝔤` on `Λ^{j-1}`.
pub fn ce_adjoint(alg: &LieAlgebraData, j: usize) -> Result<DMatrix<f64>> {
    check_degree(alg, j)?;
    if j == 0 {
        return Ok(DMatrix::zeros(0, 1));
    }
    let d = ce_differential(alg, j - 1)?;
    let g_lo = gram(alg, j - 1).try_inverse().expect("gram invertible");
    Ok(g_lo * d.transpose() * gram(alg, j))
}

/// Coadjoint action `(ad*_{e_a} ψ)(x_1..x_j) = -Σ_l ψ(.., [e_a, x_l], ..)` on `Λ^j`.
pub fn coadjoint(alg: &LieAlgebraData, a: usize, j: usize) -> DMatrix<f64> {
    let n = alg.dim;
    let basis = subsets(n, j);
    let mut m = DMatrix::zeros(basis.len(), basis.len());
    for (row, k) in basis.iter().enumerate() {
        for l in 0..j {
            for c in 0..n {
                let coef = alg.c(a, k[l], c);
                if coef == 0.0 {
                    continue;
                }
                let mut args = k.clone();
                args[l] = c;
                if let Some((s, sorted)) = sort_sign(&args) {
                    m[(row, rank(n, &sorted))] -= coef * s;
                }
            }
        }
    }
    m
}

/// Contraction `ι_{e_a}: Λ^j → Λ^{j-1}` into the first slot.
pub fn contraction(alg: &LieAlgebraData, a: usize, j: usize) -> DMatrix<f64> {
    let n = alg.dim;
    let src = subsets(n, j);
    if j == 0 {
        return DMatrix::zeros(0, 1);
    }
    let dst = subsets(n, j - 1);
    let mut m = DMatrix::zeros(dst.len(), src.len());
    for (row, k) in dst.iter().enumerate() {
        let mut args = vec![a];
        args.extend_from_slice(k);
        if let Some((s, sorted)) = sort_sign(&args) {
            m[(row, rank(n, &sorted))] = s;
        }
    }
    m
}

/// Cholesky factor `R` with `gram = Rᵀ R`, so `u = R c` are orthonormal coordinates.
fn ortho_factor(alg: &LieAlgebraData, j: usize) -> DMatrix<f64> {
    gram(alg, j).cholesky().expect("gram positive definite").l().transpose()
}

fn to_orthonormal(alg: &LieAlgebraData, m: &DMatrix<f64>, from: usize, to: usize) -> DMatrix<f64> {
    let r_to = ortho_factor(alg, to);
    let r_from_inv = ortho_factor(alg, from).try_inverse().expect("invertible");
    r_to * m * r_from_inv
}

/// Hodge Laplacian `d d* + d* d` on `Λ^j`.
pub fn laplacian(alg: &LieAlgebraData, j: usize) -> Result<DMatrix<f64>> {
    check_degree(alg, j)?;
    let d = ce_differential(alg, j)?;
    let ds = ce_adjoint(alg, j + 1).unwrap_or_else(|_| DMatrix::zeros(binomial(alg.dim, j), 0));
    let mut l = if j + 1 <= alg.dim { ds * d } else { DMatrix::zeros(binomial(alg.dim, j), binomial(alg.dim, j)) };
    if j > 0 {
        l += ce_differential(alg, j - 1)? * ce_adjoint(alg, j)?;
    }
    Ok(l)
}

/// Orthonormal basis (for the Gram inner product) of harmonic `j`-cochains.
pub fn harmonic_subspace(alg: &LieAlgebraData, j: usize) -> Result<Vec<LieCochain>> {
    check_degree(alg, j)?;
    let nj = binomial(alg.dim, j);
    let mut rows: Vec<DMatrix<f64>> = Vec::new();
    if j < alg.dim {
        rows.push(to_orthonormal(alg, &ce_differential(alg, j)?, j, j + 1));
    }
    if j > 0 {
        rows.push(to_orthonormal(alg, &ce_differential(alg, j - 1)?, j - 1, j).transpose());
    }
    let total: usize = rows.iter().map(|r| r.nrows()).sum();
    let mut stacked = DMatrix::zeros(total, nj);
    let mut at = 0;
    for r in &rows {
        stacked.view_mut((at, 0), (r.nrows(), nj)).copy_from(r);
        at += r.nrows();
    }
    let scale = linalg::spectral_norm(&stacked);
    let dec = linalg::decompose(&stacked, RANK_TOL * scale.max(f64::MIN_POSITIVE));
    let r_inv = ortho_factor(alg, j).try_inverse().expect("invertible");
    Ok(dec
        .kernel
        .column_iter()
        .map(|u| LieCochain { degree: j, coefficients: &r_inv * u })
        .collect())
}

/// Betti numbers from ranks of `d_𝔤`, independent of the Laplacian.
pub fn betti_numbers(alg: &LieAlgebraData) -> Vec<usize> {
    let n = alg.dim;
    let ranks: Vec<usize> = (0..=n)
        .map(|j| {
            let d = ce_differential(alg, j).expect("degree in range");
            let s = linalg::spectral_norm(&d);
            if s == 0.0 {
                0
            } else {
                linalg::decompose(&d, RANK_TOL * s).rank
            }
        })
        .collect();
    (0..=n)
        .map(|j| binomial(n, j) - ranks[j] - if j > 0 { ranks[j - 1] } else { 0 })
        .collect()
}

pub fn cochain_inner(alg: &LieAlgebraData, a: &LieCochain, b: &LieCochain) -> Result<f64> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch(a.degree, b.degree));
    }
    Ok((a.coefficients.transpose() * gram(alg, a.degree) * &b.coefficients)[(0, 0)])
}

pub fn cochain_norm(alg: &LieAlgebraData, a: &LieCochain) -> f64 {
    cochain_inner(alg, a, a).unwrap_or(0.0).max(0.0).sqrt()
}

/// Solves `d*_𝔤 β = ψ` with `β` exact, given `H¹(𝔤) = 0`.
pub fn green_inverse(alg: &LieAlgebraData, psi: &LieCochain) -> Result<LieCochain> {
    if psi.degree != 1 {
        return Err(Error::DegreeMismatch(psi.degree, 1));
    }
    let h1 = harmonic_subspace(alg, 1)?.len();
    if h1 != 0 {
        return Err(Error::NotSemisimple(h1));
    }
    if alg.dim < 2 {
        return Err(Error::NotSemisimple(alg.dim));
    }
    let gamma = green_matrix(alg) * &psi.coefficients;
    Ok(LieCochain { degree: 2, coefficients: gamma })
}

/// `d_𝔤 Δ₁⁻¹`: the linear map behind [`green_inverse`].
pub fn green_matrix(alg: &LieAlgebraData) -> DMatrix<f64> {
    let d1 = ce_differential(alg, 1).expect("dim >= 1");
    let lap = laplacian(alg, 1).expect("dim >= 1");
    let inv = lap.try_inverse().expect("Laplacian on Λ¹ invertible when H¹ = 0");
    d1 * inv
}

/// `(x,y,z) ↦ -(1/6) Σ_σ sign(σ) B(x_σ, [y_σ, z_σ])` for a bilinear form `B`.
pub fn fiber_term_with(alg: &LieAlgebraData, bilinear: &DMatrix<f64>) -> LieCochain {
    let n = alg.dim;
    if n < 3 {
        return LieCochain { degree: 3, coefficients: DVector::zeros(0) };
    }
    let mut out = LieCochain::zero(alg, 3);
    let perms: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([1, 0, 2], -1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
    ];
    for (row, t) in subsets(n, 3).iter().enumerate() {
        let mut s = 0.0;
        for (p, sign) in &perms {
            let (x, y, z) = (t[p[0]], t[p[1]], t[p[2]]);
            for k in 0..n {
                s += sign * bilinear[(x, k)] * alg.c(y, z, k);
            }
        }
        out.coefficients[row] = -s / 6.0;
    }
    out
}

/// Fiber part of the Chern–Simons 3-form with the algebra's own metric.
pub fn cs3_fiber_term(alg: &LieAlgebraData) -> LieCochain {
    fiber_term_with(alg, &alg.metric)
}

/// Applies a cochain matrix to a cochain.
pub fn apply(m: &DMatrix<f64>, psi: &LieCochain, degree: usize) -> LieCochain {
    LieCochain { degree, coefficients: m * &psi.coefficients }
}

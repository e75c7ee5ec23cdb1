//! Rank-revealing helpers on top of nalgebra's SVD.

use nalgebra::{ComplexField, DMatrix};

/// SVD-derived kernel, range and pseudo-inverse of a dense matrix.
pub struct Decomp<T: ComplexField<RealField = f64>> {
    pub rank: usize,
    /// Orthonormal columns spanning the kernel.
    pub kernel: DMatrix<T>,
    /// Orthonormal columns spanning the range.
    pub range: DMatrix<T>,
    pub pinv: DMatrix<T>,
    pub singular: Vec<f64>,
}

/// Singular values at or below `tol` are treated as zero.
pub fn decompose<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, tol: f64) -> Decomp<T> {
    let (r, c) = a.shape();
    if c == 0 {
        return Decomp {
            rank: 0,
            kernel: DMatrix::zeros(0, 0),
            range: DMatrix::zeros(r, 0),
            pinv: DMatrix::zeros(0, r),
            singular: vec![],
        };
    }
    if r == 0 {
        return Decomp {
            rank: 0,
            kernel: DMatrix::identity(c, c),
            range: DMatrix::zeros(0, 0),
            pinv: DMatrix::zeros(c, 0),
            singular: vec![],
        };
    }
    // pad so that V^H comes out square
    let padded = if r < c {
        let mut p = DMatrix::<T>::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > tol).collect();
    let drop: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= tol).collect();
    let rank = keep.len();
    let mut kernel = DMatrix::<T>::zeros(c, drop.len());
    for (col, &i) in drop.iter().enumerate() {
        for k in 0..c {
            kernel[(k, col)] = vt[(i, k)].clone().conjugate();
        }
    }
    let mut range = DMatrix::<T>::zeros(r, rank);
    let mut pinv = DMatrix::<T>::zeros(c, r);
    for (col, &i) in keep.iter().enumerate() {
        for k in 0..r {
            range[(k, col)] = u[(k, i)].clone();
        }
        let inv = T::from_real(1.0 / sv[i]);
        for x in 0..c {
            let vx = vt[(i, x)].clone().conjugate() * inv.clone();
            for y in 0..r {
                pinv[(x, y)] += vx.clone() * u[(y, i)].clone().conjugate();
            }
        }
    }
    let mut singular = sv;
    singular.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Decomp { rank, kernel, range, pinv, singular }
}

/// Largest singular value.
pub fn spectral_norm<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.iter().fold(0.0, |m: f64, &s| m.max(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use num_complex::Complex64;

    #[test]
    fn wide_matrix_kernel_is_complete() {
        let a = dmatrix![1.0, 2.0, 3.0; 2.0, 4.0, 6.0];
        let d = decompose(&a, 1e-10);
        assert_eq!(d.rank, 1);
        assert_eq!(d.kernel.ncols(), 2);
        assert!((&a * &d.kernel).norm() < 1e-12);
        assert!((&a * &d.pinv * &a - &a).norm() < 1e-12);
    }

    #[test]
    fn complex_pinv() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let a = DMatrix::from_row_slice(3, 2, &[one, i, i, one, one + i, one - i]);
        let d = decompose(&a, 1e-12);
        assert_eq!(d.rank, 2);
        let p = &a * &d.pinv * &a;
        assert!((p - &a).norm() < 1e-12);
    }
}

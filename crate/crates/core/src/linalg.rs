//! Pseudo-inverse and least squares through the symmetric eigenproblem of
//! the smaller Gram matrix.
//!
//! nalgebra's SVD loses accuracy on matrices with clustered singular values
//! (tight frames such as the realified Fourier dictionary), while its
//! symmetric eigensolver does not.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Singular values below `DEFAULT_RCOND * s_max` are treated as zero.
pub const DEFAULT_RCOND: f64 = 1e-7;

pub fn pinv(a: &DMatrix<f64>) -> DMatrix<f64> {
    pinv_rcond(a, DEFAULT_RCOND)
}

pub fn pinv_rcond(a: &DMatrix<f64>, rcond: f64) -> DMatrix<f64> {
    if a.is_empty() {
        return DMatrix::zeros(a.ncols(), a.nrows());
    }
    let wide = a.nrows() <= a.ncols();
    let gram = if wide { a * a.transpose() } else { a.transpose() * a };
    let eig = SymmetricEigen::new(gram);
    let cutoff = eig.eigenvalues.amax() * rcond * rcond;
    let inv = eig
        .eigenvalues
        .map(|l| if l > cutoff && l > 0.0 { 1.0 / l } else { 0.0 });
    let mut scaled = eig.eigenvectors.clone();
    for (mut col, w) in scaled.column_iter_mut().zip(inv.iter()) {
        col *= *w;
    }
    let gram_pinv = scaled * eig.eigenvectors.transpose();
    if wide {
        a.transpose() * gram_pinv
    } else {
        gram_pinv * a.transpose()
    }
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    pinv(a) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn penrose_residual(a: &DMatrix<f64>) -> f64 {
        let p = pinv(a);
        let r1 = (a * &p * a - a).amax();
        let r2 = (&p * a * &p - &p).amax() / p.amax().max(1.0);
        let r3 = ((a * &p) - (a * &p).transpose()).amax();
        let r4 = ((&p * a) - (&p * a).transpose()).amax();
        r1.max(r2).max(r3).max(r4)
    }

    #[test]
    fn tight_frame_with_clustered_spectrum() {
        // [I I] / sqrt 2 has all singular values equal to one.
        let n = 40;
        let mut a = DMatrix::zeros(n, 2 * n);
        for i in 0..n {
            a[(i, i)] = std::f64::consts::FRAC_1_SQRT_2;
            a[(i, n + i)] = std::f64::consts::FRAC_1_SQRT_2;
        }
        assert!((pinv(&a) - a.transpose()).amax() < 1e-14);
    }

    #[test]
    fn rank_deficient() {
        let u = DVector::from_vec(vec![1.0, 2.0, -1.0]);
        let v = DVector::from_vec(vec![0.5, 0.0, 3.0, 1.0]);
        let a = &u * v.transpose();
        let expected = &a.transpose() / (u.norm_squared() * v.norm_squared());
        assert!((pinv(&a) - &expected).amax() < 1e-14);
        assert!((pinv(&a.transpose()) - expected.transpose()).amax() < 1e-14);
    }

    #[test]
    fn empty() {
        assert_eq!(pinv(&DMatrix::zeros(3, 0)).shape(), (0, 3));
    }

    proptest! {
        #[test]
        fn penrose_conditions(rows in 1usize..8, cols in 1usize..8, seed in any::<u64>()) {
            let mut s = seed;
            let a = DMatrix::from_fn(rows, cols, |_, _| {
                s = crate::rng::splitmix64(s);
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            });
            prop_assert!(penrose_residual(&a) < 1e-8);
        }

        #[test]
        fn least_squares_normal_equations(seed in any::<u64>()) {
            let mut s = seed;
            let mut draw = || { s = crate::rng::splitmix64(s); (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5 };
            let a = DMatrix::from_fn(9, 4, |_, _| draw());
            let b = DVector::from_fn(9, |_, _| draw());
            let x = least_squares(&a, &b);
            prop_assert!((a.transpose() * (&a * x - b)).amax() < 1e-10);
        }
    }
}

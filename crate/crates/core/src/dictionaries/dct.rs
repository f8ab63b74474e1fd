use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{BasisKind, DictionaryMatrix, DictionaryParams};
use crate::{Error, Result};

/// Orthonormal DCT-II synthesis matrix; column `k` is the `k`-th cosine atom.
pub fn build_dct(n: usize) -> Result<DictionaryMatrix> {
    if n < 2 {
        return Err(Error::invalid("n", format!("DCT needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let atoms = DMatrix::from_fn(n, n, |j, k| {
        let c = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        c * (PI * (2 * j + 1) as f64 * k as f64 / (2.0 * nf)).cos()
    });
    DictionaryMatrix::from_columns(atoms, BasisKind::Dct, DictionaryParams::None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionaries::test_util::max_gram_deviation;
    use nalgebra::DVector;

    #[test]
    fn orthonormal_at_256() {
        let d = build_dct(256).unwrap();
        assert!(max_gram_deviation(d.atoms()) < 1e-12);
    }

    #[test]
    fn constant_maps_to_dc() {
        let d = build_dct(64).unwrap();
        let x = DVector::from_element(64, 3.0);
        let s = d.atoms().transpose() * x;
        assert!((s[0] - 3.0 * 8.0).abs() < 1e-12);
        assert!(s.rows(1, 63).amax() < 1e-12);
    }

    #[test]
    fn reproduces_basis_vector() {
        let d = build_dct(8).unwrap();
        let s = d.atoms().transpose() * d.atoms().column(3);
        let mut e3 = DVector::zeros(8);
        e3[3] = 1.0;
        assert!((s - e3).amax() < 1e-12);
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(build_dct(1).is_err());
    }
}

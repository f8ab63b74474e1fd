//! Discrete prolate spheroidal (Slepian) sequences.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{BasisKind, DictionaryMatrix, DictionaryParams};
use crate::{Error, Result};

/// Default time-half-bandwidth product.
pub const DEFAULT_DPSS_NW: f64 = 8.5;

/// Full set of `n` Slepian sequences for half-bandwidth `W = nw / n`.
///
/// The sequences are the eigenvectors of the symmetric tridiagonal matrix
/// that commutes with the time/band-limiting operator, ordered by decreasing
/// eigenvalue (equivalently by decreasing energy concentration). Each column
/// is signed so that its largest-magnitude entry is positive; when several
/// entries tie for the largest magnitude (antisymmetric sequences) the one
/// with the lowest index decides.
pub fn build_dpss(n: usize, nw: f64) -> Result<DictionaryMatrix> {
    if n < 2 {
        return Err(Error::invalid("n", format!("DPSS needs n >= 2, got {n}")));
    }
    if !(nw > 0.0 && nw < n as f64 / 2.0) {
        return Err(Error::invalid(
            "nw",
            format!(
                "time-half-bandwidth must satisfy 0 < nw < n/2 = {}, got {nw}",
                n as f64 / 2.0
            ),
        ));
    }
    let w = nw / n as f64;
    let cos_term = (2.0 * PI * w).cos();
    let mut tri = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let c = (n as f64 - 1.0 - 2.0 * j as f64) / 2.0;
        tri[(j, j)] = c * c * cos_term;
        if j > 0 {
            let off = j as f64 * (n - j) as f64 / 2.0;
            tri[(j, j - 1)] = off;
            tri[(j - 1, j)] = off;
        }
    }

    let eig = SymmetricEigen::new(tri);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut atoms = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v: DVector<f64> = eig.eigenvectors.column(src).into_owned();
        let peak = v.amax();
        let lead = v
            .iter()
            .find(|x| x.abs() >= peak * (1.0 - 1e-9))
            .copied()
            .unwrap_or(1.0);
        if lead < 0.0 {
            v.neg_mut();
        }
        atoms.set_column(dst, &v);
    }
    DictionaryMatrix::from_columns(atoms, BasisKind::Dpss, DictionaryParams::Dpss { nw })
}

/// Fraction of `v`'s energy inside `[-W, W]`, computed from the sinc kernel
/// `sin(2 pi W (j - k)) / (pi (j - k))` directly.
pub fn dpss_concentration(v: &[f64], nw: f64) -> f64 {
    let n = v.len();
    let w = nw / n as f64;
    let kernel = |d: i64| -> f64 {
        if d == 0 {
            2.0 * w
        } else {
            let d = d as f64;
            (2.0 * PI * w * d).sin() / (PI * d)
        }
    };
    let mut num = 0.0;
    for j in 0..n {
        for k in 0..n {
            num += v[j] * kernel(j as i64 - k as i64) * v[k];
        }
    }
    let den: f64 = v.iter().map(|x| x * x).sum();
    num / den
}

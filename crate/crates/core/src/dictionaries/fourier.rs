//! Real-valued Fourier systems: the realified DFT frame and the real sinusoid basis.

use nalgebra::DMatrix;

use super::{twiddle, BasisKind, DictionaryMatrix, DictionaryParams};
use crate::{Error, Result};

/// Realified Fourier synthesis frame.
///
/// Columns are the cosine atoms `cos(2 pi k j / n)` for `k = 0..n` followed
/// by the sine atoms `sin(2 pi k j / n)` for every `k` whose sine is not
/// identically zero (`k = 0`, and `k = n / 2` for even `n`, are dropped).
pub fn build_fft_real(n: usize) -> Result<DictionaryMatrix> {
    if n < 2 {
        return Err(Error::invalid("n", format!("Fourier frame needs n >= 2, got {n}")));
    }
    let sine_ks: Vec<usize> = (1..n).filter(|&k| 2 * k != n).collect();
    let k_total = n + sine_ks.len();
    let atoms = DMatrix::from_fn(n, k_total, |j, col| {
        if col < n {
            twiddle(col, j, n).0
        } else {
            twiddle(sine_ks[col - n], j, n).1
        }
    });
    DictionaryMatrix::from_columns(atoms, BasisKind::FftReal, DictionaryParams::None)
}

/// Orthonormal real sinusoid basis: constant, cosines `k = 1..n/2`, the
/// alternating Nyquist atom, then sines `k = 1..n/2`.
pub fn build_rst(n: usize) -> Result<DictionaryMatrix> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::invalid(
            "n",
            format!("real sinusoid basis needs an even n >= 4, got {n}"),
        ));
    }
    let half = n / 2;
    let atoms = DMatrix::from_fn(n, n, |j, col| match col {
        0 => 1.0,
        c if c < half => twiddle(c, j, n).0,
        c if c == half => {
            if j % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
        c => twiddle(c - half, j, n).1,
    });
    DictionaryMatrix::from_columns(atoms, BasisKind::Rst, DictionaryParams::None)
}

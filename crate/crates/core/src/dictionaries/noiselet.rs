//! Coifman noiselets, realified into a real frame.

use nalgebra::Complex;
use nalgebra::DMatrix;

type Complex64 = Complex<f64>;

use super::{BasisKind, DictionaryMatrix, DictionaryParams};
use crate::{Error, Result};

/// Unnormalised complex noiselet matrix, one function per column.
///
/// Starting from the constant function on `[0, 1)`, each step maps `f` to
/// the pair `(1 - i) f(2t) + (1 + i) f(2t - 1)` and
/// `(1 + i) f(2t) + (1 - i) f(2t - 1)`; after `log2(n)` steps the `n`
/// functions are sampled at `t = j / n`. Every entry has magnitude `sqrt(n)`.
pub fn noiselet_complex(n: usize) -> Result<DMatrix<Complex64>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid(
            "n",
            format!("noiselets need a power-of-two length, got {n}"),
        ));
    }
    let a = Complex64::new(1.0, -1.0);
    let b = Complex64::new(1.0, 1.0);
    let mut funcs: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    while funcs[0].len() < n {
        let mut next = Vec::with_capacity(funcs.len() * 2);
        for f in &funcs {
            let child = |left: Complex64, right: Complex64| -> Vec<Complex64> {
                f.iter().map(|v| left * v).chain(f.iter().map(|v| right * v)).collect()
            };
            next.push(child(a, b));
            next.push(child(b, a));
        }
        funcs = next;
    }
    Ok(DMatrix::from_fn(n, n, |j, col| funcs[col][j]))
}

/// Real and imaginary parts of the noiselets stacked as columns (reals first),
/// each normalised, with identically zero parts dropped.
pub fn build_noiselet_real(n: usize) -> Result<DictionaryMatrix> {
    let c = noiselet_complex(n)?;
    let mut columns = Vec::with_capacity(2 * n * n);
    let mut kept = 0;
    for part in [|z: &Complex64| z.re, |z: &Complex64| z.im] {
        for col in c.column_iter() {
            let v: Vec<f64> = col.iter().map(part).collect();
            if v.iter().all(|x| *x == 0.0) {
                continue;
            }
            columns.extend(v);
            kept += 1;
        }
    }
    let atoms = DMatrix::from_column_slice(n, kept, &columns);
    DictionaryMatrix::from_columns(atoms, BasisKind::NoiseletReal, DictionaryParams::None)
}

//! Periodised orthogonal Daubechies wavelet with 20 filter taps.

use nalgebra::{DMatrix, DVector};

use super::{BasisKind, DictionaryMatrix, DictionaryParams};
use crate::{Error, Result};

pub const DEFAULT_WAVELET_LEVELS: usize = 4;

/// Daubechies scaling (low-pass reconstruction) filter with 10 vanishing
/// moments, normalised so the taps sum to `sqrt(2)`.
pub const DB20_LOWPASS: [f64; 20] = [
    0.026670057900555554,
    0.1881768000776915,
    0.5272011889317256,
    0.6884590394536035,
    0.2811723436605775,
    -0.24984642432731538,
    -0.19594627437737705,
    0.12736934033579325,
    0.09305736460357235,
    -0.07139414716639708,
    -0.029457536821875813,
    0.033212674059341,
    0.0036065535669561697,
    -0.010733175483330575,
    0.001395351747052901,
    0.001992405295185056,
    -0.0006858566949597116,
    -0.00011646685512928545,
    9.358867032006959e-05,
    -1.3264202894521244e-05,
];

fn highpass() -> [f64; 20] {
    let mut g = [0.0; 20];
    for (m, v) in g.iter_mut().enumerate() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *v = sign * DB20_LOWPASS[19 - m];
    }
    g
}

/// One periodised analysis step: `(approx, detail)` of length `x.len() / 2`.
fn analysis_step(x: &[f64], lo: &[f64; 20], hi: &[f64; 20]) -> (Vec<f64>, Vec<f64>) {
    let len = x.len();
    let half = len / 2;
    let mut a = vec![0.0; half];
    let mut d = vec![0.0; half];
    for k in 0..half {
        for m in 0..20 {
            let v = x[(2 * k + m) % len];
            a[k] += lo[m] * v;
            d[k] += hi[m] * v;
        }
    }
    (a, d)
}

/// Forward transform; output is `[a_L, d_L, d_{L-1}, ..., d_1]`.
fn forward(x: &[f64], levels: usize) -> Vec<f64> {
    let hi = highpass();
    let mut details: Vec<Vec<f64>> = Vec::with_capacity(levels);
    let mut approx = x.to_vec();
    for _ in 0..levels {
        let (a, d) = analysis_step(&approx, &DB20_LOWPASS, &hi);
        details.push(d);
        approx = a;
    }
    let mut out = approx;
    for d in details.into_iter().rev() {
        out.extend(d);
    }
    out
}

fn check_shape(n: usize, levels: usize) -> Result<()> {
    if levels == 0 {
        return Err(Error::invalid("levels", "wavelet levels must be positive"));
    }
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid("n", format!("n must be a power of 2, got {n}")));
    }
    if levels >= usize::BITS as usize || (1usize << levels) > n {
        return Err(Error::invalid(
            "levels",
            format!("2^levels <= n violated: 2^{levels} > {n}"),
        ));
    }
    let coarsest_input = n >> (levels - 1);
    if coarsest_input < DB20_LOWPASS.len() {
        return Err(Error::invalid(
            "levels",
            format!(
                "filter length 20 <= n / 2^(levels - 1) violated: 20 > {n} / 2^{} = {coarsest_input}",
                levels - 1
            ),
        ));
    }
    Ok(())
}

/// Synthesis matrix of the periodised Daubechies-20 transform over `levels` scales.
///
/// Columns are ordered scaling atoms (coarsest level) first, then wavelet
/// atoms from the coarsest to the finest scale.
pub fn build_wavelet_db20(n: usize, levels: usize) -> Result<DictionaryMatrix> {
    check_shape(n, levels)?;
    // Row j of the analysis matrix W is forward(e_j); synthesis is W^T.
    let mut analysis = DMatrix::<f64>::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        analysis.set_column(j, &DVector::from_vec(forward(&e, levels)));
        e[j] = 0.0;
    }
    DictionaryMatrix::from_columns(
        analysis.transpose(),
        BasisKind::WaveletDb20,
        DictionaryParams::Wavelet { levels },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionaries::test_util::max_gram_deviation;
    use crate::rng::rng_from_seed;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn lowpass_normalisation() {
        let sum: f64 = DB20_LOWPASS.iter().sum();
        assert!((sum - std::f64::consts::SQRT_2).abs() < 1e-10);
        let energy: f64 = DB20_LOWPASS.iter().map(|h| h * h).sum();
        assert!((energy - 1.0).abs() < 1e-12);
        // Double-shift orthogonality of the scaling filter.
        for shift in 1..10 {
            let dot: f64 = (0..20 - 2 * shift)
                .map(|m| DB20_LOWPASS[m] * DB20_LOWPASS[m + 2 * shift])
                .sum();
            assert!(dot.abs() < 1e-12, "shift {shift}: {dot}");
        }
    }

    #[test]
    fn orthonormal_at_256() {
        let d = build_wavelet_db20(256, 4).unwrap();
        assert!(max_gram_deviation(d.atoms()) < 1e-8);
    }

    #[test]
    fn round_trip() {
        let d = build_wavelet_db20(256, 4).unwrap();
        let mut rng = rng_from_seed(5);
        let x = DVector::from_fn(256, |_, _| StandardNormal.sample(&mut rng));
        let back = d.atoms() * (d.atoms().transpose() * &x);
        assert!((back - x).norm() < 1e-8);
    }

    #[test]
    fn coarse_atoms_first() {
        // The 16 coarsest scaling atoms at level 4 are smooth: all have a
        // positive mean, unlike wavelet atoms which integrate to zero.
        let d = build_wavelet_db20(256, 4).unwrap();
        for c in 0..16 {
            assert!(d.atoms().column(c).sum() > 0.5);
        }
        for c in 16..256 {
            assert!(d.atoms().column(c).sum().abs() < 1e-9);
        }
    }

    #[test]
    fn shape_errors_name_the_inequality() {
        let e = build_wavelet_db20(256, 5).unwrap_err().to_string();
        assert!(e.contains("filter length 20"), "{e}");
        let e = build_wavelet_db20(8, 4).unwrap_err().to_string();
        assert!(e.contains("2^levels <= n"), "{e}");
        assert!(build_wavelet_db20(60, 1).is_err());
        assert!(build_wavelet_db20(256, 0).is_err());
    }
}

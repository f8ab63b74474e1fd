//! Reconstruction quality in decibels.
//!
//! `snr_db = 20 log10(||x|| / ||x - x_hat||)` and
//! `psnr_db = 10 log10(max_j x_j^2 / mse)`. Both saturate at [`DB_CAP`] when
//! the error norm falls below `1e-15 ||x||`, so reports stay finite.

use serde::{Deserialize, Serialize};

use crate::signal::SpikeWindow;
use crate::{Error, Result};

pub const DB_CAP: f64 = 300.0;
const EXACT_REL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub snr_db: f64,
    pub psnr_db: f64,
    pub spike_snr_db: Option<f64>,
    pub cr: f64,
    pub runtime_s: f64,
}

fn check(x: &[f64], xhat: &[f64]) -> Result<(f64, f64)> {
    if x.len() != xhat.len() {
        return Err(Error::mismatch("quality metric lengths", x.len(), xhat.len()));
    }
    let energy: f64 = x.iter().map(|v| v * v).sum();
    if energy == 0.0 {
        return Err(Error::invalid("reference", "reference signal is identically zero"));
    }
    let err: f64 = x.iter().zip(xhat).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((energy, err))
}

fn is_exact(energy: f64, err: f64) -> bool {
    err.sqrt() < EXACT_REL * energy.sqrt()
}

pub fn snr_db(x: &[f64], xhat: &[f64]) -> Result<f64> {
    let (energy, err) = check(x, xhat)?;
    if is_exact(energy, err) {
        return Ok(DB_CAP);
    }
    Ok((20.0 * (energy.sqrt() / err.sqrt()).log10()).min(DB_CAP))
}

pub fn psnr_db(x: &[f64], xhat: &[f64]) -> Result<f64> {
    let (energy, err) = check(x, xhat)?;
    if is_exact(energy, err) {
        return Ok(DB_CAP);
    }
    let peak_sq = x.iter().map(|v| v * v).fold(0.0, f64::max);
    let mse = err / x.len() as f64;
    Ok((10.0 * (peak_sq / mse).log10()).min(DB_CAP))
}

/// SNR over the clipped spike window only.
pub fn spike_snr_db(x: &[f64], xhat: &[f64], window: SpikeWindow) -> Result<f64> {
    if x.len() != xhat.len() {
        return Err(Error::mismatch("quality metric lengths", x.len(), xhat.len()));
    }
    let r = window.range(x.len())?;
    snr_db(&x[r.clone()], &xhat[r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::{Distribution, Normal, StandardNormal};

    #[test]
    fn snr_examples() {
        let x = vec![3.0, -4.0, 1.0, 2.0];
        assert_eq!(snr_db(&x, &x).unwrap(), DB_CAP);
        assert_eq!(snr_db(&x, &[0.0; 4]).unwrap(), 0.0);

        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let e = [1.0, 1.0, -1.0, 1.0].map(|v: f64| v / 2.0 * norm / 10.0);
        let xhat: Vec<f64> = x.iter().zip(&e).map(|(a, b)| a + b).collect();
        assert!((snr_db(&x, &xhat).unwrap() - 20.0).abs() < 1e-9);

        assert!(snr_db(&[0.0; 4], &x).is_err());
        assert!(snr_db(&x, &x[..3]).is_err());
    }

    #[test]
    fn psnr_examples() {
        let x = [2.0, 0.0, 0.0, 0.0];
        assert_eq!(psnr_db(&x, &x).unwrap(), DB_CAP);
        let v = psnr_db(&x, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((v - 10.0 * 16f64.log10()).abs() < 1e-12);
        assert!((v - 12.041_199_826_559_248).abs() < 1e-12);
    }

    #[test]
    fn spike_window_examples() {
        let x: Vec<f64> = (0..256).map(|i| ((i as f64) * 0.1).sin() + 0.2).collect();
        let mut xhat = x.clone();
        for v in xhat.iter_mut().step_by(3) {
            *v += 0.05;
        }
        let full = SpikeWindow::new(128, 128);
        assert_eq!(spike_snr_db(&x, &xhat, full).unwrap(), snr_db(&x, &xhat).unwrap());

        let w = SpikeWindow::new(128, 30);
        let mut corrupted = x.clone();
        for v in &mut corrupted[100..150] {
            *v += 0.3;
        }
        assert!(spike_snr_db(&x, &corrupted, w).unwrap() < snr_db(&x, &corrupted).unwrap());

        // Only samples [98, 158) count.
        let mut outside = x.clone();
        outside[97] += 10.0;
        outside[158] += 10.0;
        assert_eq!(spike_snr_db(&x, &outside, w).unwrap(), DB_CAP);
        let mut inside = x.clone();
        inside[98] += 1e-3;
        assert!(spike_snr_db(&x, &inside, w).unwrap() < DB_CAP);

        let zeros = vec![0.0; 256];
        assert!(spike_snr_db(&zeros, &xhat, w).is_err());
    }

    #[test]
    fn snr_decreases_with_noise() {
        let mut rng = rng_from_seed(17);
        let x: Vec<f64> = (0..256).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let sigmas = [0.01, 0.03, 0.1, 0.3, 1.0];
        let mut means = Vec::new();
        for s in sigmas {
            let noise = Normal::new(0.0, s).unwrap();
            let avg = (0..20)
                .map(|_| {
                    let xhat: Vec<f64> = x.iter().map(|v| v + noise.sample(&mut rng)).collect();
                    snr_db(&x, &xhat).unwrap()
                })
                .sum::<f64>()
                / 20.0;
            means.push(avg);
        }
        assert!(means.windows(2).all(|w| w[0] > w[1]), "{means:?}");
    }

    proptest! {
        #[test]
        fn psnr_minus_snr_identity(x in prop::collection::vec(-100.0f64..100.0, 2..64), seed in any::<u64>()) {
            prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
            let mut rng = rng_from_seed(seed);
            let xhat: Vec<f64> = x.iter().map(|v| v + rng.sample::<f64, _>(StandardNormal)).collect::<Vec<f64>>();
            let energy: f64 = x.iter().map(|v| v * v).sum();
            let peak_sq = x.iter().map(|v| v * v).fold(0.0, f64::max);
            let expected = 10.0 * (x.len() as f64 * peak_sq / energy).log10();
            let diff = psnr_db(&x, &xhat).unwrap() - snr_db(&x, &xhat).unwrap();
            prop_assert!((diff - expected).abs() < 1e-10);
        }

        #[test]
        fn snr_scale_invariant(x in prop::collection::vec(-100.0f64..100.0, 2..64), c in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3]) {
            prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
            let xhat: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + (i as f64).sin()).collect();
            let xs: Vec<f64> = x.iter().map(|v| v * c).collect();
            let xhs: Vec<f64> = xhat.iter().map(|v| v * c).collect();
            prop_assert!((snr_db(&x, &xhat).unwrap() - snr_db(&xs, &xhs).unwrap()).abs() < 1e-9);
        }
    }
}

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{BasisKind, DictionaryMatrix, DictionaryParams};
use crate::{Error, Result};

/// Parameter grid of a Gabor frame; one atom per `(center, spread, frequency, phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaborParams {
    pub centers: Vec<i64>,
    pub spreads: Vec<f64>,
    pub frequencies: Vec<f64>,
    pub phases: Vec<f64>,
}

impl GaborParams {
    /// Centers every 8 samples, spreads {4, 8, 16, 32}, frequencies
    /// `2 pi k / 64` for `k = 1..=8`, phases {0, pi/2}.
    pub fn default_grid(n: usize) -> Self {
        Self {
            centers: (0..n as i64).step_by(8).collect(),
            spreads: vec![4.0, 8.0, 16.0, 32.0],
            frequencies: (1..=8).map(|k| 2.0 * PI * k as f64 / 64.0).collect(),
            phases: vec![0.0, FRAC_PI_2],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, len) in [
            ("centers", self.centers.len()),
            ("spreads", self.spreads.len()),
            ("frequencies", self.frequencies.len()),
            ("phases", self.phases.len()),
        ] {
            if len == 0 {
                return Err(Error::invalid(name, "Gabor grid must be non-empty"));
            }
        }
        if let Some(s) = self.spreads.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::invalid(
                "spreads",
                format!("every spread must be positive, got {s}"),
            ));
        }
        if let Some(w) = self.frequencies.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::invalid(
                "frequencies",
                format!("every frequency must be positive, got {w}"),
            ));
        }
        if let Some(t) = self.phases.iter().find(|t| !t.is_finite()) {
            return Err(Error::invalid("phases", format!("non-finite phase {t}")));
        }
        Ok(())
    }
}

/// Gabor frame with atoms `exp(-(j - n0)^2 / sigma^2) cos(omega j + theta)`.
///
/// Atoms whose norm before normalisation is below `1e-12` are dropped.
/// Atom order is centers outermost, then spreads, frequencies and phases.
pub fn build_gabor(n: usize, params: &GaborParams) -> Result<DictionaryMatrix> {
    params.validate()?;
    if n == 0 {
        return Err(Error::invalid("n", "Gabor dictionary needs n >= 1"));
    }
    let mut columns: Vec<f64> = Vec::new();
    let mut kept = 0usize;
    let mut atom = vec![0.0; n];
    for &n0 in &params.centers {
        for &sigma in &params.spreads {
            for &omega in &params.frequencies {
                for &theta in &params.phases {
                    for (j, a) in atom.iter_mut().enumerate() {
                        let t = j as f64;
                        let env = (-(t - n0 as f64).powi(2) / (sigma * sigma)).exp();
                        *a = env * (omega * t + theta).cos();
                    }
                    let norm = atom.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm < 1e-12 {
                        continue;
                    }
                    columns.extend(atom.iter().map(|v| v / norm));
                    kept += 1;
                }
            }
        }
    }
    if kept == 0 {
        return Err(Error::invalid("gabor", "every atom in the grid is degenerate"));
    }
    let atoms = DMatrix::from_column_slice(n, kept, &columns);
    DictionaryMatrix::from_columns(atoms, BasisKind::Gabor, DictionaryParams::Gabor(params.clone()))
}

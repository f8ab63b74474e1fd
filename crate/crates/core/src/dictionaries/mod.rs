//! Sparse dictionaries as explicit `N x K` matrices of unit-norm atoms.
//!
//! Orthonormal bases (`identity`, `dct`, `dpss`, `rst`, `wavelet_db20`) are
//! square. The complex Fourier and noiselet systems are realified by stacking
//! the normalised real and imaginary parts, which yields real frames with
//! `K > N`; `gabor` is an overcomplete frame sized by its parameter grid.

mod dct;
mod dpss;
mod fourier;
mod gabor;
mod noiselet;
mod wavelet;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use dct::build_dct;
pub use dpss::{build_dpss, dpss_concentration, DEFAULT_DPSS_NW};
pub use fourier::{build_fft_real, build_rst};
pub use gabor::{build_gabor, GaborParams};
pub use noiselet::{build_noiselet_real, noiselet_complex};
pub use wavelet::{build_wavelet_db20, DB20_LOWPASS, DEFAULT_WAVELET_LEVELS};

/// Column norms are pinned to 1 within this tolerance.
pub const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Identity,
    Dct,
    FftReal,
    Dpss,
    Gabor,
    NoiseletReal,
    Rst,
    WaveletDb20,
}

impl BasisKind {
    pub const ALL: [BasisKind; 8] = [
        BasisKind::Identity,
        BasisKind::Dct,
        BasisKind::FftReal,
        BasisKind::Dpss,
        BasisKind::Gabor,
        BasisKind::NoiseletReal,
        BasisKind::Rst,
        BasisKind::WaveletDb20,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Identity => "identity",
            BasisKind::Dct => "dct",
            BasisKind::FftReal => "fft_real",
            BasisKind::Dpss => "dpss",
            BasisKind::Gabor => "gabor",
            BasisKind::NoiseletReal => "noiselet_real",
            BasisKind::Rst => "rst",
            BasisKind::WaveletDb20 => "wavelet_db20",
        }
    }

    /// Human-readable label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            BasisKind::Identity => "Time",
            BasisKind::Dct => "Discrete Cosine",
            BasisKind::FftReal => "Fourier",
            BasisKind::Dpss => "DPSS",
            BasisKind::Gabor => "Gabor",
            BasisKind::NoiseletReal => "Noiselet",
            BasisKind::Rst => "Real Sinusoidal",
            BasisKind::WaveletDb20 => "Wavelet",
        }
    }

    pub fn is_orthonormal(self) -> bool {
        matches!(
            self,
            BasisKind::Identity | BasisKind::Dct | BasisKind::Dpss | BasisKind::Rst | BasisKind::WaveletDb20
        )
    }

    pub fn valid_names() -> String {
        Self::ALL.map(|k| k.name()).join(", ")
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("basis", format!("unknown basis `{s}`; valid: {}", Self::valid_names())))
    }
}

/// Kind-specific construction parameters recorded on the matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryParams {
    None,
    Dpss { nw: f64 },
    Gabor(GaborParams),
    Wavelet { levels: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryMatrix {
    atoms: DMatrix<f64>,
    kind: BasisKind,
    params: DictionaryParams,
}

impl DictionaryMatrix {
    /// Wraps `atoms`, renormalising every column and checking finiteness.
    pub(crate) fn from_columns(mut atoms: DMatrix<f64>, kind: BasisKind, params: DictionaryParams) -> Result<Self> {
        if atoms.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "atoms",
                format!("{kind} dictionary has non-finite entries"),
            ));
        }
        for mut col in atoms.column_iter_mut() {
            let norm = col.norm();
            if norm == 0.0 {
                return Err(Error::invalid("atoms", format!("{kind} dictionary has a zero atom")));
            }
            col /= norm;
        }
        Ok(Self { atoms, kind, params })
    }

    pub fn atoms(&self) -> &DMatrix<f64> {
        &self.atoms
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn params(&self) -> &DictionaryParams {
        &self.params
    }

    /// Signal length `N`.
    pub fn n(&self) -> usize {
        self.atoms.nrows()
    }

    /// Number of atoms `K`.
    pub fn k(&self) -> usize {
        self.atoms.ncols()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        crate::matrix_io::write_matrix_csv(&self.atoms, path)
    }
}

/// Per-kind knobs for [`build`]; defaults follow the reference operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DictionaryOptions {
    pub dpss_nw: f64,
    pub wavelet_levels: usize,
    /// `None` selects [`GaborParams::default_grid`] for the signal length.
    pub gabor: Option<GaborParams>,
}

impl Default for DictionaryOptions {
    fn default() -> Self {
        Self {
            dpss_nw: DEFAULT_DPSS_NW,
            wavelet_levels: DEFAULT_WAVELET_LEVELS,
            gabor: None,
        }
    }
}

pub fn build_identity(n: usize) -> Result<DictionaryMatrix> {
    if n == 0 {
        return Err(Error::invalid("n", "identity dictionary needs n >= 1"));
    }
    DictionaryMatrix::from_columns(DMatrix::identity(n, n), BasisKind::Identity, DictionaryParams::None)
}

pub fn build(kind: BasisKind, n: usize, opts: &DictionaryOptions) -> Result<DictionaryMatrix> {
    match kind {
        BasisKind::Identity => build_identity(n),
        BasisKind::Dct => build_dct(n),
        BasisKind::FftReal => build_fft_real(n),
        BasisKind::Dpss => build_dpss(n, opts.dpss_nw),
        BasisKind::Gabor => {
            let params = match &opts.gabor {
                Some(p) => p.clone(),
                None => GaborParams::default_grid(n),
            };
            build_gabor(n, &params)
        }
        BasisKind::NoiseletReal => build_noiselet_real(n),
        BasisKind::Rst => build_rst(n),
        BasisKind::WaveletDb20 => build_wavelet_db20(n, opts.wavelet_levels),
    }
}

/// `cos(2 pi k j / n)` and `sin(2 pi k j / n)` with the phase reduced modulo `n` in integers.
pub(crate) fn twiddle(k: usize, j: usize, n: usize) -> (f64, f64) {
    let phase = ((k * j) % n) as f64 / n as f64;
    let (s, c) = (2.0 * std::f64::consts::PI * phase).sin_cos();
    (c, s)
}

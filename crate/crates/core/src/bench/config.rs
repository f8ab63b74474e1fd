//! Experiment configuration, read from TOML.
//!
//! ```toml
//! experiment = "dict_compare"      # dict_compare | cr_sweep | interp_window | solver_compare
//! n = 256
//! m_values = [128]
//! bases = ["dct", "fft_real"]
//! solvers = ["bsbl_bo"]
//! trials = 10
//! seed = 42
//! sensing = "gaussian"              # optional; per-experiment default otherwise
//! nnz_per_column = 4
//!
//! [source]
//! kind = "synthetic"                # or: kind = "file", path = "...", format = "csv"
//! amplitude_uv = 300.0
//! noise_sigma_uv = 5.0
//!
//! [bp]                              # optional solver overrides
//! max_iter = 4000
//! [bsbl]
//! block_size = 8
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dictionaries::{BasisKind, DictionaryOptions};
use crate::sensing::{SensingKind, DEFAULT_NNZ_PER_COLUMN};
use crate::signal::{SampleFormat, DEFAULT_SAMPLE_RATE_HZ, DEFAULT_SPIKE_HALF_WIDTH, MIN_SPIKE_AMPLITUDE_UV};
use crate::solvers::{BpConfig, BsblConfig, SolverConfig, SolverKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    DictCompare,
    CrSweep,
    InterpWindow,
    SolverCompare,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 4] = [
        ExperimentKind::DictCompare,
        ExperimentKind::CrSweep,
        ExperimentKind::InterpWindow,
        ExperimentKind::SolverCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::DictCompare => "dict_compare",
            ExperimentKind::CrSweep => "cr_sweep",
            ExperimentKind::InterpWindow => "interp_window",
            ExperimentKind::SolverCompare => "solver_compare",
        }
    }

    pub fn default_sensing(self) -> SensingKind {
        match self {
            ExperimentKind::DictCompare | ExperimentKind::SolverCompare => SensingKind::Gaussian,
            ExperimentKind::CrSweep | ExperimentKind::InterpWindow => SensingKind::SparseBinary,
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::invalid(
                "experiment",
                format!("unknown experiment `{s}`; valid: dict_compare, cr_sweep, interp_window, solver_compare"),
            )
        })
    }
}

/// Where trial signals come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    /// Trial `t` uses a fresh spike with seed `split_seed(seed, t)`; the
    /// template's own `seed` field is ignored.
    Synthetic {
        #[serde(default = "default_amplitude")]
        amplitude_uv: f64,
        #[serde(default = "default_depol")]
        depol_width: f64,
        #[serde(default = "default_repol")]
        repol_width: f64,
        #[serde(default = "default_noise")]
        noise_sigma_uv: f64,
    },
    /// Trial `t` uses the segment starting at `t * n`.
    File {
        path: PathBuf,
        format: SampleFormat,
        #[serde(default = "default_rate")]
        sample_rate_hz: f64,
    },
}

fn default_amplitude() -> f64 {
    300.0
}
fn default_depol() -> f64 {
    2.5
}
fn default_repol() -> f64 {
    5.0
}
fn default_noise() -> f64 {
    5.0
}
fn default_rate() -> f64 {
    DEFAULT_SAMPLE_RATE_HZ
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::Synthetic {
            amplitude_uv: default_amplitude(),
            depol_width: default_depol(),
            repol_width: default_repol(),
            noise_sigma_uv: default_noise(),
        }
    }
}

fn default_trials() -> usize {
    10
}
fn default_nnz() -> usize {
    DEFAULT_NNZ_PER_COLUMN
}
fn default_half_width() -> usize {
    DEFAULT_SPIKE_HALF_WIDTH
}
fn default_threshold() -> f64 {
    MIN_SPIKE_AMPLITUDE_UV
}
fn default_factor() -> usize {
    2
}
fn default_full_n() -> usize {
    256
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Segment length. For `interp_window` this is the length of the full
    /// reference segment the window is cut from.
    #[serde(default = "default_full_n")]
    pub n: usize,
    /// Measurement counts. For `interp_window` they apply to the raw window
    /// and are scaled proportionally for the interpolated and full signals.
    pub m_values: Vec<usize>,
    pub bases: Vec<BasisKind>,
    pub solvers: Vec<SolverKind>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sensing: Option<SensingKind>,
    #[serde(default = "default_nnz")]
    pub nnz_per_column: usize,
    #[serde(default)]
    pub source: DataSource,
    #[serde(default)]
    pub dictionary: DictionaryOptions,
    #[serde(default)]
    pub bp: BpConfig,
    #[serde(default)]
    pub bsbl: BsblConfig,
    /// Half width of the spike window used for spike SNR and window extraction.
    #[serde(default = "default_half_width")]
    pub spike_half_width: usize,
    #[serde(default = "default_threshold")]
    pub spike_threshold_uv: f64,
    #[serde(default = "default_factor")]
    pub interp_factor: usize,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// A config for `experiment` with the reference defaults filled in.
    pub fn with_defaults(experiment: ExperimentKind) -> Self {
        let (m_values, bases, solvers, n) = match experiment {
            ExperimentKind::DictCompare => (
                vec![128],
                BasisKind::ALL
                    .into_iter()
                    .filter(|k| *k != BasisKind::Identity)
                    .collect(),
                vec![SolverKind::BsblBo],
                256,
            ),
            ExperimentKind::CrSweep => (
                vec![64, 96, 128, 160, 192],
                vec![BasisKind::FftReal],
                vec![SolverKind::BsblBo],
                256,
            ),
            ExperimentKind::InterpWindow => (vec![30], vec![BasisKind::FftReal], vec![SolverKind::BsblBo], 256),
            ExperimentKind::SolverCompare => (
                vec![64, 96, 128, 160, 192, 256],
                vec![BasisKind::Dct],
                vec![SolverKind::BpAdmm, SolverKind::BsblBo],
                256,
            ),
        };
        Self {
            experiment,
            n,
            m_values,
            bases,
            solvers,
            trials: default_trials(),
            seed: 0,
            sensing: None,
            nnz_per_column: default_nnz(),
            source: DataSource::default(),
            dictionary: DictionaryOptions::default(),
            bp: BpConfig::default(),
            bsbl: BsblConfig::default(),
            spike_half_width: default_half_width(),
            spike_threshold_uv: default_threshold(),
            interp_factor: default_factor(),
        }
    }

    pub fn sensing_kind(&self) -> SensingKind {
        self.sensing.unwrap_or_else(|| self.experiment.default_sensing())
    }

    pub fn solver_config(&self, kind: SolverKind) -> SolverConfig {
        match kind {
            SolverKind::BpAdmm => SolverConfig::Bp(self.bp),
            SolverKind::BsblBo => SolverConfig::Bsbl(self.bsbl),
        }
    }

    /// Length of the raw window cut for `interp_window`.
    pub fn window_len(&self) -> usize {
        2 * self.spike_half_width
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n < 2 {
            return fail(format!("field `n`: must be at least 2, got {}", self.n));
        }
        if self.m_values.is_empty() {
            return fail("field `m_values`: must be non-empty".into());
        }
        if self.bases.is_empty() {
            return fail("field `bases`: must be non-empty".into());
        }
        if self.solvers.is_empty() {
            return fail("field `solvers`: must be non-empty".into());
        }
        if self.trials == 0 {
            return fail("field `trials`: must be at least 1".into());
        }
        let m_limit = match self.experiment {
            ExperimentKind::InterpWindow => self.window_len(),
            _ => self.n,
        };
        if let Some(m) = self.m_values.iter().find(|&&m| m == 0 || m > m_limit) {
            return fail(format!("field `m_values`: {m} outside [1, {m_limit}]"));
        }
        if self.experiment == ExperimentKind::CrSweep && self.m_values.windows(2).any(|w| w[0] >= w[1]) {
            return fail("field `m_values`: cr_sweep needs strictly increasing values".into());
        }
        if self.experiment == ExperimentKind::InterpWindow {
            if self.interp_factor < 2 {
                return fail(format!(
                    "field `interp_factor`: must be at least 2, got {}",
                    self.interp_factor
                ));
            }
            if self.window_len() > self.n {
                return fail(format!(
                    "field `spike_half_width`: window {} exceeds n = {}",
                    self.window_len(),
                    self.n
                ));
            }
        }
        if self.spike_half_width == 0 {
            return fail("field `spike_half_width`: must be positive".into());
        }
        self.bp
            .validate()
            .map_err(|e| Error::Config(format!("table `bp`: {e}")))?;
        self.bsbl
            .validate()
            .map_err(|e| Error::Config(format!("table `bsbl`: {e}")))?;
        Ok(())
    }
}

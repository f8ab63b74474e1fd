//! Compressed sensing toolkit for short action-potential recordings.
//!
//! The crate is organised around the acquisition/recovery pipeline:
//!
//! - [`signal`]: sample vectors, file ingestion, a synthetic spike generator,
//!   segmentation, spike windows and linear interpolation.
//! - [`dictionaries`]: explicit sparse bases and frames (identity, DCT, DPSS,
//!   realified Fourier, Gabor, realified noiselet, real sinusoid, Daubechies-20).
//! - [`sensing`]: seed-reproducible Gaussian and sparse-binary measurement
//!   operators and the projection `y = A x`.
//! - [`solvers`]: ADMM basis pursuit (equality and BPDN forms) and BSBL-BO.
//! - [`metrics`]: SNR, PSNR and spike-window SNR.
//! - [`bench`]: the experiment runner, record persistence and table rendering.

pub mod bench;
pub mod dictionaries;
mod error;
pub mod linalg;
pub mod matrix_io;
pub mod metrics;
pub mod rng;
pub mod sensing;
pub mod signal;
pub mod solvers;

pub use error::{Error, Result};

pub use dictionaries::{BasisKind, DictionaryMatrix, DictionaryOptions, GaborParams};
pub use metrics::QualityReport;
pub use sensing::{Measurement, SensingKind, SensingMatrix};
pub use signal::{SignalVector, SpikeTemplateParams, SpikeWindow};
pub use solvers::{BpConfig, BsblConfig, ReconstructionResult, SolverConfig, SolverKind};

//! Measurement operators `A` (M x N) and the projection `y = A x`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::rng::rng_from_seed;
use crate::signal::SignalVector;
use crate::{Error, Result};

pub const DEFAULT_NNZ_PER_COLUMN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensingKind {
    Gaussian,
    SparseBinary,
}

impl SensingKind {
    pub const ALL: [SensingKind; 2] = [SensingKind::Gaussian, SensingKind::SparseBinary];

    pub fn name(self) -> &'static str {
        match self {
            SensingKind::Gaussian => "gaussian",
            SensingKind::SparseBinary => "sparse_binary",
        }
    }
}

impl fmt::Display for SensingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SensingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::invalid(
                "sensing",
                format!("unknown sensing kind `{s}`; valid: gaussian, sparse_binary"),
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    entries: DMatrix<f64>,
    kind: SensingKind,
    seed: u64,
    nnz_per_column: Option<usize>,
}

fn check_shape(m: usize, n: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("m", "need at least one measurement"));
    }
    if m > n {
        return Err(Error::invalid(
            "m",
            format!("M = {m} exceeds N = {n}; sensing must not expand the signal"),
        ));
    }
    Ok(())
}

/// I.i.d. `N(0, 1/m)` entries drawn column by column from the seeded stream.
pub fn gaussian_matrix(m: usize, n: usize, seed: u64) -> Result<SensingMatrix> {
    check_shape(m, n)?;
    let mut rng = rng_from_seed(seed);
    let scale = 1.0 / (m as f64).sqrt();
    let entries = DMatrix::from_fn(m, n, |_, _| {
        let z: f64 = StandardNormal.sample(&mut rng);
        scale * z
    });
    Ok(SensingMatrix {
        entries,
        kind: SensingKind::Gaussian,
        seed,
        nnz_per_column: None,
    })
}

/// Each column holds exactly `nnz_per_column` ones at distinct uniformly drawn rows.
pub fn sparse_binary_matrix(m: usize, n: usize, nnz_per_column: usize, seed: u64) -> Result<SensingMatrix> {
    check_shape(m, n)?;
    if nnz_per_column == 0 || nnz_per_column > m {
        return Err(Error::invalid(
            "nnz_per_column",
            format!("must lie in [1, m = {m}], got {nnz_per_column}"),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut entries = DMatrix::<f64>::zeros(m, n);
    for col in 0..n {
        for row in sample(&mut rng, m, nnz_per_column) {
            entries[(row, col)] = 1.0;
        }
    }
    Ok(SensingMatrix {
        entries,
        kind: SensingKind::SparseBinary,
        seed,
        nnz_per_column: Some(nnz_per_column),
    })
}

impl SensingMatrix {
    /// Wraps an externally supplied operator, e.g. one read from CSV fixtures.
    pub fn from_entries(
        entries: DMatrix<f64>,
        kind: SensingKind,
        seed: u64,
        nnz_per_column: Option<usize>,
    ) -> Result<Self> {
        check_shape(entries.nrows(), entries.ncols())?;
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("entries", "sensing matrix has non-finite entries"));
        }
        Ok(Self {
            entries,
            kind,
            seed,
            nnz_per_column,
        })
    }

    pub fn build(kind: SensingKind, m: usize, n: usize, nnz_per_column: usize, seed: u64) -> Result<Self> {
        match kind {
            SensingKind::Gaussian => gaussian_matrix(m, n, seed),
            SensingKind::SparseBinary => sparse_binary_matrix(m, n, nnz_per_column, seed),
        }
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn kind(&self) -> SensingKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn nnz_per_column(&self) -> Option<usize> {
        self.nnz_per_column
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n(&self) -> usize {
        self.entries.ncols()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        crate::matrix_io::write_matrix_csv(&self.entries, path)
    }

    pub fn read_csv(path: &Path, kind: SensingKind, seed: u64) -> Result<Self> {
        let entries = crate::matrix_io::read_matrix_csv(path)?;
        let nnz = match kind {
            SensingKind::SparseBinary => entries
                .column_iter()
                .next()
                .map(|c| c.iter().filter(|v| **v != 0.0).count()),
            SensingKind::Gaussian => None,
        };
        Self::from_entries(entries, kind, seed, nnz)
    }
}

/// Compressed samples `y = A x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub y: DVector<f64>,
    pub sensing_seed: u64,
    pub n_original: usize,
}

impl Measurement {
    pub fn new(y: DVector<f64>, sensing_seed: u64, n_original: usize) -> Result<Self> {
        if let Some(index) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            y,
            sensing_seed,
            n_original,
        })
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }
}

pub fn measure(a: &SensingMatrix, x: &SignalVector) -> Result<Measurement> {
    if a.n() != x.len() {
        return Err(Error::mismatch(
            "measure (sensing columns vs signal length)",
            format!("{}x{}", a.m(), a.n()),
            x.len(),
        ));
    }
    let y = &a.entries * DVector::from_column_slice(x.samples());
    Measurement::new(y, a.seed, x.len())
}

pub fn compression_ratio(m: usize, n: usize) -> f64 {
    m as f64 / n as f64
}

//! Sparse recovery over the composed operator `Theta = A D`.

mod bp;
mod bsbl;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dictionaries::DictionaryMatrix;
use crate::sensing::{Measurement, SensingMatrix};
use crate::{Error, Result};

pub use bp::{solve_bp, solve_bp_diagnosed, BpConfig, BpDiagnostics};
pub use bsbl::{solve_bsbl_bo, solve_bsbl_bo_observed, BsblConfig, BsblIterate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    BpAdmm,
    BsblBo,
}

impl SolverKind {
    pub const ALL: [SolverKind; 2] = [SolverKind::BpAdmm, SolverKind::BsblBo];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::BpAdmm => "bp_admm",
            SolverKind::BsblBo => "bsbl_bo",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("solver", format!("unknown solver `{s}`; valid: bp_admm, bsbl_bo")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverConfig {
    Bp(BpConfig),
    Bsbl(BsblConfig),
}

impl SolverConfig {
    pub fn kind(&self) -> SolverKind {
        match self {
            SolverConfig::Bp(_) => SolverKind::BpAdmm,
            SolverConfig::Bsbl(_) => SolverKind::BsblBo,
        }
    }

    pub fn default_for(kind: SolverKind) -> Self {
        match kind {
            SolverKind::BpAdmm => SolverConfig::Bp(BpConfig::default()),
            SolverKind::BsblBo => SolverConfig::Bsbl(BsblConfig::default()),
        }
    }
}

/// Raw solver output in the coefficient domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSolution {
    pub coefficients: DVector<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub coefficients: DVector<f64>,
    /// `D * coefficients`.
    pub signal_hat: DVector<f64>,
    pub iterations: usize,
    pub runtime_s: f64,
    pub converged: bool,
    pub solver: SolverKind,
}

pub(crate) fn check_problem(y: &Measurement, theta: &DMatrix<f64>) -> Result<()> {
    if theta.nrows() != y.m() {
        return Err(Error::mismatch(
            "operator rows vs measurements",
            format!("{}x{}", theta.nrows(), theta.ncols()),
            y.m(),
        ));
    }
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("theta", "operator has non-finite entries"));
    }
    if let Some(index) = y.y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// Solves in the coefficient domain of `d` and maps back with `x_hat = D s_hat`.
///
/// `runtime_s` covers the solver call only; forming `A D` is excluded.
pub fn reconstruct(
    y: &Measurement,
    a: &SensingMatrix,
    d: &DictionaryMatrix,
    cfg: &SolverConfig,
) -> Result<ReconstructionResult> {
    if a.n() != d.n() {
        return Err(Error::mismatch(
            "sensing columns vs dictionary rows",
            format!("A {}x{}", a.m(), a.n()),
            format!("D {}x{}", d.n(), d.k()),
        ));
    }
    if a.m() != y.m() {
        return Err(Error::mismatch("sensing rows vs measurements", a.m(), y.m()));
    }
    let theta = a.entries() * d.atoms();
    let start = Instant::now();
    let sol = match cfg {
        SolverConfig::Bp(c) => solve_bp(y, &theta, c)?,
        SolverConfig::Bsbl(c) => solve_bsbl_bo(y, &theta, c)?,
    };
    let runtime_s = start.elapsed().as_secs_f64();
    let signal_hat = d.atoms() * &sol.coefficients;
    Ok(ReconstructionResult {
        coefficients: sol.coefficients,
        signal_hat,
        iterations: sol.iterations,
        runtime_s,
        converged: sol.converged,
        solver: cfg.kind(),
    })
}

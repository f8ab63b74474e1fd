//! Block sparse Bayesian learning with bound-optimisation updates (BSBL-BO).
//!
//! The `K` coefficients are split into equal blocks of `block_size`; block
//! `i` has prior `N(0, gamma_i B)` with a shared AR(1) Toeplitz correlation
//! `B`. Each iteration forms `C = lambda I + Theta Sigma0 Theta^T`, the
//! posterior mean `mu = Sigma0 Theta^T C^{-1} y`, re-estimates `B` and
//! `lambda` if enabled, and applies the bound-optimisation step
//!
//! ```text
//! gamma_i <- gamma_i * ||B^{1/2} Theta_i^T C^{-1} y|| / sqrt(tr(Theta_i^T C^{-1} Theta_i B))
//! ```
//!
//! Blocks whose `gamma_i` drops below `prune_gamma * max_j gamma_j` are
//! removed for good. `y` is normalised to unit RMS internally, so `lambda`
//! is expressed relative to `mean(y^2)`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{check_problem, SparseSolution};
use crate::sensing::Measurement;
use crate::{Error, Result};

/// Largest admissible magnitude of the learned AR(1) coefficient.
const MAX_CORRELATION: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BsblConfig {
    pub block_size: usize,
    pub learn_lambda: bool,
    /// Initial noise variance as a fraction of `mean(y^2)`.
    pub lambda_init: f64,
    pub learn_correlation: bool,
    pub prune_gamma: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for BsblConfig {
    fn default() -> Self {
        Self {
            block_size: 8,
            learn_lambda: false,
            lambda_init: 1e-8,
            learn_correlation: true,
            prune_gamma: 1e-4,
            max_iter: 600,
            tol: 1e-8,
        }
    }
}

impl BsblConfig {
    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::invalid("block_size", "must be positive"));
        }
        if !(self.lambda_init > 0.0 && self.lambda_init.is_finite()) {
            return Err(Error::invalid(
                "lambda_init",
                format!("must be positive, got {}", self.lambda_init),
            ));
        }
        if !(self.prune_gamma > 0.0 && self.prune_gamma < 1.0) {
            return Err(Error::invalid(
                "prune_gamma",
                format!("must lie in (0, 1), got {}", self.prune_gamma),
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid("tol", format!("must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be positive"));
        }
        Ok(())
    }
}

fn toeplitz_ar1(b: usize, r: f64) -> DMatrix<f64> {
    DMatrix::from_fn(b, b, |i, j| r.powi((i as i32 - j as i32).abs()))
}

fn sqrt_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let d = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

/// Cholesky of `c`, adding `1e-10 * trace(c) / m` jitter (growing tenfold) until it succeeds.
fn robust_cholesky(mut c: DMatrix<f64>) -> Cholesky<f64, Dyn> {
    let m = c.nrows();
    let base = (c.trace() / m as f64).abs().max(f64::MIN_POSITIVE) * 1e-10;
    let mut jitter = 0.0;
    loop {
        if let Some(ch) = c.clone().cholesky() {
            return ch;
        }
        let next = if jitter == 0.0 { base } else { jitter * 10.0 };
        for i in 0..m {
            c[(i, i)] += next - jitter;
        }
        jitter = next;
    }
}

/// Solver state after one completed iteration, in the internal units
/// (measurements scaled to unit RMS, coefficients zero-padded to whole blocks).
#[derive(Debug)]
pub struct BsblIterate<'a> {
    pub iteration: usize,
    pub gamma: &'a [f64],
    pub active: &'a [bool],
    pub mu: &'a DVector<f64>,
}

pub fn solve_bsbl_bo(y: &Measurement, theta: &DMatrix<f64>, cfg: &BsblConfig) -> Result<SparseSolution> {
    solve_bsbl_bo_observed(y, theta, cfg, |_| {})
}

/// [`solve_bsbl_bo`] with a callback invoked after every iteration.
pub fn solve_bsbl_bo_observed(
    y: &Measurement,
    theta: &DMatrix<f64>,
    cfg: &BsblConfig,
    mut observe: impl FnMut(&BsblIterate<'_>),
) -> Result<SparseSolution> {
    check_problem(y, theta)?;
    cfg.validate()?;
    let (m, k) = theta.shape();
    let b = cfg.block_size;
    let rms = (y.y.norm_squared() / m as f64).sqrt();
    if rms == 0.0 {
        return Ok(SparseSolution {
            coefficients: DVector::zeros(k),
            iterations: 0,
            converged: true,
        });
    }
    let ys = &y.y / rms;

    // Zero-pad K to a multiple of the block size.
    let n_blocks = k.div_ceil(b);
    let k_pad = n_blocks * b;
    let mut phi = DMatrix::<f64>::zeros(m, k_pad);
    phi.columns_mut(0, k).copy_from(theta);
    let blocks: Vec<DMatrix<f64>> = (0..n_blocks).map(|i| phi.columns(i * b, b).into_owned()).collect();

    let mut gamma = vec![1.0; n_blocks];
    let mut active = vec![true; n_blocks];
    let mut corr = DMatrix::<f64>::identity(b, b);
    let mut lambda = cfg.lambda_init;
    let mut mu = DVector::<f64>::zeros(k_pad);
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=cfg.max_iter {
        iterations = it;

        let gmax = gamma
            .iter()
            .zip(&active)
            .filter(|(_, a)| **a)
            .map(|(g, _)| *g)
            .fold(0.0, f64::max);
        for i in 0..n_blocks {
            if active[i] && (gamma[i] < cfg.prune_gamma * gmax || gamma[i] == 0.0) {
                active[i] = false;
                gamma[i] = 0.0;
            }
        }
        let live: Vec<usize> = (0..n_blocks).filter(|&i| active[i]).collect();
        if live.is_empty() {
            mu.fill(0.0);
            converged = true;
            break;
        }

        let mut c = DMatrix::<f64>::identity(m, m) * lambda;
        for &i in &live {
            c += (&blocks[i] * &corr * blocks[i].transpose()) * gamma[i];
        }
        let chol = robust_cholesky(c);
        let c_inv_y = chol.solve(&ys);

        let mu_old = std::mem::replace(&mut mu, DVector::zeros(k_pad));
        let mut hy: Vec<DVector<f64>> = vec![DVector::zeros(0); n_blocks];
        let mut hphi: Vec<DMatrix<f64>> = vec![DMatrix::zeros(0, 0); n_blocks];
        let mut corr_acc = DMatrix::<f64>::zeros(b, b);
        let mut lambda_comp = 0.0;
        for &i in &live {
            let phi_i = &blocks[i];
            let h = phi_i.transpose() * &c_inv_y;
            let hp = phi_i.transpose() * chol.solve(phi_i);
            let sigma0 = &corr * gamma[i];
            let mu_i = &sigma0 * &h;
            let sigma_x = &sigma0 - &sigma0 * &hp * &sigma0;
            if cfg.learn_correlation {
                corr_acc += (&sigma_x + &mu_i * mu_i.transpose()) / gamma[i];
            }
            if cfg.learn_lambda {
                lambda_comp += (phi_i * &sigma_x * phi_i.transpose()).trace();
            }
            mu.rows_mut(i * b, b).copy_from(&mu_i);
            hy[i] = h;
            hphi[i] = hp;
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIterate { iteration: it });
        }

        if cfg.learn_correlation && b > 1 {
            let diag = corr_acc.diagonal().mean();
            let sup = (0..b - 1).map(|j| corr_acc[(j, j + 1)]).sum::<f64>() / (b - 1) as f64;
            let mut r = if diag > 0.0 { sup / diag } else { 0.0 };
            if !r.is_finite() {
                r = 0.0;
            }
            corr = toeplitz_ar1(b, r.clamp(-MAX_CORRELATION, MAX_CORRELATION));
        }
        if cfg.learn_lambda {
            let resid = (&ys - &phi * &mu).norm_squared();
            lambda = ((resid + lambda_comp) / m as f64).max(cfg.lambda_init * 1e-6);
        }

        let corr_sqrt = sqrt_psd(&corr);
        for &i in &live {
            let num = (&corr_sqrt * &hy[i]).norm();
            let den = (&hphi[i] * &corr).trace().max(0.0).sqrt();
            gamma[i] = if den > 0.0 { gamma[i] * num / den } else { 0.0 };
            if !gamma[i].is_finite() {
                return Err(Error::NonFiniteIterate { iteration: it });
            }
        }

        observe(&BsblIterate {
            iteration: it,
            gamma: &gamma,
            active: &active,
            mu: &mu,
        });

        let dmu = (&mu - &mu_old).amax();
        if dmu < cfg.tol {
            converged = true;
            break;
        }
    }

    for (i, _) in active.iter().enumerate().filter(|(_, a)| !**a) {
        mu.rows_mut(i * b, b).fill(0.0);
    }
    let coefficients = DVector::from_iterator(k, mu.iter().take(k).map(|v| v * rms));
    Ok(SparseSolution {
        coefficients,
        iterations,
        converged,
    })
}

//! Basis pursuit by ADMM.
//!
//! Solves `min ||s||_1  s.t. ||Theta s - y||_2 <= epsilon`. With
//! `epsilon = 0` the splitting is projection onto the affine set
//! `{Theta s = y}` followed by soft thresholding. With `epsilon > 0` the
//! constraint is handled by a second split `w = Theta s` projected onto the
//! `epsilon`-ball around `y`.
//!
//! The data is rescaled internally so that the minimum-norm solution has unit
//! peak magnitude; `rho` and the tolerances refer to that scaled problem.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_problem, SparseSolution};
use crate::linalg::{self, pinv};
use crate::sensing::Measurement;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BpConfig {
    /// Residual bound; `0` selects equality-constrained basis pursuit.
    pub epsilon: f64,
    pub rho: f64,
    pub max_iter: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for BpConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            rho: 1.0,
            max_iter: 2000,
            abs_tol: 1e-6,
            rel_tol: 1e-4,
        }
    }
}

impl BpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", format!("must be >= 0, got {}", self.epsilon)));
        }
        for (name, v) in [("rho", self.rho), ("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be positive"));
        }
        Ok(())
    }
}

fn soft_threshold(v: &DVector<f64>, t: f64) -> DVector<f64> {
    v.map(|x| {
        if x > t {
            x - t
        } else if x < -t {
            x + t
        } else {
            0.0
        }
    })
}

/// Least-squares solve; returns `None` for an empty system.
fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    (a.ncols() > 0).then(|| linalg::least_squares(a, b))
}

fn ensure_finite(v: &DVector<f64>, iteration: usize) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteIterate { iteration })
    }
}

fn columns(theta: &DMatrix<f64>, support: &[usize]) -> DMatrix<f64> {
    theta.select_columns(support)
}

/// Final ADMM state of a basis-pursuit solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BpDiagnostics {
    /// Dual vector `nu` with `Theta^T nu` equal to the ADMM subgradient
    /// estimate `rho u` in the least-squares sense. At an optimum
    /// `||Theta^T nu||_inf <= 1`, with equality and matching sign on the support.
    pub dual: DVector<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub eps_primal: f64,
    pub eps_dual: f64,
}

pub fn solve_bp(y: &Measurement, theta: &DMatrix<f64>, cfg: &BpConfig) -> Result<SparseSolution> {
    solve_bp_diagnosed(y, theta, cfg).map(|(sol, _)| sol)
}

/// [`solve_bp`] that also returns the final ADMM state; `None` when no
/// iterations ran (zero data).
pub fn solve_bp_diagnosed(
    y: &Measurement,
    theta: &DMatrix<f64>,
    cfg: &BpConfig,
) -> Result<(SparseSolution, Option<BpDiagnostics>)> {
    check_problem(y, theta)?;
    cfg.validate()?;
    let k = theta.ncols();
    let trivial = || {
        Ok((
            SparseSolution {
                coefficients: DVector::zeros(k),
                iterations: 0,
                converged: true,
            },
            None,
        ))
    };
    if y.y.iter().all(|v| *v == 0.0) {
        return trivial();
    }

    let p = pinv(theta);
    let min_norm = &p * &y.y;
    let scale = match min_norm.amax() {
        s if s > 0.0 => s,
        // y is orthogonal to the range of theta; the best we can do is zero.
        _ => return trivial(),
    };
    let ys = &y.y / scale;

    let (mut sol, diag) = if cfg.epsilon == 0.0 {
        equality(theta, &p, &ys, cfg)?
    } else {
        let residual_bound = (cfg.epsilon + cfg.abs_tol * (y.m() as f64).sqrt()) / scale;
        denoising(theta, &ys, cfg.epsilon / scale, residual_bound, cfg)?
    };
    sol.coefficients *= scale;
    Ok((sol, Some(diag)))
}

fn dual_from_subgradient(p: &DMatrix<f64>, subgradient: &DVector<f64>) -> DVector<f64> {
    // p = pinv(Theta), so p^T = pinv(Theta^T).
    p.transpose() * subgradient
}

fn equality(
    theta: &DMatrix<f64>,
    p: &DMatrix<f64>,
    y: &DVector<f64>,
    cfg: &BpConfig,
) -> Result<(SparseSolution, BpDiagnostics)> {
    let k = theta.ncols();
    let sqrt_k = (k as f64).sqrt();
    let project = |v: &DVector<f64>| -> DVector<f64> { v + p * (y - theta * v) };

    let mut x = p * y;
    let mut z = x.clone();
    let mut u = DVector::<f64>::zeros(k);
    let mut converged = false;
    let mut iterations = 0;
    let mut residuals = (0.0, 0.0, 0.0, 0.0);
    for it in 1..=cfg.max_iter {
        iterations = it;
        x = project(&(&z - &u));
        let z_old = std::mem::replace(&mut z, soft_threshold(&(&x + &u), 1.0 / cfg.rho));
        u += &x - &z;
        ensure_finite(&u, it)?;

        let r_norm = (&x - &z).norm();
        let s_norm = cfg.rho * (&z - &z_old).norm();
        let eps_pri = sqrt_k * cfg.abs_tol + cfg.rel_tol * x.norm().max(z.norm());
        let eps_dual = sqrt_k * cfg.abs_tol + cfg.rel_tol * cfg.rho * u.norm();
        residuals = (r_norm, s_norm, eps_pri, eps_dual);
        if r_norm < eps_pri && s_norm < eps_dual {
            converged = true;
            break;
        }
    }

    let diagnostics = BpDiagnostics {
        dual: dual_from_subgradient(p, &(&u * cfg.rho)),
        primal_residual: residuals.0,
        dual_residual: residuals.1,
        eps_primal: residuals.2,
        eps_dual: residuals.3,
    };
    let coefficients = polish(theta, y, &z, &x, cfg.rel_tol).unwrap_or(x);
    Ok((
        SparseSolution {
            coefficients,
            iterations,
            converged,
        },
        diagnostics,
    ))
}

/// Refits the ADMM support by least squares.
///
/// The refit is accepted only if it is feasible to the same accuracy as the
/// projected iterate `x`, keeps the signs found by ADMM, and does not raise
/// the l1 objective; on a correctly identified support this is the exact
/// basis-pursuit minimiser.
fn polish(
    theta: &DMatrix<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    x: &DVector<f64>,
    rel_tol: f64,
) -> Option<DVector<f64>> {
    let support: Vec<usize> = (0..z.len()).filter(|&i| z[i] != 0.0).collect();
    if support.is_empty() || support.len() > theta.nrows() {
        return None;
    }
    let sub = columns(theta, &support);
    let vals = least_squares(&sub, y)?;
    if support
        .iter()
        .zip(vals.iter())
        .any(|(&i, v)| v.signum() != z[i].signum() || *v == 0.0)
    {
        return None;
    }
    let mut s = DVector::zeros(z.len());
    for (&i, v) in support.iter().zip(vals.iter()) {
        s[i] = *v;
    }
    let res_s = (theta * &s - y).norm();
    let res_x = (theta * x - y).norm();
    if res_s > res_x + 1e-9 * y.norm() {
        return None;
    }
    if s.lp_norm(1) > x.lp_norm(1) * (1.0 + rel_tol) {
        return None;
    }
    Some(s)
}

fn denoising(
    theta: &DMatrix<f64>,
    y: &DVector<f64>,
    epsilon: f64,
    residual_bound: f64,
    cfg: &BpConfig,
) -> Result<(SparseSolution, BpDiagnostics)> {
    let (m, k) = theta.shape();
    let gram = DMatrix::<f64>::identity(m, m) + theta * theta.transpose();
    let chol = gram
        .cholesky()
        .expect("I + Theta Theta^T is symmetric positive definite");
    // (I + Theta^T Theta)^{-1} r by the Woodbury identity.
    let solve = |r: &DVector<f64>| -> DVector<f64> { r - theta.transpose() * chol.solve(&(theta * r)) };
    let project_ball = |v: &DVector<f64>| -> DVector<f64> {
        let d = v - y;
        let n = d.norm();
        if n <= epsilon {
            v.clone()
        } else {
            y + d * (epsilon / n)
        }
    };

    let sqrt_pri = ((k + m) as f64).sqrt();
    let sqrt_k = (k as f64).sqrt();
    let mut z = DVector::<f64>::zeros(k);
    let mut w = project_ball(&DVector::zeros(m));
    let mut u1 = DVector::<f64>::zeros(k);
    let mut u2 = DVector::<f64>::zeros(m);
    let mut converged = false;
    let mut iterations = 0;
    let mut residuals = (0.0, 0.0, 0.0, 0.0);
    for it in 1..=cfg.max_iter {
        iterations = it;
        let s = solve(&(&z - &u1 + theta.transpose() * (&w - &u2)));
        let ts = theta * &s;
        let z_old = std::mem::replace(&mut z, soft_threshold(&(&s + &u1), 1.0 / cfg.rho));
        let w_old = std::mem::replace(&mut w, project_ball(&(&ts + &u2)));
        u1 += &s - &z;
        u2 += &ts - &w;
        ensure_finite(&u1, it)?;
        ensure_finite(&u2, it)?;

        let r_norm = ((&s - &z).norm_squared() + (&ts - &w).norm_squared()).sqrt();
        let s_norm = cfg.rho * ((&z - &z_old) + theta.transpose() * (&w - &w_old)).norm();
        let lhs_norm = (s.norm_squared() + ts.norm_squared()).sqrt();
        let rhs_norm = (z.norm_squared() + w.norm_squared()).sqrt();
        let eps_pri = sqrt_pri * cfg.abs_tol + cfg.rel_tol * lhs_norm.max(rhs_norm);
        let eps_dual = sqrt_k * cfg.abs_tol + cfg.rel_tol * cfg.rho * (&u1 + theta.transpose() * &u2).norm();
        residuals = (r_norm, s_norm, eps_pri, eps_dual);
        if r_norm < eps_pri && s_norm < eps_dual && (theta * &z - y).norm() <= residual_bound {
            converged = true;
            break;
        }
    }
    let diagnostics = BpDiagnostics {
        dual: dual_from_subgradient(&pinv(theta), &(&u1 * cfg.rho)),
        primal_residual: residuals.0,
        dual_residual: residuals.1,
        eps_primal: residuals.2,
        eps_dual: residuals.3,
    };
    Ok((
        SparseSolution {
            coefficients: z,
            iterations,
            converged,
        },
        diagnostics,
    ))
}

//! ADMM sub-solvers for the per-factor constrained least-squares problems
//!
//! ```text
//! min_Z  tr(Z (G + λI) Zᵀ) − 2 tr(Mᵀ Z)   s.t. Z ∈ 𝒞
//! ```
//!
//! where `G = HᵀH` is the Khatri-Rao Gram, `M = WᵀH` the MTTKRP and `𝒞`
//! is either the nonnegative orthant or the set of row-stochastic matrices.
//! With the splitting `Z = Z̄`, `Z̄ ∈ 𝒞` and scaled dual `U` the iteration is
//!
//! ```text
//! Z  ← (M + ρ/2 (Z̄ − U)) (G + (λ + ρ/2) I)⁻¹
//! Z̄ ← P_𝒞(Z + U)
//! U  ← U + Z − Z̄
//! ```
//!
//! The shifted K×K system is Cholesky-factored once per call.

use nalgebra::{Cholesky, DMatrix, Dyn};

use super::config::{RhoPolicy, SolverConfig};
use super::projection::{project_nonneg, project_simplex_rows};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Nonnegative,
    Simplex,
}

impl Constraint {
    fn project(self, m: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            Constraint::Nonnegative => project_nonneg(m),
            Constraint::Simplex => project_simplex_rows(m).expect("rank is at least one"),
        }
    }

    pub(crate) fn is_satisfied(self, m: &DMatrix<f64>, tol: f64) -> bool {
        if m.iter().any(|&x| !(x >= 0.0)) {
            return false;
        }
        match self {
            Constraint::Nonnegative => true,
            Constraint::Simplex => m.row_iter().all(|r| (r.sum() - 1.0).abs() <= tol),
        }
    }
}

/// State of one ADMM solve.
#[derive(Debug, Clone)]
pub struct AdmmWorkspace {
    /// Last unconstrained iterate.
    pub z: DMatrix<f64>,
    /// Last projected iterate; this is the returned solution.
    pub z_bar: DMatrix<f64>,
    /// Scaled dual.
    pub dual: DMatrix<f64>,
    pub rho: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The ADMM result scored worse than the feasible starting point and
    /// was discarded in its favour.
    pub kept_start: bool,
}

/// `tr(Z (G + λI) Zᵀ) − 2 tr(Mᵀ Z)`.
pub fn subproblem_objective(gram: &DMatrix<f64>, wth: &DMatrix<f64>, lambda: f64, z: &DMatrix<f64>) -> f64 {
    let zg = z * gram;
    zg.component_mul(z).sum() + lambda * z.norm_squared() - 2.0 * wth.component_mul(z).sum()
}

fn choose_rho(policy: RhoPolicy, gram: &DMatrix<f64>, z_init: &DMatrix<f64>) -> f64 {
    let k = gram.nrows() as f64;
    let heuristic = match policy {
        RhoPolicy::Fixed(rho) => return rho,
        RhoPolicy::GramTrace => gram.trace() / k,
        RhoPolicy::InitNorm => z_init.norm_squared() / k,
    };
    // A zero Gram (or zero start) leaves the penalty undefined; any positive
    // value gives a well-posed iteration.
    if heuristic > 0.0 && heuristic.is_finite() {
        heuristic
    } else {
        1.0
    }
}

fn check_shapes(gram: &DMatrix<f64>, wth: &DMatrix<f64>, z_init: &DMatrix<f64>, dual: Option<&DMatrix<f64>>) -> Result<()> {
    let k = gram.nrows();
    if gram.ncols() != k || k == 0 {
        return Err(Error::ShapeMismatch(format!(
            "Gram must be square and non-empty, got {}x{}",
            gram.nrows(),
            gram.ncols()
        )));
    }
    if wth.ncols() != k || z_init.shape() != wth.shape() {
        return Err(Error::ShapeMismatch(format!(
            "WᵀH is {:?} and Z_init is {:?}, expected N×{k} for both",
            wth.shape(),
            z_init.shape()
        )));
    }
    if let Some(u) = dual {
        if u.shape() != wth.shape() {
            return Err(Error::ShapeMismatch(format!(
                "dual is {:?}, expected {:?}",
                u.shape(),
                wth.shape()
            )));
        }
    }
    Ok(())
}

/// Runs ADMM from `z_init` (and optionally a warm dual). When `z_init` is
/// already feasible the returned `z_bar` never scores worse on the
/// subproblem objective than `z_init`.
pub fn admm_solve(
    gram: &DMatrix<f64>,
    wth: &DMatrix<f64>,
    z_init: &DMatrix<f64>,
    dual: Option<&DMatrix<f64>>,
    lambda: f64,
    constraint: Constraint,
    cfg: &SolverConfig,
) -> Result<AdmmWorkspace> {
    check_shapes(gram, wth, z_init, dual)?;
    let k = gram.nrows();
    let rho = choose_rho(cfg.rho_policy, gram, z_init);
    let shift = lambda + rho / 2.0;
    if !(shift > 0.0) {
        return Err(Error::Singular(
            "lambda and rho are both zero; use lambda > 0 or a nonzero rho".into(),
        ));
    }
    let mut system = gram.clone();
    for d in 0..k {
        system[(d, d)] += shift;
    }
    let chol: Cholesky<f64, Dyn> = Cholesky::new(system)
        .ok_or_else(|| Error::Singular("shifted Gram is not positive definite".into()))?;

    let start_feasible = constraint.is_satisfied(z_init, 1e-9);
    let mut z = z_init.clone();
    let mut z_bar = constraint.project(z_init);
    let mut u = dual.cloned().unwrap_or_else(|| DMatrix::zeros(z.nrows(), k));
    let half_rho = rho / 2.0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_admm {
        iterations += 1;
        let z_prev = z;
        let rhs = wth + (&z_bar - &u) * half_rho;
        z = chol.solve(&rhs.transpose()).transpose();
        let shifted = &z + &u;
        z_bar = constraint.project(&shifted);
        u = shifted - &z_bar;

        let change = (&z - &z_prev).norm() / z_prev.norm().max(f64::MIN_POSITIVE);
        let primal = (&z - &z_bar).norm() / z_bar.norm().max(f64::MIN_POSITIVE);
        if change <= cfg.eps_admm && primal <= cfg.eps_admm {
            converged = true;
            break;
        }
    }

    let mut kept_start = false;
    if start_feasible
        && subproblem_objective(gram, wth, lambda, &z_bar) > subproblem_objective(gram, wth, lambda, z_init)
    {
        z_bar = z_init.clone();
        u.fill(0.0);
        kept_start = true;
    }

    Ok(AdmmWorkspace {
        z,
        z_bar,
        dual: u,
        rho,
        iterations,
        converged,
        kept_start,
    })
}

/// Nonnegative ridge least squares: approximately minimizes
/// `‖W − H Zᵀ‖² + λ‖Z‖²` over `Z ≥ 0` given `HᵀH` and `WᵀH`.
pub fn admm_nonneg_ridge(
    h_gram: &DMatrix<f64>,
    wth: &DMatrix<f64>,
    z_init: &DMatrix<f64>,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<DMatrix<f64>> {
    admm_solve(h_gram, wth, z_init, None, lambda, Constraint::Nonnegative, cfg).map(|ws| ws.z_bar)
}

/// Least squares with every row of `Z` on the probability simplex.
pub fn admm_simplex(
    h_gram: &DMatrix<f64>,
    wth: &DMatrix<f64>,
    z_init: &DMatrix<f64>,
    cfg: &SolverConfig,
) -> Result<DMatrix<f64>> {
    admm_solve(h_gram, wth, z_init, None, 0.0, Constraint::Simplex, cfg).map(|ws| ws.z_bar)
}

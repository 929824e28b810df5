//! Alternating least squares for the constrained CP model.
//!
//! Factors are updated in mode order. Modes 0 and 1 are nonnegative with a
//! ridge penalty, the remaining modes are row-stochastic. Each update solves
//! its subproblem by ADMM using the Hadamard product of the other factors'
//! Grams and the sparse MTTKRP along the updated mode, warm-started from the
//! previous outer iterate.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;

use super::admm::{admm_solve, Constraint};
use super::config::SolverConfig;
use super::factors::{mode_constraint, FactorSet};
use super::gram::{gram, khatri_rao_gram};
use super::mttkrp::mttkrp;
use super::objective::{assemble, model_norm_sq};
use super::projection::project_simplex_rows;
use super::trace::{IterationRecord, SolverTrace};
use crate::error::{Error, Result};
use crate::rng::{stream, Stream};
use crate::tensor::EgonetTensor;

/// Random start: nonnegative factors uniform on `[0, 1)`, simplex factors
/// uniform rows projected onto the simplex. Draws are taken mode by mode in
/// row-major order.
pub fn initial_factors(dims: &[usize], rank: usize, seed: u64) -> Vec<DMatrix<f64>> {
    let mut rng = stream(seed, Stream::FactorInit);
    dims.iter()
        .enumerate()
        .map(|(m, &rows)| {
            let mut values = vec![0.0; rows * rank];
            for v in values.iter_mut() {
                *v = rng.random::<f64>();
            }
            let f = DMatrix::from_row_slice(rows, rank, &values);
            match mode_constraint(m) {
                Constraint::Nonnegative => f,
                Constraint::Simplex => project_simplex_rows(&f).expect("rank is at least one"),
            }
        })
        .collect()
}

fn relative_change(new: &DMatrix<f64>, old: &DMatrix<f64>) -> f64 {
    let diff = (new - old).norm();
    if diff == 0.0 {
        0.0
    } else {
        diff / old.norm().max(f64::MIN_POSITIVE)
    }
}

/// Scales `a_k` by `s` and `b_k` by `1/s` with `s = sqrt(‖b_k‖/‖a_k‖)`.
/// Duals follow their factor so warm starts stay consistent.
fn balance_columns(factors: &mut [DMatrix<f64>], duals: &mut [Option<DMatrix<f64>>]) {
    for k in 0..factors[0].ncols() {
        let na = factors[0].column(k).norm();
        let nb = factors[1].column(k).norm();
        if na == 0.0 || nb == 0.0 {
            continue;
        }
        let s = (nb / na).sqrt();
        for (m, scale) in [(0, s), (1, 1.0 / s)] {
            factors[m].column_mut(k).scale_mut(scale);
            if let Some(u) = duals[m].as_mut() {
                u.column_mut(k).scale_mut(scale);
            }
        }
    }
}

fn ridge(factors: &[DMatrix<f64>], lambda: f64) -> f64 {
    lambda * (factors[0].norm_squared() + factors[1].norm_squared())
}

/// Shared driver for 3-way and 4-way tensors.
pub(crate) fn run_als(w: &EgonetTensor, cfg: &SolverConfig) -> Result<(FactorSet, SolverTrace)> {
    cfg.validate()?;
    run_als_from(w, cfg, initial_factors(w.dims(), cfg.rank, cfg.seed))
}

/// Runs the solver from caller-supplied starting factors, one per mode.
pub fn als_decompose_from(
    w: &EgonetTensor,
    cfg: &SolverConfig,
    start: Vec<DMatrix<f64>>,
) -> Result<(FactorSet, SolverTrace)> {
    cfg.validate()?;
    if start.len() != w.order() {
        return Err(Error::ShapeMismatch(format!(
            "{} starting factors for a tensor of order {}",
            start.len(),
            w.order()
        )));
    }
    for (m, f) in start.iter().enumerate() {
        if f.shape() != (w.dims()[m], cfg.rank) {
            return Err(Error::ShapeMismatch(format!(
                "starting factor {m} is {:?}, expected ({}, {})",
                f.shape(),
                w.dims()[m],
                cfg.rank
            )));
        }
    }
    run_als_from(w, cfg, start)
}

fn run_als_from(w: &EgonetTensor, cfg: &SolverConfig, mut factors: Vec<DMatrix<f64>>) -> Result<(FactorSet, SolverTrace)> {
    let order = w.order();
    let rank = cfg.rank;
    if rank > w.n_nodes() {
        log::warn!(
            "rank {rank} exceeds the number of nodes {}; extra components will stay unused",
            w.n_nodes()
        );
    }

    let start = Instant::now();
    let norm_sq = w.norm_sq();
    let mut grams: Vec<DMatrix<f64>> = factors.iter().map(gram).collect();
    let mut duals: Vec<Option<DMatrix<f64>>> = vec![None; order];
    let mut trace = SolverTrace::default();
    let divergence_bound = 1e6 * (1.0 + norm_sq.sqrt());
    let mut warned = false;

    for iteration in 1..=cfg.max_outer {
        let mut changes = Vec::with_capacity(order);
        let mut last_mttkrp = None;
        for mode in 0..order {
            let other_grams: Vec<&DMatrix<f64>> = grams
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != mode)
                .map(|(_, g)| g)
                .collect();
            let h_gram = khatri_rao_gram(&other_grams)?;
            let refs: Vec<&DMatrix<f64>> = factors.iter().collect();
            let wth = mttkrp(w, &refs, mode)?;

            let constraint = mode_constraint(mode);
            let lambda = match constraint {
                Constraint::Nonnegative => cfg.lambda,
                Constraint::Simplex => 0.0,
            };
            let warm = if cfg.warm_duals { duals[mode].as_ref() } else { None };
            let ws = admm_solve(&h_gram, &wth, &factors[mode], warm, lambda, constraint, cfg)?;

            changes.push(relative_change(&ws.z_bar, &factors[mode]));
            factors[mode] = ws.z_bar;
            grams[mode] = gram(&factors[mode]);
            duals[mode] = Some(ws.dual);
            if mode == order - 1 {
                last_mttkrp = Some(wth);
            }
        }

        if cfg.balance {
            balance_columns(&mut factors, &mut duals);
            grams[0] = gram(&factors[0]);
            grams[1] = gram(&factors[1]);
        }

        // Balancing leaves every product a_k ∘ b_k intact, so the inner
        // product below is unaffected by it.
        // The last MTTKRP was formed with every other factor at its new
        // value, so its inner product with the last factor is ⟨W, model⟩.
        let inner = last_mttkrp
            .expect("order is at least three")
            .component_mul(&factors[order - 1])
            .sum();
        let objective = assemble(norm_sq, inner, model_norm_sq(&grams)?, ridge(&factors, cfg.lambda))
            .map_err(|e| match e {
                Error::NonFinite(msg) => Error::NonFinite(format!("outer iteration {iteration}: {msg}")),
                other => other,
            })?;

        if !warned {
            let largest = factors.iter().map(|f| f.norm()).fold(0.0, f64::max);
            if largest > divergence_bound {
                log::warn!("factor norm {largest:e} at iteration {iteration}; iterates may be unbounded");
                warned = true;
            }
        }

        let done = changes.iter().all(|&c| c <= cfg.eps_outer);
        trace.records.push(IterationRecord {
            iteration,
            objective,
            factor_changes: changes,
            seconds: start.elapsed().as_secs_f64(),
        });
        if done {
            trace.converged = true;
            break;
        }
    }

    Ok((FactorSet::new(factors)?, trace))
}

/// Constrained CP decomposition of a 3-way egonet tensor.
pub fn als_decompose(w: &EgonetTensor, cfg: &SolverConfig) -> Result<(FactorSet, SolverTrace)> {
    if w.order() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "expected a 3-way tensor, got order {}",
            w.order()
        )));
    }
    run_als(w, cfg)
}

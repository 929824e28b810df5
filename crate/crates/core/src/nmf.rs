//! Matrix factorization baseline: `W ≈ U Vᵀ` with row-stochastic `U` and
//! nonnegative `V`, fitted by the same ADMM sub-solvers as the tensor model.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;

use crate::decomp::{
    admm_solve, assemble, gram, project_simplex_rows, Constraint, IterationRecord, SolverConfig, SolverTrace,
};
use crate::error::Result;
use crate::graph::Graph;
use crate::rng::{stream, Stream};

#[derive(Debug, Clone, PartialEq)]
pub struct NmfFactors {
    /// Soft memberships, one simplex row per node.
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

/// `W X` for the adjacency `W`, plus `X` itself when self-loops are on.
fn adjacency_times(g: &Graph, self_loops: bool, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = if self_loops { x.clone() } else { DMatrix::zeros(x.nrows(), x.ncols()) };
    for n in 0..g.n_nodes() {
        for (&j, &w) in g.neighbors(n).iter().zip(g.neighbor_weights(n)) {
            for k in 0..x.ncols() {
                out[(n, k)] += w * x[(j, k)];
            }
        }
    }
    out
}

fn adjacency_norm_sq(g: &Graph, self_loops: bool) -> f64 {
    let off: f64 = g.edges().map(|(_, _, w)| 2.0 * w * w).sum();
    off + if self_loops { g.n_nodes() as f64 } else { 0.0 }
}

fn initial_pair(n: usize, rank: usize, seed: u64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = stream(seed, Stream::FactorInit);
    let mut draw = |rows: usize| {
        let values: Vec<f64> = (0..rows * rank).map(|_| rng.random::<f64>()).collect();
        DMatrix::from_row_slice(rows, rank, &values)
    };
    let u = project_simplex_rows(&draw(n)).expect("rank is at least one");
    let v = draw(n);
    (u, v)
}

fn relative_change(new: &DMatrix<f64>, old: &DMatrix<f64>) -> f64 {
    let diff = (new - old).norm();
    if diff == 0.0 {
        0.0
    } else {
        diff / old.norm().max(f64::MIN_POSITIVE)
    }
}

/// Alternates a simplex-constrained update of `U` (Gram `VᵀV`, cross term
/// `W V`) with a nonnegative update of `V` (Gram `UᵀU`, cross term `W U`,
/// ridge `cfg.lambda`). The trace records `‖W − U Vᵀ‖² + λ‖V‖²`.
pub fn nmf_decompose(g: &Graph, self_loops: bool, cfg: &SolverConfig) -> Result<(NmfFactors, SolverTrace)> {
    cfg.validate()?;
    let start = Instant::now();
    let norm_sq = adjacency_norm_sq(g, self_loops);
    let (mut u, mut v) = initial_pair(g.n_nodes(), cfg.rank, cfg.seed);
    let mut dual_u: Option<DMatrix<f64>> = None;
    let mut dual_v: Option<DMatrix<f64>> = None;
    let mut trace = SolverTrace::default();

    for iteration in 1..=cfg.max_outer {
        let wv = adjacency_times(g, self_loops, &v);
        let warm = if cfg.warm_duals { dual_u.as_ref() } else { None };
        let ws = admm_solve(&gram(&v), &wv, &u, warm, 0.0, Constraint::Simplex, cfg)?;
        let du = relative_change(&ws.z_bar, &u);
        u = ws.z_bar;
        dual_u = Some(ws.dual);

        let wu = adjacency_times(g, self_loops, &u);
        let gu = gram(&u);
        let warm = if cfg.warm_duals { dual_v.as_ref() } else { None };
        let ws = admm_solve(&gu, &wu, &v, warm, cfg.lambda, Constraint::Nonnegative, cfg)?;
        let dv = relative_change(&ws.z_bar, &v);
        v = ws.z_bar;
        dual_v = Some(ws.dual);

        let inner = wu.component_mul(&v).sum();
        let model_sq = gu.component_mul(&gram(&v)).sum();
        let objective = assemble(norm_sq, inner, model_sq, cfg.lambda * v.norm_squared())?;
        let done = du <= cfg.eps_outer && dv <= cfg.eps_outer;
        trace.records.push(IterationRecord {
            iteration,
            objective,
            factor_changes: vec![du, dv],
            seconds: start.elapsed().as_secs_f64(),
        });
        if done {
            trace.converged = true;
            break;
        }
    }
    Ok((NmfFactors { u, v }, trace))
}

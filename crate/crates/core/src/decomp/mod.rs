//! Constrained CP decomposition by alternating least squares with ADMM
//! sub-solvers.

mod admm;
mod als;
mod config;
mod factors;
mod gram;
mod mttkrp;
mod objective;
mod projection;
mod trace;

pub use admm::{admm_nonneg_ridge, admm_simplex, admm_solve, subproblem_objective, AdmmWorkspace, Constraint};
pub use als::{als_decompose, als_decompose_from, initial_factors};
pub(crate) use als::run_als;
pub use config::{RhoPolicy, SolverConfig};
pub use factors::{mode_constraint, FactorSet};
pub use gram::{gram, khatri_rao_gram};
pub use mttkrp::mttkrp;
pub use objective::objective;
pub(crate) use objective::assemble;
pub use projection::{project_nonneg, project_simplex, project_simplex_in_place, project_simplex_rows};
pub use trace::{IterationRecord, SolverTrace};

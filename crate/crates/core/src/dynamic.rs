//! Temporal extension: 4-way egonet tensors with a time-slot factor `D`.

use nalgebra::DMatrix;

use crate::decomp::{run_als, FactorSet, SolverConfig, SolverTrace};
use crate::error::{Error, Result};
use crate::tensor::EgonetTensor;

/// Constrained CP decomposition of a 4-way temporal egonet tensor. Updates
/// cycle through `A`, `B`, `C`, `D`; `D` rows are kept on the simplex.
pub fn als_decompose_4way(w: &EgonetTensor, cfg: &SolverConfig) -> Result<(FactorSet, SolverTrace)> {
    if w.order() != 4 {
        return Err(Error::ShapeMismatch(format!(
            "expected a 4-way tensor, got order {}",
            w.order()
        )));
    }
    run_als(w, cfg)
}

fn require_d(f: &FactorSet) -> Result<&DMatrix<f64>> {
    f.d()
        .ok_or_else(|| Error::ShapeMismatch("factor set has no time factor D".into()))
}

/// Association of node `n` to community `k` at time `t`, `d_tk · c_nk`.
/// One `N × K` matrix per time slot.
pub fn temporal_association(f: &FactorSet) -> Result<Vec<DMatrix<f64>>> {
    let d = require_d(f)?;
    let c = f.c();
    Ok((0..d.nrows())
        .map(|t| {
            let mut m = c.clone();
            for (k, mut col) in m.column_iter_mut().enumerate() {
                col *= d[(t, k)];
            }
            m
        })
        .collect())
}

/// Time-`t` memberships: the associations with each row rescaled to sum to
/// one. A node whose associations all vanish at `t` keeps its row of `C`.
pub fn memberships_at(f: &FactorSet, t: usize) -> Result<DMatrix<f64>> {
    let d = require_d(f)?;
    if t >= d.nrows() {
        return Err(Error::InvalidParameter(format!(
            "time slot {t} out of range for {} slots",
            d.nrows()
        )));
    }
    let c = f.c();
    let mut m = c.clone();
    for n in 0..m.nrows() {
        let mut row = m.row_mut(n);
        row.component_mul_assign(&d.row(t));
        let total = row.sum();
        if total > 0.0 {
            row /= total;
        } else {
            row.copy_from(&c.row(n));
        }
    }
    Ok(m)
}

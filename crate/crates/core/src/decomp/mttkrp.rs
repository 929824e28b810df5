//! Sparse matricized-tensor times Khatri-Rao product.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::EgonetTensor;

/// Row-major copy of a factor so that the K entries of a row are contiguous.
pub(crate) fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

pub(crate) fn check_factor_shapes(w: &EgonetTensor, factors: &[&DMatrix<f64>]) -> Result<usize> {
    if factors.len() != w.order() {
        return Err(Error::ShapeMismatch(format!(
            "{} factors supplied for a tensor of order {}",
            factors.len(),
            w.order()
        )));
    }
    let rank = factors[0].ncols();
    for (m, f) in factors.iter().enumerate() {
        if f.nrows() != w.dims()[m] || f.ncols() != rank {
            return Err(Error::ShapeMismatch(format!(
                "factor {m} is {}x{}, expected {}x{rank}",
                f.nrows(),
                f.ncols(),
                w.dims()[m]
            )));
        }
    }
    Ok(rank)
}

/// `W_(mode)ᵀ H` where `H` is the Khatri-Rao product of every factor except
/// the one for `mode`, ordered to match the unfolding in
/// [`EgonetTensor::mode_entries`]. Each stored entry contributes
/// `value · ∏_{l ≠ mode} F_l[coord_l, :]` to row `coord_mode`.
///
/// The factor for `mode` itself is only used for its shape.
pub fn mttkrp(w: &EgonetTensor, factors: &[&DMatrix<f64>], mode: usize) -> Result<DMatrix<f64>> {
    w.check_mode(mode)?;
    let rank = check_factor_shapes(w, factors)?;
    let others: Vec<usize> = (0..w.order()).filter(|&m| m != mode).collect();
    let rows: Vec<Vec<f64>> = others.iter().map(|&m| row_major(factors[m])).collect();

    let out_rows = w.dims()[mode];
    let mut acc = vec![0.0; out_rows * rank];
    let mut prod = vec![0.0; rank];
    for e in w.entries() {
        prod.fill(e.value);
        for (&m, buf) in others.iter().zip(&rows) {
            let r = e.coord(m) * rank;
            for (p, &f) in prod.iter_mut().zip(&buf[r..r + rank]) {
                *p *= f;
            }
        }
        let base = e.coord(mode) * rank;
        for (a, &p) in acc[base..base + rank].iter_mut().zip(&prod) {
            *a += p;
        }
    }
    Ok(DMatrix::from_row_slice(out_rows, rank, &acc))
}

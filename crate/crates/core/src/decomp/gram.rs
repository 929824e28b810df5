//! Gram matrices of Khatri-Rao products without forming the tall product.
//!
//! `(X₁ ⊙ X₂ ⊙ …)ᵀ(X₁ ⊙ X₂ ⊙ …)` equals the Hadamard product of the
//! individual Grams `XᵢᵀXᵢ`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Entrywise product of a list of K×K Gram matrices.
pub fn khatri_rao_gram(grams: &[&DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let first = grams
        .first()
        .ok_or_else(|| Error::ShapeMismatch("at least one Gram matrix is required".into()))?;
    if first.nrows() != first.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "Gram matrices must be square, got {}x{}",
            first.nrows(),
            first.ncols()
        )));
    }
    let mut out = (*first).clone();
    for g in &grams[1..] {
        if g.shape() != first.shape() {
            return Err(Error::ShapeMismatch(format!(
                "Gram shapes differ: {:?} vs {:?}",
                first.shape(),
                g.shape()
            )));
        }
        out.component_mul_assign(g);
    }
    Ok(out)
}

/// `XᵀX`.
pub fn gram(x: &DMatrix<f64>) -> DMatrix<f64> {
    x.tr_mul(x)
}

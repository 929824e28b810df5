use nalgebra::DMatrix;

use super::gram::{gram, khatri_rao_gram};
use super::mttkrp::mttkrp;
use crate::error::{Error, Result};
use crate::tensor::EgonetTensor;

/// Combines the pieces of `‖W − model‖² + λ(‖A‖² + ‖B‖²)` and rejects
/// results that are negative beyond round-off.
pub(crate) fn assemble(norm_sq: f64, inner: f64, model_sq: f64, ridge: f64) -> Result<f64> {
    let value = norm_sq - 2.0 * inner + model_sq + ridge;
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("objective evaluated to {value}")));
    }
    let slack = 1e-9 * norm_sq.max(model_sq).max(1.0);
    if value < -slack {
        return Err(Error::Internal(format!("objective is negative ({value:e})")));
    }
    Ok(value.max(0.0))
}

/// Sum of all entries of the Hadamard product of every factor Gram; equals
/// the squared norm of the CP model.
pub(crate) fn model_norm_sq(grams: &[DMatrix<f64>]) -> Result<f64> {
    let refs: Vec<&DMatrix<f64>> = grams.iter().collect();
    Ok(khatri_rao_gram(&refs)?.sum())
}

/// Regularized CP objective evaluated without densifying: the inner product
/// with the model streams the nonzeros and the model norm comes from the
/// Hadamard product of the factor Grams. Ridge applies to the first two
/// factors.
pub fn objective(w: &EgonetTensor, factors: &[&DMatrix<f64>], lambda: f64) -> Result<f64> {
    let last = w.order() - 1;
    let m = mttkrp(w, factors, last)?;
    let inner = m.component_mul(factors[last]).sum();
    let grams: Vec<DMatrix<f64>> = factors.iter().map(|f| gram(f)).collect();
    let ridge = lambda * (factors[0].norm_squared() + factors[1].norm_squared());
    assemble(w.norm_sq(), inner, model_norm_sq(&grams)?, ridge)
}

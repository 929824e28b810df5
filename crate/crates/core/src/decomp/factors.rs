use nalgebra::DMatrix;

use super::admm::Constraint;
use crate::error::{Error, Result};

/// Factor matrices of a constrained CP model: `A`, `B` nonnegative, `C`
/// (and `D` for temporal models) row-stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSet {
    factors: Vec<DMatrix<f64>>,
}

/// Constraint attached to each mode of the model.
pub fn mode_constraint(mode: usize) -> Constraint {
    if mode < 2 {
        Constraint::Nonnegative
    } else {
        Constraint::Simplex
    }
}

impl FactorSet {
    pub fn new(factors: Vec<DMatrix<f64>>) -> Result<Self> {
        if !(factors.len() == 3 || factors.len() == 4) {
            return Err(Error::ShapeMismatch(format!(
                "a factor set has 3 or 4 factors, got {}",
                factors.len()
            )));
        }
        let rank = factors[0].ncols();
        let n = factors[0].nrows();
        for (m, f) in factors.iter().enumerate() {
            let rows_ok = m == 3 || f.nrows() == n;
            if f.ncols() != rank || !rows_ok {
                return Err(Error::ShapeMismatch(format!(
                    "factor {m} is {}x{}, expected {}x{rank}",
                    f.nrows(),
                    f.ncols(),
                    if m == 3 { f.nrows() } else { n }
                )));
            }
        }
        Ok(FactorSet { factors })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.factors[0]
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.factors[1]
    }

    /// Soft community memberships, one row per node.
    pub fn c(&self) -> &DMatrix<f64> {
        &self.factors[2]
    }

    /// Community presence per time slot, when the model is temporal.
    pub fn d(&self) -> Option<&DMatrix<f64>> {
        self.factors.get(3)
    }

    pub fn rank(&self) -> usize {
        self.factors[0].ncols()
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[DMatrix<f64>] {
        &self.factors
    }

    pub fn into_factors(self) -> Vec<DMatrix<f64>> {
        self.factors
    }

    /// Checks nonnegativity everywhere and row sums of the simplex factors.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        for (m, f) in self.factors.iter().enumerate() {
            if !mode_constraint(m).is_satisfied(f, tol) {
                return Err(Error::Internal(format!("factor {m} violates its constraint")));
            }
        }
        Ok(())
    }
}

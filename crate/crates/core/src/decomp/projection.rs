//! Euclidean projections used by the ADMM splitting.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Entrywise `max(x, 0)`.
pub fn project_nonneg(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.map(|x| x.max(0.0))
}

/// Projects `v` in place onto `{x ≥ 0, Σx = 1}` by the sort-and-threshold
/// method: with `u` sorted descending, the support size is the largest `r`
/// for which `u_r > (Σ_{i≤r} u_i − 1) / r`.
pub fn project_simplex_in_place(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (r, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (r + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    project_simplex_in_place(&mut out);
    out
}

/// Projects every row of `m` onto the probability simplex.
pub fn project_simplex_rows(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.ncols() == 0 {
        return Err(Error::ShapeMismatch("simplex projection needs at least one column".into()));
    }
    let mut out = m.clone();
    let mut row = vec![0.0; m.ncols()];
    for r in 0..m.nrows() {
        for (k, x) in row.iter_mut().enumerate() {
            *x = m[(r, k)];
        }
        project_simplex_in_place(&mut row);
        for (k, &x) in row.iter().enumerate() {
            out[(r, k)] = x;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nonneg_projection() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 0.0, 2.0]);
        assert_eq!(project_nonneg(&m), DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]));
        let pos = DMatrix::from_row_slice(1, 3, &[0.5, 0.0, 3.0]);
        assert_eq!(project_nonneg(&pos), pos);
        let neg = DMatrix::from_element(2, 2, -0.3);
        assert_eq!(project_nonneg(&neg), DMatrix::zeros(2, 2));
    }

    #[test]
    fn simplex_examples() {
        assert_eq!(project_simplex(&[0.5, 0.5]), vec![0.5, 0.5]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let third = project_simplex(&[0.3, 0.3, 0.3]);
        for x in third {
            assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-15);
        }
        assert_eq!(project_simplex(&[-5.0]), vec![1.0]);
    }

    #[test]
    fn rows_projected_independently() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let p = project_simplex_rows(&m).unwrap();
        assert_eq!(p, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.5, 0.5]));
        assert!(project_simplex_rows(&DMatrix::zeros(3, 0)).is_err());
    }
}

//! Turning soft memberships into community covers.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A set of (possibly overlapping) communities over nodes `0..n_nodes`.
/// Communities are sorted, duplicate-free and never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    n_nodes: usize,
    communities: Vec<Vec<usize>>,
    /// Membership column each community came from, when derived from a
    /// soft membership matrix.
    columns: Option<Vec<usize>>,
    soft: Option<DMatrix<f64>>,
}

impl Cover {
    /// Validates node ids, sorts and dedups each community and drops empty
    /// ones.
    pub fn new(n_nodes: usize, communities: Vec<Vec<usize>>) -> Result<Self> {
        let mut kept = Vec::with_capacity(communities.len());
        for mut members in communities {
            if let Some(&bad) = members.iter().find(|&&v| v >= n_nodes) {
                return Err(Error::InvalidCover(format!(
                    "node {bad} is outside a graph of {n_nodes} nodes"
                )));
            }
            members.sort_unstable();
            members.dedup();
            if !members.is_empty() {
                kept.push(members);
            }
        }
        Ok(Cover {
            n_nodes,
            communities: kept,
            columns: None,
            soft: None,
        })
    }

    /// Builds a partition from one label per node.
    pub fn from_labels(labels: &[usize]) -> Self {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut communities = vec![Vec::new(); k];
        for (node, &label) in labels.iter().enumerate() {
            communities[label].push(node);
        }
        let columns: Vec<usize> = (0..k).filter(|&c| !communities[c].is_empty()).collect();
        let communities = communities.into_iter().filter(|c| !c.is_empty()).collect();
        Cover {
            n_nodes: labels.len(),
            communities,
            columns: Some(columns),
            soft: None,
        }
    }

    fn from_membership(gamma: &[Vec<bool>], n_nodes: usize, k: usize, soft: &DMatrix<f64>) -> Self {
        let mut communities = Vec::new();
        let mut columns = Vec::new();
        for col in 0..k {
            let members: Vec<usize> = (0..n_nodes).filter(|&n| gamma[n][col]).collect();
            if !members.is_empty() {
                communities.push(members);
                columns.push(col);
            }
        }
        Cover {
            n_nodes,
            communities,
            columns: Some(columns),
            soft: Some(soft.clone()),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn communities(&self) -> &[Vec<usize>] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn columns(&self) -> Option<&[usize]> {
        self.columns.as_deref()
    }

    pub fn soft(&self) -> Option<&DMatrix<f64>> {
        self.soft.as_ref()
    }

    /// Number of communities each node belongs to.
    pub fn memberships_per_node(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_nodes];
        for c in &self.communities {
            for &v in c {
                counts[v] += 1;
            }
        }
        counts
    }

    /// No node belongs to two communities.
    pub fn is_disjoint(&self) -> bool {
        self.memberships_per_node().iter().all(|&c| c <= 1)
    }

    /// Community index per node for disjoint covers; `None` for nodes not
    /// covered.
    pub fn labels(&self) -> Result<Vec<Option<usize>>> {
        if !self.is_disjoint() {
            return Err(Error::InvalidCover("cover has overlapping communities".into()));
        }
        let mut labels = vec![None; self.n_nodes];
        for (idx, c) in self.communities.iter().enumerate() {
            for &v in c {
                labels[v] = Some(idx);
            }
        }
        Ok(labels)
    }
}

/// Index of the largest entry in each row; ties go to the lowest index.
pub fn argmax_rows(c: &DMatrix<f64>) -> Vec<usize> {
    c.row_iter()
        .map(|row| {
            let mut best = 0;
            for k in 1..row.len() {
                if row[k] > row[best] {
                    best = k;
                }
            }
            best
        })
        .collect()
}

/// Disjoint cover assigning each node to its strongest community.
pub fn hard_assign(c: &DMatrix<f64>) -> Cover {
    let mut cover = Cover::from_labels(&argmax_rows(c));
    cover.soft = Some(c.clone());
    cover
}

/// What to do with a node none of whose memberships exceeds the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fallback {
    /// Put it in its argmax community.
    #[default]
    Argmax,
    /// Leave it unassigned.
    Strict,
}

/// Overlapping cover: node `n` joins community `k` when `c[n, k] > tau`.
pub fn crisp_cover(c: &DMatrix<f64>, tau: f64, fallback: Fallback) -> Result<Cover> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau must lie in [0, 1), got {tau}")));
    }
    let (n, k) = c.shape();
    let argmax = argmax_rows(c);
    let gamma: Vec<Vec<bool>> = (0..n)
        .map(|row| {
            let mut members: Vec<bool> = (0..k).map(|col| c[(row, col)] > tau).collect();
            if fallback == Fallback::Argmax && k > 0 && !members.iter().any(|&m| m) {
                members[argmax[row]] = true;
            }
            members
        })
        .collect();
    Ok(Cover::from_membership(&gamma, n, k, c))
}

/// Default threshold: membership above an even split over `k` communities.
pub fn default_tau(k: usize) -> f64 {
    1.0 / k as f64
}

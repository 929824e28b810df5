//! Sparse egonet tensors.
//!
//! Slab `n` of the 3-way tensor is the egonet adjacency of node `n`; the
//! 4-way variant stacks one such tensor per time slot along a fourth mode.
//! Entries are kept in coordinate form sorted by `(n, t, i, j)`.
//!
//! Mode unfoldings follow the column-major `vec` convention: the unfolding
//! along mode `m` has one column per index of mode `m`, and its row index is
//! the linear index of the remaining modes with the earliest remaining mode
//! varying fastest. For the 3-way tensor this gives rows `j + N n` (mode 0),
//! `i + N n` (mode 1) and `i + N j` (mode 2), which pair with the
//! Khatri-Rao products `C ⊙ B`, `C ⊙ A` and `B ⊙ A` respectively.

use crate::error::{Error, Result};
use crate::graph::{Graph, TemporalGraph};

/// One stored nonzero. `t` is always 0 for 3-way tensors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorEntry {
    pub i: u32,
    pub j: u32,
    pub n: u32,
    pub t: u32,
    pub value: f64,
}

impl TensorEntry {
    #[inline]
    pub fn coord(&self, mode: usize) -> usize {
        match mode {
            0 => self.i as usize,
            1 => self.j as usize,
            2 => self.n as usize,
            _ => self.t as usize,
        }
    }

    fn sort_key(&self) -> (u32, u32, u32, u32) {
        (self.n, self.t, self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EgonetTensor {
    dims: Vec<usize>,
    entries: Vec<TensorEntry>,
    /// `slab_offsets[n]..slab_offsets[n + 1]` spans the entries of slab `n`.
    slab_offsets: Vec<usize>,
}

impl EgonetTensor {
    /// Builds the 3-way egonet tensor of `g`.
    pub fn from_graph(g: &Graph, self_loops: bool) -> Self {
        let n_nodes = g.n_nodes();
        let mut entries = Vec::new();
        let mut slab_offsets = Vec::with_capacity(n_nodes + 1);
        slab_offsets.push(0);
        for n in 0..n_nodes {
            let members = g
                .closed_neighborhood(n)
                .expect("slab index is within the node range");
            g.egonet_into(&members, self_loops, |i, j, w| {
                entries.push(TensorEntry {
                    i: i as u32,
                    j: j as u32,
                    n: n as u32,
                    t: 0,
                    value: w,
                })
            });
            slab_offsets.push(entries.len());
        }
        EgonetTensor {
            dims: vec![n_nodes; 3],
            entries,
            slab_offsets,
        }
    }

    /// Builds the 4-way tensor whose `t`-th hyper-slab is the egonet tensor
    /// of snapshot `t`.
    pub fn from_temporal(tg: &TemporalGraph, self_loops: bool) -> Self {
        let n_nodes = tg.n_nodes();
        let n_times = tg.n_times();
        let members: Vec<Vec<Vec<usize>>> = tg
            .snapshots()
            .iter()
            .map(|g| {
                (0..n_nodes)
                    .map(|n| g.closed_neighborhood(n).expect("node in range"))
                    .collect()
            })
            .collect();
        let mut entries = Vec::new();
        let mut slab_offsets = Vec::with_capacity(n_nodes + 1);
        slab_offsets.push(0);
        for n in 0..n_nodes {
            for (t, g) in tg.snapshots().iter().enumerate() {
                g.egonet_into(&members[t][n], self_loops, |i, j, w| {
                    entries.push(TensorEntry {
                        i: i as u32,
                        j: j as u32,
                        n: n as u32,
                        t: t as u32,
                        value: w,
                    })
                });
            }
            slab_offsets.push(entries.len());
        }
        EgonetTensor {
            dims: vec![n_nodes, n_nodes, n_nodes, n_times],
            entries,
            slab_offsets,
        }
    }

    /// Generic sparse tensor from coordinates, mostly for testing kernels on
    /// tensors that are not egonet tensors. `dims` must have length 3 or 4
    /// and its leading three sizes must be equal.
    pub fn from_entries(dims: &[usize], mut entries: Vec<TensorEntry>) -> Result<Self> {
        if !(dims.len() == 3 || dims.len() == 4) || dims[0] != dims[1] || dims[1] != dims[2] {
            return Err(Error::ShapeMismatch(format!(
                "expected dims (N, N, N) or (N, N, N, T), got {dims:?}"
            )));
        }
        for e in &entries {
            let t_ok = if dims.len() == 4 {
                (e.t as usize) < dims[3]
            } else {
                e.t == 0
            };
            if (e.i as usize) >= dims[0] || (e.j as usize) >= dims[0] || (e.n as usize) >= dims[0] || !t_ok {
                return Err(Error::ShapeMismatch(format!("entry {e:?} outside dims {dims:?}")));
            }
            if !(e.value.is_finite() && e.value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "entry values must be finite and positive, got {}",
                    e.value
                )));
            }
        }
        entries.sort_by_key(TensorEntry::sort_key);
        if entries.windows(2).any(|w| w[0].sort_key() == w[1].sort_key()) {
            return Err(Error::InvalidParameter("duplicate tensor coordinates".into()));
        }
        let mut slab_offsets = vec![0; dims[0] + 1];
        for e in &entries {
            slab_offsets[e.n as usize + 1] += 1;
        }
        for n in 0..dims[0] {
            slab_offsets[n + 1] += slab_offsets[n];
        }
        Ok(EgonetTensor {
            dims: dims.to_vec(),
            entries,
            slab_offsets,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of modes (3 or 4).
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.dims[0]
    }

    pub fn n_times(&self) -> usize {
        if self.order() == 4 {
            self.dims[3]
        } else {
            1
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[TensorEntry] {
        &self.entries
    }

    /// Entries of frontal slab `n` (all time slots for 4-way tensors).
    pub fn slab(&self, n: usize) -> &[TensorEntry] {
        &self.entries[self.slab_offsets[n]..self.slab_offsets[n + 1]]
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.value * e.value).sum()
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.order() {
            return Err(Error::InvalidMode {
                mode,
                order: self.order(),
            });
        }
        Ok(())
    }

    /// Nonzeros of the mode-`mode` unfolding as `(row, column, value)`, where
    /// the column is the index along `mode` (0-based) and the row is the
    /// column-major linear index of the other modes.
    pub fn mode_entries(&self, mode: usize) -> Result<impl Iterator<Item = (u64, usize, f64)> + '_> {
        self.check_mode(mode)?;
        let others: Vec<usize> = (0..self.order()).filter(|&m| m != mode).collect();
        let mut strides = Vec::with_capacity(others.len());
        let mut stride = 1u64;
        for &m in &others {
            strides.push(stride);
            stride *= self.dims[m] as u64;
        }
        Ok(self.entries.iter().map(move |e| {
            let row = others
                .iter()
                .zip(&strides)
                .map(|(&m, &s)| e.coord(m) as u64 * s)
                .sum();
            (row, e.coord(mode), e.value)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0))).unwrap().0
    }

    fn k3() -> Graph {
        graph(3, &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn k3_has_eighteen_entries() {
        let w = EgonetTensor::from_graph(&k3(), false);
        assert_eq!(w.nnz(), 18);
        for n in 0..3 {
            assert_eq!(w.slab(n).len(), 6);
        }
    }

    #[test]
    fn path_nnz() {
        let w = EgonetTensor::from_graph(&graph(3, &[(0, 1), (1, 2)]), false);
        assert_eq!(w.nnz(), 8);
        assert_eq!(w.slab(0).len(), 2);
        assert_eq!(w.slab(1).len(), 4);
        assert_eq!(w.slab(2).len(), 2);
    }

    #[test]
    fn edgeless_graph() {
        let g = Graph::empty(4);
        assert_eq!(EgonetTensor::from_graph(&g, false).nnz(), 0);
        let w = EgonetTensor::from_graph(&g, true);
        assert_eq!(w.nnz(), 4);
        for (n, e) in w.entries().iter().enumerate() {
            assert_eq!((e.i as usize, e.j as usize, e.n as usize, e.value), (n, n, n, 1.0));
        }
    }

    #[test]
    fn entries_sorted_and_symmetric() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]);
        for self_loops in [false, true] {
            let w = EgonetTensor::from_graph(&g, self_loops);
            assert!(w.entries().windows(2).all(|p| p[0].sort_key() < p[1].sort_key()));
            for e in w.entries() {
                let mirrored = w
                    .entries()
                    .iter()
                    .any(|f| f.i == e.j && f.j == e.i && f.n == e.n && f.value == e.value);
                assert!(mirrored);
            }
        }
    }

    fn temporal(snapshots: Vec<Graph>) -> TemporalGraph {
        TemporalGraph::new(snapshots).unwrap()
    }

    #[test]
    fn temporal_single_slot_matches_static() {
        let g = k3();
        let static_w = EgonetTensor::from_graph(&g, true);
        let w4 = EgonetTensor::from_temporal(&temporal(vec![g]), true);
        assert_eq!(w4.order(), 4);
        assert_eq!(w4.dims(), &[3, 3, 3, 1]);
        assert_eq!(w4.entries(), static_w.entries());
    }

    #[test]
    fn temporal_stacking_counts() {
        let w = EgonetTensor::from_temporal(&temporal(vec![k3(), k3()]), false);
        assert_eq!(w.nnz(), 36);
        assert_eq!(w.entries().iter().filter(|e| e.t == 1).count(), 18);

        let w = EgonetTensor::from_temporal(&temporal(vec![k3(), Graph::empty(3)]), false);
        assert_eq!(w.nnz(), 18);
        assert!(w.entries().iter().all(|e| e.t == 0));
    }

    #[test]
    fn single_entry_mode_two() {
        let w = EgonetTensor::from_entries(
            &[3, 3, 3],
            vec![TensorEntry {
                i: 2,
                j: 1,
                n: 0,
                t: 0,
                value: 5.0,
            }],
        )
        .unwrap();
        let got: Vec<_> = w.mode_entries(2).unwrap().collect();
        assert_eq!(got, vec![(2 + 3, 0, 5.0)]);
    }

    #[test]
    fn mode_entries_counts_and_errors() {
        let w = EgonetTensor::from_graph(&k3(), false);
        for mode in 0..3 {
            assert_eq!(w.mode_entries(mode).unwrap().count(), 18);
        }
        assert!(matches!(w.mode_entries(3), Err(Error::InvalidMode { mode: 3, order: 3 })));
        let empty = EgonetTensor::from_graph(&Graph::empty(2), false);
        for mode in 0..3 {
            assert_eq!(empty.mode_entries(mode).unwrap().count(), 0);
        }
    }

    #[test]
    fn from_entries_validation() {
        let e = TensorEntry {
            i: 0,
            j: 0,
            n: 0,
            t: 0,
            value: 1.0,
        };
        assert!(EgonetTensor::from_entries(&[2, 2, 2], vec![e, e]).is_err());
        assert!(EgonetTensor::from_entries(&[2, 3, 2], vec![e]).is_err());
        assert!(EgonetTensor::from_entries(&[2, 2, 2], vec![TensorEntry { i: 2, ..e }]).is_err());
        assert!(EgonetTensor::from_entries(&[2, 2, 2], vec![TensorEntry { value: 0.0, ..e }]).is_err());
    }
}

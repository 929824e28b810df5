//! Brute-force reference computations used by the integration tests. None
//! of these share code with the library beyond its public data types.
#![allow(dead_code)]

use egoten::graph::Graph;
use egoten::tensor::{EgonetTensor, TensorEntry};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>())
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap().0
}

/// Random sparse tensor with distinct coordinates and positive values.
pub fn random_tensor(rng: &mut ChaCha8Rng, n: usize, t: Option<usize>, density: f64) -> EgonetTensor {
    let times = t.unwrap_or(1);
    let mut entries = Vec::new();
    for tt in 0..times {
        for nn in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rng.random::<f64>() < density {
                        entries.push(TensorEntry {
                            i: i as u32,
                            j: j as u32,
                            n: nn as u32,
                            t: tt as u32,
                            value: 0.1 + rng.random::<f64>(),
                        });
                    }
                }
            }
        }
    }
    let dims: Vec<usize> = match t {
        Some(t) => vec![n, n, n, t],
        None => vec![n, n, n],
    };
    EgonetTensor::from_entries(&dims, entries).unwrap()
}

/// Dense array in row-major `(i, j, n[, t])` order.
pub struct Dense {
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn from_tensor(w: &EgonetTensor) -> Dense {
        let dims = w.dims().to_vec();
        let mut d = Dense { data: vec![0.0; dims.iter().product()], dims };
        for e in w.entries() {
            let idx = [e.i as usize, e.j as usize, e.n as usize, e.t as usize];
            let pos = d.offset(&idx[..d.dims.len()]);
            d.data[pos] += e.value;
        }
        d
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &d in &self.dims {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// `X_(mode) · KR` computed by summing over every dense cell.
pub fn dense_mttkrp(x: &Dense, factors: &[&DMatrix<f64>], mode: usize) -> DMatrix<f64> {
    let k = factors[0].ncols();
    let mut out = DMatrix::zeros(x.dims[mode], k);
    for idx in x.indices() {
        let v = x.data[x.offset(&idx)];
        if v == 0.0 {
            continue;
        }
        for r in 0..k {
            let mut p = v;
            for (m, f) in factors.iter().enumerate() {
                if m != mode {
                    p *= f[(idx[m], r)];
                }
            }
            out[(idx[mode], r)] += p;
        }
    }
    out
}

/// Explicit Khatri-Rao product: column `k` is `x_k ⊗ y_k`, so row
/// `a * rows(y) + b` holds `x[a, k] * y[b, k]`.
pub fn khatri_rao(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(x.nrows() * y.nrows(), x.ncols(), |row, k| {
        x[(row / y.nrows(), k)] * y[(row % y.nrows(), k)]
    })
}

/// Full CP reconstruction at one index.
pub fn model_at(factors: &[&DMatrix<f64>], idx: &[usize]) -> f64 {
    (0..factors[0].ncols())
        .map(|r| factors.iter().zip(idx).map(|(f, &i)| f[(i, r)]).product::<f64>())
        .sum()
}

/// `‖W − model‖² + λ(‖A‖² + ‖B‖²)` over the dense array.
pub fn dense_objective(x: &Dense, factors: &[&DMatrix<f64>], lambda: f64) -> f64 {
    let fit: f64 = x
        .indices()
        .iter()
        .map(|idx| (x.data[x.offset(idx)] - model_at(factors, idx)).powi(2))
        .sum();
    fit + lambda * (factors[0].norm_squared() + factors[1].norm_squared())
}

/// Every egonet entry by definition: `(i, j)` with both endpoints in the
/// closed neighborhood of `n` and adjacent (or `i == j` with self-loops).
pub fn brute_egonet(g: &Graph, self_loops: bool) -> Vec<(usize, usize, usize)> {
    let n = g.n_nodes();
    let adjacent = |u: usize, v: usize| g.weight(u, v) > 0.0;
    let mut out = Vec::new();
    for c in 0..n {
        let member = |v: usize| v == c || adjacent(c, v);
        for i in 0..n {
            for j in 0..n {
                if member(i) && member(j) && (adjacent(i, j) || (self_loops && i == j)) {
                    out.push((i, j, c));
                }
            }
        }
    }
    out
}

/// Euclidean projection onto the simplex by trying every support set and
/// keeping the closest feasible candidate.
pub fn simplex_by_subsets(v: &[f64]) -> Vec<f64> {
    let d = v.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u64..(1 << d) {
        let members: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
        let theta = (members.iter().map(|&i| v[i]).sum::<f64>() - 1.0) / members.len() as f64;
        if members.iter().any(|&i| v[i] - theta < 0.0) {
            continue;
        }
        let mut x = vec![0.0; d];
        for &i in &members {
            x[i] = v[i] - theta;
        }
        let dist: f64 = x.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum();
        if best.as_ref().is_none_or(|b| dist < b.0) {
            best = Some((dist, x));
        }
    }
    best.unwrap().1
}

/// Simplex projection by bisection on the threshold, then an exact
/// threshold from the support the bisection identifies.
pub fn simplex_by_bisection(v: &[f64]) -> Vec<f64> {
    let excess = |theta: f64| v.iter().map(|x| (x - theta).max(0.0)).sum::<f64>() - 1.0;
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let approx = 0.5 * (lo + hi);
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] > approx).collect();
    let theta = (support.iter().map(|&i| v[i]).sum::<f64>() - 1.0) / support.len() as f64;
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Projected gradient on `½‖·‖`-scaled subproblem
/// `tr(Z G Zᵀ) − 2 tr(Zᵀ M) + λ‖Z‖²`, step `1/L`.
pub fn projected_gradient(
    gram: &DMatrix<f64>,
    m: &DMatrix<f64>,
    lambda: f64,
    simplex: bool,
    iterations: usize,
) -> DMatrix<f64> {
    let k = gram.nrows();
    let mut h = gram.clone();
    for d in 0..k {
        h[(d, d)] += lambda;
    }
    let lipschitz = h.symmetric_eigenvalues().max().max(1e-12);
    let project = |z: DMatrix<f64>| -> DMatrix<f64> {
        if simplex {
            let mut out = z.clone();
            for r in 0..z.nrows() {
                let row: Vec<f64> = z.row(r).iter().copied().collect();
                for (c, x) in simplex_by_bisection(&row).into_iter().enumerate() {
                    out[(r, c)] = x;
                }
            }
            out
        } else {
            z.map(|x| x.max(0.0))
        }
    };
    let mut z = project(DMatrix::from_element(m.nrows(), k, 1.0 / k as f64));
    for _ in 0..iterations {
        let grad = &z * &h - m;
        z = project(&z - grad / lipschitz);
    }
    z
}

/// Overlapping NMI from explicit per-node membership vectors, probabilities
/// estimated by counting nodes.
pub fn onmi_reference(x: &[Vec<usize>], y: &[Vec<usize>], n: usize) -> f64 {
    let indicator = |c: &Vec<usize>| -> Vec<bool> { (0..n).map(|v| c.contains(&v)).collect() };
    let xs: Vec<Vec<bool>> = x.iter().map(indicator).collect();
    let ys: Vec<Vec<bool>> = y.iter().map(indicator).collect();
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    let marginal = |c: &[bool]| {
        let p = c.iter().filter(|&&b| b).count() as f64 / n as f64;
        h(p) + h(1.0 - p)
    };
    let cond = |a: &[bool], b: &[bool]| -> Option<f64> {
        let mut counts = [[0usize; 2]; 2];
        for v in 0..n {
            counts[a[v] as usize][b[v] as usize] += 1;
        }
        let p = |i: usize, j: usize| counts[i][j] as f64 / n as f64;
        if h(p(1, 1)) + h(p(0, 0)) < h(p(0, 1)) + h(p(1, 0)) {
            return None;
        }
        let joint = h(p(0, 0)) + h(p(0, 1)) + h(p(1, 0)) + h(p(1, 1));
        Some(joint - marginal(b))
    };
    let total_cond = |a: &[Vec<bool>], b: &[Vec<bool>]| -> f64 {
        a.iter()
            .map(|ak| b.iter().filter_map(|bl| cond(ak, bl)).fold(marginal(ak), f64::min))
            .sum()
    };
    let hx: f64 = xs.iter().map(|c| marginal(c)).sum();
    let hy: f64 = ys.iter().map(|c| marginal(c)).sum();
    if hx.max(hy) == 0.0 {
        return if x == y { 1.0 } else { 0.0 };
    }
    let mi = 0.5 * (hx - total_cond(&xs, &ys) + hy - total_cond(&ys, &xs));
    mi / hx.max(hy)
}

/// Three disjoint cliques of the given sizes.
pub fn cliques(sizes: &[usize]) -> Graph {
    let mut edges = Vec::new();
    let mut offset = 0;
    for &s in sizes {
        for i in 0..s {
            for j in i + 1..s {
                edges.push((offset + i, offset + j, 1.0));
            }
        }
        offset += s;
    }
    Graph::from_edges(offset, edges).unwrap().0
}

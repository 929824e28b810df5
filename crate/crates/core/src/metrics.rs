//! Cover quality scores: NMI for partitions and overlapping covers, average
//! F1, conductance and the coverage curve.
//!
//! Entropies use the natural log.

use crate::assignment::Cover;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn same_size(truth: &Cover, pred: &Cover) -> Result<usize> {
    if truth.n_nodes() != pred.n_nodes() {
        return Err(Error::ShapeMismatch(format!(
            "covers are over {} and {} nodes",
            truth.n_nodes(),
            pred.n_nodes()
        )));
    }
    Ok(truth.n_nodes())
}

fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Cluster sizes of a disjoint cover; uncovered nodes form one extra
/// cluster so the sizes always sum to `N`.
fn partition_blocks(cover: &Cover) -> Result<Vec<Vec<usize>>> {
    if !cover.is_disjoint() {
        return Err(Error::InvalidCover(
            "nmi needs disjoint covers; use overlapping_nmi for overlapping ones".into(),
        ));
    }
    let mut blocks = cover.communities().to_vec();
    let counts = cover.memberships_per_node();
    let rest: Vec<usize> = (0..cover.n_nodes()).filter(|&v| counts[v] == 0).collect();
    if !rest.is_empty() {
        blocks.push(rest);
    }
    Ok(blocks)
}

/// Entropy of a distribution given by counts out of `n`. Counts are summed
/// in sorted order so equal multisets give bitwise-equal entropies.
fn count_entropy(mut counts: Vec<usize>, n: usize) -> f64 {
    counts.sort_unstable();
    let nf = n as f64;
    -counts.iter().map(|&c| xlogx(c as f64 / nf)).sum::<f64>()
}

/// Normalized mutual information `2 I / (H* + Ĥ)` of two partitions.
///
/// Nodes a cover leaves out are pooled into one extra cluster. When both
/// entropies vanish (a single cluster on each side) the partitions are equal
/// and the score is 1.
pub fn nmi(truth: &Cover, pred: &Cover) -> Result<f64> {
    let n = same_size(truth, pred)?;
    if n == 0 {
        return Err(Error::EmptyInput("covers over zero nodes".into()));
    }
    let x = partition_blocks(truth)?;
    let y = partition_blocks(pred)?;
    let hx = count_entropy(x.iter().map(Vec::len).collect(), n);
    let hy = count_entropy(y.iter().map(Vec::len).collect(), n);
    if hx + hy == 0.0 {
        return Ok(1.0);
    }
    let joint: Vec<usize> = x
        .iter()
        .flat_map(|a| y.iter().map(move |b| intersection_len(a, b)))
        .filter(|&c| c > 0)
        .collect();
    let mi = hx + hy - count_entropy(joint, n);
    Ok((2.0 * mi / (hx + hy)).clamp(0.0, 1.0))
}

fn h(count: usize, n: f64) -> f64 {
    -xlogx(count as f64 / n)
}

fn binary_entropy(size: usize, n: usize) -> f64 {
    h(size, n as f64) + h(n - size, n as f64)
}

/// Sum over `x` of the conditional entropy of each community's membership
/// given the best-matching community of `y`. Matches that do not pass the
/// agreement test contribute the unconditional entropy instead.
fn conditional_entropy(x: &[Vec<usize>], y: &[Vec<usize>], n: usize) -> f64 {
    let nf = n as f64;
    x.iter()
        .map(|xk| {
            let hx = binary_entropy(xk.len(), n);
            y.iter()
                .filter_map(|yl| {
                    let both = intersection_len(xk, yl);
                    let only_x = xk.len() - both;
                    let only_y = yl.len() - both;
                    let neither = n - both - only_x - only_y;
                    let agree = h(both, nf) + h(neither, nf);
                    let disagree = h(only_x, nf) + h(only_y, nf);
                    (agree >= disagree).then(|| agree + disagree - binary_entropy(yl.len(), n))
                })
                .fold(hx, f64::min)
        })
        .sum()
}

/// Overlapping NMI in its max-normalized form.
///
/// Each community is a binary membership variable over nodes. The mutual
/// information is `(H(X) − H(X|Y) + H(Y) − H(Y|X)) / 2`, where `H(X|Y)` sums,
/// over communities of `X`, the smallest conditional entropy given any
/// community of `Y` for which joint agreement `h(both) + h(neither)` is at
/// least disagreement `h(only X) + h(only Y)`. The result is divided by
/// `max(H(X), H(Y))`.
pub fn overlapping_nmi(truth: &Cover, pred: &Cover) -> Result<f64> {
    let n = same_size(truth, pred)?;
    if n == 0 {
        return Err(Error::EmptyInput("covers over zero nodes".into()));
    }
    let (x, y) = (truth.communities(), pred.communities());
    let total = |c: &[Vec<usize>]| c.iter().map(|k| binary_entropy(k.len(), n)).sum::<f64>();
    let (hx, hy) = (total(x), total(y));
    let norm = hx.max(hy);
    if norm == 0.0 {
        return Ok(if x == y { 1.0 } else { 0.0 });
    }
    let mi = 0.5 * (hx - conditional_entropy(x, y, n) + hy - conditional_entropy(y, x, n));
    Ok((mi / norm).clamp(0.0, 1.0))
}

/// Averaging direction for [`avg_f1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum F1Mode {
    /// Mean over true communities of their best predicted match.
    #[default]
    OneWay,
    /// Mean of the one-way scores taken in both directions.
    Symmetric,
}

fn f1(a: &[usize], b: &[usize]) -> f64 {
    2.0 * intersection_len(a, b) as f64 / (a.len() + b.len()) as f64
}

fn best_match_mean(from: &[Vec<usize>], to: &[Vec<usize>]) -> f64 {
    let total: f64 = from
        .iter()
        .map(|a| to.iter().map(|b| f1(a, b)).fold(0.0, f64::max))
        .sum();
    total / from.len() as f64
}

/// Average best-match F1 score, `F1(C*, Ĉ) = 2|C* ∩ Ĉ| / (|C*| + |Ĉ|)`.
pub fn avg_f1(truth: &Cover, pred: &Cover, mode: F1Mode) -> Result<f64> {
    same_size(truth, pred)?;
    if pred.is_empty() || truth.is_empty() {
        return Err(Error::InvalidCover("avg_f1 needs non-empty covers".into()));
    }
    let (x, y) = (truth.communities(), pred.communities());
    Ok(match mode {
        F1Mode::OneWay => best_match_mean(x, y),
        F1Mode::Symmetric => 0.5 * (best_match_mean(x, y) + best_match_mean(y, x)),
    })
}

fn membership_mask(g: &Graph, community: &[usize]) -> Result<(Vec<bool>, usize)> {
    let mut mask = vec![false; g.n_nodes()];
    let mut size = 0;
    for &v in community {
        if v >= g.n_nodes() {
            return Err(Error::NodeOutOfRange { id: v, n_nodes: g.n_nodes() });
        }
        if !mask[v] {
            mask[v] = true;
            size += 1;
        }
    }
    Ok((mask, size))
}

/// Cut weight over `min(vol(C), vol(V ∖ C))`. A community with no cut edges
/// and zero volume on one side scores 0.
pub fn conductance(g: &Graph, community: &[usize]) -> Result<f64> {
    let (mask, size) = membership_mask(g, community)?;
    if size == 0 || size == g.n_nodes() {
        return Err(Error::InvalidCover(
            "conductance needs a non-empty proper subset of the nodes".into(),
        ));
    }
    let mut cut = 0.0;
    let mut vol_in = 0.0;
    let mut vol_total = 0.0;
    for u in 0..g.n_nodes() {
        let deg = g.weighted_degree(u);
        vol_total += deg;
        if mask[u] {
            vol_in += deg;
            for (&v, &w) in g.neighbors(u).iter().zip(g.neighbor_weights(u)) {
                if !mask[v] {
                    cut += w;
                }
            }
        }
    }
    let denom = vol_in.min(vol_total - vol_in);
    if denom > 0.0 {
        Ok((cut / denom).clamp(0.0, 1.0))
    } else if cut == 0.0 {
        Ok(0.0)
    } else {
        Err(Error::Internal("positive cut with zero volume".into()))
    }
}

/// `Σ_k (|Ĉ_k| / N) φ(Ĉ_k)` over the communities of `cover`.
pub fn avg_conductance(g: &Graph, cover: &Cover) -> Result<f64> {
    if cover.n_nodes() != g.n_nodes() {
        return Err(Error::ShapeMismatch(format!(
            "cover is over {} nodes, graph has {}",
            cover.n_nodes(),
            g.n_nodes()
        )));
    }
    let n = g.n_nodes() as f64;
    cover
        .communities()
        .iter()
        .map(|c| Ok(c.len() as f64 / n * conductance(g, c)?))
        .sum()
}

/// One sample of the coverage curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePoint {
    pub nu: f64,
    /// Fraction of nodes in some community with conductance below `nu`.
    pub coverage: f64,
}

/// Coverage at each threshold of a sorted grid in `[0, 1]`. A community
/// spanning every node has no cut and is scored as conductance 0 here.
pub fn coverage_curve(g: &Graph, cover: &Cover, grid: &[f64]) -> Result<Vec<CoveragePoint>> {
    if cover.n_nodes() != g.n_nodes() {
        return Err(Error::ShapeMismatch(format!(
            "cover is over {} nodes, graph has {}",
            cover.n_nodes(),
            g.n_nodes()
        )));
    }
    if grid.iter().any(|nu| !(0.0..=1.0).contains(nu)) {
        return Err(Error::InvalidParameter("coverage grid values must lie in [0, 1]".into()));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("coverage grid must be sorted".into()));
    }
    let mut scored: Vec<(f64, &[usize])> = cover
        .communities()
        .iter()
        .map(|c| {
            let phi = if c.len() == g.n_nodes() { 0.0 } else { conductance(g, c)? };
            Ok((phi, c.as_slice()))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));

    let n = g.n_nodes().max(1) as f64;
    let mut covered = vec![false; g.n_nodes()];
    let mut count = 0usize;
    let mut next = 0;
    Ok(grid
        .iter()
        .map(|&nu| {
            while next < scored.len() && scored[next].0 < nu {
                for &v in scored[next].1 {
                    if !covered[v] {
                        covered[v] = true;
                        count += 1;
                    }
                }
                next += 1;
            }
            CoveragePoint { nu, coverage: count as f64 / n }
        })
        .collect())
}

/// Area under the curve with coverage on the horizontal axis and the
/// threshold on the vertical one. The curve is read as a staircase: the
/// coverage reached at `nu` costs `nu`, and coverage never reached costs 1.
pub fn auc(curve: &[CoveragePoint]) -> Result<f64> {
    if curve.is_empty() {
        return Err(Error::EmptyInput("coverage curve has no points".into()));
    }
    let mut area = 0.0;
    let mut reached = 0.0;
    for p in curve {
        if p.coverage > reached {
            area += (p.coverage - reached) * p.nu;
            reached = p.coverage;
        }
    }
    Ok(area + (1.0 - reached).max(0.0))
}

/// Evenly spaced thresholds `0, 1/steps, ..., 1`.
pub fn uniform_grid(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

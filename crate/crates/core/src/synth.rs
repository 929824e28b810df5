//! Planted-community graph generators.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::assignment::Cover;
use crate::error::{Error, Result};
use crate::graph::{Graph, TemporalGraph};
use crate::rng::{stream, Stream};

/// `count` extra nodes that belong to both `communities.0` and
/// `communities.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedNodes {
    pub count: usize,
    pub communities: (usize, usize),
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// Draws every node pair once, in lexicographic order, connecting it with
/// `p_in` when the endpoints share a community and `p_out` otherwise.
fn sample_graph(memberships: &[Vec<usize>], p_in: f64, p_out: f64, rng: &mut ChaCha8Rng) -> Graph {
    let n = memberships.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let shared = memberships[u].iter().any(|c| memberships[v].contains(c));
            let p = if shared { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are valid").0
}

fn cover_from_memberships(memberships: &[Vec<usize>], k: usize) -> Cover {
    let mut communities = vec![Vec::new(); k];
    for (node, ms) in memberships.iter().enumerate() {
        for &c in ms {
            communities[c].push(node);
        }
    }
    Cover::new(memberships.len(), communities).expect("members are in range")
}

/// Stochastic block model with optional two-community overlaps.
///
/// Nodes `0..sizes[0]` form community 0, the next `sizes[1]` community 1 and
/// so on. Shared nodes are appended after all blocks, so the graph has
/// `Σ sizes + Σ count` nodes.
pub fn block_stochastic(
    sizes: &[usize],
    p_in: f64,
    p_out: f64,
    overlap: &[SharedNodes],
    seed: u64,
) -> Result<(Graph, Cover)> {
    check_probability("p_in", p_in)?;
    check_probability("p_out", p_out)?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidParameter("community sizes must be positive".into()));
    }
    let k = sizes.len();
    let mut memberships: Vec<Vec<usize>> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(vec![c], s))
        .collect();
    for shared in overlap {
        let (a, b) = shared.communities;
        if a >= k || b >= k || a == b {
            return Err(Error::InvalidParameter(format!(
                "shared nodes need two distinct communities below {k}, got ({a}, {b})"
            )));
        }
        memberships.extend(std::iter::repeat_n(vec![a, b], shared.count));
    }
    let mut rng = stream(seed, Stream::GraphEdges);
    let g = sample_graph(&memberships, p_in, p_out, &mut rng);
    Ok((g, cover_from_memberships(&memberships, k)))
}

/// Settings for the migration scenario: two blocks at the first snapshot,
/// from which a subset of nodes moves to a third community.
#[derive(Debug, Clone, PartialEq)]
pub struct MigrationParams {
    pub n_times: usize,
    pub sizes: (usize, usize),
    pub migrants: usize,
    pub transition_mean: f64,
    pub transition_std: f64,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

/// Ground truth of a generated migration scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct MigrationTruth {
    /// One cover per snapshot.
    pub covers: Vec<Cover>,
    /// Migrant nodes with their 1-based transition slot.
    pub transitions: Vec<(usize, usize)>,
}

/// Temporal block model in which migrants leave their block for a new
/// community from their transition slot on.
///
/// Migrants are drawn from each block in proportion to its size. Slots come
/// from a normal distribution, rounded and clamped to `[2, T]`; a migrant
/// with slot `τ` is in the new community at snapshots `τ - 1, ..., T - 1`
/// (0-based). Each snapshot's edges are drawn independently.
pub fn temporal_migration(params: &MigrationParams) -> Result<(TemporalGraph, MigrationTruth)> {
    let (n1, n2) = params.sizes;
    let n = n1 + n2;
    let t_len = params.n_times;
    check_probability("p_in", params.p_in)?;
    check_probability("p_out", params.p_out)?;
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter("both initial blocks must be non-empty".into()));
    }
    if t_len < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 snapshots, got {t_len}")));
    }
    if params.migrants > n {
        return Err(Error::InvalidParameter(format!(
            "{} migrants exceed {n} nodes",
            params.migrants
        )));
    }
    if !(params.transition_mean.is_finite() && params.transition_std.is_finite() && params.transition_std >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "transition slots need a finite mean and non-negative std, got N({}, {})",
            params.transition_mean, params.transition_std
        )));
    }
    let slots = Normal::new(params.transition_mean, params.transition_std)
        .map_err(|e| Error::InvalidParameter(format!("transition distribution: {e}")))?;

    let from_first = ((params.migrants as f64 * n1 as f64 / n as f64).round() as usize).min(n1);
    let from_second = params.migrants - from_first;
    if from_second > n2 {
        return Err(Error::InvalidParameter(format!(
            "{from_second} migrants requested from a block of {n2}"
        )));
    }
    let mut pick = stream(params.seed, Stream::Migrants);
    let mut migrants: Vec<usize> = sample(&mut pick, n1, from_first).into_iter().collect();
    migrants.extend(sample(&mut pick, n2, from_second).into_iter().map(|v| v + n1));
    migrants.sort_unstable();

    let mut draw = stream(params.seed, Stream::Transitions);
    let transitions: Vec<(usize, usize)> = migrants
        .iter()
        .map(|&v| {
            let slot = slots.sample(&mut draw).round().clamp(2.0, t_len as f64) as usize;
            (v, slot)
        })
        .collect();

    let mut snapshots = Vec::with_capacity(t_len);
    let mut covers = Vec::with_capacity(t_len);
    let mut labels: Vec<usize> = (0..n).map(|v| usize::from(v >= n1)).collect();
    for t in 0..t_len {
        for &(v, slot) in &transitions {
            if t + 1 >= slot {
                labels[v] = 2;
            }
        }
        let memberships: Vec<Vec<usize>> = labels.iter().map(|&l| vec![l]).collect();
        let mut rng = stream(params.seed, Stream::SnapshotEdges(t as u64));
        snapshots.push(sample_graph(&memberships, params.p_in, params.p_out, &mut rng));
        covers.push(cover_from_memberships(&memberships, 3));
    }
    Ok((TemporalGraph::new(snapshots)?, MigrationTruth { covers, transitions }))
}

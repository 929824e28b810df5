//! Undirected weighted graphs, edge-list ingestion and egonet extraction.

use std::collections::BTreeMap;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Symmetric, nonnegative, loop-free weighted graph in compressed sparse row
/// form. Every neighbor list is sorted ascending without duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n_nodes: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    index_base: u64,
}

/// Counters collected while building a [`Graph`] from raw edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeReport {
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
    pub zero_weight_dropped: usize,
}

impl Graph {
    /// Builds a graph from undirected edges. Later occurrences of an edge
    /// (in either orientation) overwrite earlier ones.
    pub fn from_edges<I>(n_nodes: usize, edges: I) -> Result<(Self, EdgeReport)>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut report = EdgeReport::default();
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            for id in [u, v] {
                if id >= n_nodes {
                    return Err(Error::NodeOutOfRange { id, n_nodes });
                }
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            if u == v {
                report.self_loops_dropped += 1;
                continue;
            }
            let key = (u.min(v), u.max(v));
            if merged.insert(key, w).is_some() {
                report.duplicates_merged += 1;
            }
        }

        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_nodes];
        for (&(u, v), &w) in &merged {
            if w == 0.0 {
                report.zero_weight_dropped += 1;
                continue;
            }
            lists[u].push((v, w));
            lists[v].push((u, w));
        }

        let mut offsets = Vec::with_capacity(n_nodes + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable_by_key(|&(v, _)| v);
            for (v, w) in list {
                neighbors.push(v);
                weights.push(w);
            }
            offsets.push(neighbors.len());
        }

        Ok((
            Graph {
                n_nodes,
                offsets,
                neighbors,
                weights,
                index_base: 0,
            },
            report,
        ))
    }

    /// Edgeless graph on `n_nodes` nodes.
    pub fn empty(n_nodes: usize) -> Self {
        Graph {
            n_nodes,
            offsets: vec![0; n_nodes + 1],
            neighbors: Vec::new(),
            weights: Vec::new(),
            index_base: 0,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of undirected edges.
    pub fn n_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Offset subtracted from file ids to obtain internal ids.
    pub fn index_base(&self) -> u64 {
        self.index_base
    }

    pub fn with_index_base(mut self, base: u64) -> Self {
        self.index_base = base;
        self
    }

    /// Id as it appeared in the source file.
    pub fn original_id(&self, node: usize) -> u64 {
        node as u64 + self.index_base
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn neighbor_weights(&self, node: usize) -> &[f64] {
        &self.weights[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, node: usize) -> f64 {
        self.neighbor_weights(node).iter().sum()
    }

    /// Weight of edge (u, v), or 0 when absent.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        let nbrs = self.neighbors(u);
        match nbrs.binary_search(&v) {
            Ok(pos) => self.neighbor_weights(u)[pos],
            Err(_) => 0.0,
        }
    }

    /// Iterates each undirected edge once as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_nodes).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .zip(self.neighbor_weights(u))
                .filter(move |(&v, _)| v > u)
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    /// Sorted closed neighborhood `{n} ∪ neighbors(n)`.
    pub fn closed_neighborhood(&self, n: usize) -> Result<Vec<usize>> {
        self.check_node(n)?;
        let nbrs = self.neighbors(n);
        let pos = nbrs.partition_point(|&v| v < n);
        let mut members = Vec::with_capacity(nbrs.len() + 1);
        members.extend_from_slice(&nbrs[..pos]);
        members.push(n);
        members.extend_from_slice(&nbrs[pos..]);
        Ok(members)
    }

    /// Nonzero entries `(i, j, w)` of the egonet adjacency of node `n`,
    /// sorted by `(i, j)`. The egonet is the subgraph induced by the closed
    /// neighborhood of `n`; with `self_loops` every member also gets a unit
    /// diagonal entry.
    pub fn egonet(&self, n: usize, self_loops: bool) -> Result<Vec<(usize, usize, f64)>> {
        let members = self.closed_neighborhood(n)?;
        let mut out = Vec::new();
        self.egonet_into(&members, self_loops, |i, j, w| out.push((i, j, w)));
        Ok(out)
    }

    /// Streams egonet entries for an already computed closed neighborhood.
    pub(crate) fn egonet_into<F>(&self, members: &[usize], self_loops: bool, mut emit: F)
    where
        F: FnMut(usize, usize, f64),
    {
        for &i in members {
            let nbrs = self.neighbors(i);
            let wts = self.neighbor_weights(i);
            let mut diag_pending = self_loops;
            let (mut a, mut b) = (0, 0);
            while a < nbrs.len() && b < members.len() {
                let (x, y) = (nbrs[a], members[b]);
                if x < y {
                    a += 1;
                } else if y < x {
                    b += 1;
                } else {
                    if diag_pending && x > i {
                        emit(i, i, 1.0);
                        diag_pending = false;
                    }
                    emit(i, x, wts[a]);
                    a += 1;
                    b += 1;
                }
            }
            if diag_pending {
                emit(i, i, 1.0);
            }
        }
    }

    fn check_node(&self, n: usize) -> Result<()> {
        if n >= self.n_nodes {
            return Err(Error::NodeOutOfRange {
                id: n,
                n_nodes: self.n_nodes,
            });
        }
        Ok(())
    }
}

/// A sequence of graph snapshots over a shared node set.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraph {
    n_nodes: usize,
    snapshots: Vec<Graph>,
}

impl TemporalGraph {
    pub fn new(snapshots: Vec<Graph>) -> Result<Self> {
        let first = snapshots
            .first()
            .ok_or_else(|| Error::EmptyInput("temporal graph needs at least one snapshot".into()))?;
        let n_nodes = first.n_nodes();
        if let Some((t, g)) = snapshots
            .iter()
            .enumerate()
            .find(|(_, g)| g.n_nodes() != n_nodes)
        {
            return Err(Error::ShapeMismatch(format!(
                "snapshot {t} has {} nodes, expected {n_nodes}",
                g.n_nodes()
            )));
        }
        Ok(TemporalGraph { n_nodes, snapshots })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_times(&self) -> usize {
        self.snapshots.len()
    }

    pub fn snapshots(&self) -> &[Graph] {
        &self.snapshots
    }

    pub fn snapshot(&self, t: usize) -> &Graph {
        &self.snapshots[t]
    }

    pub fn index_base(&self) -> u64 {
        self.snapshots[0].index_base()
    }
}

/// Edge-list parsing options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeListOptions {
    /// Smallest node id used in the file (0 or 1 in practice).
    pub index_base: u64,
    /// Read a third column as the edge weight; otherwise weights are 1.
    pub weighted: bool,
    /// Fixed node count; defaults to one past the largest id seen.
    pub n_nodes: Option<usize>,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        EdgeListOptions {
            index_base: 0,
            weighted: false,
            n_nodes: None,
        }
    }
}

/// Counters reported by the edge-list parsers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub lines_read: usize,
    pub edges_read: usize,
    pub edges: EdgeReport,
}

fn parse_id(token: &str, base: u64, line: usize, what: &str) -> Result<usize> {
    let raw: u64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} '{token}' is not a non-negative integer")))?;
    if raw < base {
        return Err(Error::parse(
            line,
            format!("{what} {raw} is below the index base {base}"),
        ));
    }
    Ok((raw - base) as usize)
}

fn parse_weight(token: Option<&str>, weighted: bool, line: usize) -> Result<f64> {
    if !weighted {
        return Ok(1.0);
    }
    let Some(token) = token else {
        return Ok(1.0);
    };
    let w: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("weight '{token}' is not a number")))?;
    if !w.is_finite() || w < 0.0 {
        return Err(Error::parse(line, format!("weight {w} must be finite and non-negative")));
    }
    Ok(w)
}

/// Yields `(line_number, tokens)` for every non-blank, non-comment line.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Vec<String>)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(text) => {
                let trimmed = text.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((
                        idx + 1,
                        trimmed.split_whitespace().map(str::to_owned).collect(),
                    )))
                }
            }
        })
}

fn resolve_node_count(max_id: Option<usize>, explicit: Option<usize>) -> Result<usize> {
    let implied = max_id.map_or(0, |m| m + 1);
    match explicit {
        Some(n) if n < implied => Err(Error::InvalidParameter(format!(
            "node count {n} is smaller than the largest id in the file requires ({implied})"
        ))),
        Some(n) => Ok(n),
        None => Ok(implied),
    }
}

/// Parses a whitespace separated `u v [w]` edge list.
pub fn parse_edge_list<R: BufRead>(reader: R, opts: &EdgeListOptions) -> Result<(Graph, ParseReport)> {
    let mut report = ParseReport::default();
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for item in data_lines(reader) {
        let (line, tokens) = item?;
        report.lines_read += 1;
        if tokens.len() < 2 {
            return Err(Error::parse(line, "expected 'u v [w]'"));
        }
        let u = parse_id(&tokens[0], opts.index_base, line, "node id")?;
        let v = parse_id(&tokens[1], opts.index_base, line, "node id")?;
        let w = parse_weight(tokens.get(2).map(String::as_str), opts.weighted, line)?;
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput("edge list contains no edges".into()));
    }
    report.edges_read = edges.len();
    let n_nodes = resolve_node_count(max_id, opts.n_nodes)?;
    let (graph, edge_report) = Graph::from_edges(n_nodes, edges)?;
    report.edges = edge_report;
    if edge_report.self_loops_dropped > 0 {
        log::warn!("dropped {} self-loop lines", edge_report.self_loops_dropped);
    }
    if edge_report.duplicates_merged > 0 {
        log::info!("merged {} duplicate edges (last weight kept)", edge_report.duplicates_merged);
    }
    Ok((graph.with_index_base(opts.index_base), report))
}

/// Parses a `t u v [w]` temporal edge list with integer slots `t` in
/// `[0, T)`. `n_times` fixes T; otherwise it is one past the largest slot.
pub fn parse_temporal_edge_list<R: BufRead>(
    reader: R,
    opts: &EdgeListOptions,
    n_times: Option<usize>,
) -> Result<(TemporalGraph, ParseReport)> {
    let mut report = ParseReport::default();
    let mut rows = Vec::new();
    let mut max_id: Option<usize> = None;
    let mut max_t: Option<usize> = None;
    for item in data_lines(reader) {
        let (line, tokens) = item?;
        report.lines_read += 1;
        if tokens.len() < 3 {
            return Err(Error::parse(line, "expected 't u v [w]'"));
        }
        let t = parse_id(&tokens[0], 0, line, "time slot")?;
        let u = parse_id(&tokens[1], opts.index_base, line, "node id")?;
        let v = parse_id(&tokens[2], opts.index_base, line, "node id")?;
        let w = parse_weight(tokens.get(3).map(String::as_str), opts.weighted, line)?;
        if let Some(limit) = n_times {
            if t >= limit {
                return Err(Error::parse(line, format!("time slot {t} outside [0, {limit})")));
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        max_t = Some(max_t.map_or(t, |m| m.max(t)));
        rows.push((t, u, v, w));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("temporal edge list contains no edges".into()));
    }
    report.edges_read = rows.len();
    let n_nodes = resolve_node_count(max_id, opts.n_nodes)?;
    let n_times = n_times.unwrap_or_else(|| max_t.map_or(0, |m| m + 1));

    let mut per_slot: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n_times];
    for (t, u, v, w) in rows {
        per_slot[t].push((u, v, w));
    }
    let mut snapshots = Vec::with_capacity(n_times);
    for edges in per_slot {
        let (g, r) = Graph::from_edges(n_nodes, edges)?;
        report.edges.self_loops_dropped += r.self_loops_dropped;
        report.edges.duplicates_merged += r.duplicates_merged;
        report.edges.zero_weight_dropped += r.zero_weight_dropped;
        snapshots.push(g.with_index_base(opts.index_base));
    }
    Ok((TemporalGraph::new(snapshots)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, opts: EdgeListOptions) -> Result<Graph> {
        parse_edge_list(text.as_bytes(), &opts).map(|(g, _)| g)
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap().0
    }

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap().0
    }

    #[test]
    fn parses_unweighted_path() {
        let g = parse("0 1\n1 2", EdgeListOptions::default()).unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(0, 2), 0.0);
    }

    #[test]
    fn one_based_ids_shift_down() {
        let opts = EdgeListOptions {
            index_base: 1,
            ..Default::default()
        };
        let g = parse("1 2\n2 3", opts).unwrap();
        assert_eq!(g, parse("0 1\n1 2", EdgeListOptions::default()).unwrap().with_index_base(1));
        assert_eq!(g.original_id(0), 1);
    }

    #[test]
    fn duplicate_edges_keep_last_weight() {
        let opts = EdgeListOptions {
            weighted: true,
            ..Default::default()
        };
        let (g, report) = parse_edge_list("0 1 2.5\n1 0 3.0".as_bytes(), &opts).unwrap();
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.weight(0, 1), 3.0);
        assert_eq!(g.weight(1, 0), 3.0);
        assert_eq!(report.edges.duplicates_merged, 1);
    }

    #[test]
    fn comments_and_self_loops() {
        let (g, report) =
            parse_edge_list("# header\n0 0\n\n0 1\n".as_bytes(), &EdgeListOptions::default()).unwrap();
        assert_eq!(g.n_edges(), 1);
        assert_eq!(report.edges.self_loops_dropped, 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse("0 1\n0 x\n", EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let weighted = EdgeListOptions {
            weighted: true,
            ..Default::default()
        };
        let err = parse("0 1 1\n# c\n1 2 -1\n", weighted).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let err = parse("0 1\n3\n", EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(
            parse("# nothing\n\n", EdgeListOptions::default()),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn explicit_node_count() {
        let opts = EdgeListOptions {
            n_nodes: Some(6),
            ..Default::default()
        };
        assert_eq!(parse("0 1", opts).unwrap().n_nodes(), 6);
        let small = EdgeListOptions {
            n_nodes: Some(1),
            ..Default::default()
        };
        assert!(parse("0 1", small).is_err());
    }

    #[test]
    fn egonet_of_triangle_is_whole_graph() {
        let ego = triangle().egonet(0, false).unwrap();
        assert_eq!(
            ego,
            vec![
                (0, 1, 1.0),
                (0, 2, 1.0),
                (1, 0, 1.0),
                (1, 2, 1.0),
                (2, 0, 1.0),
                (2, 1, 1.0)
            ]
        );
    }

    #[test]
    fn egonet_of_path_endpoint() {
        let ego = path3().egonet(0, false).unwrap();
        assert_eq!(ego, vec![(0, 1, 1.0), (1, 0, 1.0)]);
    }

    #[test]
    fn egonet_with_self_loops() {
        let ego = path3().egonet(1, true).unwrap();
        assert_eq!(
            ego,
            vec![
                (0, 0, 1.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 1, 1.0),
                (1, 2, 1.0),
                (2, 1, 1.0),
                (2, 2, 1.0)
            ]
        );
    }

    #[test]
    fn egonet_rejects_bad_node() {
        assert!(matches!(
            path3().egonet(3, false),
            Err(Error::NodeOutOfRange { id: 3, n_nodes: 3 })
        ));
    }

    #[test]
    fn temporal_parse() {
        let text = "0 0 1\n0 1 2\n1 0 2\n";
        let (tg, _) = parse_temporal_edge_list(text.as_bytes(), &EdgeListOptions::default(), None).unwrap();
        assert_eq!(tg.n_times(), 2);
        assert_eq!(tg.n_nodes(), 3);
        assert_eq!(tg.snapshot(1).n_edges(), 1);

        let err = parse_temporal_edge_list("0 0 1\nz 1 2\n".as_bytes(), &EdgeListOptions::default(), None)
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_temporal_edge_list(text.as_bytes(), &EdgeListOptions::default(), Some(1)).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn temporal_graph_rejects_mismatched_snapshots() {
        assert!(TemporalGraph::new(vec![Graph::empty(3), Graph::empty(4)]).is_err());
        assert!(TemporalGraph::new(vec![]).is_err());
    }
}

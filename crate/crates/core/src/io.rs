//! Text formats for factors, traces, covers and metric outputs.
//!
//! Reals are written with 17 significant digits so they read back exactly.
//! Node ids in files are the original ids, i.e. internal id plus the
//! graph's index base.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::assignment::Cover;
use crate::decomp::SolverTrace;
use crate::error::{Error, Result};
use crate::graph::{Graph, TemporalGraph};
use crate::metrics::CoveragePoint;

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with header `label,k0,...,k{K-1}` and one row per matrix row, led by
/// `first_id + row`.
pub fn write_matrix_csv<W: Write>(mut out: W, label: &str, first_id: u64, m: &DMatrix<f64>) -> Result<()> {
    let mut header = vec![label.to_owned()];
    header.extend((0..m.ncols()).map(|k| format!("k{k}")));
    writeln!(out, "{}", header.join(","))?;
    for (r, row) in m.row_iter().enumerate() {
        let mut fields = vec![(first_id + r as u64).to_string()];
        fields.extend(row.iter().map(|&x| real(x)));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Reads a file written by [`write_matrix_csv`]. Returns the row ids and the
/// matrix in file order.
pub fn read_matrix_csv<R: BufRead>(reader: R) -> Result<(Vec<u64>, DMatrix<f64>)> {
    let mut lines = reader.lines().enumerate();
    let k = loop {
        match lines.next() {
            None => return Err(Error::EmptyInput("matrix file has no header".into())),
            Some((_, line)) => {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                break line.split(',').count().saturating_sub(1);
            }
        }
    };
    if k == 0 {
        return Err(Error::parse(1, "header names no value columns"));
    }
    let mut ids = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != k + 1 {
            return Err(Error::parse(idx + 1, format!("expected {} fields, got {}", k + 1, fields.len())));
        }
        ids.push(
            fields[0]
                .parse::<u64>()
                .map_err(|_| Error::parse(idx + 1, format!("row id '{}' is not an integer", fields[0])))?,
        );
        for f in &fields[1..] {
            let x: f64 = f
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("'{f}' is not a number")))?;
            values.push(x);
        }
    }
    let rows = ids.len();
    Ok((ids, DMatrix::from_row_slice(rows, k, &values)))
}

/// Trace CSV `iter,objective,<change columns>,seconds`. The seconds column
/// is left empty unless `timing` is set, which keeps reruns byte-identical.
pub fn write_trace_csv<W: Write>(mut out: W, trace: &SolverTrace, change_names: &[&str], timing: bool) -> Result<()> {
    writeln!(out, "iter,objective,{},seconds", change_names.join(","))?;
    for r in &trace.records {
        let mut fields = vec![r.iteration.to_string(), real(r.objective)];
        fields.extend(r.factor_changes.iter().map(|&c| real(c)));
        fields.push(if timing { format!("{:.6}", r.seconds) } else { String::new() });
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// `u v` lines with `u < v`, plus the weight when `weighted` is set.
pub fn write_edge_list<W: Write>(mut out: W, g: &Graph, weighted: bool) -> Result<()> {
    for (u, v, w) in g.edges() {
        let (u, v) = (g.original_id(u), g.original_id(v));
        if weighted {
            writeln!(out, "{u} {v} {}", real(w))?;
        } else {
            writeln!(out, "{u} {v}")?;
        }
    }
    Ok(())
}

/// `t u v` lines, snapshot by snapshot.
pub fn write_temporal_edge_list<W: Write>(mut out: W, tg: &TemporalGraph) -> Result<()> {
    for (t, g) in tg.snapshots().iter().enumerate() {
        for (u, v, _) in g.edges() {
            writeln!(out, "{t} {} {}", g.original_id(u), g.original_id(v))?;
        }
    }
    Ok(())
}

/// One community per line, space-separated original ids.
pub fn write_cover<W: Write>(mut out: W, cover: &Cover, index_base: u64) -> Result<()> {
    for c in cover.communities() {
        let ids: Vec<String> = c.iter().map(|&v| (v as u64 + index_base).to_string()).collect();
        writeln!(out, "{}", ids.join(" "))?;
    }
    Ok(())
}

/// Reads a cover file over `n_nodes` nodes; blank lines are skipped.
pub fn read_cover<R: BufRead>(reader: R, n_nodes: usize, index_base: u64) -> Result<Cover> {
    let mut communities = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let mut members = Vec::new();
        for token in line.split_whitespace() {
            let raw: u64 = token
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("node id '{token}' is not a non-negative integer")))?;
            let id = raw
                .checked_sub(index_base)
                .filter(|&v| (v as usize) < n_nodes)
                .ok_or_else(|| {
                    Error::parse(idx + 1, format!("node id {raw} is outside the graph's {n_nodes} nodes"))
                })?;
            members.push(id as usize);
        }
        if !members.is_empty() {
            communities.push(members);
        }
    }
    Cover::new(n_nodes, communities)
}

/// Long-format associations `t,node,k,value`, zero entries omitted.
pub fn write_association_csv<W: Write>(mut out: W, assoc: &[DMatrix<f64>], index_base: u64) -> Result<()> {
    writeln!(out, "t,node,k,value")?;
    for (t, m) in assoc.iter().enumerate() {
        for n in 0..m.nrows() {
            for k in 0..m.ncols() {
                let x = m[(n, k)];
                if x != 0.0 {
                    writeln!(out, "{t},{},{k},{}", n as u64 + index_base, real(x))?;
                }
            }
        }
    }
    Ok(())
}

pub fn write_coverage_csv<W: Write>(mut out: W, curve: &[CoveragePoint]) -> Result<()> {
    writeln!(out, "nu,coverage")?;
    for p in curve {
        writeln!(out, "{},{}", real(p.nu), real(p.coverage))?;
    }
    Ok(())
}

/// Metric report, one `metric,value` row per entry.
pub fn write_report<W: Write>(mut out: W, rows: &[(String, f64)]) -> Result<()> {
    writeln!(out, "metric,value")?;
    for (name, value) in rows {
        writeln!(out, "{name},{}", real(*value))?;
    }
    Ok(())
}

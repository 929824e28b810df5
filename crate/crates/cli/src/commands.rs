use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use egoten::assignment::{crisp_cover, default_tau, Cover, Fallback};
use egoten::decomp::{als_decompose, SolverTrace};
use egoten::dynamic::{als_decompose_4way, memberships_at, temporal_association};
use egoten::graph::{parse_edge_list, parse_temporal_edge_list, EdgeListOptions, Graph};
use egoten::metrics::{self, F1Mode};
use egoten::nmf::nmf_decompose;
use egoten::synth::{block_stochastic, temporal_migration, MigrationParams, SharedNodes};
use egoten::tensor::EgonetTensor;
use egoten::{io, Error};

use crate::args::{DetectArgs, EvalArgs, GenArgs, GenTemporalArgs, Method};
use crate::error::CliError;
use crate::manifest::{digest, RunSettings};

type Result<T> = std::result::Result<T, CliError>;

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::at(path, e))
}

fn write_file(path: &Path, fill: impl FnOnce(&mut BufWriter<File>) -> egoten::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    fill(&mut out)
        .and_then(|_| out.flush().map_err(Error::from))
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::runtime(format!("{}: {e}", dir.display())))
}

fn edge_options(base: u64, weighted: bool, n_nodes: Option<usize>) -> EdgeListOptions {
    EdgeListOptions { index_base: base, weighted, n_nodes }
}

fn fallback(strict: bool) -> Fallback {
    if strict {
        Fallback::Strict
    } else {
        Fallback::Argmax
    }
}

/// Settings from the manifest when one is given, otherwise from the flags.
fn resolve(command: &str, args: &DetectArgs) -> Result<(RunSettings, Vec<u8>)> {
    let Some(path) = &args.manifest else {
        let input = args.input.as_ref().expect("clap requires --input");
        let bytes = read_bytes(input)?;
        let mut settings = RunSettings::from_args(command, args, &bytes)?;
        if let Ok(full) = fs::canonicalize(input) {
            settings.input = full;
        }
        return Ok((settings, bytes));
    };
    let text = String::from_utf8(read_bytes(path)?)
        .map_err(|_| CliError::usage(format!("{}: manifest is not UTF-8", path.display())))?;
    let settings = RunSettings::from_text(&text, path)?;
    if settings.command != command {
        return Err(CliError::usage(format!(
            "manifest {} was written by '{}', not '{command}'",
            path.display(),
            settings.command
        )));
    }
    let bytes = read_bytes(&settings.input)?;
    if digest(&bytes) != settings.input_sha256 {
        return Err(CliError::usage(format!(
            "{} no longer matches the digest recorded in {}",
            settings.input.display(),
            path.display()
        )));
    }
    Ok((settings, bytes))
}

fn report_trace(trace: &SolverTrace) {
    let obj = trace.final_objective().unwrap_or(f64::NAN);
    if trace.converged {
        log::info!("converged after {} iterations, objective {obj:e}", trace.iterations());
    } else {
        log::warn!("stopped at the iteration cap ({}), objective {obj:e}", trace.iterations());
    }
}

fn write_factor(dir: &Path, name: &str, label: &str, first_id: u64, m: &nalgebra::DMatrix<f64>) -> Result<()> {
    write_file(&dir.join(format!("factor_{name}.csv")), |out| io::write_matrix_csv(out, label, first_id, m))
}

pub fn detect(args: &DetectArgs) -> Result<()> {
    let (s, bytes) = resolve("detect", args)?;
    let (g, _) = parse_edge_list(&bytes[..], &edge_options(s.indexing_base, s.weighted, s.n_nodes))
        .map_err(|e| CliError::at(&s.input, e))?;
    log::info!("{} nodes, {} edges", g.n_nodes(), g.n_edges());
    let dir = &args.output_dir;
    create_dir(dir)?;
    let cfg = s.solver_config();
    let base = s.indexing_base;

    let (membership, trace, names): (nalgebra::DMatrix<f64>, SolverTrace, &[&str]) = match s.method {
        Method::Egoten => {
            let w = EgonetTensor::from_graph(&g, s.self_loops);
            let (f, trace) = als_decompose(&w, &cfg)?;
            for (name, m) in ["A", "B", "C"].iter().zip(f.factors()) {
                write_factor(dir, name, "node", base, m)?;
            }
            (f.c().clone(), trace, &["dA", "dB", "dC"])
        }
        Method::Nmf => {
            let (f, trace) = nmf_decompose(&g, s.self_loops, &cfg)?;
            write_factor(dir, "U", "node", base, &f.u)?;
            write_factor(dir, "V", "node", base, &f.v)?;
            (f.u, trace, &["dU", "dV"])
        }
    };
    report_trace(&trace);
    finish_static(dir, &s, &membership, &trace, names, args.timing)
}

fn finish_static(
    dir: &Path,
    s: &RunSettings,
    membership: &nalgebra::DMatrix<f64>,
    trace: &SolverTrace,
    names: &[&str],
    timing: bool,
) -> Result<()> {
    let base = s.indexing_base;
    write_file(&dir.join("membership.csv"), |out| io::write_matrix_csv(out, "node", base, membership))?;
    let cover = crisp_cover(membership, s.tau, fallback(s.strict_crisp))?;
    write_file(&dir.join("cover.txt"), |out| io::write_cover(out, &cover, base))?;
    write_file(&dir.join("trace.csv"), |out| io::write_trace_csv(out, trace, names, timing))?;
    write_file(&dir.join("manifest.txt"), |out| Ok(out.write_all(s.to_text().as_bytes())?))?;
    log::info!("{} communities written to {}", cover.len(), dir.display());
    Ok(())
}

pub fn detect_temporal(args: &DetectArgs) -> Result<()> {
    let (s, bytes) = resolve("detect-temporal", args)?;
    if s.method != Method::Egoten {
        return Err(CliError::usage("detect-temporal supports only the egoten method"));
    }
    let opts = edge_options(s.indexing_base, s.weighted, s.n_nodes);
    let (tg, _) = parse_temporal_edge_list(&bytes[..], &opts, s.n_times).map_err(|e| CliError::at(&s.input, e))?;
    log::info!("{} nodes over {} time slots", tg.n_nodes(), tg.n_times());
    let dir = &args.output_dir;
    create_dir(dir)?;
    let base = s.indexing_base;

    let w = EgonetTensor::from_temporal(&tg, s.self_loops);
    let (f, trace) = als_decompose_4way(&w, &s.solver_config())?;
    report_trace(&trace);
    for (name, m) in ["A", "B", "C"].iter().zip(f.factors()) {
        write_factor(dir, name, "node", base, m)?;
    }
    let d = f.d().expect("4-way model has D");
    write_factor(dir, "D", "t", 0, d)?;
    let assoc = temporal_association(&f)?;
    write_file(&dir.join("association.csv"), |out| io::write_association_csv(out, &assoc, base))?;
    for t in 0..d.nrows() {
        let cover = crisp_cover(&memberships_at(&f, t)?, s.tau, fallback(s.strict_crisp))?;
        write_file(&dir.join(format!("cover_t{t}.txt")), |out| io::write_cover(out, &cover, base))?;
    }
    finish_static(dir, &s, f.c(), &trace, &["dA", "dB", "dC", "dD"], args.timing)
}

fn read_cover_file(path: &Path, g: &Graph, base: u64) -> Result<Cover> {
    let bytes = read_bytes(path)?;
    io::read_cover(&bytes[..], g.n_nodes(), base).map_err(|e| CliError::at(path, e))
}

fn read_soft(path: &Path, g: &Graph, base: u64) -> Result<nalgebra::DMatrix<f64>> {
    let bytes = read_bytes(path)?;
    let (ids, m) = io::read_matrix_csv(&bytes[..]).map_err(|e| CliError::at(path, e))?;
    let expected: Vec<u64> = (0..g.n_nodes() as u64).map(|v| v + base).collect();
    if ids != expected {
        return Err(CliError::usage(format!(
            "{}: expected one row per node, ids {base}..{} in order",
            path.display(),
            base + g.n_nodes() as u64
        )));
    }
    Ok(m)
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let base = args.indexing_base;
    let bytes = read_bytes(&args.graph)?;
    let (g, _) = parse_edge_list(&bytes[..], &edge_options(base, args.weighted, args.n_nodes))
        .map_err(|e| CliError::at(&args.graph, e))?;
    let truth = args.truth.as_ref().map(|p| read_cover_file(p, &g, base)).transpose()?;
    let mut rows: Vec<(String, f64)> = Vec::new();
    let crisp = fallback(args.strict_crisp);

    let pred = match (&args.cover, &args.soft) {
        (Some(path), _) => read_cover_file(path, &g, base)?,
        (None, Some(path)) => {
            let soft = read_soft(path, &g, base)?;
            match &truth {
                Some(truth) => {
                    let steps = args.tau_steps.max(1);
                    let mut best: Option<(f64, f64, Cover)> = None;
                    for i in 0..steps {
                        let tau = i as f64 / steps as f64;
                        let cover = crisp_cover(&soft, tau, crisp)?;
                        let score = metrics::overlapping_nmi(truth, &cover)?;
                        if best.as_ref().is_none_or(|b| score > b.1) {
                            best = Some((tau, score, cover));
                        }
                    }
                    let (tau, score, cover) = best.expect("at least one tau");
                    rows.push(("best_tau".into(), tau));
                    rows.push(("best_tau_overlapping_nmi".into(), score));
                    cover
                }
                None => {
                    let tau = args.tau.unwrap_or(default_tau(soft.ncols()));
                    rows.push(("tau".into(), tau));
                    crisp_cover(&soft, tau, crisp)?
                }
            }
        }
        (None, None) => unreachable!("clap requires --cover or --soft"),
    };
    rows.push(("communities".into(), pred.len() as f64));

    if let Some(truth) = &truth {
        if truth.is_disjoint() && pred.is_disjoint() {
            rows.push(("nmi".into(), metrics::nmi(truth, &pred)?));
        } else {
            log::info!("covers overlap; reporting overlapping NMI only");
        }
        rows.push(("overlapping_nmi".into(), metrics::overlapping_nmi(truth, &pred)?));
        let mode = if args.f1_symmetric { F1Mode::Symmetric } else { F1Mode::OneWay };
        rows.push(("avg_f1".into(), metrics::avg_f1(truth, &pred, mode)?));
    }
    let avg = metrics::avg_conductance(&g, &pred).unwrap_or_else(|e| {
        log::warn!("average conductance undefined: {e}");
        f64::NAN
    });
    rows.push(("avg_conductance".into(), avg));
    let curve = metrics::coverage_curve(&g, &pred, &metrics::uniform_grid(args.grid_steps))?;
    rows.push(("auc".into(), metrics::auc(&curve)?));

    if let Some(path) = &args.coverage_out {
        write_file(path, |out| io::write_coverage_csv(out, &curve))?;
    }
    match &args.output {
        Some(path) => write_file(path, |out| io::write_report(out, &rows)),
        None => io::write_report(std::io::stdout().lock(), &rows).map_err(CliError::from),
    }
}

fn parse_overlap(spec: &str) -> Result<SharedNodes> {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
    match nums.as_deref() {
        Some(&[count, a, b]) => Ok(SharedNodes { count, communities: (a, b) }),
        _ => Err(CliError::usage(format!("--overlap expects COUNT:A:B, got '{spec}'"))),
    }
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let overlap = args.overlap.iter().map(|s| parse_overlap(s)).collect::<Result<Vec<_>>>()?;
    let (g, truth) = block_stochastic(&args.sizes, args.p_in, args.p_out, &overlap, args.seed)?;
    let g = g.with_index_base(args.indexing_base);
    create_dir(&args.output_dir)?;
    write_file(&args.output_dir.join("graph.txt"), |out| io::write_edge_list(out, &g, false))?;
    write_file(&args.output_dir.join("truth.txt"), |out| io::write_cover(out, &truth, args.indexing_base))?;
    log::info!("{} nodes, {} edges", g.n_nodes(), g.n_edges());
    Ok(())
}

pub fn gen_temporal(args: &GenTemporalArgs) -> Result<()> {
    let &[n1, n2] = args.sizes.as_slice() else {
        return Err(CliError::usage("--sizes takes exactly two block sizes"));
    };
    let params = MigrationParams {
        n_times: args.n_times,
        sizes: (n1, n2),
        migrants: args.migrants,
        transition_mean: args.transition_mean,
        transition_std: args.transition_std,
        p_in: args.p_in,
        p_out: args.p_out,
        seed: args.seed,
    };
    let (tg, truth) = temporal_migration(&params)?;
    let base = args.indexing_base;
    let tg = egoten::graph::TemporalGraph::new(
        tg.snapshots().iter().cloned().map(|g| g.with_index_base(base)).collect(),
    )?;
    let dir: PathBuf = args.output_dir.clone();
    create_dir(&dir)?;
    write_file(&dir.join("temporal.txt"), |out| io::write_temporal_edge_list(out, &tg))?;
    for (t, cover) in truth.covers.iter().enumerate() {
        write_file(&dir.join(format!("truth_t{t}.txt")), |out| io::write_cover(out, cover, base))?;
    }
    write_file(&dir.join("transitions.csv"), |out| {
        writeln!(out, "node,slot")?;
        for (v, slot) in &truth.transitions {
            writeln!(out, "{},{slot}", *v as u64 + base)?;
        }
        Ok(())
    })?;
    log::info!("{} nodes over {} snapshots", tg.n_nodes(), tg.n_times());
    Ok(())
}

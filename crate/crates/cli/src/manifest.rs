//! Resolved run settings and their flat `key=value` manifest form.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use egoten::decomp::{RhoPolicy, SolverConfig};
use sha2::{Digest, Sha256};

use crate::args::{DetectArgs, Method, OnOff};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub command: String,
    pub input: PathBuf,
    pub input_sha256: String,
    pub method: Method,
    pub k: usize,
    pub lambda: f64,
    pub max_iter: usize,
    pub admm_iter: usize,
    pub eps: f64,
    pub admm_eps: f64,
    pub tau: f64,
    pub seed: u64,
    pub self_loops: bool,
    pub indexing_base: u64,
    pub weighted: bool,
    pub n_nodes: Option<usize>,
    pub n_times: Option<usize>,
    pub strict_crisp: bool,
    pub warm_duals: bool,
    pub rho: RhoPolicy,
    pub balance: bool,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Egoten => "egoten",
        Method::Nmf => "nmf",
    }
}

impl RunSettings {
    pub fn from_args(command: &str, args: &DetectArgs, input_bytes: &[u8]) -> Result<Self, CliError> {
        let input = args.input.clone().expect("clap requires --input without --manifest");
        let k = args.k.expect("clap requires --k without --manifest") as usize;
        let default_lambda = match args.method {
            Method::Egoten => SolverConfig::default().lambda,
            Method::Nmf => 0.0,
        };
        let rho = args.rho.parse().map_err(|e: egoten::Error| CliError::usage(e.to_string()))?;
        let settings = RunSettings {
            command: command.to_owned(),
            input,
            input_sha256: digest(input_bytes),
            method: args.method,
            k,
            lambda: args.lambda.unwrap_or(default_lambda),
            max_iter: args.max_iter,
            admm_iter: args.admm_iter,
            eps: args.eps,
            admm_eps: args.admm_eps,
            tau: args.tau.unwrap_or(egoten::assignment::default_tau(k)),
            seed: args.seed,
            self_loops: args.self_loops,
            indexing_base: args.indexing_base,
            weighted: args.weighted,
            n_nodes: args.n_nodes,
            n_times: args.n_times,
            strict_crisp: args.strict_crisp,
            warm_duals: args.warm_duals == OnOff::On,
            rho,
            balance: !args.no_balance,
        };
        settings.solver_config().validate().map_err(CliError::from)?;
        Ok(settings)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            rank: self.k,
            lambda: self.lambda,
            max_outer: self.max_iter,
            max_admm: self.admm_iter,
            eps_outer: self.eps,
            eps_admm: self.admm_eps,
            seed: self.seed,
            rho_policy: self.rho,
            warm_duals: self.warm_duals,
            balance: self.balance,
        }
    }

    pub fn to_text(&self) -> String {
        let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        let rows = [
            ("command", self.command.clone()),
            ("version", env!("CARGO_PKG_VERSION").to_owned()),
            ("input", self.input.display().to_string()),
            ("input_sha256", self.input_sha256.clone()),
            ("method", method_name(self.method).to_owned()),
            ("k", self.k.to_string()),
            ("lambda", format!("{:e}", self.lambda)),
            ("max_iter", self.max_iter.to_string()),
            ("admm_iter", self.admm_iter.to_string()),
            ("eps", format!("{:e}", self.eps)),
            ("admm_eps", format!("{:e}", self.admm_eps)),
            ("tau", format!("{:e}", self.tau)),
            ("seed", self.seed.to_string()),
            ("self_loops", self.self_loops.to_string()),
            ("indexing_base", self.indexing_base.to_string()),
            ("weighted", self.weighted.to_string()),
            ("n_nodes", opt(self.n_nodes)),
            ("n_times", opt(self.n_times)),
            ("strict_crisp", self.strict_crisp.to_string()),
            ("warm_duals", self.warm_duals.to_string()),
            ("rho", self.rho.to_string()),
            ("balance", self.balance.to_string()),
        ];
        rows.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn from_text(text: &str, path: &Path) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::usage(format!("manifest {}: {msg}", path.display()));
        let mut map = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {} is not key=value", idx + 1)))?;
            map.insert(key.trim().to_owned(), value.trim().to_owned());
        }
        let get = |key: &str| map.get(key).cloned().ok_or_else(|| bad(format!("missing key '{key}'")));
        fn parse<T: std::str::FromStr>(key: &str, value: String) -> Result<T, String> {
            value.parse().map_err(|_| format!("bad value '{value}' for '{key}'"))
        }
        let num = |key: &str| -> Result<f64, CliError> { parse(key, get(key)?).map_err(bad) };
        let int = |key: &str| -> Result<usize, CliError> { parse(key, get(key)?).map_err(bad) };
        let flag = |key: &str| -> Result<bool, CliError> { parse(key, get(key)?).map_err(bad) };
        let opt = |key: &str| -> Result<Option<usize>, CliError> {
            let v = get(key)?;
            if v.is_empty() {
                Ok(None)
            } else {
                parse(key, v).map(Some).map_err(bad)
            }
        };
        let method = match get("method")?.as_str() {
            "egoten" => Method::Egoten,
            "nmf" => Method::Nmf,
            other => return Err(bad(format!("unknown method '{other}'"))),
        };
        let rho = get("rho")?.parse().map_err(|e: egoten::Error| bad(e.to_string()))?;
        Ok(RunSettings {
            command: get("command")?,
            input: PathBuf::from(get("input")?),
            input_sha256: get("input_sha256")?,
            method,
            k: int("k")?,
            lambda: num("lambda")?,
            max_iter: int("max_iter")?,
            admm_iter: int("admm_iter")?,
            eps: num("eps")?,
            admm_eps: num("admm_eps")?,
            tau: num("tau")?,
            seed: parse("seed", get("seed")?).map_err(bad)?,
            self_loops: flag("self_loops")?,
            indexing_base: parse("indexing_base", get("indexing_base")?).map_err(bad)?,
            weighted: flag("weighted")?,
            n_nodes: opt("n_nodes")?,
            n_times: opt("n_times")?,
            strict_crisp: flag("strict_crisp")?,
            warm_duals: flag("warm_duals")?,
            rho,
            balance: flag("balance")?,
        })
    }
}

use std::path::{Path, PathBuf};
use std::time::Instant;

use ippmm::solver::{solve_problem, PipelineOptions};
use ippmm::{read_qps_file, SolverConfig};
use rayon::prelude::*;
use thiserror::Error;

use crate::record::BenchRecord;

pub const IPPMM: &str = "ippmm";
pub const NOREG: &str = "noreg";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Comparison {
    Ippmm,
    Noreg,
    Both,
}

impl Comparison {
    pub fn configs(self) -> &'static [&'static str] {
        match self {
            Comparison::Ippmm => &[IPPMM],
            Comparison::Noreg => &[NOREG],
            Comparison::Both => &[IPPMM, NOREG],
        }
    }
}

/// `base` with the proximal terms switched off. Tolerance, iteration limit
/// and everything else are kept.
pub fn noreg_config(base: &SolverConfig) -> SolverConfig {
    SolverConfig { delta0: 0.0, rho0: 0.0, regularize: false, ..base.clone() }
}

fn options_for(name: &str, base: &PipelineOptions) -> PipelineOptions {
    let mut opts = base.clone();
    if name == NOREG {
        opts.config = noreg_config(&base.config);
    }
    opts
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("cannot list {path}: {source}")]
    Dir {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// QPS/MPS files directly inside `dir`, sorted by name.
pub fn problem_files(dir: &Path) -> Result<Vec<PathBuf>, SuiteError> {
    let err = |source| SuiteError::Dir { path: dir.display().to_string(), source };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(err)? {
        let path = entry.map_err(err)?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && matches!(ext.as_deref(), Some("qps" | "mps")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn problem_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Solves one file under the named configuration. Parse and model errors
/// become failed records.
pub fn run_one(path: &Path, config: &str, base: &PipelineOptions) -> BenchRecord {
    let name = problem_name(path);
    let raw = match read_qps_file(path) {
        Ok(raw) => raw,
        Err(e) => return BenchRecord::failed(&name, config, e.to_string()),
    };
    let opts = options_for(config, base);
    let start = Instant::now();
    let out = solve_problem(&raw, &opts);
    let time = start.elapsed().as_secs_f64();
    match out {
        Ok(sol) => BenchRecord {
            problem: name,
            config: config.to_string(),
            status: Some(sol.status),
            error: String::new(),
            iterations: sol.result.iterations,
            time,
            primal_residual: sol.result.residuals.primal,
            dual_residual: sol.result.residuals.dual,
            mu: sol.result.residuals.mu,
            objective: sol.objective,
        },
        Err(e) => BenchRecord::failed(&name, config, e.to_string()),
    }
}

/// Runs every problem in `dir` under the requested configurations, in
/// parallel. Records are ordered by problem name, then configuration.
pub fn run_suite(dir: &Path, base: &PipelineOptions, comparison: Comparison) -> Result<Vec<BenchRecord>, SuiteError> {
    let files = problem_files(dir)?;
    let jobs: Vec<(&PathBuf, &str)> =
        files.iter().flat_map(|f| comparison.configs().iter().map(move |c| (f, *c))).collect();
    let mut records: Vec<BenchRecord> = jobs.par_iter().map(|(f, c)| run_one(f, c, base)).collect();
    records.sort_by(|a, b| (&a.problem, &a.config).cmp(&(&b.problem, &b.config)));
    for r in &records {
        match r.status {
            Some(s) => log::info!("{} [{}]: {s} in {} iterations", r.problem, r.config, r.iterations),
            None => log::warn!("{} [{}]: {}", r.problem, r.config, r.error),
        }
    }
    Ok(records)
}

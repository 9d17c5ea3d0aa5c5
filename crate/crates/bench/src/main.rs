use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ippmm::solver::{solve_problem, write_log_csv, Mode, PipelineOptions};
use ippmm::{read_qps_file, SolverConfig};
use ippmm_bench::{perf_profile, read_records, run_suite, write_profile_csv, write_records, Comparison, Metric};

#[derive(Parser)]
#[command(name = "ippmm", version, about = "Convex QP solver (interior point-proximal method of multipliers)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one QPS/MPS file.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Practical)]
        mode: ModeArg,
        /// Write the per-iteration log as CSV.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Solve every QPS/MPS file in a directory and write one record per
    /// problem and configuration.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Comparison::Both)]
        compare: Comparison,
        /// Output CSV (stdout if omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Performance profiles from a records CSV written by `bench`.
    Profile {
        records: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::Time)]
        metric: Metric,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, env = "IPPMM_TOL", default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    maxit: usize,
    /// Skip the power-of-two row scaling.
    #[arg(long)]
    no_scaling: bool,
}

impl SolverArgs {
    fn options(&self, mode: Mode) -> PipelineOptions {
        let config = SolverConfig { mode, ..SolverConfig::default().with_tol(self.tol).with_maxit(self.maxit) };
        PipelineOptions { config, scaling: !self.no_scaling }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Practical,
    Theory,
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn solve(file: &Path, args: &SolverArgs, mode: ModeArg, log: &Option<PathBuf>) -> ExitCode {
    let raw = match read_qps_file(file) {
        Ok(raw) => raw,
        Err(e) => return fail(e),
    };
    let mode = match mode {
        ModeArg::Practical => Mode::Practical,
        ModeArg::Theory => Mode::Theory,
    };
    let sol = match solve_problem(&raw, &args.options(mode)) {
        Ok(sol) => sol,
        Err(e) => return fail(e),
    };
    let r = &sol.result;
    if let Some(path) = log {
        let written = File::create(path).and_then(|f| write_log_csv(BufWriter::new(f), &r.log));
        if let Err(e) = written {
            return fail(format!("cannot write {}: {e}", path.display()));
        }
    }
    let report = format!(
        "{}\nobjective       {:.10e}\nprimal residual {:.3e}\ndual residual   {:.3e}\nmu              {:.3e}\niterations      {}\n",
        sol.status, sol.objective, r.residuals.primal, r.residuals.dual, r.residuals.mu, r.iterations
    );
    // A closed pipe on stdout must not change the exit code.
    let _ = io::stdout().lock().write_all(report.as_bytes());
    ExitCode::from(sol.status.exit_code() as u8)
}

fn bench(dir: &Path, args: &SolverArgs, compare: Comparison, out: &Option<PathBuf>) -> ExitCode {
    let records = match run_suite(dir, &args.options(Mode::Practical), compare) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let written = output(out).map_err(|e| e.to_string()).and_then(|w| write_records(w, &records).map_err(|e| e.to_string()));
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn profile(records: &Path, metric: Metric, out: &Option<PathBuf>) -> ExitCode {
    let recs = match File::open(records).map_err(|e| e.to_string()).and_then(|f| read_records(f).map_err(|e| e.to_string())) {
        Ok(r) => r,
        Err(e) => return fail(format!("{}: {e}", records.display())),
    };
    let profiles = perf_profile(&recs, metric);
    let written = output(out).map_err(|e| e.to_string()).and_then(|w| write_profile_csv(w, &profiles).map_err(|e| e.to_string()));
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Solve { file, solver, mode, log } => solve(file, solver, *mode, log),
        Command::Bench { dir, solver, compare, out } => bench(dir, solver, *compare, out),
        Command::Profile { records, metric, out } => profile(records, *metric, out),
    }
}

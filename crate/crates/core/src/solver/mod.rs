//! The practical IP-PMM: predictor-corrector steps on the regularized
//! augmented system, with proximal penalties that shrink with the barrier
//! parameter and a divergence-based infeasibility test.

pub mod config;
pub mod pc;
pub mod peu;
pub mod pipeline;
pub mod start;
pub mod state;
pub mod termination;

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::kkt::{assemble, factorize_with, FactorError, Inertia, KktFactorization, PivotRule};
use crate::problem_io::StandardQP;
use crate::theory::TheoryError;

pub use config::{Mode, SolverConfig};
pub use pc::{centering_target, corrector, predictor, step_fraction, Direction};
pub use peu::{update_penalties, ResidualChange};
pub use pipeline::{solve_problem, PipelineError, PipelineOptions, Solution};
pub use start::starting_point;
pub use state::{IterationState, Residuals};
pub use termination::{check_termination, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Infeasible,
    NoConvergence,
    IllConditioned,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Optimal => 0,
            Status::Infeasible => 2,
            Status::NoConvergence => 3,
            Status::IllConditioned => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "Optimal",
            Status::Infeasible => "Infeasible",
            Status::NoConvergence => "NoConvergence",
            Status::IllConditioned => "IllConditioned",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown status `{0}`")]
pub struct ParseStatusError(String);

impl FromStr for Status {
    type Err = ParseStatusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Optimal" => Ok(Status::Optimal),
            "Infeasible" => Ok(Status::Infeasible),
            "NoConvergence" => Ok(Status::NoConvergence),
            "IllConditioned" => Ok(Status::IllConditioned),
            other => Err(ParseStatusError(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// One completed iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    pub k: usize,
    pub mu: f64,
    /// Relative primal residual after the step.
    pub primal_res: f64,
    /// Relative dual residual after the step.
    pub dual_res: f64,
    pub alpha_x: f64,
    pub alpha_z: f64,
    /// Penalties after the update at the end of the iteration.
    pub delta: f64,
    pub rho: f64,
    /// Inertia of the accepted factorization (practical mode only).
    pub inertia: Option<Inertia>,
    /// Factorizations attempted this iteration, counting the accepted one.
    pub factor_attempts: usize,
    /// Relative residuals of the linear solves this iteration (predictor and
    /// corrector in practical mode, the Newton system in theory mode).
    pub solve_residuals: Vec<f64>,
    pub target_mu: f64,
    pub lambda_updated: bool,
    pub zeta_updated: bool,
    pub k_pmm: usize,
    /// `||b - Ax - delta (y - lambda)||` after the update.
    pub reg_primal: f64,
    /// `||c + Qx - A^T y - z + rho (x - zeta)||` after the update.
    pub reg_dual: f64,
    pub y_lambda: f64,
    pub x_zeta: f64,
}

pub const LOG_CSV_HEADER: &str =
    "k,mu,primal_res,dual_res,alpha_x,alpha_z,delta,rho,inertia_pos,inertia_neg,inertia_zero,factor_attempts,max_solve_residual,target_mu,lambda_updated,zeta_updated,k_pmm,reg_primal,reg_dual,y_lambda,x_zeta";

/// Writes the iteration log as CSV with [`LOG_CSV_HEADER`].
pub fn write_log_csv<W: Write>(mut w: W, log: &[IterationLog]) -> io::Result<()> {
    writeln!(w, "{LOG_CSV_HEADER}")?;
    for e in log {
        let (p, n, z) = e.inertia.map_or((String::new(), String::new(), String::new()), |i| {
            (i.positive.to_string(), i.negative.to_string(), i.zero.to_string())
        });
        let worst = e.solve_residuals.iter().copied().fold(0.0, f64::max);
        writeln!(
            w,
            "{},{:e},{:e},{:e},{},{},{:e},{:e},{p},{n},{z},{},{:e},{:e},{},{},{},{:e},{:e},{:e},{:e}",
            e.k,
            e.mu,
            e.primal_res,
            e.dual_res,
            e.alpha_x,
            e.alpha_z,
            e.delta,
            e.rho,
            e.factor_attempts,
            worst,
            e.target_mu,
            e.lambda_updated,
            e.zeta_updated,
            e.k_pmm,
            e.reg_primal,
            e.reg_dual,
            e.y_lambda,
            e.x_zeta
        )?;
    }
    Ok(())
}

/// Residuals at the returned point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinalResiduals {
    /// `||b - A x|| / max(||b||, 1)`
    pub primal: f64,
    /// `||c + Q x - A^T y - z|| / max(||c||, 1)`
    pub dual: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub objective: f64,
    pub residuals: FinalResiduals,
    pub iterations: usize,
    pub log: Vec<IterationLog>,
    /// Regularization floor at exit (it can rise on factorization trouble).
    pub reg_thr: f64,
}

impl SolveResult {
    pub(crate) fn from_point(
        qp: &StandardQP,
        status: Status,
        x: Vec<f64>,
        y: Vec<f64>,
        z: Vec<f64>,
        iterations: usize,
        log: Vec<IterationLog>,
        reg_thr: f64,
    ) -> Self {
        let s = IterationState::new(qp, x, y, z, 0.0, 0.0, 0.0);
        let r = Residuals::compute(qp, &s);
        SolveResult {
            status,
            objective: qp.objective(&s.x),
            residuals: FinalResiduals { primal: r.relative_primal(qp), dual: r.relative_dual(qp), mu: s.mu },
            x: s.x,
            y: s.y,
            z: s.z,
            iterations,
            log,
            reg_thr,
        }
    }
}

/// Solves a standard-form problem. The problem is used as given; scaling
/// and reformulation belong to [`solve_problem`].
pub fn solve(qp: &StandardQP, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    solve_observed(qp, cfg, |_| {})
}

/// Like [`solve`], calling `observer` with the state at the end of every
/// practical-mode iteration (after the penalty update). Theory mode does not
/// call it.
pub fn solve_observed<F>(qp: &StandardQP, cfg: &SolverConfig, mut observer: F) -> Result<SolveResult, SolveError>
where
    F: FnMut(&IterationState),
{
    cfg.validate().map_err(SolveError::Config)?;
    match cfg.mode {
        Mode::Practical => Ok(solve_practical(qp, cfg, &mut observer)),
        Mode::Theory => Ok(crate::theory::solve_with_defaults(qp, cfg.tol)?),
    }
}

fn pivot_rule(s: &IterationState, cfg: &SolverConfig) -> PivotRule {
    if cfg.regularize {
        PivotRule::regularized(s.reg_thr)
    } else {
        PivotRule::unregularized()
    }
}

/// Factorizes at the current iterate, raising the penalties tenfold after
/// each failure (and the floor with them once they sit on it).
fn factorize_escalating(
    qp: &StandardQP,
    s: &mut IterationState,
    cfg: &SolverConfig,
) -> Result<(KktFactorization, usize), FactorError> {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let sys = assemble(qp, &s.x, &s.z, s.rho, s.delta)
            .expect("iterates stay interior and penalties nonnegative");
        match factorize_with(&sys, pivot_rule(s, cfg), cfg.backend) {
            Ok(f) => return Ok((f, attempts)),
            Err(e) => {
                log::debug!("iteration {}: factorization failed ({e}), attempt {attempts}", s.k);
                if attempts >= cfg.max_reg_escalations {
                    return Err(e);
                }
                if s.delta <= s.reg_thr || s.rho <= s.reg_thr {
                    s.reg_thr *= 10.0;
                }
                s.delta *= 10.0;
                s.rho *= 10.0;
            }
        }
    }
}

fn solve_practical(qp: &StandardQP, cfg: &SolverConfig, observer: &mut dyn FnMut(&IterationState)) -> SolveResult {
    let sp = starting_point(qp);
    let (reg_thr, delta0, rho0) = if cfg.regularize {
        let floor = state::regularization_floor(&qp.a, &qp.q, cfg.tol);
        (floor, cfg.delta0.max(floor), cfg.rho0.max(floor))
    } else {
        (0.0, 0.0, 0.0)
    };
    let mut s = IterationState::new(qp, sp.x, sp.y, sp.z, delta0, rho0, reg_thr);
    let mut log = Vec::new();
    let mut res = Residuals::compute(qp, &s);

    let status = loop {
        let measures = termination::TerminationMeasures::from_residuals(qp, &s, &res);
        match termination::decide(&measures, cfg) {
            Termination::Continue => {}
            Termination::Optimal => break Status::Optimal,
            Termination::Infeasible => break Status::Infeasible,
            Termination::NoConvergence => break Status::NoConvergence,
        }

        let (fact, attempts) = match factorize_escalating(qp, &mut s, cfg) {
            Ok(v) => v,
            Err(e) => {
                log::info!("giving up at iteration {}: {e}", s.k);
                break Status::IllConditioned;
            }
        };

        let pred = predictor(&s, qp, &fact);
        if !pred.is_finite() {
            break Status::IllConditioned;
        }
        let ax = pc::step_fraction_on(qp, &s.x, &pred.dx, cfg.tau);
        let az = pc::step_fraction_on(qp, &s.z, &pred.dz, cfg.tau);
        let corr = corrector(&s, qp, &fact, &pred, ax, az);
        let dir = &corr.combined;
        if !dir.is_finite() {
            break Status::IllConditioned;
        }
        let alpha_x = pc::step_fraction_on(qp, &s.x, &dir.dx, cfg.tau);
        let alpha_z = pc::step_fraction_on(qp, &s.z, &dir.dz, cfg.tau);

        for (x, d) in s.x.iter_mut().zip(&dir.dx) {
            *x += alpha_x * d;
        }
        for (y, d) in s.y.iter_mut().zip(&dir.dy) {
            *y += alpha_z * d;
        }
        for (z, d) in s.z.iter_mut().zip(&dir.dz) {
            *z += alpha_z * d;
        }
        let mu_old = s.mu;
        s.refresh_mu(qp);
        s.k += 1;
        s.k_pmm += 1;

        let moved = Residuals::compute(qp, &s);
        let up = update_penalties(
            &mut s,
            mu_old,
            ResidualChange { old: res.primal_norm, new: moved.primal_norm, noise: moved.primal_noise },
            ResidualChange { old: res.dual_norm, new: moved.dual_norm, noise: moved.dual_noise },
        );
        res = Residuals::compute(qp, &s);
        observer(&s);

        log.push(IterationLog {
            k: s.k,
            mu: s.mu,
            primal_res: res.relative_primal(qp),
            dual_res: res.relative_dual(qp),
            alpha_x,
            alpha_z,
            delta: s.delta,
            rho: s.rho,
            inertia: Some(fact.inertia()),
            factor_attempts: attempts,
            solve_residuals: vec![pred.residual, corr.residual],
            target_mu: corr.target_mu,
            lambda_updated: up.lambda_updated,
            zeta_updated: up.zeta_updated,
            k_pmm: s.k_pmm,
            reg_primal: res.reg_primal_norm,
            reg_dual: res.reg_dual_norm,
            y_lambda: res.y_lambda_norm,
            x_zeta: res.x_zeta_norm,
        });
        log::trace!(
            "k={} mu={:.3e} rp={:.3e} rd={:.3e} ax={:.3} az={:.3} delta={:.2e} rho={:.2e}",
            s.k,
            s.mu,
            res.relative_primal(qp),
            res.relative_dual(qp),
            alpha_x,
            alpha_z,
            s.delta,
            s.rho
        );
    };

    let reg_thr = s.reg_thr;
    let iterations = s.k;
    SolveResult::from_point(qp, status, s.x, s.y, s.z, iterations, log, reg_thr)
}

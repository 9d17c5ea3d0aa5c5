//! Reference implementation of the neighbourhood-following IP-PMM with
//! `delta = rho = mu`, on dense data.
//!
//! Every iterate is checked against the neighbourhood
//!
//! ```text
//! A x + mu (y - lambda) = b + (mu/mu0) (b_bar + b~)
//! -Q x + A^T y + z - mu (x - zeta) = c + (mu/mu0) (c_bar + c~)
//! ||(b~, c~)||_2 <= C_N,  ||(b~, c~)||_A <= gamma_A rho0,  x_i z_i >= gamma_mu mu
//! ```
//!
//! which makes the module slow but lets tests observe the convergence
//! guarantees directly.

mod seminorm;

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::problem_io::StandardQP;
use crate::solver::{IterationLog, SolveResult, Status};

pub use seminorm::{semi_norm, SemiNorm};

/// Required relative decrease of `mu` per unit step length.
pub const MU_DECREASE: f64 = 0.01;
/// Backtracking factor of the step-length search.
pub const BACKTRACK: f64 = 0.9;
/// Smallest step length tried.
pub const MIN_ALPHA: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoryError {
    #[error("theory mode needs every variable nonnegative, found {0} free")]
    FreeVariables(usize),
    #[error("invalid parameters: {0}")]
    Params(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryParams {
    pub c_n: f64,
    pub gamma_a: f64,
    pub gamma_mu: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Centering parameter used at every step, clamped to
    /// `[sigma_min, sigma_max]`.
    pub sigma: f64,
    /// Scale of the starting point `x0 = z0 = rho0 e`. Unrelated to the
    /// primal penalty of the practical solver.
    pub rho_start: f64,
    pub b_bar: DVector<f64>,
    pub c_bar: DVector<f64>,
    pub mu0: f64,
}

impl TheoryParams {
    pub fn validate(&self) -> Result<(), TheoryError> {
        let bad = |msg: &str| Err(TheoryError::Params(msg.to_string()));
        if !(self.c_n > 0.0) {
            return bad("C_N must be positive");
        }
        if !(self.gamma_a > 0.0 && self.gamma_a < 1.0) || !(self.gamma_mu > 0.0 && self.gamma_mu < 1.0) {
            return bad("gamma parameters must lie in (0, 1)");
        }
        if !(0.0 < self.sigma_min && self.sigma_min <= self.sigma_max && self.sigma_max <= 0.5) {
            return bad("need 0 < sigma_min <= sigma_max <= 0.5");
        }
        if !(self.rho_start > 0.0 && self.mu0 > 0.0) {
            return bad("starting scale must be positive");
        }
        Ok(())
    }

    pub fn clamp_sigma(&self, sigma: f64) -> f64 {
        sigma.clamp(self.sigma_min, self.sigma_max)
    }
}

/// Dense copy of a standard-form problem with all variables nonnegative,
/// plus its semi-norm evaluator.
#[derive(Debug, Clone)]
pub struct TheoryQp {
    pub a: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    seminorm: SemiNorm,
}

fn to_dense(m: &crate::sparse::CscMatrix) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplets() {
        out[(i, j)] = v;
    }
    out
}

impl TheoryQp {
    pub fn from_standard(qp: &StandardQP) -> Result<Self, TheoryError> {
        let free = qp.free_indices().len();
        if free > 0 {
            return Err(TheoryError::FreeVariables(free));
        }
        Ok(Self::new(to_dense(&qp.a), to_dense(&qp.q), DVector::from_column_slice(&qp.b), DVector::from_column_slice(&qp.c)))
    }

    pub fn new(a: DMatrix<f64>, q: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>) -> Self {
        let seminorm = SemiNorm::new(&a, &q);
        TheoryQp { a, q, b, c, seminorm }
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn semi_norm(&self, b: &DVector<f64>, c: &DVector<f64>) -> f64 {
        self.seminorm.value(b, c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryState {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub z: DVector<f64>,
    pub lambda: DVector<f64>,
    pub zeta: DVector<f64>,
    pub mu: f64,
    pub k: usize,
}

fn average_product(x: &DVector<f64>, z: &DVector<f64>) -> f64 {
    x.dot(z) / x.len() as f64
}

/// `max(10, 1.5 ||(b, c)||_inf)`
pub fn default_rho_start(qp: &TheoryQp) -> f64 {
    let inf = qp.b.amax().max(qp.c.amax());
    (1.5 * inf).max(10.0)
}

/// `x0 = z0 = rho0 e`, `y0 = e`, estimates at the start, and parameters
/// with their defaults (`sigma = 0.3`, `gamma_A = 0.9`, `gamma_mu = 0.1`,
/// `C_N = 1e4 max(1, ||(b_bar, c_bar)||)`).
pub fn theory_starting_point(qp: &TheoryQp, rho_start: f64) -> (TheoryState, TheoryParams) {
    let (m, n) = (qp.m(), qp.n());
    let x = DVector::from_element(n, rho_start);
    let z = DVector::from_element(n, rho_start);
    let y = DVector::from_element(m, 1.0);
    let b_bar = &qp.a * &x - &qp.b;
    let c_bar = -(&qp.q * &x) + qp.a.transpose() * &y + &z - &qp.c;
    let bar_norm = (b_bar.norm_squared() + c_bar.norm_squared()).sqrt();
    let mu0 = average_product(&x, &z);
    let params = TheoryParams {
        c_n: 1e4 * bar_norm.max(1.0),
        gamma_a: 0.9,
        gamma_mu: 0.1,
        sigma_min: 0.1,
        sigma_max: 0.5,
        sigma: 0.3,
        rho_start,
        b_bar,
        c_bar,
        mu0,
    };
    let state = TheoryState { lambda: y.clone(), zeta: x.clone(), x, y, z, mu: mu0, k: 0 };
    (state, params)
}

/// Which neighbourhood conditions hold at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodReport {
    /// Scaled primal infeasibility `b~`.
    pub b_tilde: DVector<f64>,
    /// Scaled dual infeasibility `c~`.
    pub c_tilde: DVector<f64>,
    pub norm2: f64,
    pub semi_norm: f64,
    /// `min_i x_i z_i / mu`
    pub min_ratio: f64,
    pub positive: bool,
    pub within_norm: bool,
    pub within_semi_norm: bool,
    pub central: bool,
}

impl NeighborhoodReport {
    pub fn verdict(&self) -> bool {
        self.positive && self.within_norm && self.within_semi_norm && self.central
    }

    /// Names of the failed conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.positive {
            out.push("positivity");
        }
        if !self.within_norm {
            out.push("norm");
        }
        if !self.within_semi_norm {
            out.push("semi-norm");
        }
        if !self.central {
            out.push("centrality");
        }
        out
    }
}

/// Neighbourhood test of `(x, y, z)` at barrier value `mu` against the
/// estimates `(lambda, zeta)`.
pub fn neighborhood_check_at(
    qp: &TheoryQp,
    params: &TheoryParams,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    lambda: &DVector<f64>,
    zeta: &DVector<f64>,
    mu: f64,
) -> NeighborhoodReport {
    let ratio = mu / params.mu0;
    let rp = &qp.a * x + (y - lambda) * mu - &qp.b - &params.b_bar * ratio;
    let rd = -(&qp.q * x) + qp.a.transpose() * y + z - (x - zeta) * mu - &qp.c - &params.c_bar * ratio;
    let b_tilde = rp / ratio;
    let c_tilde = rd / ratio;
    let norm2 = (b_tilde.norm_squared() + c_tilde.norm_squared()).sqrt();
    let semi = qp.semi_norm(&b_tilde, &c_tilde);
    let positive = x.iter().chain(z.iter()).all(|&v| v > 0.0);
    let min_ratio = x.iter().zip(z.iter()).map(|(a, b)| a * b).fold(f64::INFINITY, f64::min) / mu;
    NeighborhoodReport {
        within_norm: norm2 <= params.c_n,
        within_semi_norm: semi <= params.gamma_a * params.rho_start,
        central: min_ratio >= params.gamma_mu,
        b_tilde,
        c_tilde,
        norm2,
        semi_norm: semi,
        min_ratio,
        positive,
    }
}

pub fn neighborhood_check(s: &TheoryState, params: &TheoryParams, qp: &TheoryQp) -> NeighborhoodReport {
    neighborhood_check_at(qp, params, &s.x, &s.y, &s.z, &s.lambda, &s.zeta, s.mu)
}

/// The perturbed Newton system: matrix and right-hand side.
pub fn newton_system(s: &TheoryState, params: &TheoryParams, qp: &TheoryQp, sigma: f64) -> (DMatrix<f64>, DVector<f64>) {
    let (m, n) = (qp.m(), qp.n());
    let mu = s.mu;
    let dim = 2 * n + m;
    let mut k = DMatrix::zeros(dim, dim);
    k.view_mut((0, 0), (n, n)).copy_from(&(-(&qp.q + DMatrix::identity(n, n) * mu)));
    k.view_mut((0, n), (n, m)).copy_from(&qp.a.transpose());
    k.view_mut((0, n + m), (n, n)).fill_diagonal(1.0);
    k.view_mut((n, 0), (m, n)).copy_from(&qp.a);
    k.view_mut((n, n), (m, m)).fill_diagonal(mu);
    for i in 0..n {
        k[(n + m + i, i)] = s.z[i];
        k[(n + m + i, n + m + i)] = s.x[i];
    }
    let smu = sigma * mu;
    let ratio = smu / params.mu0;
    let f1 = -(&qp.c + &params.c_bar * ratio) - &qp.q * &s.x + qp.a.transpose() * &s.y + &s.z - (&s.x - &s.zeta) * smu;
    let f2 = &qp.a * &s.x + (&s.y - &s.lambda) * smu - (&qp.b + &params.b_bar * ratio);
    let f3 = s.x.component_mul(&s.z).add_scalar(-smu);
    let mut rhs = DVector::zeros(dim);
    rhs.rows_mut(0, n).copy_from(&(-f1));
    rhs.rows_mut(n, m).copy_from(&(-f2));
    rhs.rows_mut(n + m, n).copy_from(&(-f3));
    (k, rhs)
}

/// Dense solve with one refinement step; returns the solution and
/// `||K u - rhs|| / (1 + ||rhs||)`.
pub fn dense_solve(k: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let lu = k.clone().lu();
    let mut u = lu.solve(rhs)?;
    let denom = 1.0 + rhs.norm();
    let mut rel = (k * &u - rhs).norm() / denom;
    let r = rhs - k * &u;
    if let Some(du) = lu.solve(&r) {
        let refined = &u + du;
        let rel2 = (k * &refined - rhs).norm() / denom;
        if rel2 < rel {
            u = refined;
            rel = rel2;
        }
    }
    u.iter().all(|v| v.is_finite()).then_some((u, rel))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub alpha: f64,
    pub sigma: f64,
    pub mu_before: f64,
    pub mu_after: f64,
    pub newton_residual: f64,
    /// Neighbourhood report of the accepted point at its own `mu`, with
    /// the estimates in force when it was accepted.
    pub report: NeighborhoodReport,
    pub estimates_updated: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("Newton system could not be solved")]
    Singular,
    #[error("no admissible step length down to {MIN_ALPHA:e}")]
    NoStep,
}

/// One iteration: Newton direction, backtracking on the admissibility
/// conditions, then the estimate update test.
pub fn theory_step(s: &mut TheoryState, params: &TheoryParams, qp: &TheoryQp, sigma: f64) -> Result<StepReport, StepError> {
    let sigma = params.clamp_sigma(sigma);
    let (n, m) = (qp.n(), qp.m());
    let (k, rhs) = newton_system(s, params, qp, sigma);
    let (u, newton_residual) = dense_solve(&k, &rhs).ok_or(StepError::Singular)?;
    let dx = u.rows(0, n).into_owned();
    let dy = u.rows(n, m).into_owned();
    let dz = u.rows(n + m, n).into_owned();

    let mu_before = s.mu;
    let mut alpha = 1.0;
    let accepted = loop {
        if alpha < MIN_ALPHA {
            return Err(StepError::NoStep);
        }
        let x = &s.x + &dx * alpha;
        let z = &s.z + &dz * alpha;
        if x.iter().chain(z.iter()).all(|&v| v > 0.0) {
            let mu = average_product(&x, &z);
            if mu <= (1.0 - MU_DECREASE * alpha) * mu_before {
                let y = &s.y + &dy * alpha;
                let report = neighborhood_check_at(qp, params, &x, &y, &z, &s.lambda, &s.zeta, mu);
                if report.verdict() {
                    break (x, y, z, mu, report);
                }
            }
        }
        alpha *= BACKTRACK;
    };
    let (x, y, z, mu, report) = accepted;

    let ratio = mu / params.mu0;
    let rp = &qp.a * &x - (&qp.b + &params.b_bar * ratio);
    let rd = (&qp.c + &params.c_bar * ratio) + &qp.q * &x - qp.a.transpose() * &y - &z;
    let joint = (rp.norm_squared() + rd.norm_squared()).sqrt();
    // With (zeta, lambda) moved to the new point, its scaled residuals are
    // (rp, -rd) / ratio, so the semi-norm is taken in that orientation.
    let estimates_updated =
        joint <= params.c_n * ratio && qp.semi_norm(&rp, &(-&rd)) <= params.gamma_a * params.rho_start * ratio;
    if estimates_updated {
        s.zeta = x.clone();
        s.lambda = y.clone();
    }
    s.x = x;
    s.y = y;
    s.z = z;
    s.mu = mu;
    s.k += 1;
    Ok(StepReport { alpha, sigma, mu_before, mu_after: mu, newton_residual, report, estimates_updated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoryStop {
    Converged,
    IterationCap,
    StepFailure,
}

#[derive(Debug, Clone)]
pub struct TheoryTrace {
    pub initial: NeighborhoodReport,
    pub steps: Vec<StepReport>,
    pub stop: TheoryStop,
    pub cap: usize,
    pub state: TheoryState,
}

/// `10 n^4 |ln tol|`, rounded up.
pub fn iteration_cap(n: usize, tol: f64) -> usize {
    (10.0 * (n as f64).powi(4) * tol.ln().abs()).ceil().max(1.0) as usize
}

fn converged(s: &TheoryState, qp: &TheoryQp, tol: f64) -> bool {
    let rp = (&qp.a * &s.x - &qp.b).norm();
    let rd = (&qp.c + &qp.q * &s.x - qp.a.transpose() * &s.y - &s.z).norm();
    rp < tol && rd < tol && s.mu < tol
}

pub fn theory_solve(qp: &TheoryQp, params: &TheoryParams, start: TheoryState, tol: f64) -> TheoryTrace {
    let mut s = start;
    let initial = neighborhood_check(&s, params, qp);
    let cap = iteration_cap(qp.n(), tol);
    let mut steps = Vec::new();
    let stop = loop {
        if converged(&s, qp, tol) {
            break TheoryStop::Converged;
        }
        if s.k >= cap {
            break TheoryStop::IterationCap;
        }
        match theory_step(&mut s, params, qp, params.sigma) {
            Ok(r) => steps.push(r),
            Err(e) => {
                log::warn!("theory step {} failed: {e}", s.k);
                break TheoryStop::StepFailure;
            }
        }
    };
    TheoryTrace { initial, steps, stop, cap, state: s }
}

pub const TRACE_CSV_HEADER: &str =
    "k,mu,alpha,b_tilde_norm,c_tilde_norm,semi_norm,positive,within_norm,within_semi_norm,central,estimates_updated";

pub fn write_trace_csv<W: Write>(mut w: W, trace: &TheoryTrace) -> io::Result<()> {
    writeln!(w, "{TRACE_CSV_HEADER}")?;
    let row = |w: &mut W, k: usize, mu: f64, alpha: f64, r: &NeighborhoodReport, upd: bool| {
        writeln!(
            w,
            "{k},{mu:e},{alpha},{:e},{:e},{:e},{},{},{},{},{upd}",
            r.b_tilde.norm(),
            r.c_tilde.norm(),
            r.semi_norm,
            r.positive,
            r.within_norm,
            r.within_semi_norm,
            r.central
        )
    };
    row(&mut w, 0, trace.initial_mu(), 0.0, &trace.initial, false)?;
    for (i, st) in trace.steps.iter().enumerate() {
        row(&mut w, i + 1, st.mu_after, st.alpha, &st.report, st.estimates_updated)?;
    }
    Ok(())
}

impl TheoryTrace {
    pub fn initial_mu(&self) -> f64 {
        self.steps.first().map_or(self.state.mu, |s| s.mu_before)
    }
}

/// Theory mode behind the common solver interface: default parameters,
/// status `Optimal` on convergence.
pub fn solve_with_defaults(qp: &StandardQP, tol: f64) -> Result<SolveResult, TheoryError> {
    let tq = TheoryQp::from_standard(qp)?;
    let (start, params) = theory_starting_point(&tq, default_rho_start(&tq));
    params.validate()?;
    let trace = theory_solve(&tq, &params, start, tol);
    let status = match trace.stop {
        TheoryStop::Converged => Status::Optimal,
        TheoryStop::IterationCap => Status::NoConvergence,
        TheoryStop::StepFailure => Status::IllConditioned,
    };
    let log = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, st)| IterationLog {
            k: i + 1,
            mu: st.mu_after,
            primal_res: st.report.b_tilde.norm() * st.mu_after / params.mu0,
            dual_res: st.report.c_tilde.norm() * st.mu_after / params.mu0,
            alpha_x: st.alpha,
            alpha_z: st.alpha,
            delta: st.mu_after,
            rho: st.mu_after,
            inertia: None,
            factor_attempts: 1,
            solve_residuals: vec![st.newton_residual],
            target_mu: st.sigma * st.mu_before,
            lambda_updated: st.estimates_updated,
            zeta_updated: st.estimates_updated,
            // Not tracked per step in theory mode.
            k_pmm: 0,
            reg_primal: f64::NAN,
            reg_dual: f64::NAN,
            y_lambda: f64::NAN,
            x_zeta: f64::NAN,
        })
        .collect();
    let s = trace.state;
    Ok(SolveResult::from_point(
        qp,
        status,
        s.x.as_slice().to_vec(),
        s.y.as_slice().to_vec(),
        s.z.as_slice().to_vec(),
        s.k,
        log,
        0.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex_lp() -> TheoryQp {
        TheoryQp::new(
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DMatrix::zeros(2, 2),
            DVector::from_vec(vec![1.0]),
            DVector::from_vec(vec![1.0, 1.0]),
        )
    }

    #[test]
    fn start_is_in_neighbourhood() {
        let qp = simplex_lp();
        let (s, p) = theory_starting_point(&qp, 1.0);
        assert_eq!(p.mu0, 1.0);
        assert_eq!(p.b_bar, &qp.a * DVector::from_element(2, 1.0) - &qp.b);
        let r = neighborhood_check(&s, &p, &qp);
        assert!(r.verdict());
        assert!(r.norm2 < 1e-12);
    }

    #[test]
    fn centrality_violation_is_named() {
        let qp = simplex_lp();
        let (mut s, p) = theory_starting_point(&qp, 1.0);
        // x_0 z_0 = 0.05 mu with mu held at 1.
        s.z[0] = 0.05;
        s.mu = 1.0;
        let r = neighborhood_check(&s, &p, &qp);
        assert!(!r.verdict());
        assert!(r.failures().contains(&"centrality"));
    }

    #[test]
    fn simplex_lp_converges() {
        let qp = simplex_lp();
        let (s, mut p) = theory_starting_point(&qp, default_rho_start(&qp));
        p.sigma = 0.5;
        let trace = theory_solve(&qp, &p, s, 1e-6);
        assert_eq!(trace.stop, TheoryStop::Converged);
        for st in &trace.steps {
            assert!(st.report.verdict());
            assert!(st.mu_after <= (1.0 - MU_DECREASE * st.alpha) * st.mu_before);
        }
    }

    #[test]
    fn free_variables_rejected() {
        use crate::sparse::CscMatrix;
        let qp = StandardQP::new(
            CscMatrix::from_dense_rows(&[vec![1.0, 1.0]]),
            CscMatrix::zeros(2, 2),
            vec![1.0],
            vec![0.0, 0.0],
            vec![false, true],
        )
        .unwrap();
        assert_eq!(TheoryQp::from_standard(&qp).unwrap_err(), TheoryError::FreeVariables(1));
    }
}

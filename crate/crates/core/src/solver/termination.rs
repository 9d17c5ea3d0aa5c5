use super::config::SolverConfig;
use super::state::{IterationState, Residuals};
use crate::problem_io::StandardQP;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Continue,
    Optimal,
    Infeasible,
    NoConvergence,
}

/// The quantities the termination rule looks at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminationMeasures {
    pub rel_dual: f64,
    pub rel_primal: f64,
    pub mu: f64,
    pub reg_dual: f64,
    pub x_zeta: f64,
    pub reg_primal: f64,
    pub y_lambda: f64,
    pub k: usize,
    pub k_pmm: usize,
}

impl TerminationMeasures {
    pub fn from_residuals(qp: &StandardQP, s: &IterationState, r: &Residuals) -> Self {
        TerminationMeasures {
            rel_dual: r.relative_dual(qp),
            rel_primal: r.relative_primal(qp),
            mu: s.mu,
            reg_dual: r.reg_dual_norm,
            x_zeta: r.x_zeta_norm,
            reg_primal: r.reg_primal_norm,
            y_lambda: r.y_lambda_norm,
            k: s.k,
            k_pmm: s.k_pmm,
        }
    }
}

/// The decision rule. Optimality is tested first, then the two divergence
/// tests; the iteration limit applies whenever none of them ends the run.
pub fn decide(t: &TerminationMeasures, cfg: &SolverConfig) -> Termination {
    let tol = cfg.tol;
    let stalled = t.k_pmm >= cfg.pmm_maxit;
    let verdict = if t.rel_dual <= tol && t.rel_primal <= tol && t.mu <= tol {
        Termination::Optimal
    } else if t.reg_dual <= tol && t.x_zeta > cfg.infeasibility_threshold {
        if stalled {
            Termination::Infeasible
        } else {
            Termination::Continue
        }
    } else if t.reg_primal <= tol && t.y_lambda > cfg.infeasibility_threshold {
        if stalled {
            Termination::Infeasible
        } else {
            Termination::Continue
        }
    } else {
        Termination::Continue
    };
    if verdict == Termination::Continue && t.k >= cfg.ip_maxit {
        Termination::NoConvergence
    } else {
        verdict
    }
}

pub fn check_termination(s: &IterationState, qp: &StandardQP, cfg: &SolverConfig) -> Termination {
    let r = Residuals::compute(qp, s);
    decide(&TerminationMeasures::from_residuals(qp, s, &r), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measures() -> TerminationMeasures {
        TerminationMeasures {
            rel_dual: 1.0,
            rel_primal: 1.0,
            mu: 1.0,
            reg_dual: 1.0,
            x_zeta: 0.0,
            reg_primal: 1.0,
            y_lambda: 0.0,
            k: 10,
            k_pmm: 0,
        }
    }

    #[test]
    fn optimal_needs_all_three() {
        let cfg = SolverConfig::default();
        let t = TerminationMeasures { rel_dual: 1e-7, rel_primal: 1e-7, mu: 1e-7, ..measures() };
        assert_eq!(decide(&t, &cfg), Termination::Optimal);
        let t = TerminationMeasures { mu: 1e-5, ..t };
        assert_eq!(decide(&t, &cfg), Termination::Continue);
    }

    #[test]
    fn diverging_multipliers_are_infeasible() {
        let cfg = SolverConfig::default();
        let t = TerminationMeasures { reg_primal: 1e-9, y_lambda: 1e12, k_pmm: 6, ..measures() };
        assert_eq!(decide(&t, &cfg), Termination::Infeasible);
        let t = TerminationMeasures { k_pmm: 2, ..t };
        assert_eq!(decide(&t, &cfg), Termination::Continue);
        let t = TerminationMeasures { reg_dual: 1e-9, x_zeta: 1e11, k_pmm: 5, ..measures() };
        assert_eq!(decide(&t, &cfg), Termination::Infeasible);
    }

    #[test]
    fn iteration_limit() {
        let cfg = SolverConfig::default();
        let t = TerminationMeasures { k: 200, ..measures() };
        assert_eq!(decide(&t, &cfg), Termination::NoConvergence);
        let t = TerminationMeasures { k: 199, ..measures() };
        assert_eq!(decide(&t, &cfg), Termination::Continue);
        // Divergence without a stalled estimate still respects the limit.
        let t = TerminationMeasures { reg_primal: 1e-9, y_lambda: 1e12, k: 200, ..measures() };
        assert_eq!(decide(&t, &cfg), Termination::NoConvergence);
    }
}

//! Penalty and proximal-estimate updates.

use super::state::IterationState;

/// Required reduction of a residual norm for the matching estimate to move.
pub const SUFFICIENT_DECREASE: f64 = 0.95;

/// Rate used when there is no complementarity to measure progress by.
pub const PURE_PMM_RATE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyUpdate {
    pub rate: f64,
    pub lambda_updated: bool,
    pub zeta_updated: bool,
}

/// Relative decrease of `mu` in `[0, 1]`. A step that raises `mu` has rate 0.
pub fn mu_rate(mu_old: f64, mu_new: f64) -> f64 {
    if mu_old > 0.0 {
        ((mu_old - mu_new) / mu_old).clamp(0.0, 1.0)
    } else {
        PURE_PMM_RATE
    }
}

/// Residual norms before and after a step, with the rounding level below
/// which a decrease is not counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualChange {
    pub old: f64,
    pub new: f64,
    pub noise: f64,
}

impl ResidualChange {
    pub fn exact(old: f64, new: f64) -> Self {
        ResidualChange { old, new, noise: 0.0 }
    }

    /// A residual already at rounding level (or zero) cannot decrease.
    pub fn decreased(&self) -> bool {
        self.old > self.noise && self.new <= SUFFICIENT_DECREASE * self.old
    }
}

/// Applies the update rule to `s`, whose iterate is already the new one.
/// `mu_old` and the residual norms refer to the previous iterate.
pub fn update_penalties(
    s: &mut IterationState,
    mu_old: f64,
    primal: ResidualChange,
    dual: ResidualChange,
) -> PenaltyUpdate {
    let r = mu_rate(mu_old, s.mu);
    let lambda_updated = primal.decreased();
    if lambda_updated {
        s.lambda.clone_from(&s.y);
        s.delta *= 1.0 - r;
    } else {
        s.delta *= 1.0 - r / 3.0;
    }
    s.delta = s.delta.max(s.reg_thr);

    let zeta_updated = dual.decreased();
    if zeta_updated {
        s.zeta.clone_from(&s.x);
        s.rho *= 1.0 - r;
    } else {
        s.rho *= 1.0 - r / 3.0;
    }
    s.rho = s.rho.max(s.reg_thr);

    if lambda_updated || zeta_updated {
        s.k_pmm = 0;
    }
    PenaltyUpdate { rate: r, lambda_updated, zeta_updated }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(mu: f64) -> IterationState {
        IterationState {
            x: vec![1.0],
            y: vec![2.0],
            z: vec![mu],
            mu,
            delta: 1.0,
            rho: 1.0,
            lambda: vec![0.0],
            zeta: vec![0.0],
            k: 3,
            k_pmm: 4,
            reg_thr: 1e-8,
        }
    }

    #[test]
    fn sufficient_primal_decrease_moves_lambda() {
        let mut s = state(0.5);
        let up = update_penalties(&mut s, 1.0, ResidualChange::exact(2.0, 1.8), ResidualChange::exact(1.0, 1.0));
        assert_eq!(up.rate, 0.5);
        assert!(up.lambda_updated && !up.zeta_updated);
        assert_eq!(s.lambda, vec![2.0]);
        assert_eq!(s.delta, 0.5);
        assert_eq!(s.rho, 1.0 - 0.5 / 3.0);
        assert_eq!(s.zeta, vec![0.0]);
        assert_eq!(s.k_pmm, 0);
    }

    #[test]
    fn stalled_primal_keeps_lambda() {
        let mut s = state(0.5);
        let up = update_penalties(&mut s, 1.0, ResidualChange::exact(2.0, 1.99), ResidualChange::exact(1.0, 1.0));
        assert!(!up.lambda_updated);
        assert_eq!(s.lambda, vec![0.0]);
        assert_eq!(s.delta, 1.0 - 0.5 / 3.0);
        assert_eq!(s.k_pmm, 4);
    }

    #[test]
    fn penalties_floor_at_threshold() {
        let mut s = state(1e-12);
        update_penalties(&mut s, 1.0, ResidualChange::exact(2.0, 1.0), ResidualChange::exact(2.0, 1.0));
        assert_eq!(s.delta, 1e-8);
        assert_eq!(s.rho, 1e-8);
    }

    #[test]
    fn residual_at_rounding_level_does_not_count() {
        assert!(!ResidualChange::exact(0.0, 0.0).decreased());
        assert!(!ResidualChange { old: 1e-4, new: 1e-6, noise: 2e-4 }.decreased());
        assert!(ResidualChange { old: 1e-3, new: 1e-6, noise: 2e-4 }.decreased());
    }

    #[test]
    fn rate_without_complementarity() {
        assert_eq!(mu_rate(0.0, 0.0), PURE_PMM_RATE);
        assert_eq!(mu_rate(1.0, 0.25), 0.75);
        assert_eq!(mu_rate(1.0, 0.0), 1.0);
    }

    #[test]
    fn rising_mu_leaves_penalties_alone() {
        assert_eq!(mu_rate(1.0, 3.0), 0.0);
        let mut s = state(3.0);
        let before = (s.delta, s.rho);
        update_penalties(&mut s, 1.0, ResidualChange::exact(2.0, 1.0), ResidualChange::exact(2.0, 1.0));
        assert_eq!((s.delta, s.rho), before);
    }
}

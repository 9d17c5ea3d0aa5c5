use crate::kkt::LdlBackend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Predictor-corrector IP-PMM with penalty scheduling.
    #[default]
    Practical,
    /// Neighbourhood-following reference algorithm on dense data.
    Theory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub ip_maxit: usize,
    /// Iterations without an estimate update before infeasibility can be
    /// declared.
    pub pmm_maxit: usize,
    /// Fraction of the step to the boundary.
    pub tau: f64,
    /// Initial dual proximal penalty.
    pub delta0: f64,
    /// Initial primal proximal penalty.
    pub rho0: f64,
    /// Divergence threshold on `||x - zeta||` and `||y - lambda||`.
    pub infeasibility_threshold: f64,
    /// Consecutive failed factorizations before giving up.
    pub max_reg_escalations: usize,
    /// `false` runs the same loop with `delta = rho = 0` (a plain IPM).
    pub regularize: bool,
    pub backend: LdlBackend,
    pub mode: Mode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-6,
            ip_maxit: 200,
            pmm_maxit: 5,
            tau: 0.995,
            delta0: 8.0,
            rho0: 8.0,
            infeasibility_threshold: 1e10,
            max_reg_escalations: 5,
            regularize: true,
            backend: LdlBackend::Sparse,
            mode: Mode::Practical,
        }
    }
}

impl SolverConfig {
    /// The non-regularized comparison method: identical loop, `delta = rho = 0`
    /// and the unregularized pivot rule.
    pub fn noreg() -> Self {
        SolverConfig {
            delta0: 0.0,
            rho0: 0.0,
            regularize: false,
            ..SolverConfig::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_maxit(mut self, maxit: usize) -> Self {
        self.ip_maxit = maxit;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0) {
            return Err(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(format!("tau must lie in (0, 1), got {}", self.tau));
        }
        if self.regularize && !(self.delta0 > 0.0 && self.rho0 > 0.0) {
            return Err("initial penalties must be positive when regularizing".into());
        }
        Ok(())
    }

    /// Names of the fields on which two configurations differ.
    pub fn differences(&self, other: &SolverConfig) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! cmp {
            ($($f:ident),*) => {$(
                if self.$f != other.$f {
                    out.push(stringify!($f));
                }
            )*};
        }
        cmp!(
            tol,
            ip_maxit,
            pmm_maxit,
            tau,
            delta0,
            rho0,
            infeasibility_threshold,
            max_reg_escalations,
            regularize,
            backend,
            mode
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SolverConfig::default();
        assert_eq!(c.tol, 1e-6);
        assert_eq!(c.ip_maxit, 200);
        assert_eq!(c.pmm_maxit, 5);
        assert_eq!(c.tau, 0.995);
        assert_eq!((c.delta0, c.rho0), (8.0, 8.0));
        assert_eq!(c.infeasibility_threshold, 1e10);
        assert_eq!(c.max_reg_escalations, 5);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn noreg_differs_only_in_regularization() {
        let diff = SolverConfig::default().differences(&SolverConfig::noreg());
        assert_eq!(diff, vec!["delta0", "rho0", "regularize"]);
        assert!(SolverConfig::noreg().validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SolverConfig::default().with_tol(0.0).validate().is_err());
        let c = SolverConfig { tau: 1.0, ..Default::default() };
        assert!(c.validate().is_err());
    }
}

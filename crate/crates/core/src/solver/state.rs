use crate::problem_io::StandardQP;
use crate::sparse::{norm2, CscMatrix};

/// Floor on both proximal penalties, `max(tol / max(||A||_inf^2, ||Q||_inf^2), 1e-10)`.
pub fn regularization_floor(a: &CscMatrix, q: &CscMatrix, tol: f64) -> f64 {
    let scale = a.norm_inf().powi(2).max(q.norm_inf().powi(2));
    if scale > 0.0 {
        (tol / scale).max(1e-10)
    } else {
        tol.max(1e-10)
    }
}

/// Average complementarity product over the nonnegative indices; 0 when
/// there are none.
pub fn complementarity(qp: &StandardQP, x: &[f64], z: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for j in 0..qp.n() {
        if !qp.is_free(j) {
            sum += x[j] * z[j];
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub mu: f64,
    /// Dual proximal penalty.
    pub delta: f64,
    /// Primal proximal penalty.
    pub rho: f64,
    /// Dual proximal estimate.
    pub lambda: Vec<f64>,
    /// Primal proximal estimate.
    pub zeta: Vec<f64>,
    pub k: usize,
    /// Iterations since `lambda` or `zeta` last changed.
    pub k_pmm: usize,
    pub reg_thr: f64,
}

impl IterationState {
    /// Fresh state with the estimates anchored at the iterate.
    pub fn new(qp: &StandardQP, x: Vec<f64>, y: Vec<f64>, z: Vec<f64>, delta: f64, rho: f64, reg_thr: f64) -> Self {
        let mu = complementarity(qp, &x, &z);
        IterationState {
            lambda: y.clone(),
            zeta: x.clone(),
            x,
            y,
            z,
            mu,
            delta,
            rho,
            k: 0,
            k_pmm: 0,
            reg_thr,
        }
    }

    pub fn refresh_mu(&mut self, qp: &StandardQP) {
        self.mu = complementarity(qp, &self.x, &self.z);
    }
}

/// Residuals of the optimality conditions at an iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    /// `b - A x`
    pub primal: Vec<f64>,
    /// `c + Q x - A^T y - z`
    pub dual: Vec<f64>,
    pub primal_norm: f64,
    pub dual_norm: f64,
    /// `||b - A x - delta (y - lambda)||`
    pub reg_primal_norm: f64,
    /// `||c + Q x - A^T y - z + rho (x - zeta)||`
    pub reg_dual_norm: f64,
    /// `||y - lambda||`
    pub y_lambda_norm: f64,
    /// `||x - zeta||`
    pub x_zeta_norm: f64,
    /// Rounding level of the primal residual: below it a change is noise.
    pub primal_noise: f64,
    /// Rounding level of the dual residual.
    pub dual_noise: f64,
}

/// Multiple of `eps * ||sum of |terms|||` treated as rounding noise.
pub const NOISE_FACTOR: f64 = 100.0;

fn noise(terms: &[f64]) -> f64 {
    NOISE_FACTOR * f64::EPSILON * norm2(terms)
}

/// `|b| + |A| |x|` and `|c| + |Q| |x| + |A|^T |y| + |z|` elementwise.
fn residual_magnitudes(qp: &StandardQP, s: &IterationState) -> (Vec<f64>, Vec<f64>) {
    let mut p: Vec<f64> = qp.b.iter().map(|v| v.abs()).collect();
    let mut d: Vec<f64> = qp.c.iter().zip(&s.z).map(|(c, z)| c.abs() + z.abs()).collect();
    for j in 0..qp.n() {
        for (i, v) in qp.a.col(j) {
            p[i] += (v * s.x[j]).abs();
            d[j] += (v * s.y[i]).abs();
        }
        for (i, v) in qp.q.col(j) {
            d[i] += (v * s.x[j]).abs();
        }
    }
    (p, d)
}

impl Residuals {
    pub fn compute(qp: &StandardQP, s: &IterationState) -> Self {
        let primal = primal_residual(qp, &s.x);
        let dual = dual_residual(qp, &s.x, &s.y, &s.z);
        let y_lambda: Vec<f64> = s.y.iter().zip(&s.lambda).map(|(a, b)| a - b).collect();
        let x_zeta: Vec<f64> = s.x.iter().zip(&s.zeta).map(|(a, b)| a - b).collect();
        let reg_p: Vec<f64> = primal.iter().zip(&y_lambda).map(|(r, d)| r - s.delta * d).collect();
        let reg_d: Vec<f64> = dual.iter().zip(&x_zeta).map(|(r, d)| r + s.rho * d).collect();
        let (pm, dm) = residual_magnitudes(qp, s);
        Residuals {
            primal_noise: noise(&pm),
            dual_noise: noise(&dm),
            primal_norm: norm2(&primal),
            dual_norm: norm2(&dual),
            reg_primal_norm: norm2(&reg_p),
            reg_dual_norm: norm2(&reg_d),
            y_lambda_norm: norm2(&y_lambda),
            x_zeta_norm: norm2(&x_zeta),
            primal,
            dual,
        }
    }

    pub fn relative_primal(&self, qp: &StandardQP) -> f64 {
        self.primal_norm / norm2(&qp.b).max(1.0)
    }

    pub fn relative_dual(&self, qp: &StandardQP) -> f64 {
        self.dual_norm / norm2(&qp.c).max(1.0)
    }
}

pub fn primal_residual(qp: &StandardQP, x: &[f64]) -> Vec<f64> {
    let ax = qp.a.mul_vec(x);
    qp.b.iter().zip(&ax).map(|(b, v)| b - v).collect()
}

pub fn dual_residual(qp: &StandardQP, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
    let qx = qp.q.mul_vec(x);
    let aty = qp.a.mul_t_vec(y);
    (0..qp.n()).map(|j| qp.c[j] + qx[j] - aty[j] - z[j]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_formula() {
        let a = CscMatrix::from_dense_rows(&[vec![1.0, -3.0], vec![0.5, 0.0]]);
        let q = CscMatrix::identity(2);
        assert_eq!(regularization_floor(&a, &q, 1e-6), 1e-6 / 16.0);
        let big = CscMatrix::from_dense_rows(&[vec![1e4, 0.0]]);
        assert_eq!(regularization_floor(&big, &CscMatrix::zeros(2, 2), 1e-6), 1e-10);
    }

    #[test]
    fn mu_ignores_free_indices() {
        let qp = StandardQP::new(
            CscMatrix::from_dense_rows(&[vec![1.0, 1.0, 1.0]]),
            CscMatrix::zeros(3, 3),
            vec![1.0],
            vec![0.0; 3],
            vec![false, true, false],
        )
        .unwrap();
        assert_eq!(complementarity(&qp, &[1.0, 5.0, 2.0], &[3.0, 0.0, 4.0]), 5.5);
        let all_free = StandardQP::new(
            CscMatrix::from_dense_rows(&[vec![1.0]]),
            CscMatrix::zeros(1, 1),
            vec![1.0],
            vec![0.0],
            vec![true],
        )
        .unwrap();
        assert_eq!(complementarity(&all_free, &[3.0], &[0.0]), 0.0);
    }
}

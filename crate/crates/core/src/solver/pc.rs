//! Predictor-corrector directions on the augmented system.
//!
//! Both solves share one factorization of
//! `[-(Q + Theta^{-1} + rho I), A^T; A, delta I]`. Eliminating `dz` through
//! `dz_I = d_I - Theta_I^{-1} dx_I` turns the Newton step for the
//! regularized optimality conditions into
//!
//! ```text
//! K [dx; dy] = [F_d - d; b - A x - delta (y - lambda)]
//! ```
//!
//! where `F_d = c + Q x - A^T y - z + rho (x - zeta)` and `d` carries the
//! complementarity target.

use super::state::IterationState;
use crate::kkt::KktFactorization;
use crate::problem_io::StandardQP;

#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    pub dz: Vec<f64>,
    /// `||K u - rhs|| / (1 + ||rhs||)` of the linear solve.
    pub residual: f64,
}

impl Direction {
    pub fn is_finite(&self) -> bool {
        self.dx.iter().chain(&self.dy).chain(&self.dz).all(|v| v.is_finite())
    }
}

/// `tau * min(1, min_{dv_i < 0} -v_i / dv_i)`.
pub fn step_fraction(v: &[f64], dv: &[f64], tau: f64) -> f64 {
    let mut alpha_max = 1.0f64;
    for (vi, di) in v.iter().zip(dv) {
        if *di < 0.0 {
            alpha_max = alpha_max.min(-vi / di);
        }
    }
    tau * alpha_max
}

/// Step fraction restricted to the nonnegative indices of `qp`.
pub fn step_fraction_on(qp: &StandardQP, v: &[f64], dv: &[f64], tau: f64) -> f64 {
    let idx = qp.nonneg_indices();
    let vi: Vec<f64> = idx.iter().map(|&j| v[j]).collect();
    let di: Vec<f64> = idx.iter().map(|&j| dv[j]).collect();
    step_fraction(&vi, &di, tau)
}

fn solve_block(qp: &StandardQP, fact: &KktFactorization, rhs: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
    let (u, rel) = fact.solve_with_residual(rhs);
    let n = qp.n();
    (u[..n].to_vec(), u[n..].to_vec(), rel)
}

fn recover_dz(qp: &StandardQP, s: &IterationState, d: &[f64], dx: &[f64]) -> Vec<f64> {
    (0..qp.n())
        .map(|j| if qp.is_free(j) { 0.0 } else { d[j] - s.z[j] / s.x[j] * dx[j] })
        .collect()
}

/// Affine-scaling direction: the Newton step on the regularized optimality
/// conditions with complementarity target zero.
pub fn predictor(s: &IterationState, qp: &StandardQP, fact: &KktFactorization) -> Direction {
    let n = qp.n();
    let qx = qp.q.mul_vec(&s.x);
    let aty = qp.a.mul_t_vec(&s.y);
    let ax = qp.a.mul_vec(&s.x);
    // d_I = -z_I, so the z terms cancel in F_d - d.
    let d1: Vec<f64> = (0..n).map(|j| if qp.is_free(j) { 0.0 } else { -s.z[j] }).collect();
    let mut rhs = Vec::with_capacity(n + qp.m());
    for j in 0..n {
        let z_free = if qp.is_free(j) { s.z[j] } else { 0.0 };
        rhs.push(qp.c[j] + qx[j] - aty[j] - z_free + s.rho * (s.x[j] - s.zeta[j]));
    }
    for i in 0..qp.m() {
        rhs.push(qp.b[i] - ax[i] - s.delta * (s.y[i] - s.lambda[i]));
    }
    let (dx, dy, residual) = solve_block(qp, fact, &rhs);
    let dz = recover_dz(qp, s, &d1, &dx);
    Direction { dx, dy, dz, residual }
}

/// Complementarity after the trial predictor step, `g_alpha`, and the
/// centering target `(g_alpha / x^T z)^2 g_alpha / |I|`. Inputs are already
/// restricted to the nonnegative indices.
pub fn centering_target(x: &[f64], z: &[f64], dx: &[f64], dz: &[f64], alpha_x: f64, alpha_z: f64) -> (f64, f64) {
    if x.is_empty() {
        return (0.0, 0.0);
    }
    let mut g = 0.0;
    let mut xz = 0.0;
    for i in 0..x.len() {
        g += (x[i] + alpha_x * dx[i]) * (z[i] + alpha_z * dz[i]);
        xz += x[i] * z[i];
    }
    let ratio = g / xz;
    (g, ratio * ratio * g / x.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corrector {
    /// Predictor plus corrector.
    pub combined: Direction,
    /// Residual of the corrector solve alone.
    pub residual: f64,
    pub g_alpha: f64,
    pub target_mu: f64,
}

/// Centering-correcting step for the target from [`centering_target`],
/// added to the predictor.
pub fn corrector(
    s: &IterationState,
    qp: &StandardQP,
    fact: &KktFactorization,
    pred: &Direction,
    alpha_x: f64,
    alpha_z: f64,
) -> Corrector {
    let (n, m) = (qp.n(), qp.m());
    let idx = qp.nonneg_indices();
    let pick = |v: &[f64]| idx.iter().map(|&j| v[j]).collect::<Vec<f64>>();
    let (g_alpha, target_mu) =
        centering_target(&pick(&s.x), &pick(&s.z), &pick(&pred.dx), &pick(&pred.dz), alpha_x, alpha_z);

    let d2: Vec<f64> = (0..n)
        .map(|j| {
            if qp.is_free(j) {
                0.0
            } else {
                (target_mu - pred.dx[j] * pred.dz[j]) / s.x[j]
            }
        })
        .collect();
    let (cx, cy, residual) = if d2.iter().all(|&v| v == 0.0) {
        (vec![0.0; n], vec![0.0; m], 0.0)
    } else {
        let mut rhs: Vec<f64> = d2.iter().map(|v| -v).collect();
        rhs.resize(n + m, 0.0);
        solve_block(qp, fact, &rhs)
    };
    let cz = recover_dz(qp, s, &d2, &cx);
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u + v).collect::<Vec<f64>>();
    Corrector {
        combined: Direction {
            dx: add(&pred.dx, &cx),
            dy: add(&pred.dy, &cy),
            dz: add(&pred.dz, &cz),
            residual: pred.residual.max(residual),
        },
        residual,
        g_alpha,
        target_mu,
    }
}

//! Jacobi-preconditioned conjugate gradients on `(A A^T + delta I) w = r`,
//! applied matrix-free.

use crate::sparse::{dot, norm2, CscMatrix};

pub const PCG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PcgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `||(A A^T + delta I) w - rhs|| / ||rhs||` at exit.
    pub relative_residual: f64,
}

pub fn default_maxit(m: usize) -> usize {
    2 * m + 10
}

fn apply(a: &CscMatrix, delta: f64, v: &[f64]) -> Vec<f64> {
    let atv = a.mul_t_vec(v);
    let mut out = a.mul_vec(&atv);
    for (o, vi) in out.iter_mut().zip(v) {
        *o += delta * vi;
    }
    out
}

/// Solves `(A A^T + delta I) w = rhs` to relative tolerance `tol`. Stops at
/// `maxit` iterations without error; check `converged`.
pub fn pcg_normal(a: &CscMatrix, delta: f64, rhs: &[f64], tol: f64, maxit: usize) -> PcgOutcome {
    let m = a.nrows();
    assert_eq!(rhs.len(), m);
    let rhs_norm = norm2(rhs);
    let mut w = vec![0.0; m];
    if rhs_norm == 0.0 {
        return PcgOutcome { solution: w, iterations: 0, converged: true, relative_residual: 0.0 };
    }
    let precond: Vec<f64> = a.row_norms_sq().into_iter().map(|v| v + delta).collect();

    let mut r = rhs.to_vec();
    let mut s: Vec<f64> = r.iter().zip(&precond).map(|(ri, pi)| ri / pi).collect();
    let mut p = s.clone();
    let mut rs = dot(&r, &s);
    let mut rel = 1.0;
    let mut iterations = 0;
    while iterations < maxit {
        let ap = apply(a, delta, &p);
        let alpha = rs / dot(&p, &ap);
        for i in 0..m {
            w[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        iterations += 1;
        rel = norm2(&r) / rhs_norm;
        if rel <= tol {
            break;
        }
        for i in 0..m {
            s[i] = r[i] / precond[i];
        }
        let rs_new = dot(&r, &s);
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..m {
            p[i] = s[i] + beta * p[i];
        }
    }
    // The recurrence can drift from the true residual; report the latter.
    let true_res: Vec<f64> = apply(a, delta, &w).iter().zip(rhs).map(|(x, y)| x - y).collect();
    let true_rel = norm2(&true_res) / rhs_norm;
    PcgOutcome {
        converged: rel <= tol,
        solution: w,
        iterations,
        relative_residual: true_rel,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_scaled_rhs() {
        let a = CscMatrix::identity(4);
        let b = [1.0, -2.0, 3.0, 0.5];
        let out = pcg_normal(&a, 8.0, &b, PCG_TOL, default_maxit(4));
        assert!(out.converged);
        for (w, bi) in out.solution.iter().zip(&b) {
            assert!((w - bi / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_matrix_converges_in_one_iteration() {
        let a = CscMatrix::from_dense_rows(&[
            vec![2.0, 0.0, 0.0, 0.0],
            vec![0.0, -3.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.0],
        ]);
        let out = pcg_normal(&a, 8.0, &[1.0, 2.0, 3.0], PCG_TOL, default_maxit(3));
        assert!(out.converged);
        assert!(out.iterations <= 1);
        assert!(out.relative_residual <= 1e-14);
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let a = CscMatrix::identity(2);
        let out = pcg_normal(&a, 8.0, &[0.0, 0.0], PCG_TOL, 10);
        assert_eq!(out.solution, vec![0.0, 0.0]);
        assert_eq!(out.iterations, 0);
    }
}

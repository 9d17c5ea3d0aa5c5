//! Starting point from the least-squares solution of the equality part of
//! the problem, shifted into the positive orthant.

use crate::kkt::{pcg_normal, PcgOutcome};
use crate::kkt::pcg::{default_maxit, PCG_TOL};
use crate::problem_io::StandardQP;

/// Regularization of `A A^T` in the normal-equation solves.
pub const START_DELTA: f64 = 8.0;

#[derive(Debug, Clone)]
pub struct StartingPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    /// The two normal-equation solves (primal, dual).
    pub pcg: [PcgOutcome; 2],
}

/// Unshifted estimates `x~ = A^T (A A^T + delta I)^{-1} b`,
/// `y~ = (A A^T + delta I)^{-1} A (c + Q x~)`, `z~ = c - A^T y~ + Q x~`.
pub fn least_squares_estimates(qp: &StandardQP, delta: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>, [PcgOutcome; 2]) {
    let maxit = default_maxit(qp.m());
    let w = pcg_normal(&qp.a, delta, &qp.b, PCG_TOL, maxit);
    let x = qp.a.mul_t_vec(&w.solution);
    let qx = qp.q.mul_vec(&x);
    let g: Vec<f64> = qp.c.iter().zip(&qx).map(|(c, v)| c + v).collect();
    let v = pcg_normal(&qp.a, delta, &qp.a.mul_vec(&g), PCG_TOL, maxit);
    let y = v.solution.clone();
    let aty = qp.a.mul_t_vec(&y);
    let z = (0..qp.n()).map(|j| g[j] - aty[j]).collect();
    (x, y, z, [w, v])
}

/// Shifts `(x~, z~)` on the nonnegative indices so both become strictly
/// positive and comparable in size; free entries keep `x~` and get `z = 0`.
pub fn shift_to_interior(qp: &StandardQP, x: &[f64], y: &[f64], z: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let idx = qp.nonneg_indices();
    let mut x0 = x.to_vec();
    let mut z0 = vec![0.0; qp.n()];
    if idx.is_empty() {
        return (x0, y.to_vec(), z0);
    }
    let min_x = idx.iter().map(|&j| x[j]).fold(f64::INFINITY, f64::min);
    let min_z = idx.iter().map(|&j| z[j]).fold(f64::INFINITY, f64::min);
    let dx = (-1.5 * min_x).max(0.0);
    let dz = (-1.5 * min_z).max(0.0);
    let xs: Vec<f64> = idx.iter().map(|&j| x[j] + dx).collect();
    let zs: Vec<f64> = idx.iter().map(|&j| z[j] + dz).collect();
    let prod: f64 = xs.iter().zip(&zs).map(|(a, b)| a * b).sum();
    let sum_x: f64 = xs.iter().sum();
    let sum_z: f64 = zs.iter().sum();

    // A zero denominator, or a shift that leaves an entry at zero, falls back
    // to a unit increment.
    let mut sx = if sum_z != 0.0 { dx + 0.5 * prod / sum_z } else { dx + 1.0 };
    let mut sz = if sum_x != 0.0 { dz + 0.5 * prod / sum_x } else { dz + 1.0 };
    if !(sx.is_finite() && idx.iter().all(|&j| x[j] + sx > 0.0)) {
        sx = dx + 1.0;
    }
    if !(sz.is_finite() && idx.iter().all(|&j| z[j] + sz > 0.0)) {
        sz = dz + 1.0;
    }
    for &j in &idx {
        x0[j] = x[j] + sx;
        z0[j] = z[j] + sz;
    }
    (x0, y.to_vec(), z0)
}

pub fn starting_point(qp: &StandardQP) -> StartingPoint {
    let (x, y, z, pcg) = least_squares_estimates(qp, START_DELTA);
    let (x, y, z) = shift_to_interior(qp, &x, &y, &z);
    StartingPoint { x, y, z, pcg }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CscMatrix;

    fn single_row() -> StandardQP {
        StandardQP::nonnegative(
            CscMatrix::from_dense_rows(&[vec![1.0, 1.0]]),
            CscMatrix::zeros(2, 2),
            vec![2.0],
            vec![1.0, 2.0],
        )
        .unwrap()
    }

    #[test]
    fn hand_shift_example() {
        let (x, y, z) = shift_to_interior(&single_row(), &[1.0, 1.0], &[1.5], &[-0.5, 0.5]);
        assert_eq!(x, vec![1.5, 1.5]);
        assert_eq!(z, vec![0.625, 1.625]);
        assert_eq!(y, vec![1.5]);
    }

    #[test]
    fn zero_estimates_use_unit_shift() {
        let (x, _, z) = shift_to_interior(&single_row(), &[0.0, 0.0], &[0.0], &[0.0, 0.0]);
        assert_eq!(x, vec![1.0, 1.0]);
        assert_eq!(z, vec![1.0, 1.0]);
    }

    #[test]
    fn all_free_is_unshifted() {
        let qp = StandardQP::new(
            CscMatrix::from_dense_rows(&[vec![1.0, 1.0]]),
            CscMatrix::zeros(2, 2),
            vec![2.0],
            vec![1.0, 2.0],
            vec![true, true],
        )
        .unwrap();
        let sp = starting_point(&qp);
        assert_eq!(sp.z, vec![0.0, 0.0]);
        let (x, _, _, _) = least_squares_estimates(&qp, START_DELTA);
        assert_eq!(sp.x, x);
    }

    #[test]
    fn identity_constraints() {
        let n = 3;
        let qp = StandardQP::nonnegative(CscMatrix::identity(n), CscMatrix::zeros(n, n), vec![1.0; n], vec![0.0; n])
            .unwrap();
        let (x, _, _, _) = least_squares_estimates(&qp, START_DELTA);
        for v in &x {
            assert!((v - 1.0 / 9.0).abs() < 1e-14);
        }
        let sp = starting_point(&qp);
        assert!(sp.x.iter().chain(&sp.z).all(|&v| v > 0.0));
    }
}

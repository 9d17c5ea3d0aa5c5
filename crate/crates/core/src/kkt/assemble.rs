use thiserror::Error;

use crate::problem_io::StandardQP;
use crate::sparse::CscMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssembleError {
    #[error("x[{index}] = {value} is not strictly positive")]
    NonpositiveX { index: usize, value: f64 },
    #[error("z[{index}] = {value} is not strictly positive")]
    NonpositiveZ { index: usize, value: f64 },
    #[error("regularization must be nonnegative (rho = {rho}, delta = {delta})")]
    NegativeRegularization { rho: f64, delta: f64 },
}

/// The regularized augmented system
///
/// ```text
/// K = [ -(Q + Theta^{-1} + rho I)   A^T     ]
///     [  A                          delta I ]
/// ```
///
/// with `Theta^{-1} = Z/X` on nonnegative indices and zero on free ones.
/// Unknowns are ordered `(dx, dy)`; only the upper triangle is stored.
#[derive(Debug, Clone)]
pub struct AugmentedSystem {
    n: usize,
    m: usize,
    rho: f64,
    delta: f64,
    upper: CscMatrix,
}

impl AugmentedSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Upper triangle of `K` (diagonal included).
    pub fn upper(&self) -> &CscMatrix {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i <= j {
            self.upper.get(i, j)
        } else {
            self.upper.get(j, i)
        }
    }

    /// `K v` using the symmetric upper storage.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![0.0; self.dim()];
        for (i, j, k) in self.upper.triplets() {
            out[i] += k * v[j];
            if i != j {
                out[j] += k * v[i];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.max_abs()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut out = vec![vec![0.0; d]; d];
        for (i, j, v) in self.upper.triplets() {
            out[i][j] = v;
            out[j][i] = v;
        }
        out
    }
}

/// `Theta^{-1}` diagonal: `z_j / x_j` for `j` in `I`, zero for `j` in `F`.
pub fn theta_inv(qp: &StandardQP, x: &[f64], z: &[f64]) -> Result<Vec<f64>, AssembleError> {
    (0..qp.n())
        .map(|j| {
            if qp.is_free(j) {
                return Ok(0.0);
            }
            if !(x[j] > 0.0) {
                return Err(AssembleError::NonpositiveX { index: j, value: x[j] });
            }
            if !(z[j] > 0.0) {
                return Err(AssembleError::NonpositiveZ { index: j, value: z[j] });
            }
            Ok(z[j] / x[j])
        })
        .collect()
}

pub fn assemble(
    qp: &StandardQP,
    x: &[f64],
    z: &[f64],
    rho: f64,
    delta: f64,
) -> Result<AugmentedSystem, AssembleError> {
    if !(rho >= 0.0 && delta >= 0.0) {
        return Err(AssembleError::NegativeRegularization { rho, delta });
    }
    let (n, m) = (qp.n(), qp.m());
    let theta = theta_inv(qp, x, z)?;

    let mut trip = Vec::with_capacity(qp.q.nnz() + qp.a.nnz() + n + m);
    let mut diag = vec![0.0; n];
    for (i, j, v) in qp.q.triplets() {
        if i < j {
            trip.push((i, j, -v));
        } else if i == j {
            diag[i] += v;
        }
    }
    for j in 0..n {
        trip.push((j, j, -(diag[j] + theta[j] + rho)));
    }
    for (i, j, v) in qp.a.triplets() {
        trip.push((j, n + i, v));
    }
    for i in 0..m {
        trip.push((n + i, n + i, delta));
    }
    // Exact zeros (e.g. delta = 0) are dropped; a missing diagonal reads as 0.
    let upper = CscMatrix::from_triplets(n + m, n + m, &trip);
    Ok(AugmentedSystem { n, m, rho, delta, upper })
}

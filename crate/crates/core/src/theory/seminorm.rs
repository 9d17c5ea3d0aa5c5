//! The semi-norm `||(b, c)||_A = min ||(x, z)||_2` over
//! `A x = b, -Q x + A^T y + z = c`.
//!
//! Writing `x = A^+ b + N u` with `N` an orthonormal null-space basis of
//! `A` and eliminating `z = c + Q x - A^T y`, the objective becomes
//! `||v + G s||` with `v = (A^+ b, c + Q A^+ b)`, `G = [N 0; Q N -A^T]`
//! and `s = (u, y)`. Its minimum is the norm of the projection of `v` onto
//! the orthogonal complement of `range(G)`, which is precomputed once per
//! `(A, Q)`.

use nalgebra::{DMatrix, DVector};

/// Relative threshold below which singular values count as zero.
const RANK_TOL: f64 = 1e-12;

/// Reusable evaluator of the semi-norm for fixed `(A, Q)`.
#[derive(Debug, Clone)]
pub struct SemiNorm {
    a: DMatrix<f64>,
    q: DMatrix<f64>,
    a_pinv: DMatrix<f64>,
    /// `I - G G^+`
    complement: DMatrix<f64>,
}

fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DMatrix::zeros(m.ncols(), m.nrows());
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = RANK_TOL * smax.max(1.0) * (m.nrows().max(m.ncols()) as f64);
    svd.pseudo_inverse(eps).expect("both factors were computed")
}

/// Orthonormal basis of `{x : A x = 0}` as columns.
fn null_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, n) = a.shape();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to at least n rows so the SVD returns a full right basis.
    let rows = m.max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let eps = RANK_TOL * smax.max(1.0) * (rows as f64);
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&k| svd.singular_values[k] <= eps)
        .map(|k| v_t.row(k).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

impl SemiNorm {
    pub fn new(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Self {
        let (m, n) = a.shape();
        assert_eq!(q.shape(), (n, n), "Q must be n x n");
        let nb = null_space(a);
        let k = nb.ncols();
        let mut g = DMatrix::zeros(2 * n, k + m);
        g.view_mut((0, 0), (n, k)).copy_from(&nb);
        g.view_mut((n, 0), (n, k)).copy_from(&(q * &nb));
        g.view_mut((n, k), (n, m)).copy_from(&(-a.transpose()));
        let complement = DMatrix::identity(2 * n, 2 * n) - &g * pinv(&g);
        SemiNorm { a: a.clone(), q: q.clone(), a_pinv: pinv(a), complement }
    }

    /// `None` when `b` is not in the range of `A` (the semi-norm is then
    /// infinite).
    pub fn eval(&self, b: &DVector<f64>, c: &DVector<f64>) -> Option<f64> {
        let n = self.a.ncols();
        let xp = &self.a_pinv * b;
        let gap = (&self.a * &xp - b).norm();
        if gap > 1e-9 * (1.0 + b.norm()) {
            return None;
        }
        let mut v = DVector::zeros(2 * n);
        v.rows_mut(0, n).copy_from(&xp);
        v.rows_mut(n, n).copy_from(&(c + &self.q * &xp));
        Some((&self.complement * v).norm())
    }

    /// As [`eval`](Self::eval), with `+inf` for the inconsistent case.
    pub fn value(&self, b: &DVector<f64>, c: &DVector<f64>) -> f64 {
        self.eval(b, c).unwrap_or(f64::INFINITY)
    }
}

/// One-shot evaluation; `+inf` when `b` is outside the range of `A`.
pub fn semi_norm(a: &DMatrix<f64>, q: &DMatrix<f64>, b: &DVector<f64>, c: &DVector<f64>) -> f64 {
    SemiNorm::new(a, q).value(b, c)
}

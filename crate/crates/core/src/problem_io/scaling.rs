//! Geometric row scaling with power-of-two factors.

use crate::sparse::CscMatrix;

use super::standard::StandardQP;

/// Row factors `d_i = 2^{p_i}`; row `i` of `[A b]` is multiplied by `d_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowScaling {
    exponents: Vec<i32>,
}

impl RowScaling {
    pub fn identity(m: usize) -> Self {
        RowScaling { exponents: vec![0; m] }
    }

    pub fn exponents(&self) -> &[i32] {
        &self.exponents
    }

    pub fn factors(&self) -> Vec<f64> {
        self.exponents.iter().map(|&p| pow2(p)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&p| p == 0)
    }

    /// Multipliers of the unscaled rows from those of the scaled rows.
    pub fn unscale_duals(&self, y_scaled: &[f64]) -> Vec<f64> {
        y_scaled.iter().zip(self.factors()).map(|(y, d)| y * d).collect()
    }
}

fn pow2(p: i32) -> f64 {
    2f64.powi(p)
}

/// Largest integer `p` with `2^p <= d`, for finite positive `d`.
fn floor_log2(d: f64) -> i32 {
    let mut p = d.log2().floor() as i32;
    while pow2(p + 1) <= d {
        p += 1;
    }
    while pow2(p) > d {
        p -= 1;
    }
    p
}

/// True when every nonzero of `A` lies in `(0.1, 10)` in magnitude.
pub fn is_well_scaled(a: &CscMatrix) -> bool {
    let mut max = 0.0f64;
    let mut min = f64::INFINITY;
    for &v in a.nzval() {
        let v = v.abs();
        if v > 0.0 {
            max = max.max(v);
            min = min.min(v);
        }
    }
    max < 10.0 && min > 0.1
}

/// Scales the rows of `[A b]` geometrically unless `A` is already well
/// scaled. Each factor is `1/sqrt(max_j |a_ij| * min_{a_ij != 0} |a_ij|)`
/// rounded down to a power of two; empty rows keep factor one.
pub fn scale_rows(a: &CscMatrix, b: &[f64]) -> (CscMatrix, Vec<f64>, RowScaling) {
    let m = a.nrows();
    if is_well_scaled(a) {
        return (a.clone(), b.to_vec(), RowScaling::identity(m));
    }
    let mut row_max = vec![0.0f64; m];
    let mut row_min = vec![f64::INFINITY; m];
    for (i, _, v) in a.triplets() {
        let v = v.abs();
        if v > 0.0 {
            row_max[i] = row_max[i].max(v);
            row_min[i] = row_min[i].min(v);
        }
    }
    let exponents: Vec<i32> = (0..m)
        .map(|i| {
            if row_max[i] == 0.0 {
                0
            } else {
                floor_log2(1.0 / (row_max[i] * row_min[i]).sqrt())
            }
        })
        .collect();
    let scaling = RowScaling { exponents };
    let d = scaling.factors();
    let mut scaled = a.clone();
    scaled.scale_rows(&d);
    let b_scaled = b.iter().zip(&d).map(|(v, s)| v * s).collect();
    (scaled, b_scaled, scaling)
}

/// Applies [`scale_rows`] to the constraints of a standard-form problem.
pub fn scale_problem(qp: &StandardQP) -> (StandardQP, RowScaling) {
    let (a, b, scaling) = scale_rows(&qp.a, &qp.b);
    let scaled = qp
        .with_constraints(a, b)
        .expect("row scaling preserves dimensions");
    (scaled, scaling)
}

//! Reformulation of a [`RawProblem`] into the solver's standard form
//!
//! ```text
//! min  c^T x + 1/2 x^T Q x   s.t.  A x = b,  x_I >= 0,  x_F free
//! ```
//!
//! Inequality rows receive a nonnegative slack, finite lower bounds are
//! shifted to zero, variables bounded only above are reflected, finite upper
//! bounds become an extra row `x_j + s_j = u_j - l_j`, and fixed variables
//! are substituted out.

use std::fmt;

use thiserror::Error;

use super::mps::{RawProblem, Sense};
use crate::sparse::CscMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("column `{name}` has inconsistent bounds [{lower}, {upper}]")]
    InconsistentBounds { name: String, lower: f64, upper: f64 },
    #[error("row `{name}` has inconsistent limits [{lower}, {upper}]")]
    InconsistentRow { name: String, lower: f64, upper: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("quadratic matrix is not symmetric")]
    AsymmetricQ,
}

/// A convex QP in standard form.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardQP {
    pub a: CscMatrix,
    pub q: CscMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    free: Vec<bool>,
}

impl StandardQP {
    /// `free[j]` marks `x_j` as a free variable; all others are nonnegative.
    /// `Q` is trusted to be positive semidefinite but must be symmetric.
    pub fn new(
        a: CscMatrix,
        q: CscMatrix,
        b: Vec<f64>,
        c: Vec<f64>,
        free: Vec<bool>,
    ) -> Result<Self, ModelError> {
        let (m, n) = (a.nrows(), a.ncols());
        if b.len() != m {
            return Err(ModelError::Dimension(format!("b has {} entries, A has {m} rows", b.len())));
        }
        if c.len() != n || free.len() != n {
            return Err(ModelError::Dimension(format!("c/free must have {n} entries")));
        }
        if q.nrows() != n || q.ncols() != n {
            return Err(ModelError::Dimension(format!("Q must be {n}x{n}")));
        }
        if !q.is_symmetric() {
            return Err(ModelError::AsymmetricQ);
        }
        Ok(StandardQP { a, q, b, c, free })
    }

    /// Standard-form LP/QP with every variable nonnegative.
    pub fn nonnegative(a: CscMatrix, q: CscMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self, ModelError> {
        let n = a.ncols();
        Self::new(a, q, b, c, vec![false; n])
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn is_free(&self, j: usize) -> bool {
        self.free[j]
    }

    pub fn free_mask(&self) -> &[bool] {
        &self.free
    }

    /// The index set `I` of nonnegative variables.
    pub fn nonneg_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| !self.free[j]).collect()
    }

    /// The index set `F` of free variables.
    pub fn free_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.free[j]).collect()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let qx = self.q.mul_vec(x);
        self.c.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
            + 0.5 * qx.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Replaces `(A, b)`, keeping `Q`, `c` and the variable classes.
    pub fn with_constraints(&self, a: CscMatrix, b: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(a, self.q.clone(), b, self.c.clone(), self.free.clone())
    }
}

/// How an original variable is expressed in standard-form columns:
/// `x_orig = offset + sign * x_std[col]`, or a constant when fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColumnMap {
    Column { col: usize, offset: f64, sign: f64 },
    Fixed { value: f64 },
}

/// Standard-form rows and slack columns generated by one original row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowMap {
    /// `(std_row, slack_col, slack_sign)`; the slack enters the row as
    /// `slack_sign * s`.
    pub parts: Vec<(usize, Option<usize>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarMap {
    pub sense: Sense,
    pub columns: Vec<ColumnMap>,
    /// Per original variable: `(std_row, slack_col)` of its upper-bound row.
    pub upper_rows: Vec<Option<(usize, usize)>>,
    pub rows: Vec<RowMap>,
    /// Constant added to the standard-form objective, in minimization sense.
    pub objective_constant: f64,
    /// Original rows with no coefficients after fixed-variable substitution.
    pub zero_rows: Vec<usize>,
    pub n_std: usize,
    pub m_std: usize,
}

impl VarMap {
    /// Recovers original variable values from a standard-form point.
    pub fn recover_x(&self, x_std: &[f64]) -> Vec<f64> {
        self.columns
            .iter()
            .map(|c| match *c {
                ColumnMap::Column { col, offset, sign } => offset + sign * x_std[col],
                ColumnMap::Fixed { value } => value,
            })
            .collect()
    }

    /// Original-sense objective from the standard-form objective value.
    pub fn original_objective(&self, std_objective: f64) -> f64 {
        self.sense_sign() * (std_objective + self.objective_constant)
    }

    pub fn sense_sign(&self) -> f64 {
        match self.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }

    /// Multipliers of the original rows from standard-form multipliers
    /// (ranged rows sum their two parts), in the original objective sense.
    pub fn recover_row_duals(&self, y_std: &[f64]) -> Vec<f64> {
        let s = self.sense_sign();
        self.rows
            .iter()
            .map(|r| s * r.parts.iter().map(|&(row, _, _)| y_std[row]).sum::<f64>())
            .collect()
    }

    /// Lifts an original point into standard form, filling slacks from the
    /// row activities and bounds. Used to check the mapping.
    pub fn lift(&self, raw: &RawProblem, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_std];
        let bounds = raw.column_bounds();
        for (j, cm) in self.columns.iter().enumerate() {
            if let ColumnMap::Column { col, offset, sign } = *cm {
                out[col] = (x[j] - offset) * sign;
            }
            if let Some((_, slack)) = self.upper_rows[j] {
                out[slack] = bounds[j].1 - x[j];
            }
        }
        let mut activity = vec![0.0; raw.num_rows()];
        for &(i, j, v) in &raw.entries {
            activity[i] += v * x[j];
        }
        let limits = raw.row_limits();
        for (i, rm) in self.rows.iter().enumerate() {
            for &(_, slack, sign) in &rm.parts {
                if let Some(s) = slack {
                    // Rows read `a^T x + sign * s = limit`.
                    let limit = if sign > 0.0 { limits[i].1 } else { limits[i].0 };
                    out[s] = (limit - activity[i]) / sign;
                }
            }
        }
        out
    }

    pub fn report(&self) -> StandardizationReport {
        let shifted = self
            .columns
            .iter()
            .filter(|c| matches!(c, ColumnMap::Column { offset, .. } if *offset != 0.0))
            .count();
        let reflected = self
            .columns
            .iter()
            .filter(|c| matches!(c, ColumnMap::Column { sign, .. } if *sign < 0.0))
            .count();
        let fixed = self.columns.iter().filter(|c| matches!(c, ColumnMap::Fixed { .. })).count();
        let slack_columns = self
            .rows
            .iter()
            .flat_map(|r| r.parts.iter())
            .filter(|p| p.1.is_some())
            .count();
        let upper_bound_rows = self.upper_rows.iter().filter(|u| u.is_some()).count();
        StandardizationReport {
            original_rows: self.rows.len(),
            original_cols: self.columns.len(),
            rows: self.m_std,
            cols: self.n_std,
            slack_columns,
            upper_bound_rows,
            shifted,
            reflected,
            fixed,
            zero_rows: self.zero_rows.len(),
            objective_constant: self.objective_constant,
        }
    }
}

/// Summary of what standardization did to a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizationReport {
    pub original_rows: usize,
    pub original_cols: usize,
    pub rows: usize,
    pub cols: usize,
    pub slack_columns: usize,
    pub upper_bound_rows: usize,
    pub shifted: usize,
    pub reflected: usize,
    pub fixed: usize,
    pub zero_rows: usize,
    pub objective_constant: f64,
}

impl fmt::Display for StandardizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "original_rows: {}", self.original_rows)?;
        writeln!(f, "original_cols: {}", self.original_cols)?;
        writeln!(f, "standard_rows: {}", self.rows)?;
        writeln!(f, "standard_cols: {}", self.cols)?;
        writeln!(f, "slack_columns: {}", self.slack_columns)?;
        writeln!(f, "upper_bound_rows: {}", self.upper_bound_rows)?;
        writeln!(f, "shifted_columns: {}", self.shifted)?;
        writeln!(f, "reflected_columns: {}", self.reflected)?;
        writeln!(f, "fixed_columns: {}", self.fixed)?;
        writeln!(f, "zero_rows: {}", self.zero_rows)?;
        write!(f, "objective_constant: {}", self.objective_constant)
    }
}

pub fn to_standard_form(p: &RawProblem) -> Result<(StandardQP, VarMap), ModelError> {
    let sense_sign = match p.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let bounds = p.column_bounds();

    // Columns for the original variables come first.
    let mut columns = Vec::with_capacity(p.num_cols());
    let mut free = Vec::new();
    let mut offsets = vec![0.0; p.num_cols()];
    for (j, &(l, u)) in bounds.iter().enumerate() {
        if l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
            return Err(ModelError::InconsistentBounds {
                name: p.columns[j].clone(),
                lower: l,
                upper: u,
            });
        }
        let cm = if l == u {
            ColumnMap::Fixed { value: l }
        } else if l.is_finite() {
            free.push(false);
            ColumnMap::Column { col: free.len() - 1, offset: l, sign: 1.0 }
        } else if u.is_finite() {
            free.push(false);
            ColumnMap::Column { col: free.len() - 1, offset: u, sign: -1.0 }
        } else {
            free.push(true);
            ColumnMap::Column { col: free.len() - 1, offset: 0.0, sign: 1.0 }
        };
        offsets[j] = match cm {
            ColumnMap::Column { offset, .. } => offset,
            ColumnMap::Fixed { value } => value,
        };
        columns.push(cm);
    }

    let mut row_entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p.num_rows()];
    for &(i, j, v) in &p.entries {
        row_entries[i].push((j, v));
    }

    let mut trip: Vec<(usize, usize, f64)> = Vec::new();
    let mut b = Vec::new();
    let mut rows = Vec::with_capacity(p.num_rows());
    let mut zero_rows = Vec::new();
    let mut pending_slacks: Vec<(usize, f64)> = Vec::new();

    for (i, (lo, hi)) in p.row_limits().into_iter().enumerate() {
        if lo > hi {
            return Err(ModelError::InconsistentRow {
                name: p.rows[i].name.clone(),
                lower: lo,
                upper: hi,
            });
        }
        // a^T x in standard columns: sum a_j sign_j x'_j + sum a_j offset_j.
        let mut coeffs = Vec::new();
        let mut shift = 0.0;
        for &(j, v) in &row_entries[i] {
            shift += v * offsets[j];
            if let ColumnMap::Column { col, sign, .. } = columns[j] {
                coeffs.push((col, v * sign));
            }
        }
        if coeffs.iter().all(|&(_, v)| v == 0.0) {
            zero_rows.push(i);
        }
        let mut parts = Vec::new();
        let mut push_row = |limit: f64, slack_sign: Option<f64>| {
            let r = b.len();
            for &(col, v) in &coeffs {
                trip.push((r, col, v));
            }
            b.push(limit - shift);
            if let Some(s) = slack_sign {
                pending_slacks.push((r, s));
            }
            (r, slack_sign)
        };
        if lo == hi {
            let (r, _) = push_row(lo, None);
            parts.push((r, None, 0.0));
        } else {
            if lo.is_finite() {
                let (r, _) = push_row(lo, Some(-1.0));
                parts.push((r, Some(usize::MAX), -1.0));
            }
            if hi.is_finite() {
                let (r, _) = push_row(hi, Some(1.0));
                parts.push((r, Some(usize::MAX), 1.0));
            }
        }
        rows.push(RowMap { parts });
    }

    // Row slacks follow the original columns.
    let mut next_col = free.len();
    let mut slack_of_row = vec![usize::MAX; b.len()];
    for &(r, s) in &pending_slacks {
        trip.push((r, next_col, s));
        slack_of_row[r] = next_col;
        free.push(false);
        next_col += 1;
    }
    for rm in &mut rows {
        for part in &mut rm.parts {
            if part.1.is_some() {
                part.1 = Some(slack_of_row[part.0]);
            }
        }
    }

    // Upper-bound rows x'_j + s_j = u_j - l_j.
    let mut upper_rows = vec![None; p.num_cols()];
    for (j, &(l, u)) in bounds.iter().enumerate() {
        if let ColumnMap::Column { col, .. } = columns[j] {
            if l.is_finite() && u.is_finite() {
                let r = b.len();
                trip.push((r, col, 1.0));
                trip.push((r, next_col, 1.0));
                b.push(u - l);
                free.push(false);
                upper_rows[j] = Some((r, next_col));
                next_col += 1;
            }
        }
    }

    let n_std = next_col;
    let m_std = b.len();
    let a = CscMatrix::from_triplets(m_std, n_std, &trip);

    // Objective in minimization sense, then substitute x = o + S x'.
    let c_min: Vec<f64> = p.objective.iter().map(|v| sense_sign * v).collect();
    let q_min: Vec<(usize, usize, f64)> = p
        .quadratic
        .iter()
        .map(|&(i, j, v)| (i, j, sense_sign * v))
        .collect();
    let mut q_o = vec![0.0; p.num_cols()];
    for &(i, j, v) in &q_min {
        q_o[i] += v * offsets[j];
    }
    let mut constant = sense_sign * p.objective_offset;
    for j in 0..p.num_cols() {
        constant += c_min[j] * offsets[j] + 0.5 * offsets[j] * q_o[j];
    }
    let mut c = vec![0.0; n_std];
    for (j, cm) in columns.iter().enumerate() {
        if let ColumnMap::Column { col, sign, .. } = *cm {
            c[col] = sign * (c_min[j] + q_o[j]);
        }
    }
    let mut q_trip = Vec::with_capacity(2 * q_min.len());
    for &(i, j, v) in &q_min {
        if let (ColumnMap::Column { col: ci, sign: si, .. }, ColumnMap::Column { col: cj, sign: sj, .. }) =
            (columns[i], columns[j])
        {
            // Symmetrize (Q + Q^T)/2; halving is exact in binary.
            let w = 0.5 * v * si * sj;
            q_trip.push((ci, cj, w));
            q_trip.push((cj, ci, w));
        }
    }
    let q = CscMatrix::from_triplets(n_std, n_std, &q_trip);

    if !zero_rows.is_empty() {
        log::warn!("{} constraint row(s) have no coefficients", zero_rows.len());
    }

    let qp = StandardQP::new(a, q, b, c, free)?;
    let map = VarMap {
        sense: p.sense,
        columns,
        upper_rows,
        rows,
        objective_constant: constant,
        zero_rows,
        n_std,
        m_std,
    };
    Ok((qp, map))
}

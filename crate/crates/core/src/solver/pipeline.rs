//! File-level driver: reformulate, scale, solve and map the answer back.

use thiserror::Error;

use super::{solve, SolveError, SolveResult, SolverConfig, Status};
use crate::problem_io::{scale_problem, to_standard_form, ModelError, RawProblem, RowScaling, StandardQP, VarMap};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub config: SolverConfig,
    pub scaling: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { config: SolverConfig::default(), scaling: true }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    /// Objective in the original sense, constant terms included.
    pub objective: f64,
    /// Values of the original variables.
    pub x: Vec<f64>,
    /// Multipliers of the original rows.
    pub row_duals: Vec<f64>,
    /// `c + Q x - A^T y` per original variable, in the original sense.
    pub reduced_costs: Vec<f64>,
    /// The standard-form problem handed to the solver (scaled if enabled).
    pub solved: StandardQP,
    /// Raw solver output on `solved`.
    pub result: SolveResult,
    pub var_map: VarMap,
    pub scaling: RowScaling,
}

pub fn solve_problem(raw: &RawProblem, opts: &PipelineOptions) -> Result<Solution, PipelineError> {
    let (std, var_map) = to_standard_form(raw)?;
    let (solved, scaling) = if opts.scaling {
        scale_problem(&std)
    } else {
        let m = std.m();
        (std, RowScaling::identity(m))
    };
    let result = solve(&solved, &opts.config)?;

    let x = var_map.recover_x(&result.x);
    let y_std = scaling.unscale_duals(&result.y);
    let row_duals = var_map.recover_row_duals(&y_std);
    let objective = var_map.original_objective(result.objective);
    let reduced_costs = reduced_costs(raw, &x, &row_duals);
    Ok(Solution { status: result.status, objective, x, row_duals, reduced_costs, solved, result, var_map, scaling })
}

fn reduced_costs(raw: &RawProblem, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut r = raw.objective.clone();
    for &(i, j, v) in &raw.quadratic {
        r[i] += v * x[j];
    }
    for &(i, j, v) in &raw.entries {
        r[j] -= v * y[i];
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem_io::parse_qps;

    const BOXED_MAX: &str = "\
NAME          BOXMAX
OBJSENSE
    MAX
ROWS
 N  obj
 L  cap
COLUMNS
    x         obj       1.0        cap       1.0
    y         obj       2.0        cap       1.0
RHS
    rhs       cap       3.0
BOUNDS
 UP bnd       x         2.0
 UP bnd       y         2.0
ENDATA
";

    #[test]
    fn maps_back_to_original_space() {
        let raw = parse_qps(BOXED_MAX).unwrap();
        let sol = solve_problem(&raw, &PipelineOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        // max x + 2y with x + y <= 3, x, y in [0, 2]: optimum at (1, 2).
        assert!((sol.objective - 5.0).abs() < 1e-5, "{}", sol.objective);
        assert!((sol.x[0] - 1.0).abs() < 1e-4 && (sol.x[1] - 2.0).abs() < 1e-4, "{:?}", sol.x);
        // The capacity row prices at 1 in the max sense; x is basic.
        assert!((sol.row_duals[0] - 1.0).abs() < 1e-4, "{:?}", sol.row_duals);
        assert!(sol.reduced_costs[0].abs() < 1e-4);
    }
}

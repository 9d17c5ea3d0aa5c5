//! Interior point-proximal method of multipliers (IP-PMM) for convex
//! quadratic programs
//!
//! ```text
//! min  c^T x + 1/2 x^T Q x   s.t.  A x = b,  x_I >= 0,  x_F free
//! ```
//!
//! The practical solver lives in [`solver`]; [`theory`] runs the
//! neighbourhood-following variant of the method with full bookkeeping on
//! small dense problems.

pub mod kkt;
pub mod problem_io;
pub mod solver;
pub mod sparse;
pub mod theory;

pub use problem_io::{parse_qps, read_qps_file, to_standard_form, RawProblem, StandardQP};
pub use solver::{solve, solve_problem, SolveResult, SolverConfig, Status};
pub use sparse::CscMatrix;

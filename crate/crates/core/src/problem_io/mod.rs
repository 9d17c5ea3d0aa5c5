//! Problem input: MPS/QPS reading, standard-form conversion, row scaling.

pub mod mps;
pub mod scaling;
pub mod standard;

pub use mps::{parse_qps, read_qps_file, RawProblem, ReadError, Relation, Sense};
pub use scaling::{is_well_scaled, scale_problem, scale_rows, RowScaling};
pub use standard::{to_standard_form, ColumnMap, ModelError, StandardQP, StandardizationReport, VarMap};

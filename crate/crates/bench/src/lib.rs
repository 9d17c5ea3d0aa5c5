//! Benchmark harness for the ippmm solver: suite runs, CSV records and
//! performance profiles.

pub mod profile;
pub mod record;
pub mod suite;

pub use profile::{perf_profile, write_profile_csv, Metric, PerfProfile};
pub use record::{read_records, write_records, BenchRecord, RecordError};
pub use suite::{noreg_config, run_one, run_suite, Comparison, SuiteError, IPPMM, NOREG};

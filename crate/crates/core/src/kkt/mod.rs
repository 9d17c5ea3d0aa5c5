//! Regularized augmented (quasi-definite) KKT systems: assembly,
//! `LDL^T` factorization, and the normal-equations PCG used for the
//! starting point.

pub mod assemble;
pub mod ldl;
pub mod ordering;
pub mod pcg;

pub use assemble::{assemble, AssembleError, AugmentedSystem};
pub use ldl::{factorize, factorize_with, FactorError, Inertia, KktFactorization, LdlBackend, PivotRule};
pub use pcg::{pcg_normal, PcgOutcome};

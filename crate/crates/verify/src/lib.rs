//! Reference oracles and the acceptance matrix for `arbor`.

pub mod corpus;
pub mod oracle;
pub mod suite;

pub use suite::{cross_check, run_all, run_default, CriterionResult};

//! Complexity classification and solving for constraint satisfaction
//! problems whose constraints are graphs of co-Boolean functions.
//!
//! The pipeline is: [`model`] parses and normalizes templates and
//! instances, [`algebra`] computes cores, H-matrices and closure
//! properties, [`classifier`] decides tractability, [`encoder`] turns an
//! instance into a Boolean system and [`polysolve`] solves it when the
//! template is tractable. [`oracle`] is an independent backtracking solver
//! over the original domain.

pub mod algebra;
pub mod classifier;
pub mod cli;
pub mod encoder;
pub mod fixtures;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod polysolve;

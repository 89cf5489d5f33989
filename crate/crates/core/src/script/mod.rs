//! Session scripts: a small language for declaring a ring, defining polynomials,
//! ideals and matrices, and running checks on them.

pub mod parser;
pub mod runner;

pub use parser::{parse, parse_polynomial, Script};
pub use runner::{exit, run, run_script, OrderSpec, Report, RunConfig, RunOutcome};

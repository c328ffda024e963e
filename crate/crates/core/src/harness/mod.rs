//! Reference oracles, instance generators, the bundled movie model and the
//! benchmark runner.

pub mod bench;
pub mod fixtures;
pub mod gen;
pub mod movie;
pub mod oracle;

pub use oracle::{brute_force_gai, brute_force_tcp, oracle, OracleError, OracleResult};

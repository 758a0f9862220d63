//! Front end for the `fock-core` verification suites.

pub mod config;
pub mod grid;
pub mod io;
pub mod report;
pub mod suites;

pub use config::{ConfigError, RunConfig, Suite};
pub use report::Report;

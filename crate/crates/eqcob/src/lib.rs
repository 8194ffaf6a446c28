//! Wire formats, the formal group law cache, verification suites and the
//! command-line driver for `eqcob-core`.

pub mod cache;
pub mod cli;
pub mod config;
pub mod error;
pub mod random;
pub mod suites;
pub mod wire;

pub use error::CliError;

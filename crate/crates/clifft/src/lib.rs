//! File formats, parallel drivers and the `clifft` command line on top of
//! `clifft-core`.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod io;
pub mod parallel;

pub use error::{CliError, Result};

//! File formats and command-line front end for `qbrach-core`.

pub mod cli;
pub mod formats;

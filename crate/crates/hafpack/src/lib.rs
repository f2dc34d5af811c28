//! File formats and the command-line front end for `hafpack-core`.

pub mod cli;
pub mod format;

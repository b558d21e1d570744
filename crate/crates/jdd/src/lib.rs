//! File formats, experiment drivers and the `jdd` command-line tool built on
//! [`jdd_core`].
//!
//! * [`idx`]: MNIST IDX image/label files.
//! * [`sample_csv`]: the paired-sample CSV interchange format.
//! * [`manifest`]: `#`-prefixed provenance headers on every CSV output.
//! * [`experiments`]: the rotation sweep and MNIST null generator.
//! * [`cli`]: argument parsing and the subcommands.

pub mod cli;
mod error;
pub mod experiments;
pub mod idx;
pub mod manifest;
pub mod ranges;
pub mod sample_csv;

pub use error::{Error, Result};

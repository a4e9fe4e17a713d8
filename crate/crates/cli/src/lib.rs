//! Library half of the `qgame` binary: argument definitions, input formats
//! and the run record written to stdout.

pub mod commands;
pub mod error;
pub mod input;
pub mod record;

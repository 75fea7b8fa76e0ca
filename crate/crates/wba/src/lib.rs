//! Command-line front end for `wba-core`: file formats, parallel
//! verification suites and the `wba` command.

#![warn(missing_docs)]

pub mod cli;
pub mod format;
pub mod verify;

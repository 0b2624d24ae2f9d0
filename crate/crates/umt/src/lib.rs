//! File formats, JSON reports, a threaded executor and the `umt` command
//! line, on top of `umt-core`.

pub mod cli;
pub mod exec;
pub mod fms;
pub mod json;
pub mod verify;

pub use fms::{parse_structure, write_structure, FmsError};

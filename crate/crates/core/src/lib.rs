//! Uniformity and minimality axiom schemes on finite relational structures.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation over in-memory structures; file formats, reports and the
//! command-line front end live in the `umt` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod aut;
pub mod definable;
pub mod families;
pub mod formula;
pub mod miner;
pub mod props;
pub mod relalg;
pub mod schemes;
pub mod structure;
pub mod tuples;

pub use formula::{Formula, FormulaError, Signature};
pub use structure::{RelationTable, Structure, StructureError};
pub use tuples::{Element, TupleSet};

//! Exact-arithmetic polyhedral monotone operators.
//!
//! Sets are finite unions of rational polyhedra, operators are given by their
//! graphs, and every predicate is decided without floating point.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod exact_la;
pub mod limits;
pub mod operators;
pub mod polyhedra;
pub mod theorems;

pub use error::{Error, Result};

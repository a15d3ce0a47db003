//! Composite bosons (tightly bound fermion pairs) hopping on graphs.
//!
//! The crate builds chains, lattices and fractal graphs, computes the graph
//! diagnostics used to characterize them, assembles the hard-core pair
//! Hamiltonian for one to three pairs, finds ground states and compares the
//! few-pair ground state with the coboson ansatz.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod coboson;
pub mod eigen;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod hamiltonian;
pub mod metrics;

pub use error::{Error, Result};

//! Tools for building, recognizing and certifying sparse k-critical graphs.
//!
//! The crate is organised around a small bitset-backed [`Graph`] type and a set
//! of modules layered on top of it:
//!
//! * [`potential`]: the k-potential of vertex sets and its global minima.
//! * [`coloring`]: exact colorability, criticality certificates, color forcing,
//!   two-cut classification, clusters and standard sets.
//! * [`ore`]: DHGO composition, k-Ore recognition with decomposition trees and
//!   a brute-force membership oracle.
//! * [`constructions`]: Gallai chains, Toft's extension, `H_{k,t}` and the
//!   3-connected families built from them.
//! * [`search`]: isomorph-free generation of small critical graphs.
//! * [`bounds`]: closed-form edge bounds and a verification harness.

pub mod bounds;
pub mod coloring;
pub mod constructions;
mod error;
pub mod graph;
mod limits;
pub mod ore;
pub mod potential;
pub mod search;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet, VertexSplit, MAX_VERTICES};
pub use limits::Limits;

/// Rejects values of `k` below 4, where the potential formulas degenerate.
pub(crate) fn check_k(k: usize) -> Result<()> {
    if k < 4 {
        Err(Error::KTooSmall(k))
    } else {
        Ok(())
    }
}

//! The three graph species (undirected cocycle graphs, Kontsevich digraphs
//! built of wedges, Nambu micro-graphs), their canonical forms, and rational
//! linear combinations of them.

pub mod canon;
pub mod cocycle;
pub mod kontsevich;
pub mod micro;
pub mod sum;

use alloc::vec::Vec;

pub use cocycle::UGraph;
pub use kontsevich::KGraph;
pub use micro::{MicroGraph, Roles};
pub use sum::GraphSum;

/// Canonical representative of a graph together with the sign relating it to
/// the input and the relabeling used (`relabeling[old] = new`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm<G> {
    pub graph: G,
    pub sign: i8,
    pub relabeling: Vec<usize>,
}

/// A graph species with a signed canonical form.
pub trait Canonical: Clone + Ord {
    fn canonical(&self) -> CanonicalForm<Self>;
}

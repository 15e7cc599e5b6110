//! Maximal extensions of monotone and resistive relations, and the
//! constrained-graph representation of maximal structures.

mod cayley;
mod graph_rep;

pub use cayley::{
    cayley, extend_maximal_monotone, extend_maximal_resistive, inverse_cayley, ContractionGraph,
};
pub use graph_rep::{extended_graph_rep, extended_graph_rep_inverse, ExtendedGraphRep, Flavor};

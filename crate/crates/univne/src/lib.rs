//! Exact solvers for uniform-demand virtual network embedding.
//!
//! Every virtual node consumes one unit of node capacity and every virtual
//! edge consumes one unit of bandwidth on each substrate edge it traverses.
//! The crate provides the data model ([`netgraph`]), a brute-force reference
//! solver ([`oracle`]), polynomial solvers for tree and cycle substrates
//! ([`tree_embed`], [`cycle_embed`]), a min-cost flow engine with the star
//! solver built on it ([`flow`]), hardness-instance generators
//! ([`reductions`]) and the JSON instance format with a solver dispatcher
//! ([`instance`], [`dispatch`]).

pub mod cycle_embed;
pub mod dispatch;
pub mod error;
pub mod flow;
pub mod instance;
pub mod netgraph;
pub mod oracle;
pub mod reductions;
pub mod tree_embed;

pub use error::{Result, UnivneError};
pub use netgraph::{
    check_feasible, classify, classify_topology, mapping_cost, shift_virtual_indices,
    Classification, FeasibilityReport, Mapping, NodeId, SolveOutcome, SubstrateNetwork,
    SubstratePath, Topology, TopologySet, UndirectedGraph, Variant, Verdict, VirtualNetwork,
};

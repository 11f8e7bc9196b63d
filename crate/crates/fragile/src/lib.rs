//! Fragile graphs: graphs with no 3-connected subgraph.
//!
//! This crate decides fragility via 2-cutset decomposition, constructs
//! proper m-colourings of m-fragile graphs (m >= 4) by an inductive
//! condition-colouring engine, reproduces the extremal edge bounds and
//! gadget reductions around the class, and cross-checks everything
//! against exhaustive oracles on small graphs.

pub mod constructions;
pub mod decomp;
pub mod engine;
pub mod extremal;
pub mod graph;
pub mod io;
pub mod oracle;

pub use decomp::{decompose, find_independent_cutset, is_fragile, is_three_connected, DecompTree};
pub use engine::{check_condition, Condition, Engine, EngineConfig};
pub use graph::{is_proper, Colouring, Graph, VertexTuple};

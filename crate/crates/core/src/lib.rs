//! Leader-selected networks that are strong structurally controllable with a
//! minimal leader set, built to be edge-maximal.
//!
//! - [`graph`]: simple undirected graphs, BFS metrics, Laplacian, I/O.
//! - [`zero_forcing`]: the color-change rule and zero forcing set checks.
//! - [`constructions`]: the layered, path-based and hybrid maximal designs.
//! - [`robustness`]: algebraic connectivity and Kirchhoff index.
//! - [`ssc_oracle`]: randomized numeric controllability cross-check.
//! - [`grammar`]: rewriting systems that assemble the designs locally.

pub mod constructions;
pub mod grammar;
pub mod graph;
pub mod linalg;
pub mod robustness;
pub mod ssc_oracle;
pub mod zero_forcing;

pub use constructions::{
    build, ConstructedNetwork, ConstructionError, ConstructionSpec, Family, Role,
};
pub use graph::{Graph, GraphError, LeaderSet, NodeId};
pub use linalg::Matrix;

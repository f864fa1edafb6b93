//! Covering graphs with s-clubs.
//!
//! An s-club is a vertex set whose induced subgraph has diameter at most `s`.
//! This crate provides a greedy 2-club cover with a provable approximation
//! bound, exact oracles for small instances, and the graph constructions
//! that carry hardness from clique partition and 5-Double-Sat to s-club
//! cover, together with their solution mappings.

pub mod bench;
pub mod cover;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod reductions;
pub mod sat;

pub use cover::{greedy_club_cover, validate_cover, ClubCover, Violation};
pub use error::{Error, Result};
pub use graph::{Dist, Graph, VertexSet};
pub use oracles::CliquePartition;
pub use reductions::{Construction, LabeledGraph, VertexLabel};
pub use sat::{Assignment, CnfFormula, FiveDSatInstance, Literal};

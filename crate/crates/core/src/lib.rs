//! Hypergraph reasoning benchmark toolkit: instance generation, exact
//! solvers, certificate checking, text and visual encodings, corpus emission
//! and grading.

pub mod bench;
pub mod error;
pub mod generate;
pub mod grade;
pub mod hypergraph;
pub mod seed;
pub mod selfcheck;
pub mod solve;
pub mod task;
pub mod text_repr;
pub mod verify;
pub mod visual_repr;

pub use error::{Error, Result};
pub use hypergraph::{HyperedgeId, Hypergraph, VertexId};
pub use task::Task;

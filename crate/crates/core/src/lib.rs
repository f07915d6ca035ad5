//! Computation and cross-checking of tree-likeness parameters of graphs:
//! layering partitions, tree-length and tree-breadth, bottleneck constants,
//! McCarty widths, cycle constants, additive tree distortion and fat
//! `K₃`-minor witnesses.
//!
//! All quantities are integers and every tie is broken by vertex id, so
//! results are reproducible bit for bit.

pub mod generate;
pub mod graph;
pub mod layering;
pub mod params;
pub mod report;
pub mod treedec;

use thiserror::Error;

pub use graph::{DistanceMatrix, Graph, GraphError, Vertex};

/// An exact computation was not attempted because its input exceeds a cap.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("{what}: size {size} exceeds cap {cap}")]
pub struct CapExceeded {
    pub what: &'static str,
    pub size: u64,
    pub cap: u64,
}

/// How a reported value relates to the true parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Exact,
    Upper,
    Lower,
    Skipped,
}

//! Maximal-clique listing by reverse search over lexicographic completions,
//! with batched child generation through rectangular matrix products and an
//! optional bounded-delay output scheduler.
//!
//! Vertices are `1..=n`. Sets are bitsets; lexicographic order on sets
//! decides by the smallest element of the symmetric difference.

pub mod batch_dfs;
pub mod cost;
pub mod delay_scheduler;
pub mod generators;
pub mod graph;
pub mod io;
pub mod kernels;
pub mod matmul;
pub mod oracle;
pub mod rs_tree;

pub use batch_dfs::{batch_dfs, BacktrackStack, StepEvent, Traversal, TraversalStats};
pub use cost::WorkMeter;
pub use delay_scheduler::{
    calibrate, default_capacity, list_mc, run_plain, run_strict, run_strict_limited, Calibration, DelayConfig,
    EmissionRecord, PrintPhase, PrintRecord, StrictReport,
};
pub use graph::{Graph, GraphError, Normalization, VertexSet};
pub use io::{parse_dimacs, parse_edge_list, ParseError, Parsed};
pub use kernels::{Batch, ChildGenerator, ChildSpec, GoodTable, Kernel};
pub use matmul::{Backend, DenseMatrix};
pub use oracle::{CliqueSet, OracleError, SetDiff};
pub use rs_tree::{Clique, CliqueIndex};

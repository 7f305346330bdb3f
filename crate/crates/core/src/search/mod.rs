//! Maximum families as maximum cliques of the compatibility graph.

mod clique;
mod extremal;
mod graph;

pub use clique::{all_max_cliques, max_clique, max_clique_seeded, CliqueOptions, DEFAULT_MAXIMA_CAP, DEFAULT_NODE_BUDGET};
pub use extremal::{extremal, star_bound, BoundStatus, ExtremalOptions, ExtremalReport, MaximaCount, MaximumSummary};
pub use graph::{build_compat_graph, CompatGraph, Graph, DEFAULT_GRAPH_CAP};
pub(crate) use graph::with_workers;

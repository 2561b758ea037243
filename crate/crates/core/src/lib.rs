//! Graph generation through tree decompositions.
//!
//! Graphs are encoded as a canonical decomposition tree (written as a path
//! length representation) plus a short stream of binary decisions per bag.
//! The crate also carries the probabilistic model trained on those decisions,
//! evaluation statistics and synthetic dataset generators.

pub mod canon;
pub mod codec;
pub mod datasets;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod model;
pub mod plr;
pub mod stats;

pub use canon::{
    canonical_name, canonical_order, canonical_root, tree_centers, tree_isomorphic, CanonicalName, RootedTree,
};
pub use codec::{
    adjacency_sequence, decision_counts, decode_graph, encode_graph, unique_sequence_count, AddStep, DecisionCounts,
    DecisionSequence, SequenceMethod, SupernodeDecisions,
};
pub use datasets::{
    gen_community, gen_lobster, load_dataset, save_dataset, split_dataset, CommunityParams, Dataset, LobsterParams,
};
pub use decomp::{
    bfs_layer_decomposition, min_fill_decomposition, minimal_decomposition, minimize_decomposition,
    validate_decomposition, width, TreeDecomposition, ValidationReport, Violation,
};
pub use error::{Error, Result};
pub use graph::{graph_isomorphic, is_connected, parse_edge_list, to_edge_list, Graph, Permutation};
pub use model::{
    log_prob, nll, sample_graph, sample_tree, train_count_model, train_tree_model, uniform_model, DecisionContext,
    DecisionKind, DecisionModel, NllResult, SampleLimits,
};
pub use plr::{
    enumerate_valid_plrs, plr_bounds, plr_decode, plr_decode_prefix, plr_encode, plr_is_valid, PartialTree, Plr,
    PlrBounds,
};
pub use stats::{graph_statistic, is_lobster, lobster_accuracy, mmd, mmd_squared, Histogram, Kernel, StatKind};

//! Even-decomposition and even-degeneracy of small graphs.
//!
//! A graph is *even-decomposable* when its vertices can be removed through a
//! sequence of independent sets, each cutting an even number of edges to the
//! rest of the remaining graph. It is *even-degenerate* when some ordering
//! gives every vertex but the last two an even number of later neighbours.

pub mod clique;
pub mod degeneracy;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod format;
pub mod graph;
pub mod oracle;
pub mod pattern;
pub mod planted;
pub mod randgraph;
pub mod results;
pub mod rigs;
pub mod rng;
pub mod stats;

pub use degeneracy::{exact_even_degenerate, greedy_ordering, verify_ordering, Ordering};
pub use engine::{
    decompose_auto, decompose_dense, decompose_sparse, decompose_uniform, greedy_removal,
    is_simple_admissible, verify_witness, AutoOptions, Condition, DecompositionWitness,
    EngineOutcome, EngineStatus, Thresholds,
};
pub use error::{CapExceeded, ExperimentError, GraphError, ResultsError, SamplerError};
pub use experiments::{ExperimentRecord, RunOptions, TrialOutcome};
pub use format::{emit_graph6, parse_edge_list, parse_graph6};
pub use graph::{Graph, VertexSet};
pub use oracle::{census, exact_even_decomposable, CensusOptions, CensusReport};
pub use pattern::{find_disjoint_induced, Pattern, PatternPacking};
pub use randgraph::{sample_gnp, sample_gnp_even, sample_linked_pair, SamplerSpec};

/// Build identifier baked in at compile time.
pub const BUILD: &str = env!("EVENDECOMP_BUILD");

//! Win/win decomposition: an out-tree with many leaves, or a narrow path
//! decomposition of the underlying undirected graph.

pub mod backward;
pub mod cover;
pub mod forward;
pub mod pipeline;
pub mod separation;

pub use backward::{backward_component_check, BackwardOutcome};
pub use cover::{
    find_out_branching, off_path_out_neighbors, path_cover_from_out_branching, trim_around,
    witness_from_off_path, PathCover,
};
pub use forward::{forward_arc_heads, forward_arcs_on_path, witness_from_forward_arcs, ForwardArc};
pub use pipeline::{
    decompose, decompose_out_tree, decompose_rooted, forward_heads_bound, forward_union_bound,
    off_path_bound, DecomposeOutcome, Outcome, RootedOutcome,
    Stage, StageStats,
};
pub use separation::{
    greedy_ordering, ordering_to_path_decomposition, vertex_separation, DecompositionViolation, PathDecomposition,
};

//! Out-trees and out-branchings with many leaves.
//!
//! The crate decides whether a digraph has an out-branching (`dmlob`) or an
//! out-tree (`dmlot`) with at least `k` leaves. The decomposition module
//! either finds such a tree directly or produces a path decomposition of the
//! underlying undirected graph of width at most `k³`, over which the solver
//! runs an exact dynamic program. Brute-force and branch-and-bound oracles,
//! instance generators and checkers for known lower bounds complete the
//! toolkit.

pub mod bounds;
pub mod cli;
pub mod decomposition;
pub mod digraph;
pub mod error;
pub mod generators;
pub mod json;
pub mod scc;
pub mod solver;
pub mod tree;

pub use digraph::{parse_digraph, Digraph, UndirectedGraph};
pub use error::{DecomposeError, GenError, GraphError, ParseError, SolveError};
pub use scc::{has_out_branching, in_l_sufficient, strongly_connected_components, Condensation};
pub use tree::{validate_out_tree, OutTree, TreeReport};

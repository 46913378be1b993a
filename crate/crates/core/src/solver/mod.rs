//! Exact solvers: exhaustive oracles, branch and bound, the dynamic program
//! over path decompositions, and the top-level drivers.

mod bnb;
mod brute;
mod dp;
mod driver;

use std::fmt;
use std::str::FromStr;

use crate::tree::OutTree;

pub use bnb::{branch_and_bound, BnbResult};
pub use brute::{brute_force_out_branching, brute_force_out_tree, in_l_exact, BRUTE_FORCE_MAX_N};
pub use dp::{dp_pathwidth, DpConfig, DpResult, MAX_DP_WIDTH};
pub use driver::{solve, solve_dmlob, solve_dmlot, SolverConfig};

/// Whether the tree must span the digraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Spanning,
    Subtree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Out-branching with at least `k` leaves.
    Dmlob,
    /// Out-tree with at least `k` leaves.
    Dmlot,
}

impl Problem {
    pub fn tag(self) -> &'static str {
        match self {
            Problem::Dmlob => "dmlob",
            Problem::Dmlot => "dmlot",
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            Problem::Dmlob => Mode::Spanning,
            Problem::Dmlot => Mode::Subtree,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dmlob" => Ok(Problem::Dmlob),
            "dmlot" => Ok(Problem::Dmlot),
            _ => Err(format!("unknown problem '{s}' (expected dmlob or dmlot)")),
        }
    }
}

/// How the answer was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    DecomposeWitness,
    Dp,
    BranchAndBound,
    BruteForce,
    /// Decided from the strong component structure alone.
    Structural,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::DecomposeWitness => "decompose-witness",
            Method::Dp => "dp",
            Method::BranchAndBound => "branch-and-bound",
            Method::BruteForce => "brute-force",
            Method::Structural => "structural",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub problem: Problem,
    pub k: usize,
    pub answer: bool,
    /// `min(optimum, k)`.
    pub value: usize,
    pub witness: Option<OutTree>,
    pub method: Method,
}

impl SolveResult {
    pub fn at_least_k(&self) -> bool {
        self.value >= self.k
    }
}

//! Branch and bound over partial out-trees.
//!
//! A partial tree is grown from a fixed root. Each open leaf `v` with
//! out-neighbours outside the tree is either fixed as a leaf, or expanded,
//! in which case all of its outside out-neighbours become its children.
//! Expanding greedily loses nothing: in any larger tree containing the
//! partial one where `v` is internal, re-hanging those out-neighbours under
//! `v` keeps a tree and never decreases the leaf count.

use std::collections::BTreeMap;

use crate::digraph::Digraph;
use crate::error::SolveError;
use crate::solver::Mode;
use crate::tree::OutTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnbResult {
    /// `min(optimum, cap)`; 0 when no tree of the requested kind exists.
    pub value: usize,
    pub witness: Option<OutTree>,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Outside,
    Open,
    Fixed,
    Internal,
}

struct Search<'a> {
    d: &'a Digraph,
    mode: Mode,
    cap: usize,
    budget: Option<u64>,
    nodes: u64,
    status: Vec<Status>,
    parent: Vec<usize>,
    in_tree: usize,
    root: usize,
    best: usize,
    best_tree: Option<OutTree>,
    // scratch for the bound
    mark: Vec<u32>,
    stamp: u32,
    queue: Vec<usize>,
}

/// Exact `min(ℓ_s(d), cap)` or `min(ℓ(d), cap)` with a witness reaching it.
/// Stops early once `cap` leaves are found. With a node budget the search
/// may abort with [`SolveError::NodeBudget`].
pub fn branch_and_bound(
    d: &Digraph,
    mode: Mode,
    cap: usize,
    budget: Option<u64>,
) -> Result<BnbResult, SolveError> {
    let n = d.n();
    let mut s = Search {
        d,
        mode,
        cap: cap.max(1),
        budget,
        nodes: 0,
        status: vec![Status::Outside; n],
        parent: vec![usize::MAX; n],
        in_tree: 0,
        root: 0,
        best: 0,
        best_tree: None,
        mark: vec![0; n],
        stamp: 0,
        queue: Vec::with_capacity(n),
    };
    for r in 0..n {
        if s.best >= s.cap {
            break;
        }
        s.root = r;
        s.status[r] = Status::Open;
        s.in_tree = 1;
        s.search()?;
        s.status[r] = Status::Outside;
        s.in_tree = 0;
    }
    Ok(BnbResult {
        value: s.best.min(cap),
        witness: s.best_tree,
        nodes: s.nodes,
    })
}

impl Search<'_> {
    fn search(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(SolveError::NodeBudget(b));
            }
        }
        if self.best >= self.cap {
            return Ok(());
        }

        let n = self.d.n();
        let leaves = self
            .status
            .iter()
            .filter(|s| matches!(s, Status::Open | Status::Fixed))
            .count();
        let attachable = self.attachable();
        if self.mode == Mode::Spanning && attachable < n - self.in_tree {
            return Ok(());
        }
        if leaves + attachable <= self.best {
            return Ok(());
        }

        // Branch on the open leaf with the most outside out-neighbours.
        let mut pick: Option<(usize, usize)> = None;
        for v in 0..n {
            if self.status[v] != Status::Open {
                continue;
            }
            let c = self.outside_degree(v);
            if c > 0 && pick.is_none_or(|(_, bc)| c > bc) {
                pick = Some((v, c));
            }
        }
        let Some((v, _)) = pick else {
            if self.mode == Mode::Spanning && self.in_tree < n {
                return Ok(());
            }
            if leaves > self.best {
                self.record(leaves);
            }
            return Ok(());
        };

        let kids: Vec<usize> = self
            .d
            .out_neighbors(v)
            .iter()
            .copied()
            .filter(|&w| self.status[w] == Status::Outside)
            .collect();
        self.status[v] = Status::Internal;
        for &w in &kids {
            self.status[w] = Status::Open;
            self.parent[w] = v;
        }
        self.in_tree += kids.len();
        let r = self.search();
        self.in_tree -= kids.len();
        for &w in &kids {
            self.status[w] = Status::Outside;
            self.parent[w] = usize::MAX;
        }
        r?;

        self.status[v] = Status::Fixed;
        let r = self.search();
        self.status[v] = Status::Open;
        r
    }

    fn outside_degree(&self, v: usize) -> usize {
        self.d
            .out_neighbors(v)
            .iter()
            .filter(|&&w| self.status[w] == Status::Outside)
            .count()
    }

    /// Outside vertices reachable from open leaves through outside vertices.
    fn attachable(&mut self) -> usize {
        self.stamp += 1;
        let stamp = self.stamp;
        self.queue.clear();
        for v in 0..self.d.n() {
            if self.status[v] == Status::Open {
                self.queue.push(v);
            }
        }
        let mut count = 0;
        while let Some(u) = self.queue.pop() {
            for &w in self.d.out_neighbors(u) {
                if self.status[w] == Status::Outside && self.mark[w] != stamp {
                    self.mark[w] = stamp;
                    count += 1;
                    self.queue.push(w);
                }
            }
        }
        count
    }

    fn record(&mut self, leaves: usize) {
        self.best = leaves;
        let parent: BTreeMap<usize, usize> = (0..self.d.n())
            .filter(|&v| v != self.root && self.status[v] != Status::Outside)
            .map(|v| (v, self.parent[v]))
            .collect();
        self.best_tree = Some(OutTree {
            root: self.root,
            parent,
            host_size: self.d.n(),
        });
    }
}

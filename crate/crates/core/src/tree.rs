//! Out-tree witnesses and their validation against a host digraph.

use std::collections::{BTreeMap, BTreeSet};

use crate::digraph::Digraph;

/// A rooted out-tree given by parent links over a subset of the host's
/// vertices. A single-vertex tree has one leaf: its root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutTree {
    pub root: usize,
    pub parent: BTreeMap<usize, usize>,
    pub host_size: usize,
}

impl OutTree {
    pub fn singleton(root: usize, host_size: usize) -> Self {
        OutTree {
            root,
            parent: BTreeMap::new(),
            host_size,
        }
    }

    /// Builds from a root and `(parent, child)` arcs.
    pub fn from_arcs<I>(root: usize, host_size: usize, arcs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        OutTree {
            root,
            parent: arcs.into_iter().map(|(p, c)| (c, p)).collect(),
            host_size,
        }
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        let mut vs: BTreeSet<usize> = self.parent.keys().copied().collect();
        vs.insert(self.root);
        vs
    }

    pub fn len(&self) -> usize {
        self.parent.len() + 1 - usize::from(self.parent.contains_key(&self.root))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.root || self.parent.contains_key(&v)
    }

    /// Tree arcs `(parent, child)`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().map(|(&c, &p)| (p, c))
    }

    /// Children lists keyed by vertex, children ascending.
    pub fn children(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut ch: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&c, &p) in &self.parent {
            ch.entry(p).or_default().push(c);
        }
        ch
    }

    /// Tree vertices without children.
    pub fn leaves(&self) -> Vec<usize> {
        let parents: BTreeSet<usize> = self.parent.values().copied().collect();
        self.vertices().into_iter().filter(|v| !parents.contains(v)).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    pub fn is_spanning(&self) -> bool {
        self.len() == self.host_size
    }

    /// Relabels every vertex through `map` (local id to host id).
    pub fn relabel(&self, map: &[usize], host_size: usize) -> OutTree {
        OutTree {
            root: map[self.root],
            parent: self.parent.iter().map(|(&c, &p)| (map[c], map[p])).collect(),
            host_size,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    IdOutOfRange(usize),
    RootHasParent,
    MissingArc { tail: usize, head: usize },
    Cycle(usize),
    /// A parent link points to a vertex that is not part of the tree, so
    /// the root cannot be reached from `vertex`.
    UnreachableRoot { vertex: usize, dangling: usize },
    HostSizeMismatch { tree: usize, host: usize },
}

impl std::fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TreeViolation::IdOutOfRange(v) => write!(f, "vertex id {v} out of range"),
            TreeViolation::RootHasParent => write!(f, "root has a parent"),
            TreeViolation::MissingArc { tail, head } => write!(f, "missing arc {tail} -> {head}"),
            TreeViolation::Cycle(v) => write!(f, "parent links from {v} form a cycle"),
            TreeViolation::UnreachableRoot { vertex, dangling } => {
                write!(f, "root unreachable from {vertex}: parent {dangling} is not a tree vertex")
            }
            TreeViolation::HostSizeMismatch { tree, host } => {
                write!(f, "tree claims host size {tree} but host has {host} vertices")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeReport {
    pub violations: Vec<TreeViolation>,
    pub leaf_count: usize,
    pub spanning: bool,
}

impl TreeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every tree condition separately and reports each violation.
pub fn validate_out_tree(d: &Digraph, t: &OutTree) -> TreeReport {
    let n = d.n();
    let mut violations = Vec::new();
    if t.host_size != n {
        violations.push(TreeViolation::HostSizeMismatch {
            tree: t.host_size,
            host: n,
        });
    }
    for v in t.vertices() {
        if v >= n {
            violations.push(TreeViolation::IdOutOfRange(v));
        }
    }
    for &p in t.parent.values() {
        if p >= n && !t.contains(p) {
            violations.push(TreeViolation::IdOutOfRange(p));
        }
    }
    if t.parent.contains_key(&t.root) {
        violations.push(TreeViolation::RootHasParent);
    }
    for (p, c) in t.arcs() {
        if p < n && c < n && !d.has_arc(p, c) {
            violations.push(TreeViolation::MissingArc { tail: p, head: c });
        }
    }

    // Walk parent links: 1 = on the current walk, 2 = reaches root, 3 = broken.
    let mut state: BTreeMap<usize, u8> = BTreeMap::new();
    state.insert(t.root, 2);
    let mut cyclic = BTreeSet::new();
    for &start in t.parent.keys() {
        let mut walk = Vec::new();
        let mut v = start;
        let outcome = loop {
            match state.get(&v) {
                Some(2) => break 2,
                Some(1) => break 1,
                Some(_) => break 3,
                None => {}
            }
            state.insert(v, 1);
            walk.push(v);
            match t.parent.get(&v) {
                Some(&p) => v = p,
                None => {
                    violations.push(TreeViolation::UnreachableRoot {
                        vertex: start,
                        dangling: v,
                    });
                    break 3;
                }
            }
        };
        if outcome == 1 {
            // `v` is on the current walk; name the cycle by its smallest vertex.
            let from = walk.iter().position(|&x| x == v).expect("cycle closes on walk");
            let rep = *walk[from..].iter().min().unwrap();
            if cyclic.insert(rep) {
                violations.push(TreeViolation::Cycle(rep));
            }
        }
        let mark = if outcome == 2 { 2 } else { 3 };
        for w in walk {
            state.insert(w, mark);
        }
    }

    let spanning = t.len() == n && t.vertices().iter().all(|&v| v < n);
    TreeReport {
        violations,
        leaf_count: t.leaf_count(),
        spanning,
    }
}

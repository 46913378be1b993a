//! Path decompositions and vertex separation of linear orderings.

use std::collections::BTreeSet;

use crate::digraph::UndirectedGraph;
use crate::error::GraphError;

/// Ordered bags over an undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub bags: Vec<BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionViolation {
    VertexOutOfRange(usize),
    VertexUncovered(usize),
    EdgeUncovered(usize, usize),
    NotContiguous(usize),
}

impl std::fmt::Display for DecompositionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecompositionViolation::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            DecompositionViolation::VertexUncovered(v) => write!(f, "vertex {v} in no bag"),
            DecompositionViolation::EdgeUncovered(u, v) => write!(f, "edge {{{u},{v}}} in no bag"),
            DecompositionViolation::NotContiguous(v) => {
                write!(f, "bags containing {v} are not contiguous")
            }
        }
    }
}

impl PathDecomposition {
    /// Largest bag size minus one; `-1` for no bags or only empty bags.
    pub fn width(&self) -> isize {
        self.bags.iter().map(|b| b.len() as isize).max().unwrap_or(0) - 1
    }

    /// Checks vertex coverage, edge coverage and contiguity against `g`.
    pub fn violations(&self, g: &UndirectedGraph) -> Vec<DecompositionViolation> {
        let n = g.n();
        let mut out = Vec::new();
        let mut first = vec![usize::MAX; n];
        let mut last = vec![0usize; n];
        let mut count = vec![0usize; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    out.push(DecompositionViolation::VertexOutOfRange(v));
                    continue;
                }
                first[v] = first[v].min(i);
                last[v] = i;
                count[v] += 1;
            }
        }
        for v in 0..n {
            if count[v] == 0 {
                out.push(DecompositionViolation::VertexUncovered(v));
            } else if last[v] - first[v] + 1 != count[v] {
                out.push(DecompositionViolation::NotContiguous(v));
            }
        }
        for (u, v) in g.edges() {
            if count[u] == 0 || count[v] == 0 {
                continue;
            }
            // With contiguous intervals an edge is covered iff they overlap;
            // fall back to a scan when contiguity is already broken.
            let covered = if last[u] - first[u] + 1 == count[u] && last[v] - first[v] + 1 == count[v] {
                first[u].max(first[v]) <= last[u].min(last[v])
            } else {
                self.bags.iter().any(|b| b.contains(&u) && b.contains(&v))
            };
            if !covered {
                out.push(DecompositionViolation::EdgeUncovered(u, v));
            }
        }
        out
    }

    pub fn is_valid_for(&self, g: &UndirectedGraph) -> bool {
        self.violations(g).is_empty()
    }
}

fn check_permutation(n: usize, order: &[usize]) -> Result<Vec<usize>, GraphError> {
    if order.len() != n {
        return Err(GraphError::Contract(format!(
            "ordering has {} entries for {n} vertices",
            order.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(GraphError::Contract(format!("ordering is not a permutation (at {v})")));
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// Position of the last neighbour of each vertex, or its own position.
fn reach(g: &UndirectedGraph, pos: &[usize]) -> Vec<usize> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().map(|&w| pos[w]).fold(pos[v], usize::max))
        .collect()
}

/// `max_j |∂V_j|` where `V_j` is the prefix of length `j` and `∂V_j` its
/// vertices with a neighbour outside the prefix.
pub fn vertex_separation(g: &UndirectedGraph, order: &[usize]) -> Result<usize, GraphError> {
    let pos = check_permutation(g.n(), order)?;
    let reach = reach(g, &pos);
    // A vertex at position p is on the boundary of prefixes p+1 ..= reach.
    let mut delta = vec![0isize; g.n() + 2];
    for v in 0..g.n() {
        if reach[v] > pos[v] {
            delta[pos[v] + 1] += 1;
            delta[reach[v] + 1] -= 1;
        }
    }
    let mut best = 0isize;
    let mut cur = 0isize;
    for d in delta {
        cur += d;
        best = best.max(cur);
    }
    Ok(best as usize)
}

/// Bag `j` holds `order[j]` and every earlier vertex with a neighbour at
/// position `>= j`. The width equals `vertex_separation(g, order)`.
pub fn ordering_to_path_decomposition(
    g: &UndirectedGraph,
    order: &[usize],
) -> Result<PathDecomposition, GraphError> {
    let pos = check_permutation(g.n(), order)?;
    let reach = reach(g, &pos);
    let mut active: BTreeSet<usize> = BTreeSet::new();
    let mut bags = Vec::with_capacity(order.len());
    for (j, &v) in order.iter().enumerate() {
        active.retain(|&u| reach[u] >= j);
        let mut bag = active.clone();
        bag.insert(v);
        bags.push(bag);
        active.insert(v);
    }
    Ok(PathDecomposition { bags })
}

/// Greedy low-separation ordering: repeatedly places the vertex that keeps
/// the boundary of the placed prefix smallest, preferring vertices with few
/// unplaced neighbours, then smaller ids.
pub fn greedy_ordering(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut rem: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<((isize, usize), usize)> = None;
        for v in (0..n).filter(|&v| !placed[v]) {
            let closes = g.neighbors(v).iter().filter(|&&u| placed[u] && rem[u] == 1).count() as isize;
            let opens = isize::from(g.neighbors(v).iter().any(|&u| !placed[u]));
            let key = (opens - closes, rem[v]);
            if best.is_none_or(|(b, _)| key < b) {
                best = Some((key, v));
            }
        }
        let (_, v) = best.expect("an unplaced vertex remains");
        placed[v] = true;
        for &u in g.neighbors(v) {
            rem[u] -= 1;
        }
        order.push(v);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> UndirectedGraph {
        UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn path(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn separation_examples() {
        assert_eq!(vertex_separation(&cycle4(), &[0, 1, 2, 3]).unwrap(), 2);
        assert_eq!(vertex_separation(&path(6), &[0, 1, 2, 3, 4, 5]).unwrap(), 1);
    }

    #[test]
    fn path_graph_bags() {
        let pd = ordering_to_path_decomposition(&path(4), &[0, 1, 2, 3]).unwrap();
        let bags: Vec<Vec<usize>> = pd.bags.iter().map(|b| b.iter().copied().collect()).collect();
        assert_eq!(bags, vec![vec![0], vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(pd.width(), 1);
        assert!(pd.is_valid_for(&path(4)));
    }

    #[test]
    fn cycle_bags() {
        let pd = ordering_to_path_decomposition(&cycle4(), &[0, 1, 2, 3]).unwrap();
        assert!(pd.is_valid_for(&cycle4()));
        assert_eq!(pd.width(), 2);
    }

    #[test]
    fn greedy_ordering_on_paths_and_cycles() {
        let p = path(7);
        let order = greedy_ordering(&p);
        assert_eq!(vertex_separation(&p, &order).unwrap(), 1);
        assert_eq!(vertex_separation(&cycle4(), &greedy_ordering(&cycle4())).unwrap(), 2);
    }

    #[test]
    fn non_permutation_is_rejected() {
        assert!(vertex_separation(&cycle4(), &[0, 1, 1, 3]).is_err());
        assert!(ordering_to_path_decomposition(&cycle4(), &[0, 1, 2]).is_err());
    }

    #[test]
    fn violations_are_detected() {
        let g = path(3);
        let pd = PathDecomposition {
            bags: vec![[0].into(), [1, 2].into(), [0].into()],
        };
        let v = pd.violations(&g);
        assert!(v.contains(&DecompositionViolation::NotContiguous(0)));
        assert!(v.contains(&DecompositionViolation::EdgeUncovered(0, 1)));
        let pd = PathDecomposition { bags: vec![[0, 1].into()] };
        assert!(pd.violations(&g).contains(&DecompositionViolation::VertexUncovered(2)));
    }
}

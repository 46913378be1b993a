//! Out-branchings, the path cover they induce, off-path out-neighbours
//! and trimming.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::digraph::{check_vertex, Digraph};
use crate::error::GraphError;
use crate::scc::{source_strong_components, strongly_connected_components};
use crate::tree::{validate_out_tree, OutTree};

/// Vertex-disjoint directed paths covering the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCover {
    pub paths: Vec<Vec<usize>>,
}

impl PathCover {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `(path index, position)` for every covered vertex.
    pub fn positions(&self, n: usize) -> Vec<Option<(usize, usize)>> {
        let mut pos = vec![None; n];
        for (pi, path) in self.paths.iter().enumerate() {
            for (i, &v) in path.iter().enumerate() {
                if v < n {
                    pos[v] = Some((pi, i));
                }
            }
        }
        pos
    }

    /// Disjoint, covering, and every consecutive pair is an arc of `d`.
    pub fn is_valid_for(&self, d: &Digraph) -> bool {
        let mut seen = vec![false; d.n()];
        for path in &self.paths {
            if path.is_empty() {
                return false;
            }
            for &v in path {
                if v >= d.n() || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            if path.windows(2).any(|w| !d.has_arc(w[0], w[1])) {
                return false;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Breadth-first out-branching from `root`, or from the smallest vertex of
/// the unique source strong component.
pub fn find_out_branching(d: &Digraph, root: Option<usize>) -> Result<OutTree, GraphError> {
    let root = match root {
        Some(r) => {
            check_vertex(d, r)?;
            r
        }
        None => {
            let c = strongly_connected_components(d);
            let sources = source_strong_components(&c);
            if sources.len() != 1 {
                return Err(GraphError::NoOutBranching {
                    components: sources.iter().map(|&s| c.components[s].clone()).collect(),
                });
            }
            c.components[sources[0]][0]
        }
    };

    let mut parent = BTreeMap::new();
    let mut seen = vec![false; d.n()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in d.out_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(GraphError::Unreachable { root, vertex: v });
    }
    Ok(OutTree {
        root,
        parent,
        host_size: d.n(),
    })
}

/// Repeatedly cuts off, for the smallest remaining leaf, the segment after
/// the last vertex with out-degree at least two on its root path, until the
/// remaining tree is a path. Yields one path per leaf.
pub fn path_cover_from_out_branching(d: &Digraph, t: &OutTree) -> Result<PathCover, GraphError> {
    let report = validate_out_tree(d, t);
    if !report.is_valid() {
        let msg: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(GraphError::Contract(format!("invalid out-branching: {}", msg.join("; "))));
    }
    if !report.spanning {
        return Err(GraphError::Contract("out-tree is not spanning".into()));
    }

    let n = d.n();
    let mut children: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (p, c) in t.arcs() {
        children[p].insert(c);
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| children[v].is_empty()).collect();
    let mut branching = children.iter().filter(|c| c.len() >= 2).count();
    let mut paths = Vec::new();

    while branching > 0 {
        let leaf = leaves.pop_first().expect("a branching tree has leaves");
        let mut segment = vec![leaf];
        let mut v = leaf;
        loop {
            let p = t.parent[&v];
            if children[p].len() >= 2 {
                children[p].remove(&v);
                if children[p].len() == 1 {
                    branching -= 1;
                }
                break;
            }
            segment.push(p);
            v = p;
        }
        segment.reverse();
        paths.push(segment);
    }

    let mut last = vec![t.root];
    let mut v = t.root;
    while let Some(&c) = children[v].first() {
        last.push(c);
        v = c;
    }
    paths.push(last);
    Ok(PathCover { paths })
}

/// Vertices off `path` that are heads of arcs with tails on `path`.
pub fn off_path_out_neighbors(d: &Digraph, path: &[usize]) -> BTreeSet<usize> {
    off_path_choices(d, path).into_keys().collect()
}

/// Each off-path out-neighbour mapped to its earliest in-neighbour on `path`.
pub fn off_path_choices(d: &Digraph, path: &[usize]) -> BTreeMap<usize, usize> {
    let on: BTreeSet<usize> = path.iter().copied().collect();
    let mut choice = BTreeMap::new();
    for &u in path {
        for &w in d.out_neighbors(u) {
            if !on.contains(&w) {
                choice.entry(w).or_insert(u);
            }
        }
    }
    choice
}

/// The path plus one arc into each off-path vertex; every such vertex is a
/// leaf.
pub fn witness_from_off_path(
    path: &[usize],
    attach: &BTreeMap<usize, usize>,
    host_size: usize,
) -> OutTree {
    let arcs = path
        .windows(2)
        .map(|w| (w[0], w[1]))
        .chain(attach.iter().map(|(&w, &tail)| (tail, w)));
    OutTree::from_arcs(path[0], host_size, arcs)
}

/// Deletes every arc at a vertex of `around` except the arcs of its own
/// cover path.
pub fn trim_around(
    d: &Digraph,
    around: &BTreeSet<usize>,
    cover: &PathCover,
) -> Result<Digraph, GraphError> {
    let pos = cover.positions(d.n());
    let mut keep_at: BTreeMap<usize, [Option<usize>; 2]> = BTreeMap::new();
    for &v in around {
        check_vertex(d, v)?;
        let (pi, i) = pos[v]
            .ok_or_else(|| GraphError::Contract(format!("vertex {v} lies on no cover path")))?;
        let path = &cover.paths[pi];
        let pred = i.checked_sub(1).map(|j| path[j]);
        let succ = path.get(i + 1).copied();
        keep_at.insert(v, [pred, succ]);
    }
    let allowed = |u: usize, v: usize| -> bool {
        let out_ok = keep_at.get(&u).is_none_or(|k| k[1] == Some(v));
        let in_ok = keep_at.get(&v).is_none_or(|k| k[0] == Some(u));
        out_ok && in_ok
    };
    let removed: BTreeSet<(usize, usize)> = d.arcs().filter(|&(u, v)| !allowed(u, v)).collect();
    Ok(d.without_arcs(&removed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digraph(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn branching_of_a_cycle_is_a_path() {
        let d = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let t = find_out_branching(&d, None).unwrap();
        assert_eq!(t.leaf_count(), 1);
        assert!(t.is_spanning());
    }

    #[test]
    fn branching_of_a_star() {
        let d = digraph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let t = find_out_branching(&d, None).unwrap();
        assert_eq!(t, OutTree::from_arcs(0, 5, [(0, 1), (0, 2), (0, 3), (0, 4)]));
    }

    #[test]
    fn no_branching_names_sources() {
        let d = digraph(4, &[(0, 1), (2, 3)]);
        match find_out_branching(&d, None) {
            Err(GraphError::NoOutBranching { components }) => {
                assert_eq!(components.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            find_out_branching(&d, Some(0)),
            Err(GraphError::Unreachable { root: 0, vertex: 2 })
        ));
    }

    #[test]
    fn star_cover() {
        let d = digraph(4, &[(0, 1), (0, 2), (0, 3)]);
        let t = OutTree::from_arcs(0, 4, [(0, 1), (0, 2), (0, 3)]);
        let cover = path_cover_from_out_branching(&d, &t).unwrap();
        assert_eq!(cover.paths, vec![vec![1], vec![2], vec![0, 3]]);
    }

    #[test]
    fn path_cover_of_a_path() {
        let d = digraph(4, &[(0, 1), (1, 2), (2, 3)]);
        let t = find_out_branching(&d, None).unwrap();
        let cover = path_cover_from_out_branching(&d, &t).unwrap();
        assert_eq!(cover.paths, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn binary_tree_cover() {
        let arcs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)];
        let d = digraph(7, &arcs);
        let t = OutTree::from_arcs(0, 7, arcs);
        let cover = path_cover_from_out_branching(&d, &t).unwrap();
        assert_eq!(cover.paths, vec![vec![3], vec![1, 4], vec![5], vec![0, 2, 6]]);
        assert!(cover.is_valid_for(&d));
    }

    #[test]
    fn cover_rejects_non_spanning() {
        let d = digraph(3, &[(0, 1), (1, 2)]);
        let t = OutTree::from_arcs(0, 3, [(0, 1)]);
        assert!(path_cover_from_out_branching(&d, &t).is_err());
    }

    #[test]
    fn off_path_neighbors() {
        let d = digraph(6, &[(0, 1), (1, 2), (1, 4), (2, 5), (3, 0)]);
        assert_eq!(off_path_out_neighbors(&d, &[0, 1, 2]), BTreeSet::from([4, 5]));
        let c3 = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(off_path_out_neighbors(&c3, &[0, 1, 2]).is_empty());
    }

    #[test]
    fn off_path_witness() {
        let attach = BTreeMap::from([(4, 1), (5, 2)]);
        let t = witness_from_off_path(&[0, 1, 2], &attach, 6);
        assert_eq!(t.leaves(), vec![4, 5]);
        let t = witness_from_off_path(&[0, 1, 2], &BTreeMap::new(), 6);
        assert_eq!(t.leaves(), vec![2]);
        let attach: BTreeMap<usize, usize> = (3..10).map(|w| (w, w % 3)).collect();
        assert!(witness_from_off_path(&[0, 1, 2], &attach, 10).leaf_count() >= 7);
    }

    #[test]
    fn trimming_keeps_path_arcs_only() {
        let d = digraph(5, &[(0, 1), (1, 2), (3, 1), (1, 4), (4, 3), (2, 0)]);
        let cover = PathCover {
            paths: vec![vec![0, 1, 2], vec![4, 3]],
        };
        let t = trim_around(&d, &BTreeSet::from([1]), &cover).unwrap();
        assert_eq!(t.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0), (4, 3)]);
        assert_eq!(trim_around(&d, &BTreeSet::new(), &cover).unwrap(), d);
        let partial = PathCover { paths: vec![vec![0]] };
        assert!(trim_around(&d, &BTreeSet::from([3]), &partial).is_err());
    }
}

//! Forward arcs of a Hamiltonian path and the interval argument that turns
//! many of them into an out-tree with many leaves.
//!
//! A forward arc `p[i] -> p[j]` (`i <= j - 2`) covers the interval
//! `[i, j - 1]`. Either `k - 1` pairwise disjoint intervals exist, giving a
//! chain-shaped tree, or some position lies in `k` intervals, giving a
//! prefix of the path with `k` heads hanging off it. Interval graphs are
//! perfect, so a path with more than `(k - 2)(k - 1)` forward-arc heads
//! always yields one of the two.

use std::collections::BTreeMap;

use crate::digraph::Digraph;
use crate::tree::OutTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ForwardArc {
    /// Position of the tail on the path.
    pub i: usize,
    /// Position of the head on the path; `i + 2 <= j`.
    pub j: usize,
    pub tail: usize,
    pub head: usize,
}

/// Arcs of `d` between path vertices that skip at least one position,
/// ordered by `(i, j)`.
pub fn forward_arcs_on_path(d: &Digraph, path: &[usize]) -> Vec<ForwardArc> {
    let mut pos = BTreeMap::new();
    for (i, &v) in path.iter().enumerate() {
        pos.insert(v, i);
    }
    let mut out = Vec::new();
    for (i, &u) in path.iter().enumerate() {
        for &w in d.out_neighbors(u) {
            if let Some(&j) = pos.get(&w) {
                if i + 2 <= j {
                    out.push(ForwardArc { i, j, tail: u, head: w });
                }
            }
        }
    }
    out.sort();
    out
}

/// Heads of forward arcs, ascending.
pub fn forward_arc_heads(arcs: &[ForwardArc]) -> Vec<usize> {
    let mut heads: Vec<usize> = arcs.iter().map(|a| a.head).collect();
    heads.sort_unstable();
    heads.dedup();
    heads
}

/// Keeps one arc per head: the shortest, ties to the smaller tail position.
pub fn one_arc_per_head(arcs: &[ForwardArc]) -> Vec<ForwardArc> {
    let mut best: BTreeMap<usize, ForwardArc> = BTreeMap::new();
    for &a in arcs {
        best.entry(a.j)
            .and_modify(|b| {
                if (a.j - a.i, a.i) < (b.j - b.i, b.i) {
                    *b = a;
                }
            })
            .or_insert(a);
    }
    let mut out: Vec<ForwardArc> = best.into_values().collect();
    out.sort();
    out
}

/// Maximum set of pairwise disjoint intervals `[i, j - 1]`, greedily by
/// right endpoint. Returned in path order.
pub fn max_disjoint(arcs: &[ForwardArc]) -> Vec<ForwardArc> {
    let mut sorted = arcs.to_vec();
    sorted.sort_by_key(|a| (a.j, a.i));
    let mut chosen: Vec<ForwardArc> = Vec::new();
    for a in sorted {
        if chosen.last().is_none_or(|c| a.i >= c.j) {
            chosen.push(a);
        }
    }
    chosen
}

/// A position covered by the most intervals, with the covering arcs.
/// Ties go to the smallest position.
pub fn max_coverage(arcs: &[ForwardArc]) -> Option<(usize, Vec<ForwardArc>)> {
    let len = arcs.iter().map(|a| a.j).max()?;
    let mut delta = vec![0isize; len + 1];
    for a in arcs {
        delta[a.i] += 1;
        delta[a.j] -= 1;
    }
    let (mut best_h, mut best, mut cur) = (0, 0, 0);
    for (h, d) in delta.iter().enumerate() {
        cur += d;
        if cur > best {
            best = cur;
            best_h = h;
        }
    }
    let covering = arcs
        .iter()
        .copied()
        .filter(|a| a.i <= best_h && best_h < a.j)
        .collect();
    Some((best_h, covering))
}

/// Out-tree with at least `k` leaves built from forward arcs (one per head),
/// or `None` when neither interval structure is large enough.
pub fn witness_from_forward_arcs(
    path: &[usize],
    arcs: &[ForwardArc],
    k: usize,
    host_size: usize,
) -> Option<OutTree> {
    if arcs.is_empty() || k < 2 {
        return None;
    }
    let disjoint = max_disjoint(arcs);
    if disjoint.len() >= k - 1 {
        let chain = &disjoint[..k - 1];
        let mut tree_arcs = Vec::new();
        for (s, a) in chain.iter().enumerate() {
            tree_arcs.push((path[a.i], path[a.j]));
            tree_arcs.push((path[a.i], path[a.i + 1]));
            if let Some(next) = chain.get(s + 1) {
                tree_arcs.extend((a.j..next.i).map(|x| (path[x], path[x + 1])));
            }
        }
        return Some(OutTree::from_arcs(path[chain[0].i], host_size, tree_arcs));
    }
    let (h, covering) = max_coverage(arcs)?;
    if covering.len() >= k {
        let tree_arcs = (0..h)
            .map(|x| (path[x], path[x + 1]))
            .chain(covering[..k].iter().map(|a| (a.tail, a.head)));
        return Some(OutTree::from_arcs(path[0], host_size, tree_arcs));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fa(path: &[usize], i: usize, j: usize) -> ForwardArc {
        ForwardArc { i, j, tail: path[i], head: path[j] }
    }

    #[test]
    fn classification() {
        let path = [0, 1, 2, 3, 4];
        let d = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (2, 0), (1, 0)]).unwrap();
        assert_eq!(forward_arcs_on_path(&d, &path), vec![fa(&path, 0, 2)]);
        let plain = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(forward_arcs_on_path(&plain, &path).is_empty());
    }

    #[test]
    fn reduction_keeps_shortest() {
        let p = [0, 1, 2, 3, 4, 5];
        let arcs = vec![fa(&p, 0, 4), fa(&p, 2, 4), fa(&p, 1, 3)];
        assert_eq!(one_arc_per_head(&arcs), vec![fa(&p, 1, 3), fa(&p, 2, 4)]);
    }

    #[test]
    fn chain_witness() {
        // u1..u6 as ids 0..5; forward arcs (1,3) and (3,5) in 1-indexed positions.
        let p = [0, 1, 2, 3, 4, 5];
        let arcs = vec![fa(&p, 0, 2), fa(&p, 2, 4)];
        let t = witness_from_forward_arcs(&p, &arcs, 3, 6).unwrap();
        let mut got: Vec<_> = t.arcs().collect();
        got.sort();
        assert_eq!(got, vec![(0, 1), (0, 2), (2, 3), (2, 4)]);
        assert_eq!(t.leaves(), vec![1, 3, 4]);
    }

    #[test]
    fn clique_witness() {
        let p = [0, 1, 2, 3, 4, 5];
        let arcs = vec![fa(&p, 0, 3), fa(&p, 1, 4), fa(&p, 2, 5)];
        let t = witness_from_forward_arcs(&p, &arcs, 3, 6).unwrap();
        let mut got: Vec<_> = t.arcs().collect();
        got.sort();
        assert_eq!(got, vec![(0, 1), (0, 3), (1, 2), (1, 4), (2, 5)]);
        assert_eq!(t.leaves(), vec![3, 4, 5]);
    }

    #[test]
    fn no_arcs_no_witness() {
        assert!(witness_from_forward_arcs(&[0, 1, 2], &[], 3, 3).is_none());
    }

    #[test]
    fn greedy_disjoint_and_coverage() {
        let p: Vec<usize> = (0..10).collect();
        let arcs = vec![fa(&p, 0, 5), fa(&p, 1, 3), fa(&p, 3, 5), fa(&p, 5, 9), fa(&p, 6, 8)];
        let dis = max_disjoint(&arcs);
        assert_eq!(dis, vec![fa(&p, 1, 3), fa(&p, 3, 5), fa(&p, 6, 8)]);
        let (h, cov) = max_coverage(&arcs).unwrap();
        assert_eq!(h, 1);
        assert_eq!(cov, vec![fa(&p, 0, 5), fa(&p, 1, 3)]);
    }
}

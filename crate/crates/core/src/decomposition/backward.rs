use std::collections::BTreeMap;

use crate::decomposition::separation::vertex_separation;
use crate::digraph::{Digraph, UndirectedGraph};
use crate::error::GraphError;
use crate::tree::OutTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackwardOutcome {
    /// The path order, whose vertex separation is at most `k`.
    Ordering { order: Vec<usize>, separation: usize },
    Witness(OutTree),
}

/// Scans prefixes of `path` in a digraph where the path carries only its
/// own arcs and backward arcs. If some prefix has `k` vertices with
/// in-neighbours in the suffix, the suffix path plus one backward arc into
/// each of them is returned; otherwise the path order is a linear layout of
/// separation at most `k`.
pub fn backward_component_check(
    d: &Digraph,
    path: &[usize],
    k: usize,
) -> Result<BackwardOutcome, GraphError> {
    let q = path.len();
    let mut pos = BTreeMap::new();
    for (i, &v) in path.iter().enumerate() {
        pos.insert(v, i);
    }
    // For each position, the farthest in-neighbour position on the path.
    let mut farthest_in: Vec<Option<usize>> = vec![None; q];
    let mut local_edges = Vec::new();
    for (a, &u) in path.iter().enumerate() {
        for &w in d.out_neighbors(u) {
            let Some(&b) = pos.get(&w) else {
                return Err(GraphError::Contract(format!("arc {u} -> {w} leaves the path")));
            };
            match b {
                _ if b == a + 1 => {}
                _ if b < a => farthest_in[b] = farthest_in[b].max(Some(a)),
                _ => return Err(GraphError::Contract(format!("non-backward chord {u} -> {w}"))),
            }
            local_edges.push((a, b));
        }
        for &w in d.in_neighbors(u) {
            if !pos.contains_key(&w) {
                return Err(GraphError::Contract(format!("arc {w} -> {u} enters the path")));
            }
        }
    }

    // Prefix of length j (positions < j) counts position a when
    // a < j <= farthest_in[a].
    let mut delta = vec![0isize; q + 2];
    for (a, f) in farthest_in.iter().enumerate() {
        if let Some(f) = *f {
            delta[a + 1] += 1;
            delta[f + 1] -= 1;
        }
    }
    let mut cur = 0isize;
    for j in 1..q {
        cur += delta[j];
        if cur as usize >= k {
            let targets: Vec<usize> = (0..j)
                .filter(|&a| farthest_in[a].is_some_and(|f| f >= j))
                .take(k)
                .collect();
            let mut arcs: Vec<(usize, usize)> = (j..q - 1).map(|x| (path[x], path[x + 1])).collect();
            for a in targets {
                let v = path[a];
                let tail = d
                    .in_neighbors(v)
                    .iter()
                    .map(|w| pos[w])
                    .filter(|&b| b >= j)
                    .min()
                    .expect("counted vertices have a suffix in-neighbour");
                arcs.push((path[tail], v));
            }
            return Ok(BackwardOutcome::Witness(OutTree::from_arcs(path[j], d.n(), arcs)));
        }
    }

    let g = UndirectedGraph::from_edges(q, local_edges).expect("local edges are valid");
    let local_order: Vec<usize> = (0..q).collect();
    let separation = vertex_separation(&g, &local_order)?;
    Ok(BackwardOutcome::Ordering {
        order: path.to_vec(),
        separation,
    })
}

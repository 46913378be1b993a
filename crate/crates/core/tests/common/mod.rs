//! Shared helpers for the integration tests: instance streams and oracles
//! that do not share code with the library.

#![allow(dead_code)]

use leafbranch::digraph::{Digraph, UndirectedGraph};
use leafbranch::generators::{gen, Family, GenSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every labelled digraph on `n` vertices, in mask order.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let arcs = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a);
        Digraph::from_arcs(n, arcs).unwrap()
    })
}

/// Each ordered pair becomes an arc with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, arcs).unwrap()
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(n, edges).unwrap()
}

/// Mixed seeded instances with `n` in `lo..=hi`.
pub fn mixed_instances(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<(String, Digraph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count {
        i += 1;
        let n = rng.random_range(lo..=hi);
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
        let family = match i % 6 {
            0 => Family::StrongRandom { n, extra: rng.random_range(0..=n) },
            1 => Family::MinInDegreeRandom { n, d: rng.random_range(1..=2), oriented: false },
            2 => Family::MinInDegreeRandom { n, d: 2, oriented: true },
            3 => Family::TournamentRandom { n },
            _ => {
                let p = [0.15, 0.25, 0.4][rng.random_range(0..3)];
                out.push((format!("gnp({n},{p},{s})"), random_digraph(n, p, s)));
                continue;
            }
        };
        let spec = GenSpec::new(family, s);
        if let Ok(d) = gen(&spec) {
            out.push((format!("{}#{}", spec.family, s), d));
        }
    }
    out
}

/// Best leaf count by enumerating a root and, for every other vertex, a
/// parent among its in-neighbours (or absence, when not spanning).
pub fn parent_map_oracle(d: &Digraph, spanning: bool) -> usize {
    let n = d.n();
    assert!(n <= 6, "parent-map oracle is exponential");
    let mut best = 0;
    for root in 0..n {
        let mut choice = vec![None::<usize>; n];
        enumerate(d, root, 0, spanning, &mut choice, &mut best);
    }
    best
}

fn enumerate(d: &Digraph, root: usize, v: usize, spanning: bool, choice: &mut Vec<Option<usize>>, best: &mut usize) {
    let n = d.n();
    if v == n {
        if let Some(leaves) = evaluate(n, root, choice) {
            *best = (*best).max(leaves);
        }
        return;
    }
    if v == root {
        enumerate(d, root, v + 1, spanning, choice, best);
        return;
    }
    if !spanning {
        choice[v] = None;
        enumerate(d, root, v + 1, spanning, choice, best);
    }
    for &u in d.in_neighbors(v) {
        choice[v] = Some(u);
        enumerate(d, root, v + 1, spanning, choice, best);
    }
    choice[v] = None;
}

/// Leaf count if the parent choices form an out-tree rooted at `root`.
fn evaluate(n: usize, root: usize, choice: &[Option<usize>]) -> Option<usize> {
    let member: Vec<bool> = (0..n).map(|v| v == root || choice[v].is_some()).collect();
    for v in 0..n {
        if !member[v] {
            continue;
        }
        let mut at = v;
        let mut steps = 0;
        while at != root {
            at = choice[at]?;
            if !member[at] {
                return None;
            }
            steps += 1;
            if steps > n {
                return None;
            }
        }
    }
    let mut has_child = vec![false; n];
    for c in choice.iter().flatten() {
        has_child[*c] = true;
    }
    Some((0..n).filter(|&v| member[v] && !has_child[v]).count())
}

/// Minimum vertex separation over all orderings, by dynamic programming
/// over prefix sets.
pub fn min_vertex_separation(g: &UndirectedGraph) -> usize {
    let n = g.n();
    let nb: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full = (1u32 << n) - 1;
    let boundary = |s: u32| (0..n).filter(|&v| s >> v & 1 == 1 && nb[v] & !s != 0).count();
    let mut f = vec![usize::MAX; 1 << n];
    f[0] = 0;
    for s in 1..=full {
        let b = boundary(s);
        let mut best = usize::MAX;
        for v in 0..n {
            if s >> v & 1 == 1 {
                best = best.min(f[(s & !(1 << v)) as usize].max(b));
            }
        }
        f[s as usize] = best;
    }
    f[full as usize]
}

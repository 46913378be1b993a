//! Exhaustive oracles for small digraphs.
//!
//! Any out-tree is determined, as far as its leaf count goes, by its set of
//! non-leaf vertices `I`: `I` induces a subdigraph with an out-branching,
//! and every leaf is an out-neighbour of `I` outside `I`. Conversely any
//! such `I` extends to an out-tree whose leaves include all of
//! `N⁺(I) \ I`. Enumerating all `2ⁿ` candidate sets therefore gives exact
//! optima for both the spanning and the non-spanning problem.

use std::collections::{BTreeMap, VecDeque};

use crate::digraph::Digraph;
use crate::error::SolveError;
use crate::tree::OutTree;

pub const BRUTE_FORCE_MAX_N: usize = 12;

struct Masks {
    n: usize,
    out: Vec<u32>,
    inn: Vec<u32>,
}

impl Masks {
    fn new(d: &Digraph) -> Result<Self, SolveError> {
        if d.n() > BRUTE_FORCE_MAX_N {
            return Err(SolveError::OracleBudget {
                n: d.n(),
                limit: BRUTE_FORCE_MAX_N,
            });
        }
        let mask = |list: &[usize]| list.iter().fold(0u32, |m, &v| m | (1 << v));
        Ok(Masks {
            n: d.n(),
            out: (0..d.n()).map(|v| mask(d.out_neighbors(v))).collect(),
            inn: (0..d.n()).map(|v| mask(d.in_neighbors(v))).collect(),
        })
    }

    fn out_of(&self, set: u32) -> u32 {
        bits(set).fold(0, |m, v| m | self.out[v])
    }

    /// Smallest `r` in `set` from which all of `set` is reachable inside it.
    fn root_of(&self, set: u32) -> Option<usize> {
        bits(set).find(|&r| {
            let mut reach = 1u32 << r;
            loop {
                let next = reach | (self.out_of(reach) & set);
                if next == reach {
                    break reach == set;
                }
                reach = next;
            }
        })
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Out-tree with internal set `inner` rooted at `root`, plus every vertex of
/// `attach` hung off its smallest in-neighbour in `inner`.
fn build_tree(d: &Digraph, m: &Masks, inner: u32, root: usize, attach: u32) -> OutTree {
    let mut parent = BTreeMap::new();
    let mut seen = 1u32 << root;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in d.out_neighbors(u) {
            if inner & (1 << w) != 0 && seen & (1 << w) == 0 {
                seen |= 1 << w;
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    for v in bits(attach) {
        let tail = bits(m.inn[v] & inner).next().expect("attached vertices have an in-neighbour");
        parent.insert(v, tail);
    }
    OutTree {
        root,
        parent,
        host_size: m.n,
    }
}

/// Exact `ℓ_s(d)` (0 when there is no out-branching) with a maximizing
/// out-branching.
pub fn brute_force_out_branching(d: &Digraph) -> Result<(usize, Option<OutTree>), SolveError> {
    let m = Masks::new(d)?;
    let n = m.n;
    if n == 0 {
        return Ok((0, None));
    }
    let full: u32 = (1 << n) - 1;
    let mut best: Option<(usize, u32, usize)> = None;
    for inner in 1..=full {
        let outside = full & !inner;
        if bits(outside).any(|v| m.inn[v] & inner == 0) {
            continue;
        }
        let value = (outside.count_ones() as usize).max(1);
        if best.is_some_and(|(b, _, _)| b >= value) {
            continue;
        }
        if let Some(r) = m.root_of(inner) {
            best = Some((value, inner, r));
        }
    }
    Ok(match best {
        None => (0, None),
        Some((value, inner, r)) => {
            let t = build_tree(d, &m, inner, r, full & !inner);
            debug_assert_eq!(t.leaf_count(), value);
            (value, Some(t))
        }
    })
}

/// Exact `ℓ(d)` over all out-trees, with a maximizing out-tree.
pub fn brute_force_out_tree(d: &Digraph) -> Result<(usize, Option<OutTree>), SolveError> {
    let m = Masks::new(d)?;
    let n = m.n;
    if n == 0 {
        return Ok((0, None));
    }
    let full: u32 = (1 << n) - 1;
    let mut best: Option<(usize, u32, usize)> = None;
    for inner in 1..=full {
        let attach = m.out_of(inner) & !inner;
        let value = (attach.count_ones() as usize).max(1);
        if best.is_some_and(|(b, _, _)| b >= value) {
            continue;
        }
        if let Some(r) = m.root_of(inner) {
            best = Some((value, inner, r));
        }
    }
    let (value, inner, r) = best.expect("singletons are always valid");
    let attach = m.out_of(inner) & !inner;
    let t = build_tree(d, &m, inner, r, attach);
    debug_assert_eq!(t.leaf_count(), value);
    Ok((value, Some(t)))
}

/// True iff `ℓ_s(d) = 0` or `ℓ_s(d) = ℓ(d)`, by the exhaustive oracles.
pub fn in_l_exact(d: &Digraph, budget: usize) -> Result<bool, SolveError> {
    let limit = budget.min(BRUTE_FORCE_MAX_N);
    if d.n() > limit {
        return Err(SolveError::OracleBudget { n: d.n(), limit });
    }
    let (ls, _) = brute_force_out_branching(d)?;
    if ls == 0 {
        return Ok(true);
    }
    let (l, _) = brute_force_out_tree(d)?;
    Ok(ls == l)
}

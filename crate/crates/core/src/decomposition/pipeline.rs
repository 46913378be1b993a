//! Either an out-tree with at least `k` leaves or a path decomposition of
//! the underlying undirected graph of width at most `k³`.

use std::collections::BTreeSet;
use std::fmt;

use crate::decomposition::backward::{backward_component_check, BackwardOutcome};
use crate::decomposition::cover::{
    find_out_branching, off_path_choices, path_cover_from_out_branching, trim_around,
    witness_from_off_path, PathCover,
};
use crate::decomposition::forward::{
    forward_arc_heads, forward_arcs_on_path, one_arc_per_head, witness_from_forward_arcs,
};
use crate::decomposition::separation::{ordering_to_path_decomposition, PathDecomposition};
use crate::digraph::{check_vertex, Digraph, UndirectedGraph};
use crate::error::DecomposeError;
use crate::tree::{validate_out_tree, OutTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    OutBranching,
    PathCover,
    OffPath,
    TrimOffPath,
    ForwardArcs,
    TrimForward,
    BackwardCheck,
    Assemble,
}

impl Stage {
    pub fn tag(self) -> &'static str {
        match self {
            Stage::OutBranching => "out-branching",
            Stage::PathCover => "path-cover",
            Stage::OffPath => "off-path",
            Stage::TrimOffPath => "trim-off-path",
            Stage::ForwardArcs => "forward-arcs",
            Stage::TrimForward => "trim-forward",
            Stage::BackwardCheck => "backward-check",
            Stage::Assemble => "assemble",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Witness(OutTree),
    Decomposition(PathDecomposition),
}

/// Quantities measured along the way, for bound checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageStats {
    pub branching_leaves: usize,
    pub paths: usize,
    pub u1: usize,
    pub u2: usize,
    /// Largest `|S[P]|` seen in the forward-arc stage over paths that did
    /// not yield a witness.
    pub max_forward_heads: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposeOutcome {
    pub k: usize,
    pub outcome: Outcome,
    /// Stages executed, in order; the last one produced the outcome.
    pub trace: Vec<Stage>,
    pub stats: StageStats,
}

impl DecomposeOutcome {
    pub fn witness(&self) -> Option<&OutTree> {
        match &self.outcome {
            Outcome::Witness(t) => Some(t),
            Outcome::Decomposition(_) => None,
        }
    }

    pub fn decomposition(&self) -> Option<&PathDecomposition> {
        match &self.outcome {
            Outcome::Decomposition(pd) => Some(pd),
            Outcome::Witness(_) => None,
        }
    }

    pub fn final_stage(&self) -> Stage {
        *self.trace.last().expect("trace is never empty")
    }

    fn relabel(&self, map: &[usize], host_size: usize) -> DecomposeOutcome {
        let outcome = match &self.outcome {
            Outcome::Witness(t) => Outcome::Witness(t.relabel(map, host_size)),
            Outcome::Decomposition(pd) => Outcome::Decomposition(PathDecomposition {
                bags: pd.bags.iter().map(|b| b.iter().map(|&v| map[v]).collect()).collect(),
            }),
        };
        DecomposeOutcome {
            k: self.k,
            outcome,
            trace: self.trace.clone(),
            stats: self.stats.clone(),
        }
    }
}

/// `(k-1)²`
pub fn off_path_bound(k: usize) -> usize {
    (k - 1).pow(2)
}

/// `(k-2)(k-1)`
pub fn forward_heads_bound(k: usize) -> usize {
    (k - 2) * (k - 1)
}

/// `(k-2)(k-1)²`
pub fn forward_union_bound(k: usize) -> usize {
    (k - 2) * (k - 1).pow(2)
}

pub fn decompose(d: &Digraph, k: usize) -> Result<DecomposeOutcome, DecomposeError> {
    decompose_rooted(d, None, k)
}

/// As [`decompose`], starting from an out-branching rooted at `root` when
/// given.
pub fn decompose_rooted(
    d: &Digraph,
    root: Option<usize>,
    k: usize,
) -> Result<DecomposeOutcome, DecomposeError> {
    let mut run = Run {
        d,
        k,
        trace: Vec::new(),
        stats: StageStats::default(),
    };
    let outcome = run.pipeline(root)?;
    let result = DecomposeOutcome {
        k,
        outcome,
        trace: run.trace,
        stats: run.stats,
    };
    check_outcome(d, &result)?;
    Ok(result)
}

/// Out-tree variant: the pipeline on the subdigraph induced by the vertices
/// reachable from `v`, rooted at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedOutcome {
    pub sub: Digraph,
    /// Local id to host id.
    pub ids: Vec<usize>,
    pub local_root: usize,
    /// In local ids of `sub`.
    pub outcome: DecomposeOutcome,
}

impl RootedOutcome {
    /// The outcome with vertices renamed to host ids.
    pub fn to_host(&self, host_size: usize) -> DecomposeOutcome {
        self.outcome.relabel(&self.ids, host_size)
    }
}

pub fn decompose_out_tree(d: &Digraph, v: usize, k: usize) -> Result<RootedOutcome, DecomposeError> {
    check_vertex(d, v)?;
    let reach = d.reachable_set(v);
    let local_root = reach.binary_search(&v).expect("v reaches itself");
    let (sub, ids) = d.induced_subdigraph(&reach);
    let outcome = decompose_rooted(&sub, Some(local_root), k)?;
    Ok(RootedOutcome {
        sub,
        ids,
        local_root,
        outcome,
    })
}

fn check_outcome(d: &Digraph, r: &DecomposeOutcome) -> Result<(), DecomposeError> {
    match &r.outcome {
        Outcome::Witness(t) => {
            let report = validate_out_tree(d, t);
            if !report.is_valid() {
                return Err(DecomposeError::Invariant(format!(
                    "witness from {} is invalid: {:?}",
                    r.final_stage(),
                    report.violations
                )));
            }
            if report.leaf_count < r.k.max(1) {
                return Err(DecomposeError::Invariant(format!(
                    "witness from {} has {} < {} leaves",
                    r.final_stage(),
                    report.leaf_count,
                    r.k
                )));
            }
        }
        Outcome::Decomposition(pd) => {
            let violations = pd.violations(&d.underlying_undirected());
            if !violations.is_empty() {
                return Err(DecomposeError::Invariant(format!(
                    "decomposition is invalid: {violations:?}"
                )));
            }
            let cap = r.k.pow(3) as isize;
            if pd.width() > cap {
                return Err(DecomposeError::Invariant(format!(
                    "decomposition width {} exceeds {cap}",
                    pd.width()
                )));
            }
        }
    }
    Ok(())
}

struct Run<'a> {
    d: &'a Digraph,
    k: usize,
    trace: Vec<Stage>,
    stats: StageStats,
}

impl Run<'_> {
    fn pipeline(&mut self, root: Option<usize>) -> Result<Outcome, DecomposeError> {
        let (d, k, n) = (self.d, self.k, self.d.n());

        self.trace.push(Stage::OutBranching);
        let branching = find_out_branching(d, root)?;
        self.stats.branching_leaves = branching.leaf_count();
        if branching.leaf_count() >= k.max(1) {
            return Ok(Outcome::Witness(branching));
        }

        self.trace.push(Stage::PathCover);
        let cover = path_cover_from_out_branching(d, &branching)?;
        self.stats.paths = cover.len();

        self.trace.push(Stage::OffPath);
        let mut u1 = BTreeSet::new();
        for path in &cover.paths {
            let attach = off_path_choices(d, path);
            if attach.len() >= k {
                return Ok(Outcome::Witness(witness_from_off_path(path, &attach, n)));
            }
            u1.extend(attach.into_keys());
        }
        self.stats.u1 = u1.len();
        if u1.len() > off_path_bound(k) {
            return Err(DecomposeError::Invariant(format!(
                "|U1| = {} exceeds (k-1)^2 = {}",
                u1.len(),
                off_path_bound(k)
            )));
        }

        self.trace.push(Stage::TrimOffPath);
        let d1 = trim_around(d, &u1, &cover)?;
        check_no_cross_arcs(&d1, &cover)?;

        self.trace.push(Stage::ForwardArcs);
        let mut u2 = BTreeSet::new();
        for path in &cover.paths {
            let arcs = one_arc_per_head(&forward_arcs_on_path(&d1, path));
            if let Some(t) = witness_from_forward_arcs(path, &arcs, k, n) {
                return Ok(Outcome::Witness(t));
            }
            let heads = forward_arc_heads(&arcs);
            if heads.len() > forward_heads_bound(k) {
                return Err(DecomposeError::Invariant(format!(
                    "{} forward-arc heads on a path exceed (k-2)(k-1) = {} without a witness",
                    heads.len(),
                    forward_heads_bound(k)
                )));
            }
            self.stats.max_forward_heads = self.stats.max_forward_heads.max(heads.len());
            u2.extend(heads);
        }
        self.stats.u2 = u2.len();
        if u2.len() > forward_union_bound(k) {
            return Err(DecomposeError::Invariant(format!(
                "|U2| = {} exceeds (k-2)(k-1)^2 = {}",
                u2.len(),
                forward_union_bound(k)
            )));
        }

        self.trace.push(Stage::TrimForward);
        let d2 = trim_around(&d1, &u2, &cover)?;

        self.trace.push(Stage::BackwardCheck);
        let mut orders = Vec::with_capacity(cover.len());
        for path in &cover.paths {
            match backward_component_check(&d2, path, k)? {
                BackwardOutcome::Witness(t) => return Ok(Outcome::Witness(t)),
                BackwardOutcome::Ordering { order, separation } => {
                    if separation > k {
                        return Err(DecomposeError::Invariant(format!(
                            "path order has vertex separation {separation} > k = {k}"
                        )));
                    }
                    orders.push(order);
                }
            }
        }

        self.trace.push(Stage::Assemble);
        let pd = assemble(&d2, orders, &(&u1 | &u2))?;
        Ok(Outcome::Decomposition(pd))
    }
}

fn check_no_cross_arcs(d1: &Digraph, cover: &PathCover) -> Result<(), DecomposeError> {
    let pos = cover.positions(d1.n());
    for (u, v) in d1.arcs() {
        let (pu, pv) = (pos[u].map(|p| p.0), pos[v].map(|p| p.0));
        if pu != pv {
            return Err(DecomposeError::Invariant(format!(
                "arc {u} -> {v} joins two cover paths after trimming"
            )));
        }
    }
    Ok(())
}

/// Per-path decompositions of the trimmed digraph, concatenated in order of
/// smallest vertex, with `extra` added to every bag.
fn assemble(
    d2: &Digraph,
    mut orders: Vec<Vec<usize>>,
    extra: &BTreeSet<usize>,
) -> Result<PathDecomposition, DecomposeError> {
    orders.sort_by_key(|o| o.iter().copied().min());
    let mut bags = Vec::new();
    for order in orders {
        let (sub, ids) = d2.induced_subdigraph(&order);
        let g: UndirectedGraph = sub.underlying_undirected();
        let local: Vec<usize> = (0..order.len()).collect();
        let pd = ordering_to_path_decomposition(&g, &local)?;
        for bag in pd.bags {
            let mut b: BTreeSet<usize> = bag.into_iter().map(|v| ids[v]).collect();
            b.extend(extra.iter().copied());
            bags.push(b);
        }
    }
    Ok(PathDecomposition { bags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen, Family, GenSpec};

    fn family(f: Family) -> Digraph {
        gen(&GenSpec::new(f, 0)).unwrap()
    }

    #[test]
    fn cycle_decomposes() {
        let d = family(Family::Cycle { n: 5 });
        let r = decompose(&d, 2).unwrap();
        let pd = r.decomposition().expect("C5 has no 2-leaf out-branching");
        assert!(pd.width() <= 2);
        assert_eq!(r.final_stage(), Stage::Assemble);
    }

    #[test]
    fn closed_star_gives_witness() {
        // out-star(6) plus arcs back to the root.
        let arcs = (1..6).flat_map(|i| [(0, i), (i, 0)]);
        let d = Digraph::from_arcs(6, arcs).unwrap();
        let r = decompose(&d, 3).unwrap();
        let t = r.witness().expect("star has 5 leaves");
        assert!(t.leaf_count() >= 3);
        assert!(matches!(r.final_stage(), Stage::OutBranching | Stage::OffPath));
    }

    #[test]
    fn double_cycle_decomposes() {
        let d = family(Family::DoubleCycle { n: 6 });
        let r = decompose(&d, 3).unwrap();
        let pd = r.decomposition().expect("double cycle has only 2 leaves");
        assert!(pd.is_valid_for(&d.underlying_undirected()));
        assert!(pd.width() <= 27);
    }

    #[test]
    fn small_k_is_answered_by_any_branching() {
        let d = family(Family::Cycle { n: 4 });
        let r = decompose(&d, 1).unwrap();
        assert_eq!(r.witness().unwrap().leaf_count(), 1);
        assert_eq!(r.trace, vec![Stage::OutBranching]);
    }

    #[test]
    fn requires_out_branching() {
        let d = Digraph::from_arcs(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(decompose(&d, 2), Err(DecomposeError::Graph(_))));
    }

    #[test]
    fn out_tree_variant() {
        let path = family(Family::Path { n: 3 });
        let r = decompose_out_tree(&path, 0, 2).unwrap();
        assert!(r.outcome.decomposition().is_some());

        let star = family(Family::OutStar { n: 5 });
        let r = decompose_out_tree(&star, 0, 4).unwrap();
        assert_eq!(r.to_host(5).witness().unwrap().leaf_count(), 4);

        let r = decompose_out_tree(&path, 1, 2).unwrap();
        assert_eq!(r.ids, vec![1, 2]);
    }
}

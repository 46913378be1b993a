use rayon::prelude::*;

use crate::decomposition::{
    decompose, decompose_out_tree, find_out_branching, greedy_ordering, ordering_to_path_decomposition, Outcome,
    PathDecomposition,
};
use crate::digraph::Digraph;
use crate::error::SolveError;
use crate::scc::{has_out_branching, in_l_sufficient, source_strong_components, strongly_connected_components};
use crate::solver::{branch_and_bound, dp_pathwidth, DpConfig, Method, Mode, Problem, SolveResult};
use crate::tree::OutTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub table_budget: usize,
    /// `None` lets branch and bound run to completion.
    pub node_budget: Option<u64>,
    pub width_budget: usize,
    /// Worker threads for the per-root loop of the out-tree problem.
    pub jobs: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            table_budget: 10_000_000,
            node_budget: Some(100_000_000),
            width_budget: 16,
            jobs: 1,
        }
    }
}

pub fn solve(d: &Digraph, problem: Problem, k: usize, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    match problem {
        Problem::Dmlob => solve_dmlob(d, k, cfg),
        Problem::Dmlot => solve_dmlot(d, k, cfg),
    }
}

struct Exact {
    value: usize,
    witness: Option<OutTree>,
    method: Method,
}

fn finish(problem: Problem, k: usize, e: Exact) -> SolveResult {
    let value = e.value.min(k);
    SolveResult {
        problem,
        k,
        answer: e.value >= k,
        value,
        witness: e.witness,
        method: e.method,
    }
}

/// Exact optimum (capped at `k`) over the given decomposition or a narrower
/// greedy one, falling back to branch and bound when the dynamic program is
/// over budget.
fn exact_over(
    d: &Digraph,
    pd: Option<&PathDecomposition>,
    mode: Mode,
    k: usize,
    cfg: &SolverConfig,
) -> Result<Exact, SolveError> {
    if let Some(pd) = pd {
        let g = d.underlying_undirected();
        let greedy = ordering_to_path_decomposition(&g, &greedy_ordering(&g))?;
        let pd = if greedy.width() < pd.width() { &greedy } else { pd };
        let dp_cfg = DpConfig {
            mode,
            leaf_cap: k,
            width_budget: cfg.width_budget,
            table_budget: cfg.table_budget,
        };
        match dp_pathwidth(d, pd, &dp_cfg) {
            Ok(r) => {
                return Ok(Exact {
                    value: r.value,
                    witness: r.witness,
                    method: Method::Dp,
                })
            }
            Err(SolveError::OverBudget(why)) => {
                log::debug!("dynamic program skipped: {why}; using branch and bound");
            }
            Err(e) => return Err(e),
        }
    }
    let r = branch_and_bound(d, mode, k, cfg.node_budget)?;
    Ok(Exact {
        value: r.value,
        witness: r.witness,
        method: Method::BranchAndBound,
    })
}

/// Is there an out-branching with at least `k` leaves?
pub fn solve_dmlob(d: &Digraph, k: usize, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    let problem = Problem::Dmlob;
    if !has_out_branching(d) {
        return Ok(finish(
            problem,
            k,
            Exact { value: 0, witness: None, method: Method::Structural },
        ));
    }
    if k <= 1 {
        let t = find_out_branching(d, None)?;
        return Ok(finish(
            problem,
            k,
            Exact { value: t.leaf_count(), witness: Some(t), method: Method::Structural },
        ));
    }
    let in_l = in_l_sufficient(d);
    if !in_l {
        log::debug!("digraph fails the sufficient membership test; answer comes from the exact solvers");
    }
    let out = decompose(d, k)?;
    let exact = match out.outcome {
        Outcome::Witness(t) if t.is_spanning() => Exact {
            value: t.leaf_count(),
            witness: Some(t),
            method: Method::DecomposeWitness,
        },
        Outcome::Witness(t) if in_l => {
            // Membership guarantees a spanning tree as good; try to find one.
            let spanning = branch_and_bound(d, Mode::Spanning, k, cfg.node_budget)
                .ok()
                .and_then(|r| r.witness.filter(|w| r.value >= k && w.leaf_count() >= k));
            Exact {
                value: k,
                witness: Some(spanning.unwrap_or(t)),
                method: Method::DecomposeWitness,
            }
        }
        Outcome::Witness(_) => exact_over(d, None, Mode::Spanning, k, cfg)?,
        Outcome::Decomposition(pd) => exact_over(d, Some(&pd), Mode::Spanning, k, cfg)?,
    };
    Ok(finish(problem, k, exact))
}

/// Is there an out-tree with at least `k` leaves?
///
/// Every out-tree lives inside the set reachable from its root, and that set
/// is contained in the set reachable from any vertex of a source strong
/// component above it, so one root per source component suffices.
pub fn solve_dmlot(d: &Digraph, k: usize, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    let problem = Problem::Dmlot;
    if d.n() == 0 {
        return Ok(finish(
            problem,
            k,
            Exact { value: 0, witness: None, method: Method::Structural },
        ));
    }
    if k <= 1 {
        return Ok(finish(
            problem,
            k,
            Exact { value: 1, witness: Some(OutTree::singleton(0, d.n())), method: Method::Structural },
        ));
    }
    let c = strongly_connected_components(d);
    let roots: Vec<usize> = source_strong_components(&c)
        .into_iter()
        .map(|i| c.components[i][0])
        .collect();

    let per_root = |v: usize| -> Result<Exact, SolveError> {
        let r = decompose_out_tree(d, v, k)?;
        let local = match &r.outcome.outcome {
            Outcome::Witness(t) => Exact {
                value: t.leaf_count(),
                witness: Some(t.clone()),
                method: Method::DecomposeWitness,
            },
            Outcome::Decomposition(pd) => exact_over(&r.sub, Some(pd), Mode::Subtree, k, cfg)?,
        };
        Ok(Exact {
            witness: local.witness.map(|t| t.relabel(&r.ids, d.n())),
            ..local
        })
    };

    let results: Vec<Result<Exact, SolveError>> = if cfg.jobs > 1 && roots.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| SolveError::OverBudget(format!("thread pool: {e}")))?;
        pool.install(|| roots.par_iter().map(|&v| per_root(v)).collect())
    } else {
        let mut acc = Vec::with_capacity(roots.len());
        for &v in &roots {
            let r = per_root(v);
            let done = matches!(&r, Ok(e) if e.value >= k);
            acc.push(r);
            if done {
                break;
            }
        }
        acc
    };

    let mut best: Option<Exact> = None;
    for r in results {
        let e = r?;
        if best.as_ref().is_none_or(|b| e.value > b.value) {
            best = Some(e);
        }
        if best.as_ref().is_some_and(|b| b.value >= k) {
            break;
        }
    }
    Ok(finish(problem, k, best.expect("a non-empty digraph has a source component")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen, Family, GenSpec};
    use crate::solver::{brute_force_out_branching, brute_force_out_tree};
    use crate::tree::validate_out_tree;

    fn family(f: Family, seed: u64) -> Digraph {
        gen(&GenSpec::new(f, seed)).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn cycle() {
        let c5 = family(Family::Cycle { n: 5 }, 0);
        assert!(solve_dmlob(&c5, 1, &cfg()).unwrap().answer);
        let r = solve_dmlob(&c5, 2, &cfg()).unwrap();
        assert!(!r.answer);
        assert_eq!(r.value, 1);
        assert!(!solve_dmlot(&family(Family::Cycle { n: 7 }, 0), 2, &cfg()).unwrap().answer);
    }

    #[test]
    fn double_cycle() {
        let d = family(Family::DoubleCycle { n: 6 }, 0);
        let yes = solve_dmlob(&d, 2, &cfg()).unwrap();
        assert!(yes.answer);
        let t = yes.witness.unwrap();
        assert!(validate_out_tree(&d, &t).is_valid());
        assert!(t.leaf_count() >= 2);
        assert!(!solve_dmlob(&d, 3, &cfg()).unwrap().answer);
    }

    #[test]
    fn star_plus_path() {
        let d = Digraph::from_arcs(7, [(0, 1), (0, 2), (0, 3), (4, 5), (5, 6)]).unwrap();
        let r = solve_dmlot(&d, 3, &cfg()).unwrap();
        assert!(r.answer);
        assert!(validate_out_tree(&d, r.witness.as_ref().unwrap()).is_valid());
        let r = solve_dmlob(&d, 1, &cfg()).unwrap();
        assert!(!r.answer);
        assert_eq!(r.value, 0);
    }

    #[test]
    fn strong_random_matches_oracle() {
        for seed in 0..10 {
            let d = family(Family::StrongRandom { n: 10, extra: 10 }, seed);
            let (ls, _) = brute_force_out_branching(&d).unwrap();
            let (l, _) = brute_force_out_tree(&d).unwrap();
            for k in 1..=5 {
                let r = solve_dmlob(&d, k, &cfg()).unwrap();
                assert_eq!(r.answer, ls >= k, "seed {seed} k {k}");
                assert_eq!(r.value, ls.min(k));
                let r = solve_dmlot(&d, k, &cfg()).unwrap();
                assert_eq!(r.value, l.min(k), "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let d = Digraph::from_arcs(9, [(0, 1), (1, 2), (3, 4), (3, 5), (6, 7), (6, 8), (7, 8)]).unwrap();
        let par = SolverConfig { jobs: 4, ..cfg() };
        for k in 1..=4 {
            let a = solve_dmlot(&d, k, &cfg()).unwrap();
            let b = solve_dmlot(&d, k, &par).unwrap();
            assert_eq!(a.value, b.value);
            assert_eq!(a.answer, b.answer);
        }
    }
}

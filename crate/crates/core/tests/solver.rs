mod common;

use std::collections::BTreeSet;

use itertools::Itertools;
use leafbranch::decomposition::{ordering_to_path_decomposition, PathDecomposition};
use leafbranch::digraph::Digraph;
use leafbranch::scc::has_out_branching;
use leafbranch::solver::{
    branch_and_bound, brute_force_out_branching, brute_force_out_tree, dp_pathwidth, solve_dmlob, solve_dmlot,
    DpConfig, Mode, SolverConfig,
};
use leafbranch::tree::validate_out_tree;

use common::{all_digraphs, parent_map_oracle, random_digraph};

fn oracle(d: &Digraph, mode: Mode) -> usize {
    match mode {
        Mode::Spanning => brute_force_out_branching(d).unwrap().0,
        Mode::Subtree => brute_force_out_tree(d).unwrap().0,
    }
}

fn check_witness(d: &Digraph, t: &leafbranch::tree::OutTree, mode: Mode, leaves: usize) {
    let rep = validate_out_tree(d, t);
    assert!(rep.is_valid(), "{rep:?}");
    assert_eq!(rep.leaf_count, leaves);
    if mode == Mode::Spanning {
        assert!(t.is_spanning());
    }
}

#[test]
fn brute_force_agrees_with_parent_maps() {
    for n in 1..=4 {
        for d in all_digraphs(n) {
            assert_eq!(brute_force_out_branching(&d).unwrap().0, parent_map_oracle(&d, true), "{}", d.to_text());
            assert_eq!(brute_force_out_tree(&d).unwrap().0, parent_map_oracle(&d, false), "{}", d.to_text());
        }
    }
    for seed in 0..200 {
        let d = random_digraph(5 + (seed % 2) as usize, 0.3, seed);
        assert_eq!(brute_force_out_branching(&d).unwrap().0, parent_map_oracle(&d, true));
        assert_eq!(brute_force_out_tree(&d).unwrap().0, parent_map_oracle(&d, false));
    }
}

#[test]
fn branch_and_bound_matches_oracle_on_small_digraphs() {
    let small = (1..=4).flat_map(all_digraphs);
    let sampled = (0..300u64).map(|s| random_digraph(5 + (s % 4) as usize, [0.2, 0.35, 0.5][(s % 3) as usize], s));
    for d in small.chain(sampled) {
        for mode in [Mode::Spanning, Mode::Subtree] {
            let want = oracle(&d, mode);
            let got = branch_and_bound(&d, mode, d.n(), None).unwrap();
            assert_eq!(got.value, want, "{mode:?} {}", d.to_text());
            match got.witness {
                Some(t) => check_witness(&d, &t, mode, want),
                None => assert_eq!(want, 0),
            }
        }
    }
}

#[test]
fn dp_matches_oracle_with_optimal_orderings() {
    for d in (1..=4).flat_map(all_digraphs) {
        let g = d.underlying_undirected();
        let best = common::min_vertex_separation(&g);
        let order = (0..d.n())
            .permutations(d.n())
            .find(|p| leafbranch::decomposition::vertex_separation(&g, p).unwrap() == best)
            .unwrap();
        let pd = ordering_to_path_decomposition(&g, &order).unwrap();
        for mode in [Mode::Spanning, Mode::Subtree] {
            let want = oracle(&d, mode);
            let got = dp_pathwidth(&d, &pd, &DpConfig::new(mode, d.n())).unwrap();
            assert_eq!(got.value, want, "{mode:?} {}", d.to_text());
            if let Some(t) = got.witness {
                check_witness(&d, &t, mode, want);
            }
        }
    }
}

#[test]
fn dp_is_independent_of_the_decomposition() {
    for seed in 0..60u64 {
        let n = 6 + (seed % 3) as usize;
        let d = random_digraph(n, 0.3, seed);
        let g = d.underlying_undirected();
        let mut pds: Vec<PathDecomposition> = [
            (0..n).collect::<Vec<_>>(),
            (0..n).rev().collect(),
            (0..n).map(|i| (i * 5 + seed as usize) % n).unique().collect(),
        ]
        .iter()
        .filter(|o| o.len() == n)
        .map(|o| ordering_to_path_decomposition(&g, o).unwrap())
        .collect();
        pds.push(PathDecomposition { bags: vec![(0..n).collect::<BTreeSet<_>>()] });
        for mode in [Mode::Spanning, Mode::Subtree] {
            let want = oracle(&d, mode);
            for pd in &pds {
                let got = dp_pathwidth(&d, pd, &DpConfig::new(mode, n)).unwrap();
                assert_eq!(got.value, want, "{mode:?} seed {seed} bags {:?}", pd.bags);
            }
        }
    }
}

#[test]
fn drivers_agree_with_oracle_for_every_k() {
    let cfg = SolverConfig::default();
    for seed in 0..120u64 {
        let n = 4 + (seed % 6) as usize;
        let d = random_digraph(n, [0.2, 0.3, 0.45][(seed % 3) as usize], seed);
        let ls = oracle(&d, Mode::Spanning);
        let l = oracle(&d, Mode::Subtree);
        for k in 1..=n {
            let b = solve_dmlob(&d, k, &cfg).unwrap();
            assert_eq!(b.answer, ls >= k, "dmlob k={k} seed {seed}");
            if b.answer {
                let t = b.witness.as_ref().expect("yes answers carry a witness");
                assert!(t.is_spanning() && validate_out_tree(&d, t).leaf_count >= k);
            }
            let t = solve_dmlot(&d, k, &cfg).unwrap();
            assert_eq!(t.answer, l >= k, "dmlot k={k} seed {seed}");
            if t.answer {
                let w = t.witness.as_ref().expect("yes answers carry a witness");
                assert!(validate_out_tree(&d, w).leaf_count >= k);
            }
        }
        assert_eq!(ls > 0, has_out_branching(&d));
    }
}

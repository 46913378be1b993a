//! Strong components, the condensation, and the structural tests built on
//! it: out-branching existence and the in-neighbour condition that places
//! a digraph in the family where spanning and non-spanning optima agree.

use std::collections::BTreeSet;

use crate::digraph::Digraph;

/// Strong components and the acyclic digraph between them.
///
/// Components are listed in a topological order of the condensation, so
/// every dag arc goes from a lower to a higher index. Members of each
/// component are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    pub components: Vec<Vec<usize>>,
    pub dag_arcs: BTreeSet<(usize, usize)>,
    component_of: Vec<usize>,
}

impl Condensation {
    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Kosaraju's two-pass algorithm with explicit stacks.
pub fn strongly_connected_components(d: &Digraph) -> Condensation {
    let n = d.n();
    let mut visited = vec![false; n];
    let mut finish = Vec::with_capacity(n);
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((u, i)) = stack.last_mut() {
            let u = *u;
            if let Some(&w) = d.out_neighbors(u).get(*i) {
                *i += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                finish.push(u);
                stack.pop();
            }
        }
    }

    // Second pass on the reverse digraph in decreasing finish time yields
    // components in topological order.
    let mut component_of = vec![usize::MAX; n];
    let mut components = Vec::new();
    for &s in finish.iter().rev() {
        if component_of[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        component_of[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in d.in_neighbors(u) {
                if component_of[w] == usize::MAX {
                    component_of[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }

    let dag_arcs = d
        .arcs()
        .map(|(u, v)| (component_of[u], component_of[v]))
        .filter(|(a, b)| a != b)
        .collect();

    Condensation {
        components,
        dag_arcs,
        component_of,
    }
}

/// Indices of components with no incoming dag arc.
pub fn source_strong_components(c: &Condensation) -> Vec<usize> {
    let mut has_in = vec![false; c.len()];
    for &(_, b) in &c.dag_arcs {
        has_in[b] = true;
    }
    (0..c.len()).filter(|&i| !has_in[i]).collect()
}

/// An out-branching exists iff there is exactly one source strong component.
pub fn has_out_branching(d: &Digraph) -> bool {
    source_strong_components(&strongly_connected_components(d)).len() == 1
}

/// Sufficient condition for membership in the family where `ℓ_s = 0` or
/// `ℓ_s = ℓ`: whenever some arc leaves strong component `R` for `Q`,
/// every vertex of `Q` has an in-neighbour in `R`.
pub fn in_l_sufficient(d: &Digraph) -> bool {
    let c = strongly_connected_components(d);
    c.dag_arcs.iter().all(|&(r, q)| {
        c.components[q]
            .iter()
            .all(|&v| d.in_neighbors(v).iter().any(|&u| c.component_of(u) == r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digraph(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn cycle_is_one_component() {
        let c = strongly_connected_components(&digraph(3, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(c.components, vec![vec![0, 1, 2]]);
        assert!(c.dag_arcs.is_empty());
        assert_eq!(source_strong_components(&c), vec![0]);
    }

    #[test]
    fn path_is_a_chain_of_singletons() {
        let c = strongly_connected_components(&digraph(3, &[(0, 1), (1, 2)]));
        assert_eq!(c.components, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(c.dag_arcs.iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let src = source_strong_components(&c);
        assert_eq!(src.len(), 1);
        assert_eq!(c.components[src[0]], vec![0]);
    }

    #[test]
    fn two_disjoint_cycles_are_two_sources() {
        let d = digraph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(source_strong_components(&strongly_connected_components(&d)).len(), 2);
        assert!(!has_out_branching(&d));
    }

    #[test]
    fn out_branching_existence() {
        assert!(has_out_branching(&digraph(3, &[(0, 1), (1, 2), (2, 0)])));
        assert!(!has_out_branching(&digraph(4, &[(0, 1), (2, 3)])));
        assert!(has_out_branching(&digraph(1, &[])));
    }

    #[test]
    fn l_sufficient_examples() {
        assert!(in_l_sufficient(&digraph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])));
        assert!(in_l_sufficient(&digraph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])));
        let two_two_cycles = digraph(4, &[(0, 1), (1, 0), (2, 3), (3, 2), (0, 2)]);
        assert!(!in_l_sufficient(&two_two_cycles));
    }
}

//! Seeded instance families.
//!
//! All randomness comes from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, so a `GenSpec` always produces the same
//! digraph within this implementation.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::GenError;

/// Attempts per in-neighbour slot before `min-in-degree-random` gives up.
pub const MAX_SLOT_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Cycle { n: usize },
    DoubleCycle { n: usize },
    Path { n: usize },
    OutStar { n: usize },
    TournamentRandom { n: usize },
    TournamentTransitive { n: usize },
    MultipartiteTournament { parts: Vec<usize> },
    MinInDegreeRandom { n: usize, d: usize, oriented: bool },
    StrongRandom { n: usize, extra: usize },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Cycle { .. } => "cycle",
            Family::DoubleCycle { .. } => "double-cycle",
            Family::Path { .. } => "path",
            Family::OutStar { .. } => "out-star",
            Family::TournamentRandom { .. } => "tournament-random",
            Family::TournamentTransitive { .. } => "tournament-transitive",
            Family::MultipartiteTournament { .. } => "multipartite-tournament",
            Family::MinInDegreeRandom { .. } => "min-in-degree-random",
            Family::StrongRandom { .. } => "strong-random",
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Family::Cycle { n }
            | Family::DoubleCycle { n }
            | Family::Path { n }
            | Family::OutStar { n }
            | Family::TournamentRandom { n }
            | Family::TournamentTransitive { n }
            | Family::MinInDegreeRandom { n, .. }
            | Family::StrongRandom { n, .. } => *n,
            Family::MultipartiteTournament { parts } => parts.iter().sum(),
        }
    }

    /// Builds a family from its tag and the CLI-style parameters.
    pub fn from_tag(
        tag: &str,
        n: Option<usize>,
        d: Option<usize>,
        parts: Option<Vec<usize>>,
        extra: Option<usize>,
        oriented: bool,
    ) -> Result<Family, GenError> {
        let need_n = || n.ok_or_else(|| GenError::InvalidParameters(format!("{tag} needs --n")));
        Ok(match tag {
            "cycle" => Family::Cycle { n: need_n()? },
            "double-cycle" => Family::DoubleCycle { n: need_n()? },
            "path" => Family::Path { n: need_n()? },
            "out-star" => Family::OutStar { n: need_n()? },
            "tournament-random" => Family::TournamentRandom { n: need_n()? },
            "tournament-transitive" => Family::TournamentTransitive { n: need_n()? },
            "multipartite-tournament" => Family::MultipartiteTournament {
                parts: parts.ok_or_else(|| GenError::InvalidParameters(format!("{tag} needs --parts")))?,
            },
            "min-in-degree-random" => Family::MinInDegreeRandom {
                n: need_n()?,
                d: d.ok_or_else(|| GenError::InvalidParameters(format!("{tag} needs --d")))?,
                oriented,
            },
            "strong-random" => Family::StrongRandom {
                n: need_n()?,
                extra: extra.unwrap_or(0),
            },
            other => return Err(GenError::InvalidParameters(format!("unknown family `{other}`"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::MultipartiteTournament { parts } => {
                let p: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}({})", self.tag(), p.join(","))
            }
            Family::MinInDegreeRandom { n, d, oriented } => {
                write!(f, "{}({n},{d}{})", self.tag(), if *oriented { ",oriented" } else { "" })
            }
            Family::StrongRandom { n, extra } => write!(f, "{}({n},{extra})", self.tag()),
            other => write!(f, "{}({})", other.tag(), other.order()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GenSpec { family, seed }
    }
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidParameters(msg.into())
}

fn positive(n: usize, what: &str) -> Result<(), GenError> {
    if n == 0 {
        Err(invalid(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

pub fn gen(spec: &GenSpec) -> Result<Digraph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, arcs): (usize, Vec<(usize, usize)>) = match &spec.family {
        &Family::Cycle { n } => {
            if n < 2 {
                return Err(invalid("cycle needs n >= 2"));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        &Family::DoubleCycle { n } => {
            if n < 3 {
                return Err(invalid("double-cycle needs n >= 3"));
            }
            (n, (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)]).collect())
        }
        &Family::Path { n } => {
            positive(n, "n")?;
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        &Family::OutStar { n } => {
            positive(n, "n")?;
            (n, (1..n).map(|i| (0, i)).collect())
        }
        &Family::TournamentRandom { n } => {
            positive(n, "n")?;
            let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    arcs.push(if rng.random::<bool>() { (i, j) } else { (j, i) });
                }
            }
            (n, arcs)
        }
        &Family::TournamentTransitive { n } => {
            positive(n, "n")?;
            (n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())
        }
        Family::MultipartiteTournament { parts } => {
            if parts.len() < 2 {
                return Err(invalid("multipartite tournament needs at least 2 parts"));
            }
            if parts.contains(&0) {
                return Err(invalid("part sizes must be positive"));
            }
            let mut part_of = Vec::new();
            for (i, &p) in parts.iter().enumerate() {
                part_of.extend(std::iter::repeat_n(i, p));
            }
            let n = part_of.len();
            let mut arcs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if part_of[i] != part_of[j] {
                        arcs.push(if rng.random::<bool>() { (i, j) } else { (j, i) });
                    }
                }
            }
            (n, arcs)
        }
        &Family::MinInDegreeRandom { n, d, oriented } => {
            positive(n, "n")?;
            if d >= n {
                return Err(invalid(format!("in-degree {d} impossible on {n} vertices")));
            }
            if oriented && 2 * d > n - 1 {
                return Err(invalid(format!(
                    "oriented in-degree {d} impossible on {n} vertices"
                )));
            }
            (n, min_in_degree_arcs(n, d, oriented, &mut rng)?)
        }
        &Family::StrongRandom { n, extra } => {
            positive(n, "n")?;
            let cycle_arcs = if n >= 2 { n } else { 0 };
            if cycle_arcs + extra > n * (n - 1) {
                return Err(invalid(format!("{extra} extra arcs do not fit on {n} vertices")));
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut arcs = BTreeSet::new();
            if n >= 2 {
                for i in 0..n {
                    arcs.insert((perm[i], perm[(i + 1) % n]));
                }
            }
            while arcs.len() < cycle_arcs + extra {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u != v {
                    arcs.insert((u, v));
                }
            }
            (n, arcs.into_iter().collect())
        }
    };
    Ok(Digraph::from_arcs(n, arcs).expect("generators emit simple arcs"))
}

fn min_in_degree_arcs(
    n: usize,
    d: usize,
    oriented: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>, GenError> {
    let mut arcs = BTreeSet::new();
    for v in 0..n {
        for _slot in 0..d {
            let mut attempts = 0;
            loop {
                if attempts == MAX_SLOT_ATTEMPTS {
                    return Err(GenError::SamplingExhausted {
                        vertex: v,
                        attempts,
                    });
                }
                attempts += 1;
                let u = rng.random_range(0..n);
                if u == v || arcs.contains(&(u, v)) || (oriented && arcs.contains(&(v, u))) {
                    continue;
                }
                arcs.insert((u, v));
                break;
            }
        }
    }
    Ok(arcs.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scc::{has_out_branching, in_l_sufficient, strongly_connected_components};

    fn g(family: Family, seed: u64) -> Digraph {
        gen(&GenSpec::new(family, seed)).unwrap()
    }

    #[test]
    fn cycle_contract() {
        let d = g(Family::Cycle { n: 5 }, 0);
        assert!(d.is_oriented());
        assert_eq!(d.min_in_degree(), 1);
        assert_eq!(strongly_connected_components(&d).len(), 1);
    }

    #[test]
    fn double_cycle_contract() {
        let d = g(Family::DoubleCycle { n: 4 }, 0);
        assert_eq!(d.min_in_degree(), 2);
        assert_eq!(d.arc_count(), 8);
        assert_eq!(strongly_connected_components(&d).len(), 1);
    }

    #[test]
    fn transitive_tournament_is_dominated_by_zero() {
        let d = g(Family::TournamentTransitive { n: 5 }, 0);
        assert_eq!(d.out_neighbors(0), &[1, 2, 3, 4]);
        assert_eq!(d.arc_count(), 10);
    }

    #[test]
    fn min_in_degree_random_scan() {
        let d = g(Family::MinInDegreeRandom { n: 30, d: 3, oriented: false }, 1);
        assert!((0..30).all(|v| d.in_degree(v) >= 3));
        let o = g(Family::MinInDegreeRandom { n: 30, d: 3, oriented: true }, 1);
        assert!(o.is_oriented());
        assert_eq!(o.min_in_degree(), 3);
    }

    #[test]
    fn multipartite_has_no_inner_arcs() {
        let d = g(Family::MultipartiteTournament { parts: vec![2, 3, 1] }, 9);
        assert_eq!(d.n(), 6);
        assert_eq!(d.arc_count(), 2 * 3 + 2 + 3);
        assert!(!d.has_arc(0, 1) && !d.has_arc(1, 0));
        assert!(!d.has_arc(2, 3) && !d.has_arc(3, 4));
    }

    #[test]
    fn strong_random_is_strong() {
        for seed in 0..20 {
            let d = g(Family::StrongRandom { n: 8, extra: 5 }, seed);
            assert_eq!(d.arc_count(), 13);
            assert!(has_out_branching(&d));
            assert!(in_l_sufficient(&d));
            assert_eq!(strongly_connected_components(&d).len(), 1);
        }
    }

    #[test]
    fn infeasible_parameters() {
        let err = |f| gen(&GenSpec::new(f, 0)).unwrap_err();
        assert!(matches!(err(Family::MinInDegreeRandom { n: 3, d: 3, oriented: false }), GenError::InvalidParameters(_)));
        assert!(matches!(err(Family::MinInDegreeRandom { n: 5, d: 3, oriented: true }), GenError::InvalidParameters(_)));
        assert!(matches!(err(Family::MultipartiteTournament { parts: vec![4] }), GenError::InvalidParameters(_)));
        assert!(matches!(err(Family::StrongRandom { n: 3, extra: 4 }), GenError::InvalidParameters(_)));
        assert!(matches!(err(Family::Cycle { n: 1 }), GenError::InvalidParameters(_)));
    }

    #[test]
    fn deterministic() {
        let spec = GenSpec::new(Family::TournamentRandom { n: 12 }, 42);
        assert_eq!(gen(&spec).unwrap(), gen(&spec).unwrap());
    }
}

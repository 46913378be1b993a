//! Lower bounds on the number of leaves in out-branchings, and a checker
//! that measures them on generated instances.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::decomposition::path_cover_from_out_branching;
use crate::digraph::Digraph;
use crate::error::{BoundsError, GenError};
use crate::generators::{gen, Family, GenSpec};
use crate::scc::{has_out_branching, in_l_sufficient};
use crate::solver::{branch_and_bound, brute_force_out_branching, in_l_exact, Mode, BRUTE_FORCE_MAX_N};
use crate::tree::{validate_out_tree, OutTree};

const SLACK: f64 = 1e-9;

/// `(n/2)^{1/5} - 1`, for digraphs in the family with minimum in-degree 3
/// (or oriented with minimum in-degree 2).
pub fn theorem_main_bound(n: usize) -> f64 {
    (n as f64 / 2.0).powf(0.2) - 1.0
}

/// `2k⁵`: the largest order of a digraph with all in-degrees 2 and no
/// out-branching with `k` leaves.
pub fn lemma_order_bound(k: u64) -> u64 {
    2 * k.pow(5)
}

/// `n - log₂ n`, for tournaments.
pub fn tournament_bound(n: usize) -> f64 {
    n as f64 - (n as f64).log2()
}

/// `(n - 1)/4`, for multipartite tournaments with at most one source.
pub fn multipartite_bound(n: usize) -> f64 {
    (n as f64 - 1.0) / 4.0
}

/// Smallest integer a measured value must reach to satisfy `bound`.
pub fn required(bound: f64) -> i64 {
    (bound - SLACK).ceil() as i64
}

pub fn bound_holds(measured: usize, bound: f64) -> bool {
    measured as i64 >= required(bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    /// Oriented digraph, minimum in-degree at least 2.
    Oriented,
    /// Minimum in-degree at least 3; double arcs along the longest path of
    /// the cover derived from the tree are removed first.
    MinInDegreeThree,
}

/// Deletes arcs outside `t` until every in-degree is exactly 2. Non-root
/// vertices keep their tree arc plus the in-arc with the smallest tail; the
/// root keeps its two smallest in-arcs.
pub fn reduce_in_degree_two(d: &Digraph, t: &OutTree, mode: Reduction) -> Result<Digraph, BoundsError> {
    let report = validate_out_tree(d, t);
    if !report.is_valid() || !report.spanning {
        return Err(BoundsError::Precondition("tree is not an out-branching of the digraph".into()));
    }
    let (need, what) = match mode {
        Reduction::Oriented => (2, "oriented digraph with minimum in-degree 2"),
        Reduction::MinInDegreeThree => (3, "minimum in-degree 3"),
    };
    if d.min_in_degree() < need || (mode == Reduction::Oriented && !d.is_oriented()) {
        return Err(BoundsError::Precondition(format!("expected an {what}")));
    }

    let mut removed = BTreeSet::new();
    if mode == Reduction::MinInDegreeThree {
        let cover = path_cover_from_out_branching(d, t)?;
        let longest = cover
            .paths
            .iter()
            .max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)))
            .expect("a cover of a non-empty digraph has a path");
        for w in longest.windows(2) {
            if d.has_arc(w[1], w[0]) {
                removed.insert((w[1], w[0]));
            }
        }
    }
    let d = d.without_arcs(&removed);

    let mut keep = Vec::with_capacity(2 * d.n());
    for v in 0..d.n() {
        match t.parent.get(&v) {
            Some(&p) => {
                keep.push((p, v));
                let extra = d
                    .in_neighbors(v)
                    .iter()
                    .find(|&&u| u != p)
                    .expect("in-degree is at least 2");
                keep.push((*extra, v));
            }
            None => keep.extend(d.in_neighbors(v).iter().take(2).map(|&u| (u, v))),
        }
    }
    Ok(Digraph::from_arcs(d.n(), keep)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `(n/2)^{1/5} - 1` under orientation and minimum in-degree 2.
    MainOriented,
    /// `(n/2)^{1/5} - 1` under minimum in-degree 3.
    MainInDegreeThree,
    Tournament,
    Multipartite,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] = [
        BoundKind::MainOriented,
        BoundKind::MainInDegreeThree,
        BoundKind::Tournament,
        BoundKind::Multipartite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::MainOriented => "main-oriented-indeg2",
            BoundKind::MainInDegreeThree => "main-indeg3",
            BoundKind::Tournament => "tournament",
            BoundKind::Multipartite => "multipartite",
        }
    }

    pub fn value(self, n: usize) -> f64 {
        match self {
            BoundKind::MainOriented | BoundKind::MainInDegreeThree => theorem_main_bound(n),
            BoundKind::Tournament => tournament_bound(n),
            BoundKind::Multipartite => multipartite_bound(n),
        }
    }
}

/// How membership in the family `ℓ_s = 0 or ℓ_s = ℓ` was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Sufficient,
    Exact,
    NotMember,
    Unknown,
}

impl Membership {
    pub fn tag(self) -> &'static str {
        match self {
            Membership::Sufficient => "sufficient",
            Membership::Exact => "exact",
            Membership::NotMember => "not-member",
            Membership::Unknown => "unknown",
        }
    }

    fn is_member(self) -> bool {
        matches!(self, Membership::Sufficient | Membership::Exact)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub instance_id: usize,
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub bound: BoundKind,
    pub bound_value: f64,
    pub measured: Option<usize>,
    /// `None` when skipped.
    pub holds: Option<bool>,
    pub skipped_reason: Option<String>,
    pub source_count: usize,
    pub membership: Membership,
}

impl BoundReport {
    pub fn violated(&self) -> bool {
        self.holds == Some(false)
    }
}

pub const CSV_HEADER: &str = "instance_id,family,n,seed,bound_name,bound_value,measured,holds,skipped_reason";

pub fn to_csv(reports: &[BoundReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    w.write_record(&header).expect("writing to memory");
    for r in reports {
        w.write_record([
            r.instance_id.to_string(),
            r.family.clone(),
            r.n.to_string(),
            r.seed.to_string(),
            r.bound.name().to_string(),
            format!("{:.6}", r.bound_value),
            r.measured.map(|m| m.to_string()).unwrap_or_default(),
            r.holds.map(|h| h.to_string()).unwrap_or_default(),
            r.skipped_reason.clone().unwrap_or_default(),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}

fn is_tournament(d: &Digraph) -> bool {
    let n = d.n();
    d.arc_count() == n * n.saturating_sub(1) / 2 && d.is_oriented()
}

fn measure(d: &Digraph) -> Result<usize, BoundsError> {
    if d.n() <= BRUTE_FORCE_MAX_N {
        Ok(brute_force_out_branching(d)?.0)
    } else {
        Ok(branch_and_bound(d, Mode::Spanning, d.n(), None)?.value)
    }
}

fn reason(bound: BoundKind, d: &Digraph, family: &Family, membership: Membership, sources: usize) -> Option<String> {
    let main = |need: usize, oriented: bool| -> Option<String> {
        if d.min_in_degree() < need {
            return Some(format!("minimum in-degree {} < {need}", d.min_in_degree()));
        }
        if oriented && !d.is_oriented() {
            return Some("not oriented".into());
        }
        if !membership.is_member() {
            return Some(format!("family membership {}", membership.tag()));
        }
        if !has_out_branching(d) {
            return Some("no out-branching".into());
        }
        None
    };
    match bound {
        BoundKind::MainOriented => main(2, true),
        BoundKind::MainInDegreeThree => main(3, false),
        BoundKind::Tournament => (!is_tournament(d)).then(|| "not a tournament".into()),
        BoundKind::Multipartite => {
            if !matches!(family, Family::MultipartiteTournament { .. }) {
                Some("not a multipartite tournament".into())
            } else if sources > 1 {
                Some(format!("{sources} sources"))
            } else {
                None
            }
        }
    }
}

/// Generates each instance and checks every bound whose hypotheses it
/// satisfies. Instances larger than `oracle_budget` are skipped. Reports come
/// back in input order, four per instance.
pub fn check_bounds(specs: &[GenSpec], oracle_budget: usize) -> Result<Vec<BoundReport>, BoundsError> {
    let per_instance: Vec<Result<Vec<BoundReport>, BoundsError>> = specs
        .par_iter()
        .enumerate()
        .map(|(id, spec)| check_instance(id, spec, oracle_budget))
        .collect();
    let mut out = Vec::new();
    for r in per_instance {
        out.extend(r?);
    }
    Ok(out)
}

fn check_instance(id: usize, spec: &GenSpec, oracle_budget: usize) -> Result<Vec<BoundReport>, BoundsError> {
    let d = match gen(spec) {
        Ok(d) => d,
        Err(e @ GenError::SamplingExhausted { .. }) => {
            let n = spec.family.order();
            return Ok(BoundKind::ALL
                .iter()
                .map(|&bound| BoundReport {
                    instance_id: id,
                    family: spec.family.to_string(),
                    n,
                    seed: spec.seed,
                    bound,
                    bound_value: bound.value(n),
                    measured: None,
                    holds: None,
                    skipped_reason: Some(e.to_string()),
                    source_count: 0,
                    membership: Membership::Unknown,
                })
                .collect());
        }
        Err(e) => return Err(e.into()),
    };
    let n = d.n();
    let sources = (0..n).filter(|&v| d.in_degree(v) == 0).count();
    let within = n <= oracle_budget;
    let membership = if in_l_sufficient(&d) {
        Membership::Sufficient
    } else if within && n <= BRUTE_FORCE_MAX_N {
        if in_l_exact(&d, oracle_budget)? {
            Membership::Exact
        } else {
            Membership::NotMember
        }
    } else {
        Membership::Unknown
    };
    let mut measured = None;
    let mut reports = Vec::with_capacity(BoundKind::ALL.len());
    for bound in BoundKind::ALL {
        let mut skip = reason(bound, &d, &spec.family, membership, sources);
        if skip.is_none() && !within {
            skip = Some(format!("{n} vertices exceeds oracle budget {oracle_budget}"));
        }
        let value = bound.value(n);
        let (m, holds) = match skip {
            Some(_) => (None, None),
            None => {
                if measured.is_none() {
                    measured = Some(measure(&d)?);
                }
                let m = measured.expect("just measured");
                (Some(m), Some(bound_holds(m, value)))
            }
        };
        reports.push(BoundReport {
            instance_id: id,
            family: spec.family.to_string(),
            n,
            seed: spec.seed,
            bound,
            bound_value: value,
            measured: m,
            holds,
            skipped_reason: skip,
            source_count: sources,
            membership,
        });
    }
    Ok(reports)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundsSummary {
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    /// Checked reports whose bound asks for at most one leaf, which every
    /// out-branching has.
    pub vacuous: usize,
}

impl BoundsSummary {
    pub fn from_reports(reports: &[BoundReport]) -> Self {
        let mut s = BoundsSummary::default();
        for r in reports {
            match r.holds {
                None => s.skipped += 1,
                Some(h) => {
                    s.checked += 1;
                    if !h {
                        s.violations += 1;
                    }
                    if required(r.bound_value) <= 1 {
                        s.vacuous += 1;
                    }
                }
            }
        }
        s
    }
}

impl std::fmt::Display for BoundsSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "checked {}, skipped {}, violated {}, vacuous {} (bound at most 1 leaf)",
            self.checked, self.skipped, self.violations, self.vacuous
        )
    }
}

/// The instance set run by `check-bounds` when no family is given.
pub fn default_suite() -> Vec<GenSpec> {
    let mut specs = Vec::new();
    for n in 4..=9 {
        for seed in 1..=50 {
            specs.push(GenSpec::new(Family::TournamentRandom { n }, seed));
        }
    }
    for n in [7, 9, 11] {
        for seed in 1..=10 {
            specs.push(GenSpec::new(Family::MinInDegreeRandom { n, d: 3, oriented: false }, seed));
            specs.push(GenSpec::new(Family::MinInDegreeRandom { n, d: 2, oriented: true }, seed));
        }
    }
    for parts in [vec![2, 2, 2], vec![3, 3, 3], vec![1, 2, 3, 3]] {
        for seed in 1..=10 {
            specs.push(GenSpec::new(Family::MultipartiteTournament { parts: parts.clone() }, seed));
        }
    }
    for n in 3..=10 {
        specs.push(GenSpec::new(Family::Cycle { n }, 0));
        specs.push(GenSpec::new(Family::DoubleCycle { n }, 0));
    }
    specs
}

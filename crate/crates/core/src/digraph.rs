//! Simple digraphs on dense vertex ids `0..n`, their text format and
//! basic structural queries.
//!
//! The text format is 1-indexed:
//!
//! ```text
//! c optional comment
//! p dig <n> <m>
//! a <u> <v>
//! ```
//!
//! with exactly `m` arc lines. Duplicate arc lines collapse to one arc and
//! produce a warning; self-loops are rejected.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{GraphError, ParseError};

/// A digraph without self-loops or parallel arcs. Both `(u, v)` and `(v, u)`
/// may be present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    m: usize,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a digraph from an arc list; duplicates are collapsed.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u, v));
        }
        let mut d = Digraph::empty(n);
        for &(u, v) in &set {
            d.out[u].push(v);
            d.inn[v].push(u);
        }
        for list in d.inn.iter_mut() {
            list.sort_unstable();
        }
        d.m = set.len();
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.m
    }

    /// Out-neighbours of `v`, ascending.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// In-neighbours of `v`, ascending.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.out[u].binary_search(&v).is_ok()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn reverse(&self) -> Digraph {
        Digraph {
            out: self.inn.clone(),
            inn: self.out.clone(),
            m: self.m,
        }
    }

    /// Minimum in-degree; 0 for the empty digraph.
    pub fn min_in_degree(&self) -> usize {
        self.inn.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// True iff there is no directed 2-cycle.
    pub fn is_oriented(&self) -> bool {
        self.arcs().all(|(u, v)| !self.has_arc(v, u))
    }

    /// Vertices reachable from `v`, including `v`, in ascending order.
    pub fn reachable_set(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.out[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..self.n()).filter(|&u| seen[u]).collect()
    }

    /// The subdigraph induced by `vertices`, relabelled `0..|vertices|` in
    /// the given order. Returns the digraph and the map from new to old ids.
    pub fn induced_subdigraph(&self, vertices: &[usize]) -> (Digraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let arcs = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let local = &local;
            self.out[v]
                .iter()
                .filter(move |&&w| local[w] != usize::MAX)
                .map(move |&w| (i, local[w]))
        });
        let sub = Digraph::from_arcs(vertices.len(), arcs.collect::<Vec<_>>())
            .expect("induced arcs are valid");
        (sub, vertices.to_vec())
    }

    /// Copy of the digraph with `removed` arcs deleted.
    pub fn without_arcs(&self, removed: &BTreeSet<(usize, usize)>) -> Digraph {
        Digraph::from_arcs(self.n(), self.arcs().filter(|a| !removed.contains(a)))
            .expect("subset of valid arcs")
    }

    pub fn underlying_undirected(&self) -> UndirectedGraph {
        UndirectedGraph::from_edges(self.n(), self.arcs()).expect("arcs are valid edges")
    }

    /// Serializes to the text format, arcs sorted by `(u, v)`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "p dig {} {}", self.n(), self.m).unwrap();
        for (u, v) in self.arcs() {
            writeln!(s, "a {} {}", u + 1, v + 1).unwrap();
        }
        s
    }
}

/// A non-fatal finding while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

/// Parses the text format, returning warnings for collapsed duplicate arcs.
pub fn parse_digraph_with_warnings(text: &str) -> Result<(Digraph, Vec<ParseWarning>), ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = BTreeSet::new();
    let mut arc_lines = 0usize;
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(malformed(line, "duplicate `p` header"));
                }
                if tokens.next() != Some("dig") {
                    return Err(malformed(line, "expected `p dig <n> <m>`"));
                }
                let n = parse_count(tokens.next(), line, "n")?;
                let m = parse_count(tokens.next(), line, "m")?;
                if tokens.next().is_some() {
                    return Err(malformed(line, "trailing tokens after header"));
                }
                header = Some((n, m));
            }
            "a" => {
                let Some((n, _)) = header else {
                    return Err(malformed(line, "arc line before `p` header"));
                };
                let u = parse_count(tokens.next(), line, "tail")?;
                let v = parse_count(tokens.next(), line, "head")?;
                if tokens.next().is_some() {
                    return Err(malformed(line, "trailing tokens after arc"));
                }
                for id in [u, v] {
                    if id == 0 || id > n {
                        return Err(ParseError::VertexOutOfRange { line, id, n });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line, id: u });
                }
                arc_lines += 1;
                if !arcs.insert((u - 1, v - 1)) {
                    warnings.push(ParseWarning {
                        line,
                        message: format!("duplicate arc {u} -> {v} collapsed"),
                    });
                }
            }
            other => return Err(malformed(line, &format!("unknown line type `{other}`"))),
        }
    }

    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if arc_lines != m {
        return Err(ParseError::ArcCountMismatch {
            declared: m,
            found: arc_lines,
        });
    }
    let d = Digraph::from_arcs(n, arcs).expect("validated while parsing");
    Ok((d, warnings))
}

/// Parses the text format; duplicate-arc warnings go to the log.
pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let (d, warnings) = parse_digraph_with_warnings(text)?;
    for w in warnings {
        log::warn!("line {}: {}", w.line, w.message);
    }
    Ok(d)
}

fn malformed(line: usize, message: &str) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.to_string(),
    }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.ok_or_else(|| malformed(line, &format!("missing {what}")))?
        .parse()
        .map_err(|_| malformed(line, &format!("{what} is not a non-negative integer")))
}

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl UndirectedGraph {
    /// Builds from unordered pairs; duplicates and reversed pairs collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(UndirectedGraph { adj, m: set.len() })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

pub(crate) fn check_vertex(d: &Digraph, v: usize) -> Result<(), GraphError> {
    if v >= d.n() {
        Err(GraphError::VertexOutOfRange { vertex: v, n: d.n() })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn parses_cycle() {
        let d = parse_digraph("p dig 3 3\na 1 2\na 2 3\na 3 1\n").unwrap();
        assert_eq!(d, c3());
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn parses_single_vertex() {
        let d = parse_digraph("p dig 1 0\n").unwrap();
        assert_eq!(d.n(), 1);
        assert_eq!(d.arc_count(), 0);
    }

    #[test]
    fn rejects_self_loop_with_line() {
        let err = parse_digraph("p dig 2 1\na 1 1\n").unwrap_err();
        assert_eq!(err, ParseError::SelfLoop { line: 2, id: 1 });
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_digraph("c hi\na 1 2\n"),
            Err(ParseError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_digraph("p dig 2 1\na 1 3\n"),
            Err(ParseError::VertexOutOfRange { line: 2, id: 3, n: 2 })
        ));
        assert!(matches!(parse_digraph("p graph 2 1\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert!(matches!(parse_digraph("c only\n"), Err(ParseError::MissingHeader)));
        assert!(matches!(
            parse_digraph("p dig 2 2\na 1 2\n"),
            Err(ParseError::ArcCountMismatch { declared: 2, found: 1 })
        ));
        assert!(matches!(
            parse_digraph("p dig 2 0\np dig 2 0\n"),
            Err(ParseError::Malformed { line: 2, .. })
        ));
    }

    #[test]
    fn duplicates_collapse_with_warning() {
        let (d, w) = parse_digraph_with_warnings("c x\np dig 2 2\na 1 2\na 1 2\n").unwrap();
        assert_eq!(d.arc_count(), 1);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].line, 4);
    }

    #[test]
    fn writer_sorts_arcs() {
        let d = Digraph::from_arcs(3, [(2, 0), (0, 2), (1, 0)]).unwrap();
        assert_eq!(d.to_text(), "p dig 3 3\na 1 3\na 2 1\na 3 1\n");
        assert_eq!(parse_digraph(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn reachable_sets() {
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.reachable_set(1), vec![1, 2]);
        let c4 = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for v in 0..4 {
            assert_eq!(c4.reachable_set(v), vec![0, 1, 2, 3]);
        }
        let iso = Digraph::from_arcs(3, [(0, 1)]).unwrap();
        assert_eq!(iso.reachable_set(2), vec![2]);
    }

    #[test]
    fn induced() {
        let c4 = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (sub, ids) = c4.induced_subdigraph(&[1, 2]);
        assert_eq!(ids, vec![1, 2]);
        assert_eq!(sub.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        let (empty, _) = c4.induced_subdigraph(&[]);
        assert_eq!(empty.n(), 0);
    }

    #[test]
    fn underlying() {
        let dc3 = Digraph::from_arcs(3, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]).unwrap();
        assert_eq!(dc3.underlying_undirected().edge_count(), 3);
        let c5 = Digraph::from_arcs(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let g = c5.underlying_undirected();
        assert_eq!(g.edge_count(), 5);
        assert!((0..5).all(|v| g.neighbors(v).len() == 2));
        let one = Digraph::from_arcs(2, [(0, 1)]).unwrap().underlying_undirected();
        assert_eq!(one.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn degrees_and_orientation() {
        let dc4 = Digraph::from_arcs(4, (0..4).flat_map(|i| [(i, (i + 1) % 4), ((i + 1) % 4, i)])).unwrap();
        assert_eq!(dc4.min_in_degree(), 2);
        assert!(!dc4.is_oriented());
        assert_eq!(c3().min_in_degree(), 1);
        assert!(c3().is_oriented());
        let tt3 = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(tt3.min_in_degree(), 0);
        assert!(tt3.is_oriented());
    }

    #[test]
    fn from_arcs_rejects_bad_input() {
        assert_eq!(Digraph::from_arcs(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(Digraph::from_arcs(2, [(0, 2)]).is_err());
    }
}

//! Signed graphs, structural balance and the text graph format.
//!
//! A [`SignedGraph`] is an undirected simple graph whose edges are labelled
//! positive (friendly) or negative (antagonistic). Vertices are 0-indexed.
//!
//! Graph file format:
//!
//! ```text
//! # comment
//! n m
//! u v s      (m lines, s is `+` or `-`)
//! ```

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count accepted by [`has_perfect_matching`].
pub const MATCHING_SEARCH_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" => Ok(Sign::Positive),
            "-" => Ok(Sign::Negative),
            other => Err(format!("expected '+' or '-', found '{other}'")),
        }
    }
}

/// An undirected signed edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

impl Edge {
    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    n: usize,
    /// Sorted lexicographically by `(u, v)`.
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, Sign)>>,
}

impl SignedGraph {
    /// Builds a graph from `(u, v, sign)` triples. Endpoint order is
    /// normalized; self-loops, duplicates and out-of-range indices are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, Sign)>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (a, b, sign) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let (u, v) = (a.min(b), a.max(b));
            if seen.insert((u, v), sign).is_some() {
                return Err(Error::DuplicateEdge { u, v });
            }
        }
        let edges: Vec<Edge> = seen.into_iter().map(|((u, v), sign)| Edge { u, v, sign }).collect();
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u].push((e.v, e.sign));
            adjacency[e.v].push((e.u, e.sign));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(SignedGraph { n, edges, adjacency })
    }

    /// Complete graph on `n` vertices with signs chosen by `sign(u, v)`, `u < v`.
    pub fn complete(n: usize, mut sign: impl FnMut(usize, usize) -> Sign) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| (u, v, sign(u, v)))
            .collect();
        SignedGraph::new(n, edges).expect("complete graph edges are valid")
    }

    /// Ring `0 - 1 - ... - (n-1) - 0` with the listed edges negative.
    pub fn ring(n: usize, negative: &[(usize, usize)]) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedSize(format!("ring needs at least 3 vertices, got {n}")));
        }
        let is_neg = |u: usize, v: usize| negative.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (u.min(v), u.max(v)));
        let edges: Vec<_> = (0..n)
            .map(|u| {
                let v = (u + 1) % n;
                (u, v, if is_neg(u, v) { Sign::Negative } else { Sign::Positive })
            })
            .collect();
        SignedGraph::new(n, edges)
    }

    /// All-positive `m`-dimensional hypercube on vertex codes `0..2^m`.
    pub fn hypercube(m: u32) -> Self {
        let n = 1usize << m;
        let edges: Vec<_> = (0..n)
            .flat_map(|c| (0..m).map(move |b| (c, c ^ (1 << b))))
            .filter(|&(a, b)| a < b)
            .map(|(a, b)| (a, b, Sign::Positive))
            .collect();
        SignedGraph::new(n, edges).expect("hypercube edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Sign)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn sign(&self, u: usize, v: usize) -> Option<Sign> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.sign.is_positive())
    }

    pub fn negative_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.sign.is_negative())
    }

    pub fn has_negative_edge(&self) -> bool {
        self.negative_edges().next().is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_connected(&self) -> bool {
        components_where(self, |_| true).len() <= 1
    }

    pub fn is_positive_connected(&self) -> bool {
        positive_components(self).len() <= 1
    }

    /// Connectivity and a nonempty negative edge set, the standing
    /// assumption of the analysis routines.
    pub fn satisfies_standing_assumption(&self) -> bool {
        self.is_connected() && self.has_negative_edge()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `n m` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(header_line, "header must be `n m`"));
        }
        let n: usize = parse_field(fields[0], header_line, "vertex count")?;
        let m: usize = parse_field(fields[1], header_line, "edge count")?;

        let mut edges = Vec::with_capacity(m);
        let mut seen = BTreeMap::new();
        for (line, content) in lines {
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(line, "edge line must be `u v s`"));
            }
            let u: usize = parse_field(fields[0], line, "vertex")?;
            let v: usize = parse_field(fields[1], line, "vertex")?;
            let sign: Sign = fields[2].parse().map_err(|e: String| Error::parse(line, e))?;
            for index in [u, v] {
                if index >= n {
                    return Err(Error::parse(line, Error::IndexOutOfRange { index, n }.to_string()));
                }
            }
            if u == v {
                return Err(Error::parse(line, Error::SelfLoop(u).to_string()));
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, line).is_some() {
                return Err(Error::parse(line, Error::DuplicateEdge { u: key.0, v: key.1 }.to_string()));
            }
            edges.push((u, v, sign));
        }
        if edges.len() != m {
            return Err(Error::parse(header_line, format!("header declares {m} edges, found {}", edges.len())));
        }
        SignedGraph::new(n, edges)
    }

    /// Canonical text form: header, then edges sorted by `(u, v)`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.sign));
        }
        out
    }
}

fn parse_field<T: FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::parse(line, format!("invalid {what} '{field}'")))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<SignedGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    SignedGraph::parse(&text)
}

pub fn save_graph(graph: &SignedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, graph.to_text()).map_err(|e| Error::io(path, e))
}

/// Connected components of the subgraph keeping edges accepted by `keep`,
/// each sorted, ordered by smallest vertex.
fn components_where(g: &SignedGraph, keep: impl Fn(Sign) -> bool) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; g.n];
    let mut components = Vec::new();
    for start in 0..g.n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        label[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(w, s) in g.neighbors(u) {
                if keep(s) && label[w] == usize::MAX {
                    label[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Connected components of the positive subgraph, ordered by smallest vertex.
pub fn positive_components(g: &SignedGraph) -> Vec<Vec<usize>> {
    components_where(g, Sign::is_positive)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StrongBalance {
    /// Positive edges stay inside a group, negative edges cross. `v2` is
    /// empty only when the graph has no negative edge.
    Balanced { v1: Vec<usize>, v2: Vec<usize> },
    /// A simple cycle (vertex sequence, closing edge implied) with an odd
    /// number of negative edges.
    Unbalanced { witness: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum WeakBalance {
    /// Groups are the positive components; every negative edge joins two
    /// different groups.
    Balanced { groups: Vec<Vec<usize>> },
    /// A positive path closed by one negative edge.
    Unbalanced { witness: Vec<usize> },
}

/// Strong balance by signed two-colouring.
///
/// Each vertex gets a parity; a positive edge forces equal parities and a
/// negative edge opposite ones. A conflict closes a cycle through the BFS
/// tree with an odd number of negative edges.
pub fn check_strong_balance(g: &SignedGraph) -> Result<StrongBalance> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n;
    let mut parity = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if parity[root] != u8::MAX {
            continue;
        }
        parity[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, s) in g.neighbors(u) {
                let want = parity[u] ^ u8::from(s.is_negative());
                if parity[w] == u8::MAX {
                    parity[w] = want;
                    parent[w] = u;
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                } else if parity[w] != want {
                    let witness = canonical_cycle(tree_cycle(u, w, &parent, &depth));
                    return Ok(StrongBalance::Unbalanced { witness });
                }
            }
        }
    }
    let (v1, v2) = (0..n).partition(|&v| parity[v] == 0);
    Ok(StrongBalance::Balanced { v1, v2 })
}

/// Cycle formed by the tree paths from `u` and `w` to their common ancestor
/// plus the non-tree edge `{u, w}`.
fn tree_cycle(u: usize, w: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Rotates a cycle to start at its smallest vertex, oriented towards the
/// smaller of that vertex's two cycle neighbours.
fn canonical_cycle(mut cycle: Vec<usize>) -> Vec<usize> {
    let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(start);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// Weak balance via the positive-component characterization: the graph is
/// weakly balanced iff no negative edge lies inside a positive component.
pub fn check_weak_balance(g: &SignedGraph) -> Result<WeakBalance> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let groups = positive_components(g);
    let mut group_of = vec![0; g.n];
    for (id, members) in groups.iter().enumerate() {
        for &v in members {
            group_of[v] = id;
        }
    }
    if let Some(e) = g.negative_edges().find(|e| group_of[e.u] == group_of[e.v]) {
        let witness = canonical_cycle(positive_path(g, e.v, e.u));
        return Ok(WeakBalance::Unbalanced { witness });
    }
    Ok(WeakBalance::Balanced { groups })
}

/// Shortest positive path from `from` to `to` (inclusive). Both vertices must
/// lie in the same positive component.
fn positive_path(g: &SignedGraph, from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; g.n];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &(w, s) in g.neighbors(u) {
            if s.is_positive() && parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceVerdict {
    pub strong: Option<(Vec<usize>, Vec<usize>)>,
    pub weak: Option<Vec<Vec<usize>>>,
    pub strong_witness: Option<Vec<usize>>,
    pub weak_witness: Option<Vec<usize>>,
}

impl BalanceVerdict {
    /// The partition used for clustering analysis: the strong bipartition
    /// when present, otherwise the weak partition.
    pub fn groups(&self) -> Option<Vec<Vec<usize>>> {
        match (&self.strong, &self.weak) {
            (Some((v1, v2)), _) if !v2.is_empty() => Some(vec![v1.clone(), v2.clone()]),
            (_, Some(groups)) => Some(groups.clone()),
            _ => None,
        }
    }

    pub fn is_strong(&self) -> bool {
        self.strong.is_some()
    }
}

pub fn balance_verdict(g: &SignedGraph) -> Result<BalanceVerdict> {
    let (strong, strong_witness) = match check_strong_balance(g)? {
        StrongBalance::Balanced { v1, v2 } => (Some((v1, v2)), None),
        StrongBalance::Unbalanced { witness } => (None, Some(witness)),
    };
    let (weak, weak_witness) = match check_weak_balance(g)? {
        WeakBalance::Balanced { groups } => (Some(groups), None),
        WeakBalance::Unbalanced { witness } => (None, Some(witness)),
    };
    Ok(BalanceVerdict { strong, weak, strong_witness, weak_witness })
}

/// Exact perfect-matching search by bitmask backtracking with memoized
/// dead states. Returns one matching (pairs `u < v`) or `None`.
pub fn has_perfect_matching(g: &SignedGraph, restrict_to_positive: bool) -> Result<Option<Vec<(usize, usize)>>> {
    let n = g.n;
    if n % 2 == 1 {
        return Ok(None);
    }
    if n > MATCHING_SEARCH_LIMIT {
        return Err(Error::UnsupportedSize(format!(
            "perfect matching search supports at most {MATCHING_SEARCH_LIMIT} vertices, got {n}"
        )));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|(_, s)| !restrict_to_positive || s.is_positive())
                .fold(0u32, |acc, &(w, _)| acc | (1 << w))
        })
        .collect();
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut dead = vec![0u64; (1usize << n).div_ceil(64)];
    let mut matching = Vec::with_capacity(n / 2);
    if match_from(0, full, &adj, &mut dead, &mut matching) {
        Ok(Some(matching))
    } else {
        Ok(None)
    }
}

fn match_from(covered: u32, full: u32, adj: &[u32], dead: &mut [u64], out: &mut Vec<(usize, usize)>) -> bool {
    if covered == full {
        return true;
    }
    let slot = covered as usize;
    if dead[slot / 64] >> (slot % 64) & 1 == 1 {
        return false;
    }
    let u = (!covered).trailing_zeros() as usize;
    let mut options = adj[u] & !covered;
    while options != 0 {
        let w = options.trailing_zeros() as usize;
        options &= options - 1;
        out.push((u, w));
        if match_from(covered | (1 << u) | (1 << w), full, adj, dead, out) {
            return true;
        }
        out.pop();
    }
    dead[slot / 64] |= 1 << (slot % 64);
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(s01: Sign, s02: Sign, s12: Sign) -> SignedGraph {
        SignedGraph::new(3, [(0, 1, s01), (0, 2, s02), (1, 2, s12)]).unwrap()
    }

    use Sign::{Negative as N, Positive as P};

    #[test]
    fn parses_triangle_with_one_negative_edge() {
        let g = SignedGraph::parse("3 3\n0 1 +\n0 2 +\n1 2 -\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.sign(1, 2), Some(N));
        assert_eq!(g.sign(2, 0), Some(P));
        assert_eq!(g.negative_edges().count(), 1);
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = SignedGraph::parse("2 1\n0 0 +\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_reports_line_numbers_past_comments() {
        let err = SignedGraph::parse("# header\n3 2\n0 1 +\n# gap\n0 7 -\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
        let err = SignedGraph::parse("3 2\n0 1 +\n1 0 -\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = SignedGraph::parse("3 2\n0 1 *\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = SignedGraph::parse("3 2\n0 1 +\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
        assert!(SignedGraph::parse("").is_err());
    }

    #[test]
    fn canonical_writer_sorts_edges() {
        let g = SignedGraph::new(4, [(3, 2, N), (0, 1, P), (1, 3, P)]).unwrap();
        assert_eq!(g.to_text(), "4 3\n0 1 +\n1 3 +\n2 3 -\n");
        assert_eq!(SignedGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn positive_component_edge_cases() {
        let all_pos = SignedGraph::complete(4, |_, _| P);
        assert_eq!(positive_components(&all_pos), vec![vec![0, 1, 2, 3]]);
        let all_neg = SignedGraph::complete(4, |_, _| N);
        assert_eq!(positive_components(&all_neg), vec![vec![0], vec![1], vec![2], vec![3]]);
        let two = SignedGraph::new(6, [(0, 1, P), (1, 2, P), (0, 2, P), (3, 4, P), (4, 5, P), (3, 5, P), (2, 3, N)]).unwrap();
        assert_eq!(positive_components(&two), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn strong_balance_triangles() {
        match check_strong_balance(&triangle(P, N, P)).unwrap() {
            StrongBalance::Unbalanced { witness } => {
                assert_eq!(witness.len(), 3);
                let negatives = cycle_negatives(&triangle(P, N, P), &witness);
                assert_eq!(negatives, 1);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            check_strong_balance(&triangle(N, N, P)).unwrap(),
            StrongBalance::Balanced { v1: vec![0], v2: vec![1, 2] }
        );
        assert!(matches!(check_strong_balance(&triangle(N, N, N)).unwrap(), StrongBalance::Unbalanced { .. }));
    }

    fn cycle_negatives(g: &SignedGraph, cycle: &[usize]) -> usize {
        (0..cycle.len())
            .map(|i| g.sign(cycle[i], cycle[(i + 1) % cycle.len()]).expect("cycle edge"))
            .filter(|s| s.is_negative())
            .count()
    }

    #[test]
    fn weak_balance_triangles() {
        assert_eq!(
            check_weak_balance(&triangle(N, N, N)).unwrap(),
            WeakBalance::Balanced { groups: vec![vec![0], vec![1], vec![2]] }
        );
        match check_weak_balance(&triangle(P, P, N)).unwrap() {
            WeakBalance::Unbalanced { witness } => {
                assert_eq!(witness.len(), 3);
                assert_eq!(cycle_negatives(&triangle(P, P, N), &witness), 1);
            }
            other => panic!("{other:?}"),
        }
        let cliques = SignedGraph::complete(6, |u, v| if (u < 3) == (v < 3) { P } else { N });
        assert_eq!(
            check_weak_balance(&cliques).unwrap(),
            WeakBalance::Balanced { groups: vec![vec![0, 1, 2], vec![3, 4, 5]] }
        );
    }

    #[test]
    fn balance_requires_connectivity() {
        let g = SignedGraph::new(4, [(0, 1, N), (2, 3, P)]).unwrap();
        assert!(matches!(check_strong_balance(&g), Err(Error::Disconnected)));
        assert!(matches!(check_weak_balance(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn perfect_matching_small_cases() {
        let edge = SignedGraph::new(2, [(0, 1, P)]).unwrap();
        assert_eq!(has_perfect_matching(&edge, true).unwrap(), Some(vec![(0, 1)]));
        let path = SignedGraph::new(3, [(0, 1, P), (1, 2, P)]).unwrap();
        assert_eq!(has_perfect_matching(&path, false).unwrap(), None);
        let c4 = SignedGraph::ring(4, &[]).unwrap();
        let m = has_perfect_matching(&c4, true).unwrap().unwrap();
        assert_eq!(m.len(), 2);
        let star = SignedGraph::new(4, [(0, 1, P), (0, 2, P), (0, 3, P)]).unwrap();
        assert_eq!(has_perfect_matching(&star, true).unwrap(), None);
        let neg_c4 = SignedGraph::ring(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(has_perfect_matching(&neg_c4, true).unwrap(), Some(vec![(0, 3), (1, 2)]));
        assert!(has_perfect_matching(&neg_c4, false).unwrap().is_some());
        let big = SignedGraph::complete(26, |_, _| P);
        assert!(matches!(has_perfect_matching(&big, true), Err(Error::UnsupportedSize(_))));
    }
}

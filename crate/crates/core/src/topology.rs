//! Coupling graphs and the distance/path queries the router relies on.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("invalid {kind} parameter: {reason}")]
    InvalidParameter {
        kind: &'static str,
        reason: &'static str,
    },
    #[error("edge ({0}, {1}) out of range or a self-loop")]
    BadEdge(usize, usize),
    #[error("graph is disconnected: node {0} unreachable")]
    Disconnected(usize),
    #[error("source and destination are the same node {0}")]
    SameNode(usize),
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
}

/// Builder that produced a graph, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    Star { n: usize },
    HeavyHex { d: usize },
    Square { rows: usize, cols: usize },
    Path { n: usize },
    Custom,
}

impl TopologyKind {
    pub fn family(&self) -> &'static str {
        match self {
            TopologyKind::Star { .. } => "star",
            TopologyKind::HeavyHex { .. } => "heavy_hex",
            TopologyKind::Square { .. } => "square",
            TopologyKind::Path { .. } => "path",
            TopologyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for TopologyKind {
    /// Short parameter string, e.g. `n=8`, `d=5`, `3x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyKind::Star { n } | TopologyKind::Path { n } => write!(f, "n={n}"),
            TopologyKind::HeavyHex { d } => write!(f, "d={d}"),
            TopologyKind::Square { rows, cols } => write!(f, "{rows}x{cols}"),
            TopologyKind::Custom => f.write_str("custom"),
        }
    }
}

/// Undirected, simple, connected physical-qubit graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingGraph {
    kind: TopologyKind,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    /// Builds a graph from an edge list. Duplicate edges are merged; self
    /// loops, out-of-range endpoints and disconnected graphs are rejected.
    pub fn from_edges(
        num_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        kind: TopologyKind,
    ) -> Result<Self, TopologyError> {
        if num_nodes == 0 {
            return Err(TopologyError::InvalidParameter {
                kind: kind.family(),
                reason: "graph needs at least one node",
            });
        }
        let mut adjacency = vec![Vec::new(); num_nodes];
        for (u, v) in edges {
            if u == v || u >= num_nodes || v >= num_nodes {
                return Err(TopologyError::BadEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        let g = CouplingGraph { kind, adjacency };
        let dist = g.bfs(0);
        if let Some(u) = dist.iter().position(|d| d.is_none()) {
            return Err(TopologyError::Disconnected(u));
        }
        Ok(g)
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted neighbour list of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        u < self.num_nodes() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, adj) in self.adjacency.iter().enumerate() {
            out.extend(adj.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Hop counts from `src`; `None` for unreachable nodes.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_nodes()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Lexicographically smallest shortest path from `a` to `b`, both ends
    /// included. Found by a BFS from `b` followed by a greedy descent from
    /// `a` that always takes the smallest-id neighbour one hop closer.
    pub fn shortest_path(&self, a: usize, b: usize) -> Result<Vec<usize>, TopologyError> {
        let n = self.num_nodes();
        for x in [a, b] {
            if x >= n {
                return Err(TopologyError::NodeOutOfRange(x));
            }
        }
        if a == b {
            return Err(TopologyError::SameNode(a));
        }
        let dist = self.bfs(b);
        let mut cur = a;
        let mut d = dist[a].ok_or(TopologyError::Disconnected(a))?;
        let mut path = Vec::with_capacity(d + 1);
        path.push(a);
        while d > 0 {
            // neighbours are sorted, so the first match is the smallest id
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&v| dist[v] == Some(d - 1))
                .expect("BFS layer has a predecessor");
            path.push(cur);
            d -= 1;
        }
        Ok(path)
    }
}

/// Star with centre 0 and leaves `1..n`.
pub fn star(n: usize) -> Result<CouplingGraph, TopologyError> {
    if n < 2 {
        return Err(TopologyError::InvalidParameter { kind: "star", reason: "n must be >= 2" });
    }
    CouplingGraph::from_edges(n, (1..n).map(|i| (0, i)), TopologyKind::Star { n })
}

/// Linear chain `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Result<CouplingGraph, TopologyError> {
    if n < 2 {
        return Err(TopologyError::InvalidParameter { kind: "path", reason: "n must be >= 2" });
    }
    CouplingGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)), TopologyKind::Path { n })
}

/// `rows x cols` grid with row-major ids.
pub fn square_lattice(rows: usize, cols: usize) -> Result<CouplingGraph, TopologyError> {
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(TopologyError::InvalidParameter {
            kind: "square",
            reason: "rows * cols must be >= 2",
        });
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    CouplingGraph::from_edges(rows * cols, edges, TopologyKind::Square { rows, cols })
}

/// Heavy-hex style lattice of odd distance `d`.
///
/// A `d x d` grid of data qubits; a flag qubit sits on every horizontal
/// data-data link, and bridge qubits join vertically adjacent data rows. Row
/// gap `g` carries bridges on even columns when `g` is even and on odd
/// columns when `g` is odd, which closes the hexagonal cells and keeps every
/// degree at most 3.
///
/// Ids: data row-major, then flags row-major, then bridges gap-major with
/// ascending column. Node count is `(5d^2 - 3d) / 2`.
pub fn heavy_hex(d: usize) -> Result<CouplingGraph, TopologyError> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(TopologyError::InvalidParameter {
            kind: "heavy_hex",
            reason: "d must be odd and >= 3",
        });
    }
    let data = |r: usize, c: usize| r * d + c;
    let n_data = d * d;
    let n_flag = d * (d - 1);
    let mut edges = Vec::new();
    let mut next = n_data;
    for r in 0..d {
        for c in 0..d - 1 {
            edges.push((data(r, c), next));
            edges.push((next, data(r, c + 1)));
            next += 1;
        }
    }
    debug_assert_eq!(next, n_data + n_flag);
    for g in 0..d - 1 {
        for c in (g % 2..d).step_by(2) {
            edges.push((data(g, c), next));
            edges.push((next, data(g + 1, c)));
            next += 1;
        }
    }
    debug_assert_eq!(next, heavy_hex_nodes(d));
    CouplingGraph::from_edges(next, edges, TopologyKind::HeavyHex { d })
}

pub const fn heavy_hex_nodes(d: usize) -> usize {
    (5 * d * d - 3 * d) / 2
}

/// Dense all-pairs hop-count matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<usize>,
}

impl DistanceMatrix {
    pub fn new(g: &CouplingGraph) -> Result<Self, TopologyError> {
        let n = g.num_nodes();
        let mut dist = Vec::with_capacity(n * n);
        for u in 0..n {
            for (v, d) in g.bfs(u).into_iter().enumerate() {
                dist.push(d.ok_or(TopologyError::Disconnected(v))?);
            }
        }
        Ok(DistanceMatrix { n, dist })
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> usize {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[usize] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }
}

/// Topology families available for automatic sizing.
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Star,
    HeavyHex,
    Square,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::HeavyHex => "heavy_hex",
            Family::Square => "square",
        }
    }
}

/// Smallest chip of the given family with at least `qubits` nodes.
///
/// Star uses `n = qubits`; square uses the smallest `k x k` grid; heavy-hex
/// uses the smallest odd `d >= 3` whose node count suffices.
pub fn sized_for(family: Family, qubits: usize) -> Result<CouplingGraph, TopologyError> {
    let q = qubits.max(2);
    match family {
        Family::Star => star(q),
        Family::Square => {
            let mut k = 1;
            while k * k < q {
                k += 1;
            }
            square_lattice(k, k)
        }
        Family::HeavyHex => {
            let mut d = 3;
            while heavy_hex_nodes(d) < q {
                d += 2;
            }
            heavy_hex(d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn audit(g: &CouplingGraph) {
        for u in 0..g.num_nodes() {
            assert!(!g.neighbors(u).contains(&u));
            for &v in g.neighbors(u) {
                assert!(g.neighbors(v).contains(&u));
            }
            assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
        }
        assert!(g.bfs(0).iter().all(Option::is_some));
    }

    #[test]
    fn star_facts() {
        let g = star(5).unwrap();
        audit(&g);
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.degree(0), 4);
        let d = DistanceMatrix::new(&g).unwrap();
        for i in 1..5 {
            assert_eq!(d.get(0, i), 1);
            assert_eq!(g.degree(i), 1);
            for j in 1..5 {
                if i != j {
                    assert_eq!(d.get(i, j), 2);
                }
            }
        }
        assert_eq!(star(2).unwrap().edges(), vec![(0, 1)]);
        assert!(star(1).is_err());
    }

    #[test]
    fn square_facts() {
        let g = square_lattice(3, 3).unwrap();
        audit(&g);
        assert_eq!(g.num_nodes(), 9);
        assert_eq!(g.num_edges(), 12);
        let d = DistanceMatrix::new(&g).unwrap();
        assert_eq!(d.get(0, 8), 4);
        for (r, c) in [(1, 7), (4, 5), (2, 9), (6, 6)] {
            let g = square_lattice(r, c).unwrap();
            assert_eq!(g.num_edges(), 2 * r * c - r - c);
            let d = DistanceMatrix::new(&g).unwrap();
            assert_eq!(d.get(0, r * c - 1), (r - 1) + (c - 1));
        }
        assert_eq!(square_lattice(1, 4).unwrap().edges(), path(4).unwrap().edges());
        assert!(square_lattice(1, 1).is_err());
        assert!(square_lattice(0, 5).is_err());
    }

    #[test]
    fn heavy_hex_facts() {
        let g = heavy_hex(3).unwrap();
        assert_eq!(g.num_nodes(), 18);
        for d in [3, 5, 7, 9] {
            let g = heavy_hex(d).unwrap();
            audit(&g);
            assert_eq!(g.num_nodes(), (5 * d * d - 3 * d) / 2);
            assert_eq!(g.max_degree(), 3);
            for u in d * d..g.num_nodes() {
                assert_eq!(g.degree(u), 2, "flag/bridge {u} for d={d}");
            }
        }
        assert!(heavy_hex(4).is_err());
        assert!(heavy_hex(1).is_err());
    }

    #[test]
    fn path_facts() {
        let g = path(3).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        let g = path(6).unwrap();
        let d = DistanceMatrix::new(&g).unwrap();
        assert_eq!(d.get(0, 5), 5);
        assert!((0..6).all(|u| (1..=2).contains(&g.degree(u))));
        assert_eq!(DistanceMatrix::new(&path(4).unwrap()).unwrap().row(0), &[0, 1, 2, 3]);
    }

    /// Enumerates every simple path of exactly `len` edges and returns the
    /// lexicographic minimum ending at `b`.
    fn brute_lex_path(g: &CouplingGraph, a: usize, b: usize) -> Vec<usize> {
        let len = g.bfs(a)[b].unwrap();
        let mut best: Option<Vec<usize>> = None;
        let mut stack = vec![vec![a]];
        while let Some(p) = stack.pop() {
            if p.len() == len + 1 {
                if *p.last().unwrap() == b && best.as_ref().is_none_or(|x| p < *x) {
                    best = Some(p);
                }
                continue;
            }
            for &v in g.neighbors(*p.last().unwrap()) {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    stack.push(q);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn shortest_path_examples() {
        let g = square_lattice(2, 3).unwrap();
        assert_eq!(g.shortest_path(0, 5).unwrap(), vec![0, 1, 2, 5]);
        assert_eq!(star(5).unwrap().shortest_path(1, 2).unwrap(), vec![1, 0, 2]);
        assert_eq!(path(4).unwrap().shortest_path(3, 0).unwrap(), vec![3, 2, 1, 0]);
        assert_eq!(g.shortest_path(2, 2), Err(TopologyError::SameNode(2)));
    }

    #[test]
    fn shortest_path_matches_enumeration() {
        for g in [square_lattice(3, 3).unwrap(), heavy_hex(3).unwrap(), star(6).unwrap()] {
            let d = DistanceMatrix::new(&g).unwrap();
            for a in 0..g.num_nodes() {
                for b in 0..g.num_nodes() {
                    if a == b {
                        continue;
                    }
                    let p = g.shortest_path(a, b).unwrap();
                    assert_eq!(p.len(), d.get(a, b) + 1);
                    assert_eq!(p, brute_lex_path(&g, a, b));
                }
            }
        }
    }

    #[test]
    fn distance_matrix_metric() {
        let g = heavy_hex(5).unwrap();
        let d = DistanceMatrix::new(&g).unwrap();
        let n = g.num_nodes();
        for u in 0..n {
            assert_eq!(d.get(u, u), 0);
            for v in 0..n {
                assert_eq!(d.get(u, v), d.get(v, u));
                assert_eq!(d.get(u, v) == 1, g.is_adjacent(u, v));
                for w in (0..n).step_by(7) {
                    assert!(d.get(u, v) <= d.get(u, w) + d.get(w, v));
                }
            }
        }
    }

    #[test]
    fn disconnected_rejected() {
        let e = CouplingGraph::from_edges(4, [(0, 1), (2, 3)], TopologyKind::Custom);
        assert_eq!(e, Err(TopologyError::Disconnected(2)));
        assert!(CouplingGraph::from_edges(3, [(0, 0)], TopologyKind::Custom).is_err());
    }

    #[test]
    fn sizing_rule() {
        assert_eq!(sized_for(Family::Star, 8).unwrap().num_nodes(), 8);
        assert_eq!(sized_for(Family::Square, 8).unwrap().kind(), TopologyKind::Square { rows: 3, cols: 3 });
        assert_eq!(sized_for(Family::Square, 9).unwrap().num_nodes(), 9);
        assert_eq!(sized_for(Family::Square, 10).unwrap().num_nodes(), 16);
        assert_eq!(sized_for(Family::HeavyHex, 18).unwrap().kind(), TopologyKind::HeavyHex { d: 3 });
        assert_eq!(sized_for(Family::HeavyHex, 19).unwrap().kind(), TopologyKind::HeavyHex { d: 5 });
        assert_eq!(sized_for(Family::HeavyHex, 49).unwrap().num_nodes(), 55);
        assert_eq!(sized_for(Family::Star, 1).unwrap().num_nodes(), 2);
    }
}

//! Combinatorial backbone of an equilateral metric graph.
//!
//! A [`Graph`] is finite, simple and undirected, but every edge carries a fixed
//! orientation `(tail, head)`: the edge is identified with `[0, 1]`, the tail
//! sitting at `0` and the head at `1`. CK and KC spectra do not depend on the
//! orientation; the signed incidence matrix does.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::bareiss_determinant;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge} ({tail}, {head}) duplicates edge {first}")]
    DuplicateEdge {
        edge: usize,
        first: usize,
        tail: usize,
        head: usize,
    },
    #[error("edge {edge} references vertex {vertex}, but the graph has {n} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("invalid size {size} for generator '{kind}'")]
    InvalidSize { kind: GraphKind, size: usize },
    #[error("contracting vertices {v} and {w} violates simplicity: {reason}")]
    ContractionViolatesSimplicity { v: usize, w: usize, reason: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge-list parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite simple graph with one fixed orientation per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        Graph::from_edge_list(raw.n, raw.edges)
    }
}

impl Graph {
    /// Validates and wraps an oriented edge list. The orientation of every
    /// pair is kept as given.
    pub fn from_edge_list(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut seen = vec![None; n * n];
        for (edge, &(tail, head)) in pairs.iter().enumerate() {
            for vertex in [tail, head] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { edge, vertex, n });
                }
            }
            if tail == head {
                return Err(GraphError::SelfLoop { edge, vertex: tail });
            }
            let (a, b) = (tail.min(head), tail.max(head));
            if let Some(first) = seen[a * n + b] {
                return Err(GraphError::DuplicateEdge {
                    edge,
                    first,
                    tail,
                    head,
                });
            }
            seen[a * n + b] = Some(edge);
        }
        Ok(Self { n, edges: pairs })
    }

    /// Vertex count `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count `N`.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Oriented edges `(tail, head)` in construction order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(t, h) in &self.edges {
            deg[t] += 1;
            deg[h] += 1;
        }
        deg
    }

    /// Neighbour lists, sorted ascending.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(t, h) in &self.edges {
            adj[t].push(h);
            adj[h].push(t);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_adjacent(&self, v: usize, w: usize) -> bool {
        self.edges
            .iter()
            .any(|&(t, h)| (t == v && h == w) || (t == w && h == v))
    }

    /// First vertex of degree zero, if any.
    pub fn isolated_vertex(&self) -> Option<usize> {
        self.degrees().iter().position(|&d| d == 0)
    }

    pub fn is_regular(&self) -> bool {
        let deg = self.degrees();
        deg.windows(2).all(|w| w[0] == w[1])
    }

    /// Same vertex pairs with every orientation flipped.
    pub fn reversed(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|&(t, h)| (h, t)).collect(),
        }
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(t, h)| (t + shift, h + shift)));
        Graph {
            n: self.n + other.n,
            edges,
        }
    }

    /// Connected components, bipartiteness per component and corank.
    pub fn analyze(&self) -> ComponentInfo {
        let adj = self.neighbours();
        let mut component_id = vec![usize::MAX; self.n];
        let mut colour = vec![0u8; self.n];
        let mut c_plus = 0;
        let mut c_minus = 0;
        let mut c = 0;
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if component_id[root] != usize::MAX {
                continue;
            }
            let mut bipartite = true;
            component_id[root] = c;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if component_id[w] == usize::MAX {
                        component_id[w] = c;
                        colour[w] = 1 - colour[v];
                        queue.push_back(w);
                    } else if colour[w] == colour[v] {
                        bipartite = false;
                    }
                }
            }
            if bipartite {
                c_plus += 1;
            } else {
                c_minus += 1;
            }
            c += 1;
        }
        ComponentInfo {
            n: self.n,
            num_edges: self.edges.len(),
            c,
            c_plus,
            c_minus,
            component_id,
            corank: self.edges.len() + c - self.n,
        }
    }

    /// Identifies `w` with `v`. Vertices above `w` move down by one; edge
    /// order and orientation are preserved.
    pub fn contract_vertices(&self, v: usize, w: usize) -> Result<Graph, GraphError> {
        let violation = |reason: String| GraphError::ContractionViolatesSimplicity { v, w, reason };
        for x in [v, w] {
            if x >= self.n {
                return Err(violation(format!("vertex {x} out of range")));
            }
        }
        if v == w {
            return Err(violation("cannot contract a vertex with itself".into()));
        }
        if self.is_adjacent(v, w) {
            return Err(violation("vertices are adjacent (would create a self-loop)".into()));
        }
        let adj = self.neighbours();
        if let Some(common) = adj[v].iter().find(|x| adj[w].binary_search(x).is_ok()) {
            return Err(violation(format!(
                "common neighbour {common} (would create parallel edges)"
            )));
        }
        let relabel = |x: usize| {
            let x = if x == w { v } else { x };
            if x > w {
                x - 1
            } else {
                x
            }
        };
        let edges = self
            .edges
            .iter()
            .map(|&(t, h)| (relabel(t), relabel(h)))
            .collect();
        Graph::from_edge_list(self.n - 1, edges)
    }

    /// Number of spanning trees κ(Γ), exact, via a principal cofactor of the
    /// combinatorial Laplacian.
    pub fn spanning_tree_count(&self) -> Result<BigUint, GraphError> {
        if self.analyze().c != 1 {
            return Err(GraphError::Disconnected);
        }
        let m = self.n - 1;
        let mut reduced = vec![vec![BigInt::from(0); m]; m];
        let deg = self.degrees();
        for (i, row) in reduced.iter_mut().enumerate() {
            row[i] = BigInt::from(deg[i]);
        }
        for &(t, h) in &self.edges {
            if t < m && h < m {
                reduced[t][h] -= 1;
                reduced[h][t] -= 1;
            }
        }
        let det = bareiss_determinant(reduced);
        Ok(det
            .to_biguint()
            .expect("reduced Laplacian of a connected graph is positive definite"))
    }

    /// Brute-force isomorphism test (degree-pruned backtracking). Intended for
    /// the small fixture graphs only.
    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        if self.n != other.n || self.edges.len() != other.edges.len() {
            return false;
        }
        let (da, db) = (self.degrees(), other.degrees());
        let mut sa = da.clone();
        let mut sb = db.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return false;
        }
        let n = self.n;
        let mut adj_a = vec![false; n * n];
        let mut adj_b = vec![false; n * n];
        for &(t, h) in &self.edges {
            adj_a[t * n + h] = true;
            adj_a[h * n + t] = true;
        }
        for &(t, h) in &other.edges {
            adj_b[t * n + h] = true;
            adj_b[h * n + t] = true;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            v: usize,
            n: usize,
            da: &[usize],
            db: &[usize],
            adj_a: &[bool],
            adj_b: &[bool],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if v == n {
                return true;
            }
            for img in 0..n {
                if used[img] || da[v] != db[img] {
                    continue;
                }
                let consistent = (0..v).all(|u| adj_a[v * n + u] == adj_b[img * n + map[u]]);
                if !consistent {
                    continue;
                }
                map[v] = img;
                used[img] = true;
                if extend(v + 1, n, da, db, adj_a, adj_b, map, used) {
                    return true;
                }
                used[img] = false;
            }
            map[v] = usize::MAX;
            false
        }
        extend(0, n, &da, &db, &adj_a, &adj_b, &mut map, &mut used)
    }

    /// Parses the edge-list text format: a header line `n N` followed by `N`
    /// lines `tail head` (0-based). Blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), GraphError> {
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(GraphError::Parse {
                    line,
                    message: format!("expected two integers, found {} fields", fields.len()),
                });
            }
            let num = |s: &str| {
                s.parse::<usize>().map_err(|e| GraphError::Parse {
                    line,
                    message: format!("'{s}': {e}"),
                })
            };
            Ok((num(fields[0])?, num(fields[1])?))
        };
        let (line, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "missing header 'n N'".into(),
        })?;
        let (n, num_edges) = parse_pair(line, header)?;
        let mut pairs = Vec::with_capacity(num_edges);
        for (line, l) in lines {
            if pairs.len() == num_edges {
                return Err(GraphError::Parse {
                    line,
                    message: format!("more than the declared {num_edges} edges"),
                });
            }
            pairs.push(parse_pair(line, l)?);
        }
        if pairs.len() != num_edges {
            return Err(GraphError::Parse {
                line: text.lines().count(),
                message: format!("declared {num_edges} edges, found {}", pairs.len()),
            });
        }
        Graph::from_edge_list(n, pairs)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(t, h) in &self.edges {
            out.push_str(&format!("{t} {h}\n"));
        }
        out
    }

    /// Builds one of the named fixture graphs. Vertex numbering:
    ///
    /// - `path(k)`: `0 - 1 - … - (k-1)`, edges `(i, i+1)`, `k ≥ 2`.
    /// - `circuit(k)`: edges `(i, i+1 mod k)`, `k ≥ 3`.
    /// - `star(k)`: centre `0`, leaves `1..=k`, edges `(0, i)`, `k ≥ 1`.
    /// - `complete(k)`: edges `(i, j)` for `i < j` in lexicographic order, `k ≥ 2`.
    /// - `petersen`: outer 5-circuit `0..5`, spokes `(i, i+5)`, inner
    ///   pentagram `(5+i, 5+(i+2) mod 5)`.
    /// - `cube_q3`: vertices are 3-bit words, edges `(i, i ^ 2^b)` for `i < i ^ 2^b`.
    /// - `butler_grout_1`: the 8-circuit.
    /// - `butler_grout_2`: 4-circuit `0-1-2-3-0` with the paths `0-4-5` and
    ///   `0-6-7` attached at vertex `0`.
    ///
    /// `size` is ignored for the fixed graphs.
    pub fn generate(kind: GraphKind, size: usize) -> Result<Graph, GraphError> {
        let invalid = || GraphError::InvalidSize { kind, size };
        let edges: (usize, Vec<(usize, usize)>) = match kind {
            GraphKind::Path => {
                if size < 2 {
                    return Err(invalid());
                }
                (size, (0..size - 1).map(|i| (i, i + 1)).collect())
            }
            GraphKind::Circuit => {
                if size < 3 {
                    return Err(invalid());
                }
                (size, circuit_edges(size))
            }
            GraphKind::Star => {
                if size < 1 {
                    return Err(invalid());
                }
                (size + 1, (1..=size).map(|i| (0, i)).collect())
            }
            GraphKind::Complete => {
                if size < 2 {
                    return Err(invalid());
                }
                let mut e = Vec::new();
                for i in 0..size {
                    for j in i + 1..size {
                        e.push((i, j));
                    }
                }
                (size, e)
            }
            GraphKind::Petersen => {
                let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
                e.extend((0..5).map(|i| (i, i + 5)));
                e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
                (10, e)
            }
            GraphKind::CubeQ3 => {
                let mut e = Vec::new();
                for i in 0..8usize {
                    for b in 0..3 {
                        let j = i ^ (1 << b);
                        if i < j {
                            e.push((i, j));
                        }
                    }
                }
                (8, e)
            }
            GraphKind::ButlerGrout1 => (8, circuit_edges(8)),
            GraphKind::ButlerGrout2 => {
                let mut e = circuit_edges(4);
                e.extend([(0, 4), (4, 5), (0, 6), (6, 7)]);
                (8, e)
            }
        };
        Graph::from_edge_list(edges.0, edges.1)
    }
}

fn circuit_edges(k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|i| (i, (i + 1) % k)).collect()
}

/// Fixture graph families understood by [`Graph::generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Path,
    Circuit,
    Star,
    Complete,
    Petersen,
    CubeQ3,
    ButlerGrout1,
    ButlerGrout2,
}

impl GraphKind {
    pub const ALL: [GraphKind; 8] = [
        GraphKind::Path,
        GraphKind::Circuit,
        GraphKind::Star,
        GraphKind::Complete,
        GraphKind::Petersen,
        GraphKind::CubeQ3,
        GraphKind::ButlerGrout1,
        GraphKind::ButlerGrout2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Path => "path",
            GraphKind::Circuit => "circuit",
            GraphKind::Star => "star",
            GraphKind::Complete => "complete",
            GraphKind::Petersen => "petersen",
            GraphKind::CubeQ3 => "cube_q3",
            GraphKind::ButlerGrout1 => "butler_grout_1",
            GraphKind::ButlerGrout2 => "butler_grout_2",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        GraphKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| format!("unknown graph kind '{s}'"))
    }
}

/// Structural invariants of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub n: usize,
    pub num_edges: usize,
    /// Number of connected components.
    pub c: usize,
    /// Bipartite components.
    pub c_plus: usize,
    /// Non-bipartite components.
    pub c_minus: usize,
    /// Component index of every vertex, numbered in order of first vertex.
    pub component_id: Vec<usize>,
    /// Cycle-space dimension `N - n + c`.
    pub corank: usize,
}

impl ComponentInfo {
    pub fn is_connected(&self) -> bool {
        self.c == 1
    }

    pub fn is_bipartite(&self) -> bool {
        self.c_minus == 0
    }

    pub fn is_forest(&self) -> bool {
        self.corank == 0
    }

    /// Every component contains exactly one circuit.
    pub fn is_unicyclic(&self) -> bool {
        self.corank == self.c && self.num_edges == self.n
    }

    /// `N - n` as a signed integer.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_edges as i64 - self.n as i64
    }
}

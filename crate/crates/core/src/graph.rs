//! Labelled simple undirected graphs with an ordered edge list.
//!
//! Vertices are labelled `1..=q`. The edge order is semantic: edge `k`
//! corresponds to the basis vector `e_{q+k}` of the attached Lie algebra, so
//! weight vectors are reproducible across runs. Generated graphs use
//! lexicographic `(i, j)` order; files keep their own order.

use std::collections::BTreeSet;
use std::fmt;

use num::BigRational;

use crate::linalg::Matrix;

/// Unordered vertex pair, stored with the smaller label first.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    SelfLoop { index: usize },
    DuplicateEdge { index: usize },
    VertexOutOfRange { index: usize, vertex: usize },
    MissingEdge { edge: Edge },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop { index } => write!(f, "self-loop at edge {index}"),
            GraphError::DuplicateEdge { index } => write!(f, "duplicate edge at position {index}"),
            GraphError::VertexOutOfRange { index, vertex } => {
                write!(f, "vertex {vertex} out of range at edge {index}")
            }
            GraphError::MissingEdge { edge } => {
                write!(f, "edge {{{}, {}}} not present", edge.0, edge.1)
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Errors from the edge-list text format, with 1-based line numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    MissingHeader,
    BadHeader { line: usize },
    BadEdgeLine { line: usize },
    SelfLoop { line: usize },
    NotIncreasing { line: usize },
    OutOfRange { line: usize },
    Duplicate { line: usize },
    EdgeCountMismatch { expected: usize, found: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::MissingHeader => write!(f, "missing header line \"q p\""),
            ParseError::BadHeader { line } => write!(f, "bad header at line {line}"),
            ParseError::BadEdgeLine { line } => write!(f, "malformed edge at line {line}"),
            ParseError::SelfLoop { line } => write!(f, "self-loop at line {line}"),
            ParseError::NotIncreasing { line } => {
                write!(f, "edge endpoints not increasing at line {line}")
            }
            ParseError::OutOfRange { line } => write!(f, "vertex out of range at line {line}"),
            ParseError::Duplicate { line } => write!(f, "duplicate edge at line {line}"),
            ParseError::EdgeCountMismatch { expected, found } => {
                write!(f, "expected {expected} edges, found {found}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Simple undirected graph on vertices `1..=q` with `p` ordered edges.
///
/// Immutable after construction; all operations are pure, so values can be
/// shared freely across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    q: usize,
    edges: Vec<Edge>,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Builds a graph, normalizing each pair to `(min, max)`.
    pub fn new(q: usize, edges: Vec<Edge>) -> Result<Graph, GraphError> {
        let mut adj = vec![BTreeSet::new(); q + 1];
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        for (pos, &(a, b)) in edges.iter().enumerate() {
            let index = pos + 1;
            if a == b {
                return Err(GraphError::SelfLoop { index });
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i < 1 || j > q {
                let vertex = if i < 1 { i } else { j };
                return Err(GraphError::VertexOutOfRange { index, vertex });
            }
            if !seen.insert((i, j)) {
                return Err(GraphError::DuplicateEdge { index });
            }
            adj[i].insert(j);
            adj[j].insert(i);
            normalized.push((i, j));
        }
        Ok(Graph {
            q,
            edges: normalized,
            adj,
        })
    }

    /// Edgeless graph on `q` vertices.
    pub fn empty(q: usize) -> Graph {
        Graph::new(q, Vec::new()).expect("empty graph is always valid")
    }

    /// Complete graph `K_q`, edges in lexicographic order.
    pub fn complete(q: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 1..=q {
            for j in i + 1..=q {
                edges.push((i, j));
            }
        }
        Graph::new(q, edges).expect("complete graph is always valid")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` (1-based).
    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a >= 1 && b >= 1 && a <= self.q && b <= self.q && self.adj[a].contains(&b)
    }

    /// Copy with one edge removed; remaining edges keep their relative order.
    pub fn delete_edge(&self, edge: Edge) -> Result<Graph, GraphError> {
        let target = if edge.0 < edge.1 {
            edge
        } else {
            (edge.1, edge.0)
        };
        if !self.has_edge(target.0, target.1) {
            return Err(GraphError::MissingEdge { edge: target });
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&e| e != target)
            .collect();
        Graph::new(self.q, edges)
    }

    /// Line graph: one vertex per edge (same ordering), adjacency means the
    /// edges share a vertex.
    pub fn line_graph(&self) -> Graph {
        let p = self.p();
        let mut edges = Vec::new();
        for k in 0..p {
            let (a, b) = self.edges[k];
            for m in k + 1..p {
                let (c, d) = self.edges[m];
                if a == c || a == d || b == c || b == d {
                    edges.push((k + 1, m + 1));
                }
            }
        }
        Graph::new(p, edges).expect("line graph construction is always valid")
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        let mut entries = vec![0u8; self.q * self.q];
        for &(i, j) in &self.edges {
            entries[(i - 1) * self.q + (j - 1)] = 1;
            entries[(j - 1) * self.q + (i - 1)] = 1;
        }
        AdjacencyMatrix {
            n: self.q,
            entries,
        }
    }

    /// True when the graph has a single connected component.
    pub fn is_connected(&self) -> bool {
        if self.q <= 1 {
            return true;
        }
        let mut seen = vec![false; self.q + 1];
        let mut stack = vec![1usize];
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.q
    }

    pub fn lie_type(&self) -> LieType {
        LieType {
            p: self.p(),
            q: self.q,
        }
    }

    /// Parses the edge-list format: header `q p`, then `p` lines `i j` with
    /// `1 <= i < j <= q`, whose order defines the edge indices. Blank lines
    /// and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(idx, l)| (idx + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = rows.next().ok_or(ParseError::MissingHeader)?;
        let mut parts = header.split_whitespace();
        let q: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        let p: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(ParseError::BadHeader { line: header_line })?;
        if parts.next().is_some() {
            return Err(ParseError::BadHeader { line: header_line });
        }

        let mut edges = Vec::with_capacity(p);
        let mut seen = BTreeSet::new();
        let mut found = 0usize;
        for (line, row) in rows {
            let mut parts = row.split_whitespace();
            let i: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(ParseError::BadEdgeLine { line })?;
            let j: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(ParseError::BadEdgeLine { line })?;
            if parts.next().is_some() {
                return Err(ParseError::BadEdgeLine { line });
            }
            found += 1;
            if i == j {
                return Err(ParseError::SelfLoop { line });
            }
            if i > j {
                return Err(ParseError::NotIncreasing { line });
            }
            if i < 1 || j > q {
                return Err(ParseError::OutOfRange { line });
            }
            if !seen.insert((i, j)) {
                return Err(ParseError::Duplicate { line });
            }
            edges.push((i, j));
        }
        if found != p {
            return Err(ParseError::EdgeCountMismatch {
                expected: p,
                found,
            });
        }
        Ok(Graph::new(q, edges).expect("validated during parse"))
    }

    /// Canonical edge-list text; `parse_edge_list` round-trips it bit-exactly.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.q, self.p());
        for &(i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(q={}, edges={:?})", self.q, self.edges)
    }
}

/// Symmetric 0/1 matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn is_valid(&self) -> bool {
        (0..self.n).all(|i| {
            self.get(i, i) == 0
                && (0..self.n).all(|j| self.get(i, j) <= 1 && self.get(i, j) == self.get(j, i))
        })
    }

    pub fn to_rational(&self) -> Matrix<BigRational> {
        Matrix::from_fn(self.n, self.n, |i, j| {
            BigRational::from_integer(self.get(i, j).into())
        })
    }
}

/// The type `(p, q)` of the attached 2-step nilpotent Lie algebra:
/// `p` is the derived-algebra dimension (edges), `q` the generator count
/// (vertices). Always `p <= D_q = q(q-1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LieType {
    pub p: usize,
    pub q: usize,
}

impl LieType {
    pub fn d_q(&self) -> usize {
        self.q * self.q.saturating_sub(1) / 2
    }

    pub fn dimension(&self) -> usize {
        self.p + self.q
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

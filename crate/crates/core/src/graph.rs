//! Graph data model and traversal primitives.
//!
//! A [`Graph`] is finite, undirected and simple. Vertices are dense `0..n`
//! integers. Edges are stored once, oriented `(min, max)`, in first-seen
//! order so that optional edge-feature rows stay aligned with them.

use std::collections::{HashSet, VecDeque};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    id: String,
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbours: Vec<Vec<usize>>,
    node_features: Option<DMatrix<f64>>,
    edge_features: Option<DMatrix<f64>>,
    target: Option<Vec<f64>>,
}

impl Graph {
    /// Builds a graph from an edge list. Reversed and repeated pairs are
    /// collapsed onto their first occurrence; self-loops and out-of-range
    /// endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::with_id("", n, edges)
    }

    pub fn with_id(
        id: impl Into<String>,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let id = id.into();
        let (edges, _) = canonical_edges(&id, n, edges)?;
        Ok(Self::from_canonical(id, n, edges))
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_canonical(String::new(), n, Vec::new())
    }

    fn from_canonical(id: String, n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut neighbours = vec![Vec::new(); n];
        for &(u, v) in &edges {
            neighbours[u].push(v);
            neighbours[v].push(u);
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        Self {
            id,
            n,
            edges,
            neighbours,
            node_features: None,
            edge_features: None,
            target: None,
        }
    }

    /// Builds a graph together with feature matrices.
    ///
    /// `edge_features`, when present, must have one row per *raw* entry of
    /// `edges`; rows belonging to a duplicate (or reversed duplicate) entry
    /// are dropped so the stored matrix has exactly `n_E` rows. This accepts
    /// both single-orientation edge lists and the doubled `edge_index`
    /// layout common in graph-learning dumps.
    pub fn with_features(
        id: impl Into<String>,
        n: usize,
        edges: Vec<(usize, usize)>,
        node_features: Option<DMatrix<f64>>,
        edge_features: Option<DMatrix<f64>>,
    ) -> Result<Self> {
        let id = id.into();
        let raw_len = edges.len();
        let (canonical, kept) = canonical_edges(&id, n, edges)?;
        if let Some(x) = &node_features {
            if x.nrows() != n {
                return Err(Error::Dimension {
                    graph_id: id,
                    what: "node_features",
                    expected: n,
                    actual: x.nrows(),
                });
            }
        }
        let edge_features = match edge_features {
            None => None,
            Some(e) if e.nrows() != raw_len => {
                return Err(Error::Dimension {
                    graph_id: id,
                    what: "edge_features",
                    expected: raw_len,
                    actual: e.nrows(),
                })
            }
            Some(e) if kept.len() == raw_len => Some(e),
            Some(e) => Some(e.select_rows(kept.iter())),
        };
        let mut g = Self::from_canonical(id, n, canonical);
        g.node_features = node_features;
        g.edge_features = edge_features;
        Ok(g)
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn set_target(&mut self, target: Option<Vec<f64>>) {
        self.target = target;
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in first-seen order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbours[u].binary_search(&v).is_ok()
    }

    pub fn node_features(&self) -> Option<&DMatrix<f64>> {
        self.node_features.as_ref()
    }

    pub fn edge_features(&self) -> Option<&DMatrix<f64>> {
        self.edge_features.as_ref()
    }

    pub fn target(&self) -> Option<&[f64]> {
        self.target.as_deref()
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Vertex–edge incidence matrix (`n_V × n_E`, unsigned).
    pub fn incidence(&self) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(self.n, self.edges.len());
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            b[(u, k)] = 1.0;
            b[(v, k)] = 1.0;
        }
        b
    }

    /// Same graph with vertex `v` renamed to `perm[v]`. Edge order (and hence
    /// edge-feature alignment) is preserved.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal vertex count");
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        let mut g = Self::from_canonical(self.id.clone(), self.n, edges);
        if let Some(x) = &self.node_features {
            let mut y = x.clone();
            for v in 0..self.n {
                y.set_row(perm[v], &x.row(v));
            }
            g.node_features = Some(y);
        }
        g.edge_features = self.edge_features.clone();
        g.target = self.target.clone();
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.num_vertices()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)))
            .collect();
        Self::from_canonical(String::new(), self.n + other.n, edges)
    }
}

fn canonical_edges(
    id: &str,
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Result<(Vec<(usize, usize)>, Vec<usize>)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut kept = Vec::new();
    for (k, (u, v)) in edges.into_iter().enumerate() {
        if u >= n || v >= n {
            return Err(Error::VertexOutOfRange {
                graph_id: id.to_string(),
                u,
                v,
                n,
            });
        }
        if u == v {
            return Err(Error::SelfLoopEdge {
                graph_id: id.to_string(),
                vertex: u,
            });
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            out.push(e);
            kept.push(k);
        }
    }
    Ok((out, kept))
}

/// All-pairs unweighted shortest-path distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    const UNREACHABLE: u32 = u32::MAX;

    pub fn order(&self) -> usize {
        self.n
    }

    /// `None` when `i` and `j` lie in different components.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        match self.dist[i * self.n + j] {
            Self::UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn is_reachable(&self, i: usize, j: usize) -> bool {
        self.dist[i * self.n + j] != Self::UNREACHABLE
    }

    /// Finite distances from `i`, one entry per vertex.
    pub fn row(&self, i: usize) -> impl Iterator<Item = Option<u32>> + '_ {
        (0..self.n).map(move |j| self.get(i, j))
    }
}

/// One BFS per source vertex, `O(n_V · (n_V + n_E))`.
pub fn bfs_all_pairs(g: &Graph) -> DistanceMatrix {
    let n = g.num_vertices();
    let mut dist = vec![DistanceMatrix::UNREACHABLE; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &w in g.neighbours(u) {
                if row[w] == DistanceMatrix::UNREACHABLE {
                    row[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    DistanceMatrix { n, dist }
}

/// Number of connected components and a component label per vertex.
/// Labels are assigned in order of the smallest vertex in each component.
pub fn connected_components(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.num_vertices();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbours(u) {
                if label[w] == usize::MAX {
                    label[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (count, label)
}

pub fn degree_vector(g: &Graph) -> Vec<usize> {
    (0..g.num_vertices()).map(|v| g.degree(v)).collect()
}

/// An ordered collection of graphs with unique ids.
#[derive(Debug, Clone, Default)]
pub struct GraphDataset {
    pub name: String,
    pub source_path: String,
    graphs: Vec<Graph>,
}

impl GraphDataset {
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &graphs {
            if !seen.insert(g.id()) {
                return Err(Error::DuplicateId(g.id().to_string()));
            }
        }
        Ok(Self {
            name: name.into(),
            source_path: String::new(),
            graphs,
        })
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }
}

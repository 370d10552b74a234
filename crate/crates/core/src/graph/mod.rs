//! Immutable weighted undirected graphs in compressed adjacency form.
//!
//! Every other module reads distances off this representation. Weights are
//! reals in `[1, W]`; the maximum weight `W` and the connected-component
//! labels are computed once at construction.

use std::collections::{HashSet, VecDeque};

use crate::error::EdgeError;

pub mod generate;
pub mod io;
pub mod sssp;

pub use generate::{generate, Model};
pub use io::{parse_graph, write_graph};
pub use sssp::{dijkstra, truncated_dijkstra, SsspResult, TreeEntry};

pub type VertexId = u32;
pub type Weight = f64;

/// Sentinel for "no vertex" in compact per-vertex tables.
pub const NO_VERTEX: VertexId = VertexId::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Vec<Weight>,
    max_weight: Weight,
    component: Vec<u32>,
    num_components: usize,
}

impl Graph {
    /// Builds a graph from an undirected edge list, validating every edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, EdgeError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Weight)>,
    {
        let mut builder = GraphBuilder::new(n);
        for (u, v, w) in edges {
            builder.add_edge(u as u64, v as u64, w)?;
        }
        Ok(builder.build())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    /// Largest edge weight, `1` for edgeless graphs.
    #[inline]
    pub fn max_weight(&self) -> Weight {
        self.max_weight
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        let range = self.offsets[v as usize]..self.offsets[v as usize + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Weight of edge `{u, v}` if present. Neighbor lists are sorted, so this is a binary search.
    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<Weight> {
        let range = self.offsets[u as usize]..self.offsets[u as usize + 1];
        let slice = &self.targets[range.clone()];
        slice
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[range.start + i])
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Weight)> + '_ {
        (0..self.n() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    #[inline]
    pub fn component(&self, v: VertexId) -> u32 {
        self.component[v as usize]
    }

    pub fn components(&self) -> &[u32] {
        &self.component
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    #[inline]
    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        self.component[u as usize] == self.component[v as usize]
    }

    /// Sizes of all components, indexed by component label.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_components];
        for &c in &self.component {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

/// Incremental, validating graph construction.
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(VertexId, VertexId, Weight)>,
    seen: HashSet<(VertexId, VertexId)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn add_edge(&mut self, u: u64, v: u64, w: Weight) -> Result<(), EdgeError> {
        for x in [u, v] {
            if x >= self.n as u64 {
                return Err(EdgeError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        let (u, v) = (u as VertexId, v as VertexId);
        if u == v {
            return Err(EdgeError::SelfLoop(u));
        }
        if !w.is_finite() || w < 1.0 {
            return Err(EdgeError::BadWeight(w));
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return Err(EdgeError::Duplicate(key.0, key.1));
        }
        self.edges.push((key.0, key.1, w));
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn build(self) -> Graph {
        let n = self.n;
        let mut degree = vec![0usize; n];
        for &(u, v, _) in &self.edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut adjacency: Vec<(VertexId, Weight)> = vec![(0, 0.0); offsets[n]];
        let mut cursor = offsets[..n].to_vec();
        let mut max_weight: Weight = 1.0;
        for &(u, v, w) in &self.edges {
            adjacency[cursor[u as usize]] = (v, w);
            cursor[u as usize] += 1;
            adjacency[cursor[v as usize]] = (u, w);
            cursor[v as usize] += 1;
            max_weight = max_weight.max(w);
        }
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable_by_key(|&(t, _)| t);
        }
        let (targets, weights) = adjacency.into_iter().unzip();
        let mut graph = Graph {
            offsets,
            targets,
            weights,
            max_weight,
            component: Vec::new(),
            num_components: 0,
        };
        let (component, count) = label_components(&graph);
        graph.component = component;
        graph.num_components = count;
        graph
    }
}

/// BFS labeling; labels are assigned in order of each component's smallest vertex.
fn label_components(g: &Graph) -> (Vec<u32>, usize) {
    let n = g.n();
    let mut label = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != u32::MAX {
            continue;
        }
        label[start] = next;
        queue.push_back(start as VertexId);
        while let Some(u) = queue.pop_front() {
            for (v, _) in g.neighbors(u) {
                if label[v as usize] == u32::MAX {
                    label[v as usize] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    (label, next as usize)
}

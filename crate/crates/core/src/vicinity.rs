//! Per-vertex K-nearest lists and the hop-bounded search over the implicit graph H.
//!
//! H has an edge from `v` to every other member of `v`'s list, weighted by the
//! exact distance. It is never materialized: a search reads the out-edges of
//! `v` straight off `v`'s list.

use rayon::prelude::*;

use crate::error::QueryError;
use crate::graph::sssp::{truncated_dijkstra_with, Workspace};
use crate::graph::{Graph, TreeEntry, VertexId, Weight, NO_VERTEX};

/// The lists `K[v]`, each a shortest-path tree truncated after `k_cut` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct VicinityIndex {
    k_cut: usize,
    offsets: Vec<usize>,
    entries: Vec<TreeEntry>,
}

impl VicinityIndex {
    pub fn build(g: &Graph, k_cut: usize) -> Self {
        let n = g.n();
        let lists: Vec<Vec<TreeEntry>> = (0..n as VertexId)
            .into_par_iter()
            .map_init(
                || Workspace::new(n),
                |ws, v| truncated_dijkstra_with(ws, g, v, k_cut),
            )
            .collect();
        Self::from_lists(k_cut, lists)
    }

    pub fn from_lists(k_cut: usize, lists: Vec<Vec<TreeEntry>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut entries = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for list in lists {
            entries.extend(list);
            offsets.push(entries.len());
        }
        Self {
            k_cut,
            offsets,
            entries,
        }
    }

    pub fn k_cut(&self) -> usize {
        self.k_cut
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn list(&self, v: VertexId) -> &[TreeEntry] {
        &self.entries[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Distance to the farthest member of `K[v]`.
    pub fn radius(&self, v: VertexId) -> Weight {
        self.list(v).last().map_or(0.0, |e| e.dist)
    }

    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }

    /// Stored words: vertex, distance and parent per entry.
    pub fn words(&self) -> usize {
        3 * self.entries.len()
    }

    /// The G-path from `v` to `list(v)[pos].vertex` along `v`'s truncated tree.
    pub fn tree_path(&self, v: VertexId, pos: usize) -> Vec<VertexId> {
        let list = self.list(v);
        let mut path = Vec::new();
        let mut at = pos as u32;
        while at != NO_VERTEX {
            path.push(list[at as usize].vertex);
            at = list[at as usize].parent;
        }
        path.reverse();
        path
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HopLabel {
    vertex: VertexId,
    dist: Weight,
    /// Label this one was relaxed from.
    back: u32,
    /// Position of `vertex` within the list of `back`'s vertex.
    via: u32,
    /// Number of H-hops on the traced path.
    hops: u32,
}

/// Outcome of a hop-bounded search from one source.
///
/// For every reached vertex it holds the minimum length over all H-paths with
/// at most `budget` hops, plus a back-pointer chain that realizes it.
#[derive(Debug, Clone)]
pub struct HopSearch {
    source: VertexId,
    budget: usize,
    /// Index into `labels` of each vertex's current best label.
    best: Vec<u32>,
    labels: Vec<HopLabel>,
    reached: Vec<VertexId>,
    relaxations: u64,
}

impl HopSearch {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Reached vertices in order of first discovery; the source comes first.
    pub fn reached(&self) -> &[VertexId] {
        &self.reached
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.best[v as usize] != NO_VERTEX
    }

    #[inline]
    pub fn distance(&self, v: VertexId) -> Option<Weight> {
        let l = self.best[v as usize];
        (l != NO_VERTEX).then(|| self.labels[l as usize].dist)
    }

    pub fn hops(&self, v: VertexId) -> Option<usize> {
        let l = self.best[v as usize];
        (l != NO_VERTEX).then(|| self.labels[l as usize].hops as usize)
    }

    /// Predecessor of `v` in H on its best traced path.
    pub fn back(&self, v: VertexId) -> Option<VertexId> {
        let l = self.best[v as usize];
        if l == NO_VERTEX {
            return None;
        }
        let b = self.labels[l as usize].back;
        (b != NO_VERTEX).then(|| self.labels[b as usize].vertex)
    }

    /// Number of list entries examined.
    pub fn relaxations(&self) -> u64 {
        self.relaxations
    }

    /// The traced H-path `source, ..., target` as `(vertex, position in predecessor's list)`.
    fn trace(&self, target: VertexId) -> Option<Vec<(VertexId, u32)>> {
        let mut l = self.best[target as usize];
        if l == NO_VERTEX {
            return None;
        }
        let mut hops = Vec::new();
        while l != NO_VERTEX {
            let label = self.labels[l as usize];
            hops.push((label.vertex, label.via));
            l = label.back;
        }
        hops.reverse();
        Some(hops)
    }

    /// Vertices of the traced H-path from the source to `target`.
    pub fn h_path(&self, target: VertexId) -> Option<Vec<VertexId>> {
        self.trace(target)
            .map(|t| t.into_iter().map(|(v, _)| v).collect())
    }
}

/// Runs `budget` rounds of frontier relaxation over H from `source`.
///
/// Round `i` relaxes the list of every vertex whose estimate improved in round
/// `i - 1`, using the estimate it had at the end of that round. After round `i`
/// each estimate is the best over H-paths with at most `i` hops.
pub fn bounded_hop_search(idx: &VicinityIndex, source: VertexId, budget: usize) -> HopSearch {
    let mut best = vec![NO_VERTEX; idx.n()];
    let mut labels = vec![HopLabel {
        vertex: source,
        dist: 0.0,
        back: NO_VERTEX,
        via: NO_VERTEX,
        hops: 0,
    }];
    best[source as usize] = 0;
    let mut reached = vec![source];
    let mut relaxations = 0u64;
    let mut frontier: Vec<u32> = vec![0];
    let mut next: Vec<u32> = Vec::new();

    for round in 1..=budget as u32 {
        if frontier.is_empty() {
            break;
        }
        // Labels created before this round are never mutated again, so `from` is a stable snapshot.
        let first_new = labels.len() as u32;
        for &from in &frontier {
            let origin = labels[from as usize];
            let list = idx.list(origin.vertex);
            relaxations += list.len().saturating_sub(1) as u64;
            for (pos, entry) in list.iter().enumerate().skip(1) {
                let cand = origin.dist + entry.dist;
                let y = entry.vertex as usize;
                let cur = best[y];
                if cur != NO_VERTEX && cand >= labels[cur as usize].dist {
                    continue;
                }
                let label = HopLabel {
                    vertex: entry.vertex,
                    dist: cand,
                    back: from,
                    via: pos as u32,
                    hops: round,
                };
                if cur != NO_VERTEX && cur >= first_new {
                    labels[cur as usize] = label;
                } else {
                    if cur == NO_VERTEX {
                        reached.push(entry.vertex);
                    }
                    best[y] = labels.len() as u32;
                    next.push(labels.len() as u32);
                    labels.push(label);
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }

    HopSearch {
        source,
        budget,
        best,
        labels,
        reached,
        relaxations,
    }
}

/// Expands the traced H-path to `target` into a walk in G.
///
/// Each H-hop `v -> v'` becomes the tree path from `v` to `v'` inside `K[v]`,
/// so the walk weighs exactly `search.distance(target)`.
pub fn reconstruct_h_path(
    idx: &VicinityIndex,
    search: &HopSearch,
    target: VertexId,
) -> Result<Vec<VertexId>, QueryError> {
    let trace = search.trace(target).ok_or(QueryError::Unreached(target))?;
    let mut walk = vec![search.source];
    for pair in trace.windows(2) {
        let (from, _) = pair[0];
        let (_, via) = pair[1];
        let segment = idx.tree_path(from, via as usize);
        walk.extend_from_slice(&segment[1..]);
    }
    Ok(walk)
}

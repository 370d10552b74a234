//! Single-source, truncated, multi-source and pruned Dijkstra variants.
//!
//! All variants settle vertices in lexicographic `(distance, vertex id)` order,
//! which fixes tie-breaking and makes every derived structure reproducible.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;

use super::{Graph, VertexId, Weight, NO_VERTEX};

#[derive(Debug, Clone, PartialEq)]
pub struct SsspResult {
    pub source: VertexId,
    /// `f64::INFINITY` for unreachable vertices.
    pub dist: Vec<Weight>,
    /// Predecessor on a shortest path from the source; [`NO_VERTEX`] for the source and unreachable vertices.
    pub parent: Vec<VertexId>,
    /// Reachable vertices in the order they were settled.
    pub order: Vec<VertexId>,
}

/// One entry of a truncated shortest-path tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEntry {
    pub vertex: VertexId,
    pub dist: Weight,
    /// Position of the tree parent within the same list; [`NO_VERTEX`] for the root.
    pub parent: u32,
}

type Key = Reverse<(OrderedFloat<Weight>, VertexId)>;

/// Reusable scratch space; resetting costs only the vertices touched by the last run.
pub(crate) struct Workspace {
    dist: Vec<Weight>,
    parent: Vec<VertexId>,
    settled: Vec<bool>,
    touched: Vec<VertexId>,
    heap: BinaryHeap<Key>,
}

impl Workspace {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            dist: vec![Weight::INFINITY; n],
            parent: vec![NO_VERTEX; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = Weight::INFINITY;
            self.parent[v as usize] = NO_VERTEX;
            self.settled[v as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs Dijkstra from `source`, calling `visit(v, dist, parent)` as each vertex settles.
    /// Stops early when `visit` returns `false`.
    fn run<F>(&mut self, g: &Graph, source: VertexId, mut visit: F)
    where
        F: FnMut(VertexId, Weight, VertexId) -> bool,
    {
        self.reset();
        self.dist[source as usize] = 0.0;
        self.touched.push(source);
        self.heap.push(Reverse((OrderedFloat(0.0), source)));
        while let Some(Reverse((OrderedFloat(d), u))) = self.heap.pop() {
            if self.settled[u as usize] || d > self.dist[u as usize] {
                continue;
            }
            self.settled[u as usize] = true;
            if !visit(u, d, self.parent[u as usize]) {
                return;
            }
            for (v, w) in g.neighbors(u) {
                let cand = d + w;
                let slot = &mut self.dist[v as usize];
                if cand < *slot {
                    if slot.is_infinite() {
                        self.touched.push(v);
                    }
                    *slot = cand;
                    self.parent[v as usize] = u;
                    self.heap.push(Reverse((OrderedFloat(cand), v)));
                }
            }
        }
    }
}

pub fn dijkstra(g: &Graph, source: VertexId) -> SsspResult {
    let n = g.n();
    let mut ws = Workspace::new(n);
    let mut dist = vec![Weight::INFINITY; n];
    let mut parent = vec![NO_VERTEX; n];
    let mut order = Vec::new();
    ws.run(g, source, |v, d, p| {
        dist[v as usize] = d;
        parent[v as usize] = p;
        order.push(v);
        true
    });
    SsspResult {
        source,
        dist,
        parent,
        order,
    }
}

/// The `min(k_cut, reachable)` closest vertices to `source`, source first, as a
/// truncated shortest-path tree in settle order (every parent precedes its children).
pub fn truncated_dijkstra(g: &Graph, source: VertexId, k_cut: usize) -> Vec<TreeEntry> {
    let mut ws = Workspace::new(g.n());
    truncated_dijkstra_with(&mut ws, g, source, k_cut)
}

pub(crate) fn truncated_dijkstra_with(
    ws: &mut Workspace,
    g: &Graph,
    source: VertexId,
    k_cut: usize,
) -> Vec<TreeEntry> {
    let mut list: Vec<TreeEntry> = Vec::with_capacity(k_cut);
    if k_cut == 0 {
        return list;
    }
    ws.run(g, source, |v, d, p| {
        let parent = if p == NO_VERTEX {
            NO_VERTEX
        } else {
            // The parent settled strictly earlier; lists are short, so scan from the back.
            list.iter().rposition(|e| e.vertex == p).expect("parent settled first") as u32
        };
        list.push(TreeEntry {
            vertex: v,
            dist: d,
            parent,
        });
        list.len() < k_cut
    });
    list
}

/// Closest source for every vertex, ties broken by smaller source id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestSource {
    pub source: VertexId,
    pub dist: Weight,
    /// Next hop from this vertex toward `source`; [`NO_VERTEX`] at the source itself.
    pub next_hop: VertexId,
}

/// Multi-source Dijkstra over lexicographic `(distance, source id)` labels.
///
/// `sources` must be sorted ascending. Unreachable vertices get `None`.
pub fn nearest_sources(g: &Graph, sources: &[VertexId]) -> Vec<Option<NearestSource>> {
    debug_assert!(sources.windows(2).all(|w| w[0] < w[1]));
    let n = g.n();
    let mut best: Vec<Option<NearestSource>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(OrderedFloat<Weight>, VertexId, VertexId)>> =
        BinaryHeap::with_capacity(sources.len());
    for &s in sources {
        best[s as usize] = Some(NearestSource {
            source: s,
            dist: 0.0,
            next_hop: NO_VERTEX,
        });
        heap.push(Reverse((OrderedFloat(0.0), s, s)));
    }
    while let Some(Reverse((OrderedFloat(d), src, u))) = heap.pop() {
        if done[u as usize] {
            continue;
        }
        let cur = best[u as usize].expect("queued vertices have labels");
        if (d, src) != (cur.dist, cur.source) {
            continue;
        }
        done[u as usize] = true;
        for (v, w) in g.neighbors(u) {
            let cand = (d + w, src);
            let better = match best[v as usize] {
                None => true,
                Some(b) => cand < (b.dist, b.source),
            };
            if better && !done[v as usize] {
                best[v as usize] = Some(NearestSource {
                    source: src,
                    dist: cand.0,
                    next_hop: u,
                });
                heap.push(Reverse((OrderedFloat(cand.0), src, v)));
            }
        }
    }
    best
}

/// Dijkstra from `source` that only settles vertices `v` with `dist(source, v) < limit[v]`.
///
/// This grows a Thorup–Zwick cluster: the qualifying set is closed under taking
/// prefixes of shortest paths, so pruning never loses a member.
pub(crate) fn pruned_dijkstra<F>(ws: &mut Workspace, g: &Graph, source: VertexId, limit: &[Weight], mut visit: F)
where
    F: FnMut(VertexId, Weight),
{
    ws.reset();
    if !(0.0 < limit[source as usize]) {
        return;
    }
    ws.dist[source as usize] = 0.0;
    ws.touched.push(source);
    ws.heap.push(Reverse((OrderedFloat(0.0), source)));
    while let Some(Reverse((OrderedFloat(d), u))) = ws.heap.pop() {
        if ws.settled[u as usize] || d > ws.dist[u as usize] {
            continue;
        }
        ws.settled[u as usize] = true;
        visit(u, d);
        for (v, w) in g.neighbors(u) {
            let cand = d + w;
            if cand >= limit[v as usize] {
                continue;
            }
            let slot = &mut ws.dist[v as usize];
            if cand < *slot {
                if slot.is_infinite() {
                    ws.touched.push(v);
                }
                *slot = cand;
                ws.heap.push(Reverse((OrderedFloat(cand), v)));
            }
        }
    }
}

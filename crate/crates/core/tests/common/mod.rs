//! Independent reference computations shared by the integration tests.
//!
//! Nothing here reuses the library's search code: distances come from
//! Bellman–Ford or Floyd–Warshall, hop-bounded distances from a DP over an
//! explicitly materialized H, and V_r membership from brute-force balls.

#![allow(dead_code)]

use subquad_oracle::graph::VertexId;
use subquad_oracle::{Epsilon, Graph, VicinityIndex};

pub const INF: f64 = f64::INFINITY;

pub fn bellman_ford(g: &Graph, s: VertexId) -> Vec<f64> {
    let mut d = vec![INF; g.n()];
    d[s as usize] = 0.0;
    let edges: Vec<_> = g.edges().collect();
    loop {
        let mut changed = false;
        for &(u, v, w) in &edges {
            let (u, v) = (u as usize, v as usize);
            if d[u] + w < d[v] {
                d[v] = d[u] + w;
                changed = true;
            }
            if d[v] + w < d[u] {
                d[u] = d[v] + w;
                changed = true;
            }
        }
        if !changed {
            return d;
        }
    }
}

/// Row-major `n x n` distance matrix.
pub fn floyd_warshall(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut d = vec![INF; n * n];
    for v in 0..n {
        d[v * n + v] = 0.0;
    }
    for (u, v, w) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        d[u * n + v] = d[u * n + v].min(w);
        d[v * n + u] = d[v * n + u].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == INF {
                continue;
            }
            for j in 0..n {
                let c = dik + d[k * n + j];
                if c < d[i * n + j] {
                    d[i * n + j] = c;
                }
            }
        }
    }
    d
}

/// Component label per vertex by flood fill; labels are arbitrary but consistent.
pub fn flood_fill(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(u) = stack.pop() {
            for (v, _) in g.neighbors(u as VertexId) {
                if label[v as usize] == usize::MAX {
                    label[v as usize] = next;
                    stack.push(v as usize);
                }
            }
        }
        next += 1;
    }
    label
}

/// H written out as adjacency lists: `v -> u` for every other `u` in `K[v]`.
pub struct ExplicitH {
    pub adj: Vec<Vec<(usize, f64)>>,
}

impl ExplicitH {
    pub fn new(idx: &VicinityIndex) -> Self {
        let adj = (0..idx.n() as VertexId)
            .map(|v| {
                idx.list(v)
                    .iter()
                    .filter(|e| e.vertex != v)
                    .map(|e| (e.vertex as usize, e.dist))
                    .collect()
            })
            .collect();
        Self { adj }
    }

    /// `d_h(s, ·)` by `h` rounds of Bellman–Ford restricted to H-paths of at most `h` hops.
    pub fn hop_distances(&self, s: usize, h: usize) -> Vec<f64> {
        let mut d = vec![INF; self.adj.len()];
        d[s] = 0.0;
        for _ in 0..h {
            let prev = d.clone();
            for (u, out) in self.adj.iter().enumerate() {
                if prev[u] == INF {
                    continue;
                }
                for &(v, w) in out {
                    if prev[u] + w < d[v] {
                        d[v] = prev[u] + w;
                    }
                }
            }
        }
        d
    }

    /// Unweighted hop distance from `s` by BFS.
    pub fn hop_counts(&self, s: usize) -> Vec<usize> {
        let mut h = vec![usize::MAX; self.adj.len()];
        h[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if h[v] == usize::MAX {
                    h[v] = h[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        h
    }
}

/// For every `v`, the distance to the nearest vertex of its component outside
/// `K[v]` (infinite when `K[v]` spans the component). Then `v ∈ V_r` exactly
/// when `r` is below this value: the closed ball `B_r(v)` fits inside `K[v]`.
pub fn ball_escape_radius(idx: &VicinityIndex, dist: &[f64]) -> Vec<f64> {
    let n = idx.n();
    (0..n)
        .map(|v| {
            let mut inside = vec![false; n];
            for e in idx.list(v as VertexId) {
                inside[e.vertex as usize] = true;
            }
            (0..n)
                .filter(|&u| !inside[u])
                .map(|u| dist[v * n + u])
                .fold(INF, f64::min)
        })
        .collect()
}

/// Checks `r < escape` for `r = (ε/2)·d + W`, exactly for rational `ε` on integral inputs.
pub fn in_vr(eps: Epsilon, d: f64, w: f64, escape: f64) -> bool {
    if escape == INF {
        return true;
    }
    match eps.as_ratio() {
        Some((num, den)) => {
            let (num, den) = (num as f64, den as f64);
            num * d + 2.0 * den * w < 2.0 * den * escape
        }
        None => eps.value() / 2.0 * d + w < escape,
    }
}

/// Whether some shortest `s`–`t` path has every vertex in V_r, with
/// `r = (ε/2)·d(s,t) + W`. DP over the shortest-path DAG from `s`.
pub fn qualifies(
    g: &Graph,
    dist: &[f64],
    escape: &[f64],
    eps: Epsilon,
    s: usize,
    t: usize,
) -> bool {
    let n = g.n();
    let dst = dist[s * n + t];
    if dst == INF {
        return false;
    }
    let w = g.max_weight();
    let ok = |v: usize| in_vr(eps, dst, w, escape[v]);
    if !ok(s) || !ok(t) {
        return false;
    }
    // Vertices on some shortest s-t path, in increasing distance from s.
    let mut on_path: Vec<usize> = (0..n)
        .filter(|&v| dist[s * n + v] + dist[v * n + t] == dst)
        .collect();
    on_path.sort_by(|&a, &b| dist[s * n + a].total_cmp(&dist[s * n + b]));
    let mut good = vec![false; n];
    for &v in &on_path {
        if !ok(v) {
            continue;
        }
        good[v] = v == s
            || g.neighbors(v as VertexId).any(|(u, wt)| {
                good[u as usize] && dist[s * n + u as usize] + wt == dist[s * n + v]
            });
    }
    good[t]
}

/// Weight of a walk, or `None` if some consecutive pair is not an edge.
pub fn walk_weight(g: &Graph, walk: &[VertexId]) -> Option<f64> {
    walk.windows(2)
        .map(|e| g.edge_weight(e[0], e[1]))
        .sum::<Option<f64>>()
}

/// Random graphs on `2..=max_n` vertices with integer weights in `1..=wmax`.
/// Invalid candidate edges (self-loops, repeats) are dropped, so graphs are
/// often disconnected.
pub fn arb_graph(max_n: usize, wmax: u32) -> impl proptest::strategy::Strategy<Value = Graph> {
    use proptest::prelude::*;
    (2..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n as u64, 0..n as u64, 1..=wmax), 0..3 * n).prop_map(move |edges| {
            let mut b = subquad_oracle::GraphBuilder::new(n);
            for (u, v, w) in edges {
                let _ = b.add_edge(u, v, w as f64);
            }
            b.build()
        })
    })
}

pub fn arb_epsilon() -> impl proptest::strategy::Strategy<Value = Epsilon> {
    use proptest::prelude::*;
    prop_oneof![
        (1u64..=4).prop_map(|t| Epsilon::inverse(t).unwrap()),
        Just(Epsilon::ratio(2, 3).unwrap()),
        Just(Epsilon::new(0.7).unwrap()),
        Just(Epsilon::new(2.5).unwrap()),
    ]
}

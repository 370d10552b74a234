//! Dense all-pairs shortest paths: the ground truth every oracle is checked against.

use rayon::prelude::*;

use crate::error::QueryError;
use crate::graph::{dijkstra, Graph, VertexId, Weight, NO_VERTEX};

#[derive(Debug, Clone)]
pub struct ApspTable {
    n: usize,
    dist: Vec<Weight>,
    /// `next[t * n + u]`: first hop on a shortest path from `u` to `t`.
    next: Vec<VertexId>,
}

impl ApspTable {
    /// One Dijkstra per source, run in parallel.
    pub fn build(g: &Graph) -> Self {
        let n = g.n();
        let rows: Vec<_> = (0..n as VertexId)
            .into_par_iter()
            .map(|s| {
                let r = dijkstra(g, s);
                (r.dist, r.parent)
            })
            .collect();
        let mut dist = Vec::with_capacity(n * n);
        let mut next = Vec::with_capacity(n * n);
        for (d, p) in rows {
            dist.extend(d);
            // Dijkstra from t leaves, at every u, the predecessor toward t: the first hop u -> t.
            next.extend(p);
        }
        Self { n, dist, next }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn distance(&self, s: VertexId, t: VertexId) -> Weight {
        self.dist[s as usize * self.n + t as usize]
    }

    pub fn row(&self, s: VertexId) -> &[Weight] {
        &self.dist[s as usize * self.n..(s as usize + 1) * self.n]
    }

    /// First vertex after `u` on a shortest `u -> t` path.
    #[inline]
    pub fn first_hop(&self, u: VertexId, t: VertexId) -> Option<VertexId> {
        let x = self.next[t as usize * self.n + u as usize];
        (x != NO_VERTEX).then_some(x)
    }

    pub fn path(&self, s: VertexId, t: VertexId) -> Result<Vec<VertexId>, QueryError> {
        if !self.distance(s, t).is_finite() {
            return Err(QueryError::NoPath(s, t));
        }
        let mut path = vec![s];
        let mut cur = s;
        while cur != t {
            cur = self.first_hop(cur, t).expect("finite distance has a first hop");
            path.push(cur);
        }
        Ok(path)
    }
}

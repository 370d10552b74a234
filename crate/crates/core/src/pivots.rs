//! Pivot sampling with deterministic covering, closest-pivot data, and the
//! pivot-to-all distance table used by the near-exact oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::sssp::nearest_sources;
use crate::graph::{dijkstra, Graph, VertexId, Weight, NO_VERTEX};
use crate::vicinity::VicinityIndex;

pub const DEFAULT_SAMPLING_C: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestPivot {
    pub pivot: VertexId,
    pub dist: Weight,
    /// First hop from the vertex toward `pivot`; [`NO_VERTEX`] when the vertex is a pivot itself.
    pub next_hop: VertexId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotScheme {
    pivots: Vec<VertexId>,
    /// Position of each vertex in `pivots`, or [`NO_VERTEX`].
    index: Vec<u32>,
    closest: Vec<ClosestPivot>,
    sampled: usize,
    augmented: usize,
    sampling_c: f64,
    seed: u64,
}

/// Per-vertex sampling probability `min(1, C ln n / K)`.
pub fn sampling_probability(n: usize, k_cut: usize, sampling_c: f64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    (sampling_c * (n as f64).ln() / k_cut as f64).min(1.0)
}

impl PivotScheme {
    /// Samples every vertex independently, then adds `v` itself whenever `K[v]`
    /// still holds no pivot (scanning `v` in increasing id order). After that
    /// every list contains a pivot, so `d(v, p(v))` never exceeds the radius of `K[v]`.
    pub fn sample(g: &Graph, idx: &VicinityIndex, sampling_c: f64, seed: u64) -> Self {
        let n = g.n();
        let prob = sampling_probability(n, idx.k_cut().max(1), sampling_c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut is_pivot: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < prob).collect();
        let sampled = is_pivot.iter().filter(|&&b| b).count();

        let mut augmented = 0;
        for v in 0..n as VertexId {
            if !idx.list(v).iter().any(|e| is_pivot[e.vertex as usize]) {
                is_pivot[v as usize] = true;
                augmented += 1;
            }
        }

        let pivots: Vec<VertexId> = (0..n as VertexId).filter(|&v| is_pivot[v as usize]).collect();
        let closest = nearest_sources(g, &pivots)
            .into_iter()
            .map(|c| {
                let c = c.expect("covering puts a pivot in every component");
                ClosestPivot {
                    pivot: c.source,
                    dist: c.dist,
                    next_hop: c.next_hop,
                }
            })
            .collect();
        Self::from_parts(pivots, closest, sampled, augmented, sampling_c, seed)
    }

    pub(crate) fn from_parts(
        pivots: Vec<VertexId>,
        closest: Vec<ClosestPivot>,
        sampled: usize,
        augmented: usize,
        sampling_c: f64,
        seed: u64,
    ) -> Self {
        let mut index = vec![NO_VERTEX; closest.len()];
        for (i, &p) in pivots.iter().enumerate() {
            index[p as usize] = i as u32;
        }
        Self {
            pivots,
            index,
            closest,
            sampled,
            augmented,
            sampling_c,
            seed,
        }
    }

    /// Sorted pivot set `B`.
    pub fn pivots(&self) -> &[VertexId] {
        &self.pivots
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    #[inline]
    pub fn pivot_index(&self, v: VertexId) -> Option<usize> {
        let i = self.index[v as usize];
        (i != NO_VERTEX).then_some(i as usize)
    }

    #[inline]
    pub fn closest(&self, v: VertexId) -> ClosestPivot {
        self.closest[v as usize]
    }

    pub fn closest_all(&self) -> &[ClosestPivot] {
        &self.closest
    }

    /// Vertices that came out of random sampling.
    pub fn sampled(&self) -> usize {
        self.sampled
    }

    /// Vertices added to restore covering.
    pub fn augmented(&self) -> usize {
        self.augmented
    }

    pub fn sampling_c(&self) -> f64 {
        self.sampling_c
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Closest-pivot triples per vertex plus the pivot list.
    pub fn words(&self) -> usize {
        3 * self.closest.len() + self.pivots.len()
    }
}

/// Full distance rows from every pivot, with the first hop from each vertex toward the pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotTable {
    n: usize,
    dist: Vec<Weight>,
    next: Vec<VertexId>,
}

impl PivotTable {
    pub fn build(g: &Graph, scheme: &PivotScheme) -> Self {
        let n = g.n();
        let rows: Vec<_> = scheme
            .pivots()
            .par_iter()
            .map(|&p| {
                let r = dijkstra(g, p);
                (r.dist, r.parent)
            })
            .collect();
        let mut dist = Vec::with_capacity(rows.len() * n);
        let mut next = Vec::with_capacity(rows.len() * n);
        for (d, p) in rows {
            dist.extend(d);
            next.extend(p);
        }
        Self { n, dist, next }
    }

    pub(crate) fn from_parts(n: usize, dist: Vec<Weight>, next: Vec<VertexId>) -> Self {
        Self { n, dist, next }
    }

    pub fn rows(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.dist.len() / self.n
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d(pivots[row], v)`.
    #[inline]
    pub fn distance(&self, row: usize, v: VertexId) -> Weight {
        self.dist[row * self.n + v as usize]
    }

    /// First hop from `v` toward `pivots[row]`.
    #[inline]
    pub fn next_hop(&self, row: usize, v: VertexId) -> Option<VertexId> {
        let x = self.next[row * self.n + v as usize];
        (x != NO_VERTEX).then_some(x)
    }

    /// Walk from `v` to `pivots[row]` by repeatedly following stored first hops.
    pub fn walk_to_pivot(&self, row: usize, v: VertexId) -> Vec<VertexId> {
        let mut walk = vec![v];
        let mut cur = v;
        while let Some(x) = self.next_hop(row, cur) {
            walk.push(x);
            cur = x;
        }
        walk
    }

    pub(crate) fn raw(&self) -> (&[Weight], &[VertexId]) {
        (&self.dist, &self.next)
    }

    /// Distance plus first hop per (pivot, vertex) pair.
    pub fn words(&self) -> usize {
        2 * self.dist.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apsp::ApspTable;
    use crate::graph::{generate, Model};

    #[test]
    fn unit_cutoff_makes_every_vertex_a_pivot() {
        let g = generate(Model::Gnp { n: 30, p: 0.2 }, 3, 1).unwrap();
        let idx = VicinityIndex::build(&g, 1);
        let s = PivotScheme::sample(&g, &idx, 2.0, 0);
        assert_eq!(s.len(), 30);
        for v in 0..30 {
            assert_eq!(s.closest(v).pivot, v);
            assert_eq!(s.closest(v).dist, 0.0);
        }
    }

    #[test]
    fn isolated_vertices_become_their_own_pivots() {
        let g = Graph::from_edges(3, []).unwrap();
        for k_cut in 1..=3 {
            let idx = VicinityIndex::build(&g, k_cut);
            let s = PivotScheme::sample(&g, &idx, 2.0, 42);
            assert_eq!(s.pivots(), &[0, 1, 2]);
        }
    }

    #[test]
    fn covering_holds_on_random_graph() {
        let g = generate(Model::Gnp { n: 200, p: 0.05 }, 10, 5).unwrap();
        let idx = VicinityIndex::build(&g, 20);
        let s = PivotScheme::sample(&g, &idx, 2.0, 9);
        let apsp = ApspTable::build(&g);
        for v in 0..200 {
            assert!(idx.list(v).iter().any(|e| s.pivot_index(e.vertex).is_some()));
            let c = s.closest(v);
            assert!(c.dist <= idx.radius(v));
            let best = s
                .pivots()
                .iter()
                .map(|&p| (apsp.distance(v, p), p))
                .min_by(|a, b| a.partial_cmp(b).unwrap())
                .unwrap();
            assert_eq!((c.dist, c.pivot), best);
        }
        assert_eq!(s.len(), s.sampled() + s.augmented());
    }

    #[test]
    fn same_seed_same_pivots() {
        let g = generate(Model::Gnp { n: 150, p: 0.05 }, 10, 2).unwrap();
        let idx = VicinityIndex::build(&g, 16);
        let a = PivotScheme::sample(&g, &idx, 2.0, 3);
        let b = PivotScheme::sample(&g, &idx, 2.0, 3);
        let c = PivotScheme::sample(&g, &idx, 2.0, 4);
        assert_eq!(a, b);
        assert_ne!(a.pivots(), c.pivots());
    }

    #[test]
    fn table_on_path() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let scheme = PivotScheme::from_parts(
            vec![0],
            (0..4)
                .map(|v| ClosestPivot {
                    pivot: 0,
                    dist: v as f64,
                    next_hop: if v == 0 { NO_VERTEX } else { v - 1 },
                })
                .collect(),
            1,
            0,
            2.0,
            0,
        );
        let t = PivotTable::build(&g, &scheme);
        assert_eq!((0..4).map(|v| t.distance(0, v)).collect::<Vec<_>>(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(t.next_hop(0, 3), Some(2));
        assert_eq!(t.next_hop(0, 0), None);
        assert_eq!(t.walk_to_pivot(0, 3), vec![3, 2, 1, 0]);
        assert_eq!(t.words(), 2 * 4);
    }

    #[test]
    fn table_rows_match_apsp() {
        let g = generate(Model::Gnp { n: 150, p: 0.05 }, 10, 8).unwrap();
        let idx = VicinityIndex::build(&g, 12);
        let s = PivotScheme::sample(&g, &idx, 2.0, 1);
        let t = PivotTable::build(&g, &s);
        let apsp = ApspTable::build(&g);
        for (row, &p) in s.pivots().iter().enumerate() {
            for v in 0..150 {
                assert_eq!(t.distance(row, v), apsp.distance(p, v));
                if let Some(x) = t.next_hop(row, v) {
                    assert_eq!(
                        t.distance(row, v),
                        g.edge_weight(v, x).unwrap() + t.distance(row, x)
                    );
                }
            }
        }
    }
}

//! Thorup–Zwick distance oracle restricted to queries between pivots.
//!
//! Levels `A_0 = B ⊇ A_1 ⊇ ... ⊇ A_{k-1}`, `A_k = ∅`, each sampled from the
//! previous with probability `|B|^{-1/k}`. Every pivot `u` stores its nearest
//! level-`i` center `p_i(u)` and its bunch: the centers `c ∈ A_i \ A_{i+1}`
//! with `d(u, c) < d(u, A_{i+1})`. All distances are measured in the full graph.
//! Queries walk up the levels and return `d(u, w) + d(w, v)` with stretch `2k - 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{ParamError, QueryError};
use crate::graph::sssp::{nearest_sources, pruned_dijkstra, Workspace};
use crate::graph::{Graph, VertexId, Weight, NO_VERTEX};

const LEVEL_RETRIES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct TzOracle {
    k: usize,
    pivots: Vec<VertexId>,
    index: Vec<u32>,
    component: Vec<u32>,
    /// Highest level containing each pivot.
    top: Vec<u8>,
    /// `witness[u * k + i] = (p_i(u), d(u, p_i(u)))`.
    witness: Vec<(VertexId, Weight)>,
    /// Per pivot, `(center, distance)` sorted by center.
    bunches: Vec<Vec<(VertexId, Weight)>>,
}

impl TzOracle {
    /// `pivots` must be sorted ascending.
    pub fn build(g: &Graph, pivots: &[VertexId], k: usize, seed: u64) -> Result<Self, ParamError> {
        if k < 1 {
            return Err(ParamError::Depth);
        }
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        let top = sample_levels(pivots.len(), k, seed);
        Ok(Self::with_levels(g, pivots, k, top))
    }

    pub(crate) fn with_levels(g: &Graph, pivots: &[VertexId], k: usize, top: Vec<u8>) -> Self {
        let n = g.n();
        let mut index = vec![NO_VERTEX; n];
        for (i, &p) in pivots.iter().enumerate() {
            index[p as usize] = i as u32;
        }
        let levels: Vec<Vec<VertexId>> = (0..k)
            .map(|i| {
                pivots
                    .iter()
                    .zip(&top)
                    .filter(|&(_, &t)| t as usize >= i)
                    .map(|(&p, _)| p)
                    .collect()
            })
            .collect();

        let nearest: Vec<_> = levels.iter().map(|a| nearest_sources(g, a)).collect();
        let mut witness = vec![(NO_VERTEX, Weight::INFINITY); pivots.len() * k];
        for (pi, &u) in pivots.iter().enumerate() {
            for i in 0..k {
                if let Some(ns) = nearest[i][u as usize] {
                    witness[pi * k + i] = (ns.source, ns.dist);
                }
            }
        }

        let mut bunches: Vec<Vec<(VertexId, Weight)>> = vec![Vec::new(); pivots.len()];
        for i in 0..k {
            let limit: Vec<Weight> = if i + 1 < k {
                nearest[i + 1]
                    .iter()
                    .map(|x| x.map_or(Weight::INFINITY, |ns| ns.dist))
                    .collect()
            } else {
                vec![Weight::INFINITY; n]
            };
            let centers: Vec<VertexId> = pivots
                .iter()
                .zip(&top)
                .filter(|&(_, &t)| t as usize == i)
                .map(|(&p, _)| p)
                .collect();
            let members: Vec<Vec<(u32, VertexId, Weight)>> = centers
                .par_iter()
                .map_init(
                    || Workspace::new(n),
                    |ws, &c| {
                        let mut out = Vec::new();
                        pruned_dijkstra(ws, g, c, &limit, |w, d| {
                            let wi = index[w as usize];
                            if wi != NO_VERTEX {
                                out.push((wi, c, d));
                            }
                        });
                        out
                    },
                )
                .collect();
            for (wi, c, d) in members.into_iter().flatten() {
                bunches[wi as usize].push((c, d));
            }
        }
        for b in &mut bunches {
            b.sort_unstable_by_key(|&(c, _)| c);
            b.shrink_to_fit();
        }

        Self {
            k,
            component: pivots.iter().map(|&p| g.component(p)).collect(),
            pivots: pivots.to_vec(),
            index,
            top,
            witness,
            bunches,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pivots(&self) -> &[VertexId] {
        &self.pivots
    }

    /// Members of level `i`.
    pub fn level(&self, i: usize) -> Vec<VertexId> {
        self.pivots
            .iter()
            .zip(&self.top)
            .filter(|&(_, &t)| t as usize >= i)
            .map(|(&p, _)| p)
            .collect()
    }

    pub(crate) fn top_levels(&self) -> &[u8] {
        &self.top
    }

    /// `(p_i(u), d(u, p_i(u)))`, if level `i` has a center in `u`'s component.
    pub fn witness(&self, u: VertexId, i: usize) -> Option<(VertexId, Weight)> {
        let pi = self.index[u as usize];
        if pi == NO_VERTEX || i >= self.k {
            return None;
        }
        let w = self.witness[pi as usize * self.k + i];
        (w.0 != NO_VERTEX).then_some(w)
    }

    pub fn bunch(&self, u: VertexId) -> Option<&[(VertexId, Weight)]> {
        let pi = self.index[u as usize];
        (pi != NO_VERTEX).then(|| self.bunches[pi as usize].as_slice())
    }

    pub fn bunch_entries(&self) -> usize {
        self.bunches.iter().map(Vec::len).sum()
    }

    /// Bunch pairs, per-level witness pairs and one level tag per pivot.
    pub fn words(&self) -> usize {
        2 * self.bunch_entries() + 2 * self.witness.len() + self.top.len()
    }

    pub(crate) fn raw_witnesses(&self) -> &[(VertexId, Weight)] {
        &self.witness
    }

    pub(crate) fn raw_bunches(&self) -> &[Vec<(VertexId, Weight)>] {
        &self.bunches
    }

    pub(crate) fn from_raw(
        n: usize,
        k: usize,
        pivots: Vec<VertexId>,
        component: Vec<u32>,
        top: Vec<u8>,
        witness: Vec<(VertexId, Weight)>,
        bunches: Vec<Vec<(VertexId, Weight)>>,
    ) -> Self {
        let mut index = vec![NO_VERTEX; n];
        for (i, &p) in pivots.iter().enumerate() {
            index[p as usize] = i as u32;
        }
        Self {
            k,
            pivots,
            index,
            component,
            top,
            witness,
            bunches,
        }
    }

    #[inline]
    fn in_bunch(&self, pi: usize, center: VertexId) -> Option<Weight> {
        let b = &self.bunches[pi];
        b.binary_search_by_key(&center, |&(c, _)| c).ok().map(|i| b[i].1)
    }

    /// Estimate between the pivots with indices `pu` and `pv` into [`TzOracle::pivots`].
    pub fn query_indexed(&self, pu: usize, pv: usize) -> Weight {
        if pu == pv {
            return 0.0;
        }
        if self.component[pu] != self.component[pv] {
            return Weight::INFINITY;
        }
        let (mut a, mut b) = (pu, pv);
        let (mut w, mut d_aw) = (self.pivots[pu], 0.0);
        let mut i = 0;
        loop {
            if let Some(d_wb) = self.in_bunch(b, w) {
                return d_aw + d_wb;
            }
            i += 1;
            if i >= self.k {
                debug_assert!(false, "top level centers are in every bunch of their component");
                return Weight::INFINITY;
            }
            std::mem::swap(&mut a, &mut b);
            (w, d_aw) = self.witness[a * self.k + i];
            if w == NO_VERTEX {
                return Weight::INFINITY;
            }
        }
    }

    pub fn query(&self, u: VertexId, v: VertexId) -> Result<Weight, QueryError> {
        let lookup = |x: VertexId| {
            self.index
                .get(x as usize)
                .copied()
                .filter(|&i| i != NO_VERTEX)
                .ok_or(QueryError::NotAPivot(x))
        };
        let (pu, pv) = (lookup(u)?, lookup(v)?);
        Ok(self.query_indexed(pu as usize, pv as usize))
    }
}

/// Highest level of each of `len` pivots. Retries while the top level comes out empty,
/// then forces the first pivot into every level.
fn sample_levels(len: usize, k: usize, seed: u64) -> Vec<u8> {
    let mut top = vec![0u8; len];
    if len == 0 || k == 1 {
        return top;
    }
    let prob = (len as f64).powf(-1.0 / k as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..=LEVEL_RETRIES {
        top.iter_mut().for_each(|t| *t = 0);
        for i in 1..k as u8 {
            for t in top.iter_mut().filter(|t| **t == i - 1) {
                if rng.gen::<f64>() < prob {
                    *t = i;
                }
            }
        }
        if top.iter().any(|&t| t as usize == k - 1) {
            return top;
        }
    }
    top[0] = (k - 1) as u8;
    top
}

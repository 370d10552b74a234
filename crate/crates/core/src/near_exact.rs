//! The `(1+ε, 2W)`-stretch oracle: vicinity lists, closest pivots and full
//! pivot rows, queried by a bidirectional hop-bounded search.
//!
//! A query `(s, t)` searches H from both ends with budget `⌈1/ε⌉` and returns
//! the smaller of
//!
//! * the best meeting point `v` of the two searches, `d_h(s,v) + d_h(t,v)`, and
//! * the best detour `d(s,p(v)) + d(p(v),t)` through the closest pivot of any
//!   vertex `v` reached by either search.
//!
//! Both candidates are lengths of real walks, so the answer never
//! underestimates. Paths are reported by expanding H-hops along the stored
//! truncated trees, or by following stored first hops toward a pivot.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::bound::{DistanceOracle, StretchBound};
use crate::error::{ParamError, QueryError};
use crate::graph::{Graph, VertexId, Weight};
use crate::params::Epsilon;
use crate::pivots::{PivotScheme, PivotTable};
use crate::vicinity::{bounded_hop_search, reconstruct_h_path, HopSearch, VicinityIndex};

pub(crate) fn validate(g: &Graph, k_cut: usize, sampling_c: f64) -> Result<(), ParamError> {
    if k_cut < 1 || k_cut > g.n() {
        return Err(ParamError::Cutoff { k_cut, n: g.n() });
    }
    if !(sampling_c > 0.0 && sampling_c.is_finite()) {
        return Err(ParamError::SamplingConstant(sampling_c));
    }
    Ok(())
}

#[derive(Debug)]
pub struct NearExactOracle {
    pub(crate) max_weight: Weight,
    pub(crate) component: Vec<u32>,
    pub(crate) k_cut: usize,
    pub(crate) epsilon: Epsilon,
    pub(crate) hops: usize,
    pub(crate) idx: VicinityIndex,
    pub(crate) pivots: PivotScheme,
    pub(crate) table: PivotTable,
    last_relaxations: AtomicU64,
}

/// A hop-bounded search from one endpoint, plus the distinct pivot rows it touches.
#[derive(Debug, Clone)]
pub struct PreparedSearch {
    pub search: HopSearch,
    pivot_rows: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    /// Different components.
    Disconnected,
    /// Both searches reached this vertex.
    Meet(VertexId),
    /// Detour through this pivot.
    Pivot(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearExactAnswer {
    pub distance: Weight,
    pub witness: Witness,
    /// Meeting-point estimate; infinite when the searches are disjoint.
    pub meet: Weight,
    /// Best pivot detour.
    pub detour: Weight,
    pub relaxations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearExactStats {
    pub n: usize,
    pub k_cut: usize,
    pub epsilon: String,
    pub hops: usize,
    pub pivots: usize,
    pub sampled_pivots: usize,
    pub augmented_pivots: usize,
    pub vicinity_words: usize,
    pub closest_pivot_words: usize,
    pub pivot_table_words: usize,
    pub component_words: usize,
    pub total_words: usize,
    pub last_query_relaxations: u64,
}

impl NearExactOracle {
    pub fn build(
        g: &Graph,
        k_cut: usize,
        epsilon: Epsilon,
        sampling_c: f64,
        seed: u64,
    ) -> Result<Self, ParamError> {
        validate(g, k_cut, sampling_c)?;
        let idx = VicinityIndex::build(g, k_cut);
        let pivots = PivotScheme::sample(g, &idx, sampling_c, seed);
        let table = PivotTable::build(g, &pivots);
        Ok(Self::from_parts(g, k_cut, epsilon, idx, pivots, table))
    }

    pub(crate) fn from_parts(
        g: &Graph,
        k_cut: usize,
        epsilon: Epsilon,
        idx: VicinityIndex,
        pivots: PivotScheme,
        table: PivotTable,
    ) -> Self {
        Self {
            max_weight: g.max_weight(),
            component: g.components().to_vec(),
            k_cut,
            epsilon,
            hops: epsilon.hops(1),
            idx,
            pivots,
            table,
            last_relaxations: AtomicU64::new(0),
        }
    }

    pub fn k_cut(&self) -> usize {
        self.k_cut
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    /// Hop budget `⌈1/ε⌉`.
    pub fn hops(&self) -> usize {
        self.hops
    }

    pub fn max_weight(&self) -> Weight {
        self.max_weight
    }

    pub fn vicinity(&self) -> &VicinityIndex {
        &self.idx
    }

    pub fn pivots(&self) -> &PivotScheme {
        &self.pivots
    }

    pub fn table(&self) -> &PivotTable {
        &self.table
    }

    pub fn prepare(&self, v: VertexId) -> PreparedSearch {
        let search = bounded_hop_search(&self.idx, v, self.hops);
        let mut pivot_rows: Vec<u32> = search
            .reached()
            .iter()
            .map(|&x| {
                let p = self.pivots.closest(x).pivot;
                self.pivots.pivot_index(p).expect("closest pivot is a pivot") as u32
            })
            .collect();
        pivot_rows.sort_unstable();
        pivot_rows.dedup();
        PreparedSearch { search, pivot_rows }
    }

    /// Combines two prepared searches into the answer for `(s, t)`.
    pub fn answer(&self, from_s: &PreparedSearch, from_t: &PreparedSearch) -> NearExactAnswer {
        let (a, b) = (&from_s.search, &from_t.search);
        let (s, t) = (a.source(), b.source());
        let relaxations = a.relaxations() + b.relaxations();
        if self.component[s as usize] != self.component[t as usize] {
            return NearExactAnswer {
                distance: Weight::INFINITY,
                witness: Witness::Disconnected,
                meet: Weight::INFINITY,
                detour: Weight::INFINITY,
                relaxations,
            };
        }

        let (small, large) = if a.reached().len() <= b.reached().len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut meet = Weight::INFINITY;
        let mut meet_at = s;
        for &v in small.reached() {
            if large.contains(v) {
                let cand = a.distance(v).unwrap() + b.distance(v).unwrap();
                if cand < meet || (cand == meet && v < meet_at) {
                    meet = cand;
                    meet_at = v;
                }
            }
        }

        let mut detour = Weight::INFINITY;
        let mut detour_row = 0usize;
        for &row in from_s.pivot_rows.iter().chain(&from_t.pivot_rows) {
            let row = row as usize;
            let cand = self.table.distance(row, s) + self.table.distance(row, t);
            if cand < detour {
                detour = cand;
                detour_row = row;
            }
        }

        let (distance, witness) = if meet <= detour {
            (meet, Witness::Meet(meet_at))
        } else {
            (detour, Witness::Pivot(self.pivots.pivots()[detour_row]))
        };
        NearExactAnswer {
            distance,
            witness,
            meet,
            detour,
            relaxations,
        }
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), QueryError> {
        if (v as usize) < self.component.len() {
            Ok(())
        } else {
            Err(QueryError::VertexOutOfRange {
                vertex: v,
                n: self.component.len(),
            })
        }
    }

    pub fn query_detailed(&self, s: VertexId, t: VertexId) -> NearExactAnswer {
        if self.component[s as usize] != self.component[t as usize] {
            self.last_relaxations.store(0, Ordering::Relaxed);
            return NearExactAnswer {
                distance: Weight::INFINITY,
                witness: Witness::Disconnected,
                meet: Weight::INFINITY,
                detour: Weight::INFINITY,
                relaxations: 0,
            };
        }
        let ans = self.answer(&self.prepare(s), &self.prepare(t));
        self.last_relaxations.store(ans.relaxations, Ordering::Relaxed);
        ans
    }

    /// The distance estimate together with a walk in G of exactly that weight.
    pub fn query_path(&self, s: VertexId, t: VertexId) -> Result<(Weight, Vec<VertexId>), QueryError> {
        self.check_vertex(s)?;
        self.check_vertex(t)?;
        if self.component[s as usize] != self.component[t as usize] {
            return Err(QueryError::NoPath(s, t));
        }
        let (ps, pt) = (self.prepare(s), self.prepare(t));
        let ans = self.answer(&ps, &pt);
        self.last_relaxations.store(ans.relaxations, Ordering::Relaxed);
        let walk = match ans.witness {
            Witness::Meet(v) => {
                let mut walk = reconstruct_h_path(&self.idx, &ps.search, v)?;
                let back = reconstruct_h_path(&self.idx, &pt.search, v)?;
                walk.extend(back.iter().rev().skip(1));
                walk
            }
            Witness::Pivot(p) => {
                let row = self.pivots.pivot_index(p).expect("witness is a pivot");
                let mut walk = self.table.walk_to_pivot(row, s);
                let back = self.table.walk_to_pivot(row, t);
                walk.extend(back.iter().rev().skip(1));
                walk
            }
            Witness::Disconnected => unreachable!("components checked above"),
        };
        Ok((ans.distance, walk))
    }

    pub fn stats(&self) -> NearExactStats {
        let n = self.component.len();
        let vicinity_words = self.idx.words();
        let closest_pivot_words = self.pivots.words();
        let pivot_table_words = self.table.words();
        NearExactStats {
            n,
            k_cut: self.k_cut,
            epsilon: self.epsilon.to_string(),
            hops: self.hops,
            pivots: self.pivots.len(),
            sampled_pivots: self.pivots.sampled(),
            augmented_pivots: self.pivots.augmented(),
            vicinity_words,
            closest_pivot_words,
            pivot_table_words,
            component_words: n,
            total_words: vicinity_words + closest_pivot_words + pivot_table_words + n,
            last_query_relaxations: self.last_relaxations.load(Ordering::Relaxed),
        }
    }
}

impl DistanceOracle for NearExactOracle {
    fn n(&self) -> usize {
        self.component.len()
    }

    fn query(&self, s: VertexId, t: VertexId) -> Weight {
        self.query_detailed(s, t).distance
    }

    fn stretch(&self) -> StretchBound {
        StretchBound::new(1.0 + self.epsilon.value(), 2.0 * self.max_weight)
    }

    fn query_all(&self) -> Vec<Weight> {
        use rayon::prelude::*;
        let n = self.n() as VertexId;
        let prepared: Vec<PreparedSearch> = (0..n).into_par_iter().map(|v| self.prepare(v)).collect();
        (0..n)
            .into_par_iter()
            .flat_map_iter(|s| {
                let prepared = &prepared;
                (0..n).map(move |t| self.answer(&prepared[s as usize], &prepared[t as usize]).distance)
            })
            .collect()
    }
}

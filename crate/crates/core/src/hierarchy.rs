//! The `(2k-1+ε, 4kW)`-stretch oracle: vicinity lists and closest pivots as in
//! the near-exact oracle, but pivot-to-pivot distances come from a
//! Thorup–Zwick oracle over the pivots instead of full pivot rows.
//!
//! A query `(s, t)` runs hop-bounded searches with budget `⌈4k/ε⌉` (that is,
//! `⌈2/δ⌉` with `δ = ε/(2k)`) from both ends and returns the smaller of
//!
//! * the hop estimate `d_h(s,t)`, when `t` is reached from `s`, and
//! * the pivot estimate, the minimum of
//!
//!   ```text
//!   [d_h(s,u) + d(u,p(u))] + D̂(p(u), p(v)) + [d(v,p(v)) + d_h(t,v)]
//!   ```
//!
//!   over `u` reached from `s` and `v` reached from `t`.
//!
//! The bracketed terms are lengths of real walks from `s` to `p(u)` and from
//! `p(v)` to `t`; they stand in for `d(s, p(u))` and `d(p(v), t)`, which are
//! not stored. Returning the hop estimate alone whenever `t` is reached is not
//! enough: with ties in the lists an adjacent `t` can be reached only through
//! a long H-path while `s` itself lies outside `V_r`, and then only the pivot
//! estimate carries the stretch guarantee. When the shortest path does stay in
//! `V_r`, the hop estimate is exact, so taking the minimum loses nothing.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::bound::{DistanceOracle, StretchBound};
use crate::error::ParamError;
use crate::graph::{Graph, VertexId, Weight};
use crate::near_exact::validate;
use crate::params::Epsilon;
use crate::pivots::PivotScheme;
use crate::tz::TzOracle;
use crate::vicinity::{bounded_hop_search, HopSearch, VicinityIndex};

/// Mixed into the build seed so level sampling draws from a different stream than pivot sampling.
const LEVEL_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug)]
pub struct HierarchyOracle {
    pub(crate) max_weight: Weight,
    pub(crate) component: Vec<u32>,
    pub(crate) k_cut: usize,
    pub(crate) k: usize,
    pub(crate) epsilon: Epsilon,
    pub(crate) hops: usize,
    pub(crate) idx: VicinityIndex,
    pub(crate) pivots: PivotScheme,
    pub(crate) tz: TzOracle,
    last_pair_scan: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Disconnected,
    /// The hop estimate `d_h(s,t)` won.
    Hop,
    /// Answered through a pair of pivots.
    Pivot { from: VertexId, to: VertexId },
    /// Neither search reached a pivot; cannot happen once every list holds a pivot.
    NoPivot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyAnswer {
    pub distance: Weight,
    pub branch: Branch,
    /// `|A(s)| * |A(t)|`, the number of reached-vertex pairs the pivot estimate ranges over.
    pub pair_scan: u64,
    pub relaxations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyStats {
    pub n: usize,
    pub k_cut: usize,
    pub k: usize,
    pub epsilon: String,
    pub delta: f64,
    pub hops: usize,
    pub pivots: usize,
    pub sampled_pivots: usize,
    pub augmented_pivots: usize,
    pub vicinity_words: usize,
    pub closest_pivot_words: usize,
    pub tz_words: usize,
    pub tz_bunch_entries: usize,
    pub component_words: usize,
    pub total_words: usize,
    pub last_query_pair_scan: u64,
}

/// Per-pivot minimum of `d_h(x,u) + d(u,p(u))` over vertices `u` reached from `x`,
/// as `(pivot index, value)` sorted by pivot index.
type Profile = Vec<(u32, Weight)>;

impl HierarchyOracle {
    pub fn build(
        g: &Graph,
        k_cut: usize,
        k: usize,
        epsilon: Epsilon,
        sampling_c: f64,
        seed: u64,
    ) -> Result<Self, ParamError> {
        validate(g, k_cut, sampling_c)?;
        if k < 1 {
            return Err(ParamError::Depth);
        }
        let idx = VicinityIndex::build(g, k_cut);
        let pivots = PivotScheme::sample(g, &idx, sampling_c, seed);
        let tz = TzOracle::build(g, pivots.pivots(), k, seed ^ LEVEL_SEED_SALT)?;
        Ok(Self::from_parts(g, k_cut, k, epsilon, idx, pivots, tz))
    }

    pub(crate) fn from_parts(
        g: &Graph,
        k_cut: usize,
        k: usize,
        epsilon: Epsilon,
        idx: VicinityIndex,
        pivots: PivotScheme,
        tz: TzOracle,
    ) -> Self {
        Self {
            max_weight: g.max_weight(),
            component: g.components().to_vec(),
            k_cut,
            k,
            epsilon,
            hops: epsilon.hops(4 * k as u64),
            idx,
            pivots,
            tz,
            last_pair_scan: AtomicU64::new(0),
        }
    }

    pub fn k_cut(&self) -> usize {
        self.k_cut
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    /// `δ = ε / (2k)`.
    pub fn delta(&self) -> f64 {
        self.epsilon.value() / (2 * self.k) as f64
    }

    /// Hop budget `⌈4k/ε⌉`.
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

    pub fn tz(&self) -> &TzOracle {
        &self.tz
    }

    pub fn search(&self, v: VertexId) -> HopSearch {
        bounded_hop_search(&self.idx, v, self.hops)
    }

    fn profile(&self, search: &HopSearch) -> Profile {
        let mut prof: Profile = search
            .reached()
            .iter()
            .map(|&u| {
                let c = self.pivots.closest(u);
                let row = self.pivots.pivot_index(c.pivot).expect("closest pivot is a pivot");
                (row as u32, search.distance(u).unwrap() + c.dist)
            })
            .collect();
        prof.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        prof.dedup_by_key(|e| e.0);
        prof
    }

    /// `min(cap, min_{p,q} (a_s(p) + D̂(p,q)) + a_t(q))` and the minimizing pivot pair,
    /// if one beats `cap`. Pairs with `a_s(p) + a_t(q) >= best` cannot win and are skipped.
    fn pivot_branch(&self, a_s: &Profile, a_t: &Profile, cap: Weight) -> (Weight, Option<(u32, u32)>) {
        let by_value = |prof: &Profile| {
            let mut v = prof.clone();
            v.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            v
        };
        let (a_s, a_t) = (by_value(a_s), by_value(a_t));
        let Some(&(_, min_t)) = a_t.first() else {
            return (cap, None);
        };
        let mut best = cap;
        let mut arg = None;
        for &(p, as_) in &a_s {
            if as_ + min_t >= best {
                break;
            }
            for &(q, at) in &a_t {
                if as_ + at >= best {
                    break;
                }
                let cand = (as_ + self.tz.query_indexed(p as usize, q as usize)) + at;
                if cand < best {
                    best = cand;
                    arg = Some((p, q));
                }
            }
        }
        (best, arg)
    }

    pub fn query_detailed(&self, s: VertexId, t: VertexId) -> HierarchyAnswer {
        if self.component[s as usize] != self.component[t as usize] {
            self.last_pair_scan.store(0, Ordering::Relaxed);
            return HierarchyAnswer {
                distance: Weight::INFINITY,
                branch: Branch::Disconnected,
                pair_scan: 0,
                relaxations: 0,
            };
        }
        let from_s = self.search(s);
        let from_t = self.search(t);
        let hop = from_s.distance(t);
        let pair_scan = from_s.reached().len() as u64 * from_t.reached().len() as u64;
        self.last_pair_scan.store(pair_scan, Ordering::Relaxed);
        let relaxations = from_s.relaxations() + from_t.relaxations();
        let (distance, arg) = self.pivot_branch(
            &self.profile(&from_s),
            &self.profile(&from_t),
            hop.unwrap_or(Weight::INFINITY),
        );
        let branch = match (arg, hop) {
            (Some((p, q)), _) => {
                let b = self.pivots.pivots();
                Branch::Pivot {
                    from: b[p as usize],
                    to: b[q as usize],
                }
            }
            (None, Some(_)) => Branch::Hop,
            (None, None) => Branch::NoPivot,
        };
        HierarchyAnswer {
            distance,
            branch,
            pair_scan,
            relaxations,
        }
    }

    pub fn stats(&self) -> HierarchyStats {
        let n = self.component.len();
        let vicinity_words = self.idx.words();
        let closest_pivot_words = self.pivots.words();
        let tz_words = self.tz.words();
        HierarchyStats {
            n,
            k_cut: self.k_cut,
            k: self.k,
            epsilon: self.epsilon.to_string(),
            delta: self.delta(),
            hops: self.hops,
            pivots: self.pivots.len(),
            sampled_pivots: self.pivots.sampled(),
            augmented_pivots: self.pivots.augmented(),
            vicinity_words,
            closest_pivot_words,
            tz_words,
            tz_bunch_entries: self.tz.bunch_entries(),
            component_words: n,
            total_words: vicinity_words + closest_pivot_words + tz_words + n,
            last_query_pair_scan: self.last_pair_scan.load(Ordering::Relaxed),
        }
    }
}

impl DistanceOracle for HierarchyOracle {
    fn n(&self) -> usize {
        self.component.len()
    }

    fn query(&self, s: VertexId, t: VertexId) -> Weight {
        self.query_detailed(s, t).distance
    }

    fn stretch(&self) -> StretchBound {
        let k = self.k as f64;
        StretchBound::new(2.0 * k - 1.0 + self.epsilon.value(), 4.0 * k * self.max_weight)
    }

    /// Shares one search and one profile per vertex, the pivot-pair matrix `D̂`,
    /// and per source the row `M_s[q] = min_p (a_s(p) + D̂(p,q))`. Rounding is
    /// monotone, so `min_q (M_s[q] + a_t(q))` equals the per-query minimum bit for bit.
    fn query_all(&self) -> Vec<Weight> {
        let n = self.n();
        let b = self.pivots.len();
        let prepared: Vec<(Vec<Weight>, Profile)> = (0..n as VertexId)
            .into_par_iter()
            .map(|v| {
                let search = self.search(v);
                let mut hop = vec![Weight::INFINITY; n];
                for &u in search.reached() {
                    hop[u as usize] = search.distance(u).unwrap();
                }
                let prof = self.profile(&search);
                (hop, prof)
            })
            .collect();
        let d_hat: Vec<Weight> = (0..b)
            .into_par_iter()
            .flat_map_iter(|p| (0..b).map(move |q| self.tz.query_indexed(p, q)))
            .collect();

        (0..n)
            .into_par_iter()
            .flat_map_iter(|s| {
                let (hop, a_s) = &prepared[s];
                let mut row = vec![Weight::INFINITY; b];
                for &(p, as_) in a_s {
                    let dp = &d_hat[p as usize * b..(p as usize + 1) * b];
                    for (mq, &dpq) in row.iter_mut().zip(dp) {
                        let cand = as_ + dpq;
                        if cand < *mq {
                            *mq = cand;
                        }
                    }
                }
                let prepared = &prepared;
                (0..n).map(move |t| {
                    if self.component[s] != self.component[t] {
                        return Weight::INFINITY;
                    }
                    prepared[t]
                        .1
                        .iter()
                        .map(|&(q, at)| row[q as usize] + at)
                        .fold(hop[t], Weight::min)
                })
            })
            .collect()
    }
}

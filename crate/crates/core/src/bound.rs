//! Stretch guarantees `d <= estimate <= alpha * d + beta` as checkable values.

use serde::Serialize;

use crate::graph::{VertexId, Weight};

/// Relative slack applied to both sides of a stretch check. Integer-weighted
/// graphs are exact in `f64`; the slack only absorbs rounding in `alpha * d`
/// and in sums of fractional weights.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StretchBound {
    pub multiplicative: f64,
    pub additive: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// The estimate is below the true distance (or finite across components).
    Underestimate,
    /// The estimate exceeds `alpha * d + beta` (or is infinite within a component).
    Overestimate,
}

impl StretchBound {
    pub fn new(multiplicative: f64, additive: f64) -> Self {
        Self {
            multiplicative,
            additive,
        }
    }

    pub fn upper(&self, d: Weight) -> Weight {
        self.multiplicative * d + self.additive
    }

    pub fn check(&self, exact: Weight, estimate: Weight) -> Verdict {
        if exact.is_infinite() {
            return if estimate.is_infinite() {
                Verdict::Ok
            } else {
                Verdict::Underestimate
            };
        }
        if estimate.is_nan() || estimate < exact - RELATIVE_TOLERANCE * exact {
            return Verdict::Underestimate;
        }
        let upper = self.upper(exact);
        if estimate > upper + RELATIVE_TOLERANCE * upper {
            return Verdict::Overestimate;
        }
        Verdict::Ok
    }
}

/// A distance oracle answering pairwise queries under a known stretch bound.
pub trait DistanceOracle: Sync {
    fn n(&self) -> usize;

    /// Estimated distance; `f64::INFINITY` across components.
    ///
    /// # Panics
    /// If `s` or `t` is not a vertex.
    fn query(&self, s: VertexId, t: VertexId) -> Weight;

    fn stretch(&self) -> StretchBound;

    /// Answers for every ordered pair, row-major. Implementations share work across pairs;
    /// the values equal what [`DistanceOracle::query`] returns.
    fn query_all(&self) -> Vec<Weight> {
        let n = self.n() as VertexId;
        (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .map(|(s, t)| self.query(s, t))
            .collect()
    }
}

//! Test corpus, stretch verification against exact distances, and benchmark rows.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::apsp::ApspTable;
use crate::bound::{DistanceOracle, Verdict};
use crate::error::ParamError;
use crate::graph::{generate, Graph, Model, VertexId, Weight};
use crate::snapshot::{AnyOracle, BuildParams, OracleKind};

#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
    pub wmax: u32,
}

/// P100 and a 10x10 grid with unit weights, plus `gnp(n, p)` for
/// `n ∈ {100, 200, 400}`, `p ∈ {0.03, 0.1}`, `W ∈ {1, 10}` and seeds 1..=3.
pub fn acceptance_corpus() -> Vec<CorpusGraph> {
    let mut out = vec![
        CorpusGraph {
            name: "path-100".into(),
            graph: generate(Model::Path { n: 100 }, 1, 0).unwrap(),
            wmax: 1,
        },
        CorpusGraph {
            name: "grid-10x10".into(),
            graph: generate(Model::Grid { rows: 10, cols: 10 }, 1, 0).unwrap(),
            wmax: 1,
        },
    ];
    for n in [100, 200, 400] {
        for p in [0.03, 0.1] {
            for wmax in [1, 10] {
                for seed in 1..=3 {
                    out.push(CorpusGraph {
                        name: format!("gnp-{n}-{p}-w{wmax}-s{seed}"),
                        graph: generate(Model::Gnp { n, p }, wmax, seed).unwrap(),
                        wmax,
                    });
                }
            }
        }
    }
    out
}

/// `count` ordered pairs drawn uniformly with replacement.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Vec<(VertexId, VertexId)> {
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(0..n as VertexId), rng.gen_range(0..n as VertexId)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    AllPairs,
    Sample { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub s: VertexId,
    pub t: VertexId,
    pub exact: Weight,
    pub estimate: Weight,
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub oracle: String,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub pairs: u64,
    pub violations: u64,
    pub underestimates: u64,
    pub overestimates: u64,
    pub first_violation: Option<Violation>,
    /// Pairs in different components (exact distance infinite).
    pub disconnected_pairs: u64,
    /// Max and mean of `(estimate - beta) / d` over connected pairs with `d > 0`.
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Max of `estimate / d` over connected pairs with `d > 0`.
    pub max_plain_ratio: f64,
    pub exact_fraction: f64,
    pub seconds_per_query: f64,
    /// Work per query (list relaxations), measured on up to `WORK_SAMPLE` pairs in all-pairs mode.
    pub mean_relaxations: f64,
    pub max_relaxations: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub const WORK_SAMPLE: usize = 1000;

#[derive(Default)]
struct Tally {
    pairs: u64,
    under: u64,
    over: u64,
    first: Option<Violation>,
    disconnected: u64,
    ratio_n: u64,
    ratio_sum: f64,
    ratio_max: f64,
    plain_max: f64,
    exact: u64,
}

impl Tally {
    fn add(&mut self, oracle: &dyn DistanceOracle, s: VertexId, t: VertexId, exact: Weight, est: Weight) {
        let bound = oracle.stretch();
        self.pairs += 1;
        let verdict = bound.check(exact, est);
        if verdict != Verdict::Ok {
            let kind = if verdict == Verdict::Underestimate {
                self.under += 1;
                "underestimate"
            } else {
                self.over += 1;
                "overestimate"
            };
            if self.first.is_none() {
                self.first = Some(Violation {
                    s,
                    t,
                    exact,
                    estimate: est,
                    kind,
                });
            }
        }
        if exact.is_infinite() {
            self.disconnected += 1;
        }
        if est == exact {
            self.exact += 1;
        }
        if exact > 0.0 && exact.is_finite() && est.is_finite() {
            let r = (est - bound.additive) / exact;
            self.ratio_n += 1;
            self.ratio_sum += r;
            self.ratio_max = self.ratio_max.max(r);
            self.plain_max = self.plain_max.max(est / exact);
        }
    }
}

/// Checks `d <= estimate <= alpha * d + beta` for the chosen pairs, with
/// `(alpha, beta)` taken from the oracle.
pub fn verify(oracle: &AnyOracle, apsp: &ApspTable, mode: VerifyMode) -> VerificationReport {
    let n = oracle.n();
    let dyn_oracle = oracle.as_dyn();
    let mut tally = Tally {
        ratio_max: f64::NEG_INFINITY,
        plain_max: f64::NEG_INFINITY,
        ..Tally::default()
    };
    let (seconds_per_query, work): (f64, Vec<u64>) = match mode {
        VerifyMode::AllPairs => {
            let start = Instant::now();
            let all = oracle.query_all();
            let elapsed = start.elapsed().as_secs_f64();
            for s in 0..n as VertexId {
                for t in 0..n as VertexId {
                    let est = all[s as usize * n + t as usize];
                    tally.add(dyn_oracle, s, t, apsp.distance(s, t), est);
                }
            }
            let work = sample_pairs(n, WORK_SAMPLE.min(n * n), 0)
                .into_par_iter()
                .map(|(s, t)| oracle.query_with_work(s, t).1)
                .collect();
            (elapsed / (n * n).max(1) as f64, work)
        }
        VerifyMode::Sample { pairs, seed } => {
            let chosen = sample_pairs(n, pairs, seed);
            let start = Instant::now();
            let answers: Vec<(Weight, u64)> = chosen
                .iter()
                .map(|&(s, t)| oracle.query_with_work(s, t))
                .collect();
            let elapsed = start.elapsed().as_secs_f64();
            for (&(s, t), &(est, _)) in chosen.iter().zip(&answers) {
                tally.add(dyn_oracle, s, t, apsp.distance(s, t), est);
            }
            (elapsed / pairs.max(1) as f64, answers.iter().map(|a| a.1).collect())
        }
    };
    let bound = oracle.stretch();
    let finite = |x: f64| if x.is_finite() { x } else { 0.0 };
    VerificationReport {
        oracle: oracle.kind().to_string(),
        n,
        alpha: bound.multiplicative,
        beta: bound.additive,
        pairs: tally.pairs,
        violations: tally.under + tally.over,
        underestimates: tally.under,
        overestimates: tally.over,
        first_violation: tally.first,
        disconnected_pairs: tally.disconnected,
        max_ratio: finite(tally.ratio_max),
        mean_ratio: if tally.ratio_n > 0 {
            tally.ratio_sum / tally.ratio_n as f64
        } else {
            0.0
        },
        max_plain_ratio: finite(tally.plain_max),
        exact_fraction: if tally.pairs > 0 {
            tally.exact as f64 / tally.pairs as f64
        } else {
            1.0
        },
        seconds_per_query,
        mean_relaxations: if work.is_empty() {
            0.0
        } else {
            work.iter().sum::<u64>() as f64 / work.len() as f64
        },
        max_relaxations: work.iter().copied().max().unwrap_or(0),
    }
}

/// One parameter point of a benchmark sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub oracle: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "K")]
    pub k_cut: usize,
    pub eps: String,
    pub k: usize,
    pub seed: u64,
    pub build_seconds: f64,
    pub pivots: usize,
    pub vicinity_words: usize,
    pub closest_pivot_words: usize,
    pub pivot_table_words: usize,
    pub tz_words: usize,
    pub total_words: usize,
    pub mean_query_micros: f64,
    pub mean_relaxations: f64,
}

pub fn bench_point(g: &Graph, params: &BuildParams, pairs: usize, seed: u64) -> Result<BenchRow, ParamError> {
    let start = Instant::now();
    let oracle = AnyOracle::build(g, params)?;
    let build_seconds = start.elapsed().as_secs_f64();
    let chosen = sample_pairs(g.n(), pairs, seed);
    let start = Instant::now();
    let work: u64 = chosen.iter().map(|&(s, t)| oracle.query_with_work(s, t).1).sum();
    let query_seconds = start.elapsed().as_secs_f64();
    let per = |x: f64| if chosen.is_empty() { 0.0 } else { x / chosen.len() as f64 };

    let (pivots, vicinity_words, closest_pivot_words, pivot_table_words, tz_words, total_words) = match &oracle {
        AnyOracle::NearExact(o) => {
            let st = o.stats();
            (
                st.pivots,
                st.vicinity_words,
                st.closest_pivot_words,
                st.pivot_table_words,
                0,
                st.total_words,
            )
        }
        AnyOracle::Hierarchy(o) => {
            let st = o.stats();
            (st.pivots, st.vicinity_words, st.closest_pivot_words, 0, st.tz_words, st.total_words)
        }
    };
    Ok(BenchRow {
        oracle: params.kind.to_string(),
        n: g.n(),
        m: g.m(),
        k_cut: params.k_cut,
        eps: params.epsilon.to_string(),
        k: if params.kind == OracleKind::Hierarchy { params.k } else { 0 },
        seed: params.seed,
        build_seconds,
        pivots,
        vicinity_words,
        closest_pivot_words,
        pivot_table_words,
        tz_words,
        total_words,
        mean_query_micros: per(query_seconds * 1e6),
        mean_relaxations: per(work as f64),
    })
}

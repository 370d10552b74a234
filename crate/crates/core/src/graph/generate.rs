//! Seeded synthetic graph families for tests and benchmarks.
//!
//! Weights are integers drawn uniformly from `{1, ..., wmax}` so that
//! distance sums stay exact in `f64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphBuilder, Weight};
use crate::error::GraphError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Path { n: usize },
    Grid { rows: usize, cols: usize },
    /// Erdős–Rényi: each unordered pair independently with probability `p`.
    Gnp { n: usize, p: f64 },
    /// Random points in the unit square joined when closer than `radius`;
    /// the weight grows linearly with Euclidean length.
    Geometric { n: usize, radius: f64 },
}

pub fn generate(model: Model, wmax: u32, seed: u64) -> Result<Graph, GraphError> {
    if wmax < 1 {
        return Err(GraphError::InvalidParams("wmax must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| -> Weight { rng.gen_range(1..=wmax) as Weight };

    let graph = match model {
        Model::Path { n } => {
            let mut b = GraphBuilder::new(n);
            for v in 1..n as u64 {
                let w = weight(&mut rng);
                b.add_edge(v - 1, v, w)?;
            }
            b.build()
        }
        Model::Grid { rows, cols } => {
            let n = rows
                .checked_mul(cols)
                .ok_or_else(|| GraphError::InvalidParams("grid too large".into()))?;
            let mut b = GraphBuilder::new(n);
            let id = |r: usize, c: usize| (r * cols + c) as u64;
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        let w = weight(&mut rng);
                        b.add_edge(id(r, c), id(r, c + 1), w)?;
                    }
                    if r + 1 < rows {
                        let w = weight(&mut rng);
                        b.add_edge(id(r, c), id(r + 1, c), w)?;
                    }
                }
            }
            b.build()
        }
        Model::Gnp { n, p } => {
            if n < 1 || !(0.0..=1.0).contains(&p) {
                return Err(GraphError::InvalidParams(format!(
                    "gnp needs n >= 1 and 0 <= p <= 1 (got n = {n}, p = {p})"
                )));
            }
            let mut b = GraphBuilder::new(n);
            for u in 0..n as u64 {
                for v in u + 1..n as u64 {
                    if rng.gen_bool(p) {
                        let w = weight(&mut rng);
                        b.add_edge(u, v, w)?;
                    }
                }
            }
            b.build()
        }
        Model::Geometric { n, radius } => {
            if n < 1 || !(radius > 0.0 && radius.is_finite()) {
                return Err(GraphError::InvalidParams(format!(
                    "geometric needs n >= 1 and radius > 0 (got n = {n}, radius = {radius})"
                )));
            }
            let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
            let mut b = GraphBuilder::new(n);
            let span = (wmax - 1) as f64;
            for u in 0..n {
                for v in u + 1..n {
                    let (dx, dy) = (points[u].0 - points[v].0, points[u].1 - points[v].1);
                    let len = (dx * dx + dy * dy).sqrt();
                    if len <= radius {
                        let w = 1.0 + (span * len / radius).round();
                        b.add_edge(u as u64, v as u64, w)?;
                    }
                }
            }
            b.build()
        }
    };
    Ok(graph)
}

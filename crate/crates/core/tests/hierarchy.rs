//! Hierarchy oracle: hop-branch exactness on well-covered pairs, overall
//! stretch, and agreement between the batch and single-pair paths.

mod common;

use proptest::prelude::*;

use common::{arb_epsilon, arb_graph, ball_escape_radius, floyd_warshall, qualifies, INF};
use subquad_oracle::graph::VertexId;
use subquad_oracle::{generate, bounded_hop_search, DistanceOracle, Epsilon, HierarchyOracle, Model, Verdict};

/// `δ = ε / 2k` as an exact rational when `ε` is one.
fn delta_of(eps: Epsilon, k: usize) -> Epsilon {
    match eps.as_ratio() {
        Some((num, den)) => Epsilon::ratio(num, den * 2 * k as u64).unwrap(),
        None => Epsilon::new(eps.value() / (2 * k) as f64).unwrap(),
    }
}

fn check_hop_branch(o: &HierarchyOracle, g: &subquad_oracle::Graph, dist: &[f64]) -> Result<usize, TestCaseError> {
    let n = g.n();
    let delta = delta_of(o.epsilon(), o.k());
    prop_assert!((delta.value() - o.delta()).abs() < 1e-12);
    let escape = ball_escape_radius(o.vicinity(), dist);
    let mut covered = 0;
    for s in 0..n {
        let search = bounded_hop_search(o.vicinity(), s as VertexId, o.hops());
        for t in 0..n {
            if !qualifies(g, dist, &escape, delta, s, t) {
                continue;
            }
            covered += 1;
            prop_assert_eq!(search.distance(t as VertexId).unwrap_or(INF), dist[s * n + t], "s={} t={}", s, t);
            prop_assert_eq!(o.query(s as VertexId, t as VertexId), dist[s * n + t]);
        }
    }
    Ok(covered)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sound_within_stretch_and_batch_agrees(
        g in arb_graph(25, 10),
        kc in 1usize..10,
        k in 1usize..4,
        eps in arb_epsilon(),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let o = HierarchyOracle::build(&g, kc.min(n), k, eps, 1.0, seed).unwrap();
        let dist = floyd_warshall(&g);
        let all = o.query_all();
        let bound = o.stretch();
        for s in 0..n {
            for t in 0..n {
                let q = o.query(s as VertexId, t as VertexId);
                prop_assert_eq!(q.to_bits(), all[s * n + t].to_bits());
                prop_assert_eq!(bound.check(dist[s * n + t], q), Verdict::Ok, "s={} t={}", s, t);
            }
        }
    }

    #[test]
    fn hop_branch_is_exact_on_covered_pairs(
        g in arb_graph(25, 5),
        kc in 1usize..10,
        k in 1usize..4,
        eps in arb_epsilon(),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let o = HierarchyOracle::build(&g, kc.min(n), k, eps, 1.0, seed).unwrap();
        check_hop_branch(&o, &g, &floyd_warshall(&g))?;
    }
}

#[test]
fn hop_branch_is_exact_on_larger_graphs() {
    let cases = [
        (Model::Gnp { n: 150, p: 0.04 }, 10, 60, 1, Epsilon::inverse(1).unwrap()),
        (Model::Grid { rows: 10, cols: 15 }, 3, 24, 1, Epsilon::inverse(2).unwrap()),
        (Model::Geometric { n: 140, radius: 0.15 }, 5, 12, 3, Epsilon::ratio(3, 2).unwrap()),
    ];
    for (model, wmax, kc, k, eps) in cases {
        let g = generate(model, wmax, 3).unwrap();
        let o = HierarchyOracle::build(&g, kc, k, eps, 2.0, 3).unwrap();
        let covered = check_hop_branch(&o, &g, &floyd_warshall(&g)).unwrap();
        assert!(covered >= 200, "only {covered} pairs exercise the hop branch");
    }
}

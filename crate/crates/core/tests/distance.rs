//! Distance estimator against pairwise brute force.

use proptest::prelude::*;

use tempbc::distance::{estimate_distances, recommended_sample_size, SourceSampling};
use tempbc::generate::random_temporal_graph;
use tempbc::graph::TemporalGraph;
use tempbc::tbfs::bruteforce::enumerate_paths_bruteforce;
use tempbc::tbfs::PathOptimality;

struct Truth {
    diameter: u32,
    zeta: f64,
    avg: f64,
    eff: u32,
}

fn brute_force(g: &TemporalGraph, tau: f64) -> Truth {
    let n = g.node_count();
    let mut dists = Vec::new();
    for s in 0..n {
        for z in (0..n).filter(|&z| z != s) {
            let paths =
                enumerate_paths_bruteforce(g, s, z, PathOptimality::Shortest, 5_000_000).unwrap();
            if let Some(p) = paths.first() {
                dists.push(p.len() as u32);
            }
        }
    }
    dists.sort_unstable();
    let diameter = dists.last().copied().unwrap_or(0);
    let k = dists.len();
    let eff = (0..=diameter)
        .find(|&h| dists.iter().filter(|&&d| d <= h).count() as f64 / k as f64 >= tau)
        .unwrap_or(0);
    Truth {
        diameter,
        zeta: k as f64 / (n * (n - 1)) as f64,
        avg: if k == 0 {
            0.0
        } else {
            dists.iter().sum::<u32>() as f64 / k as f64
        },
        eff: if k == 0 { 0 } else { eff },
    }
}

fn small_graph() -> impl Strategy<Value = TemporalGraph> {
    (2usize..=8).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1i64..=6), 0..=22)
            .prop_map(move |edges| TemporalGraph::from_edges(n, edges, false).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn census_is_exact(g in small_graph(), tau in prop::sample::select(vec![0.5, 0.9, 1.0])) {
        let truth = brute_force(&g, tau);
        let d = estimate_distances(&g, g.node_count(), tau, 0, SourceSampling::WithReplacement).unwrap();
        prop_assert_eq!(d.diameter, truth.diameter);
        prop_assert_eq!(d.effective_diameter, truth.eff);
        prop_assert!((d.connectivity_rate - truth.zeta).abs() < 1e-12);
        prop_assert!((d.avg_distance - truth.avg).abs() < 1e-12);
        prop_assert!(d.reach_profile.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sampled_diameter_never_overshoots(g in small_graph(), s in 1usize..6, seed in any::<u64>()) {
        let truth = brute_force(&g, 0.9);
        for mode in [SourceSampling::WithReplacement, SourceSampling::WithoutReplacement] {
            let d = estimate_distances(&g, s, 0.9, seed, mode).unwrap();
            prop_assert!(d.diameter <= truth.diameter);
        }
    }
}

#[test]
fn sampled_estimates_within_guarantee() {
    let g = random_temporal_graph(200, 1200, 60, 3);
    let eps = 0.2;
    let census = estimate_distances(&g, 200, 0.9, 0, SourceSampling::WithReplacement).unwrap();
    assert!(census.connectivity_rate > 0.0);
    let s = recommended_sample_size(200, eps).unwrap();
    let avg_slack = eps * census.diameter as f64 / census.connectivity_rate;
    for seed in 0..200 {
        let d = estimate_distances(&g, s, 0.9, seed, SourceSampling::WithReplacement).unwrap();
        assert!(
            (d.connectivity_rate - census.connectivity_rate).abs() <= eps,
            "seed {seed}"
        );
        assert!(
            (d.avg_distance - census.avg_distance).abs() <= avg_slack,
            "seed {seed}"
        );
        assert!(d.diameter <= census.diameter);
    }
}

//! Counting engines against the brute-force path oracle.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use tempbc::exact::{exact_tbc_pairwise, exact_tbc_rational};
use tempbc::graph::{TemporalGraph, VertexAppearance};
use tempbc::tbfs::bruteforce::optimal_paths_from;
use tempbc::tbfs::{
    bruteforce_betweenness, full_tbfs, target_times, truncated_tbfs, PathOptimality,
};

const BUDGET: usize = 2_000_000;

fn small_graph(max_n: usize, max_m: usize, max_t: i64) -> impl Strategy<Value = TemporalGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1..=max_t), 0..=max_m)
            .prop_map(move |edges| TemporalGraph::from_edges(n, edges, false).unwrap())
    })
}

/// Per-source dependency straight from enumerated paths.
fn oracle_dependency(
    g: &TemporalGraph,
    s: usize,
    opt: PathOptimality,
) -> (Vec<BigRational>, Vec<usize>) {
    let n = g.node_count();
    let mut dep = vec![BigRational::zero(); n];
    let mut sigma = vec![0usize; n];
    for (z, paths) in optimal_paths_from(g, s, opt, BUDGET).unwrap() {
        sigma[z] = paths.len();
        for p in &paths {
            for v in p.internal_nodes(g) {
                dep[v] += BigRational::new(BigInt::from(1), BigInt::from(paths.len()));
            }
        }
    }
    (dep, sigma)
}

fn check_source(g: &TemporalGraph, s: usize, opt: PathOptimality) -> Result<(), TestCaseError> {
    let n = g.node_count();
    let full = full_tbfs(g, s, opt);
    let (dep, sigma) = oracle_dependency(g, s, opt);
    let paths = optimal_paths_from(g, s, opt, BUDGET).unwrap();
    for (z, &count) in sigma.iter().enumerate() {
        prop_assert_eq!(
            full.sigma(z),
            &BigUint::from(count),
            "sigma {}->{} {}",
            s,
            z,
            opt
        );
        // target appearances carry exactly the arrival times of optimal paths
        let expected: BTreeSet<u32> = paths
            .get(&z)
            .map(|ps| ps.iter().map(|p| p.arrival(g)).collect())
            .unwrap_or_default();
        let got: BTreeSet<u32> = target_times(&full, z).into_iter().collect();
        prop_assert_eq!(got, expected, "targets {}->{} {}", s, z, opt);
    }
    prop_assert_eq!(&full.dependency, &dep, "dependency from {} {}", s, opt);
    prop_assert!(full.dependency[s].is_zero());

    for z in (0..n).filter(|&z| z != s) {
        let t = truncated_tbfs(g, s, z, opt).unwrap();
        prop_assert_eq!(t.sigma(z), full.sigma(z));
        prop_assert_eq!(target_times(&t, z), target_times(&full, z));
        let mut ratio = vec![BigRational::zero(); n];
        if let Some(ps) = paths.get(&z) {
            for p in ps {
                for v in p.internal_nodes(g) {
                    ratio[v] += BigRational::new(BigInt::from(1), BigInt::from(ps.len()));
                }
            }
        }
        prop_assert_eq!(&t.dependency, &ratio, "pair ({}, {}) {}", s, z, opt);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engines_match_oracle(g in small_graph(9, 25, 6)) {
        for opt in PathOptimality::ALL {
            for s in 0..g.node_count() {
                check_source(&g, s, opt)?;
            }
        }
    }

    #[test]
    fn exact_matches_pair_sum_and_definition(g in small_graph(8, 20, 5)) {
        for opt in PathOptimality::ALL {
            let exact = exact_tbc_rational(&g, opt);
            prop_assert_eq!(&exact, &exact_tbc_pairwise(&g, opt));
            prop_assert_eq!(&exact, &bruteforce_betweenness(&g, opt, BUDGET).unwrap());
        }
    }

    #[test]
    fn predecessors_are_strictly_earlier(g in small_graph(9, 25, 6)) {
        for opt in PathOptimality::ALL {
            for s in 0..g.node_count() {
                let r = full_tbfs(&g, s, opt);
                prop_assert_eq!(r.records[0].appearance, VertexAppearance::new(s, 0));
                for rec in &r.records[1..] {
                    let total: BigUint = rec.predecessors.iter().map(|p| &r.records[p.record].sigma).sum();
                    prop_assert_eq!(&total, &rec.sigma);
                    for p in &rec.predecessors {
                        prop_assert!(r.records[p.record].appearance.time < rec.appearance.time);
                    }
                }
            }
        }
    }

    #[test]
    fn dependency_bounded_by_n_minus_two(g in small_graph(9, 25, 6)) {
        let n = g.node_count();
        let cap = BigRational::from_integer(BigInt::from(n.saturating_sub(2)));
        for opt in PathOptimality::ALL {
            for s in 0..n {
                let r = full_tbfs(&g, s, opt);
                prop_assert!(r.dependency.iter().all(|d| *d >= BigRational::zero() && *d <= cap));
            }
        }
    }

    #[test]
    fn isolated_node_rescales_scores(g in small_graph(7, 18, 5)) {
        let n = g.node_count();
        let edges: Vec<(usize, usize, i64)> =
            g.edges().iter().map(|e| (e.src, e.dst, e.time as i64)).collect();
        let bigger = TemporalGraph::from_edges(n + 1, edges, false).unwrap();
        let factor = BigRational::new(BigInt::from(n * (n - 1)), BigInt::from((n + 1) * n));
        for opt in PathOptimality::ALL {
            let before = exact_tbc_rational(&g, opt);
            let after = exact_tbc_rational(&bigger, opt);
            prop_assert!(after[n].is_zero());
            for v in 0..n {
                prop_assert_eq!(&after[v], &(&before[v] * &factor));
            }
        }
    }
}

#[test]
fn parallel_edges_count_as_distinct_paths() {
    // two copies of 0->1 at t1, then 1->2 at t2
    let g = TemporalGraph::from_edges(3, [(0, 1, 1), (0, 1, 1), (1, 2, 2)], false).unwrap();
    for opt in PathOptimality::ALL {
        let r = full_tbfs(&g, 0, opt);
        assert_eq!(r.sigma(2), &BigUint::from(2u32));
        assert_eq!(r.dependency[1], BigRational::from_integer(1.into()));
        check_source(&g, 0, opt).unwrap();
    }
}

#[test]
fn walks_through_the_target_do_not_count() {
    // 0->1 at t1, 1->2 at t2, 2->1 at t3: (1, t3) is reachable only by a
    // walk revisiting node 1 and must not add paths to node 1.
    let g = TemporalGraph::from_edges(3, [(0, 1, 1), (1, 2, 2), (2, 1, 3)], false).unwrap();
    for opt in PathOptimality::ALL {
        let r = full_tbfs(&g, 0, opt);
        assert_eq!(r.sigma(1), &BigUint::from(1u32), "{opt}");
        check_source(&g, 0, opt).unwrap();
    }
}

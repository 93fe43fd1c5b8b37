//! Synthetic temporal graphs for experiments and tests.

use rand::Rng;

use crate::graph::TemporalGraph;
use crate::rng::substream;

/// `m` arcs with uniform endpoints (`u != v`) and uniform times in `1..=max_time`.
pub fn random_temporal_graph(n: usize, m: usize, max_time: i64, seed: u64) -> TemporalGraph {
    assert!(n >= 2 && max_time >= 1);
    let mut rng = substream(seed, u64::MAX);
    let edges: Vec<(usize, usize, i64)> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v, rng.gen_range(1..=max_time))
        })
        .collect();
    TemporalGraph::from_edges(n, edges, false).expect("ids in range")
}

/// A two-phase star: every leaf sends to the hub at time 1 and the hub sends
/// to every leaf at time 2, so the hub lies on the unique optimal path of
/// every leaf pair. Node `0` is the hub, `1..=leaves` the leaves and the
/// remaining `isolated` nodes have no edges.
pub fn two_phase_star(leaves: usize, isolated: usize) -> TemporalGraph {
    let n = 1 + leaves + isolated;
    let mut edges = Vec::with_capacity(2 * leaves);
    for leaf in 1..=leaves {
        edges.push((leaf, 0, 1));
    }
    for leaf in 1..=leaves {
        edges.push((0, leaf, 2));
    }
    TemporalGraph::from_edges(n, edges, false).expect("ids in range")
}

//! Exact normalized temporal betweenness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TemporalGraph;
use crate::tbfs::{engine, rational_to_f64, PathOptimality};

/// Per-node betweenness values, exact or estimated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreVector {
    pub optimality: PathOptimality,
    pub values: Vec<f64>,
    pub normalized: bool,
    /// Number of samples behind an estimate; `None` for exact scores.
    pub sample_size: Option<usize>,
}

impl ScoreVector {
    pub fn zeros(optimality: PathOptimality, n: usize, sample_size: Option<usize>) -> Self {
        ScoreVector {
            optimality,
            values: vec![0.0; n],
            normalized: true,
            sample_size,
        }
    }

    pub fn from_rationals(
        optimality: PathOptimality,
        values: &[BigRational],
        sample_size: Option<usize>,
    ) -> Self {
        ScoreVector {
            optimality,
            values: values.iter().map(rational_to_f64).collect(),
            normalized: true,
            sample_size,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

const CHUNK: usize = 256;

/// Sum of per-source dependencies, each node's total normalized by `n(n-1)`.
pub fn exact_tbc_rational(graph: &TemporalGraph, opt: PathOptimality) -> Vec<BigRational> {
    let n = graph.node_count();
    let mut total = vec![BigRational::zero(); n];
    if n < 2 {
        return total;
    }
    let engine = engine(opt);
    let sources: Vec<usize> = (0..n).collect();
    for chunk in sources.chunks(CHUNK) {
        let deps: Vec<Vec<BigRational>> = chunk
            .par_iter()
            .map(|&s| engine.full(graph, s).dependency)
            .collect();
        for dep in deps {
            for (acc, d) in total.iter_mut().zip(dep) {
                if !d.is_zero() {
                    *acc += d;
                }
            }
        }
    }
    let norm = BigRational::from_integer(BigInt::from(n * (n - 1)));
    total.into_iter().map(|x| x / &norm).collect()
}

pub fn exact_tbc(graph: &TemporalGraph, opt: PathOptimality) -> ScoreVector {
    ScoreVector::from_rationals(opt, &exact_tbc_rational(graph, opt), None)
}

/// The same quantity computed pair by pair with truncated searches.
pub fn exact_tbc_pairwise(graph: &TemporalGraph, opt: PathOptimality) -> Vec<BigRational> {
    let n = graph.node_count();
    let mut total = vec![BigRational::zero(); n];
    if n < 2 {
        return total;
    }
    let engine = engine(opt);
    for s in 0..n {
        for z in (0..n).filter(|&z| z != s) {
            let r = engine.truncated(graph, s, z);
            for (acc, d) in total.iter_mut().zip(r.dependency) {
                if !d.is_zero() {
                    *acc += d;
                }
            }
        }
    }
    let norm = BigRational::from_integer(BigInt::from(n * (n - 1)));
    total.into_iter().map(|x| x / &norm).collect()
}

/// Rough cost of an exact run: one search per source over every edge, times
/// the average number of appearances per node for the hop-layered engines.
pub fn work_estimate(graph: &TemporalGraph, opt: PathOptimality) -> f64 {
    let n = graph.node_count() as f64;
    let m = graph.edge_count() as f64;
    let per_node = match opt {
        PathOptimality::PrefixForemost => 1.0,
        _ => (m / n.max(1.0)).max(1.0),
    };
    n * m * per_node
}

pub const DEFAULT_WORK_LIMIT: f64 = 1e11;

/// [`exact_tbc`] behind a work guardrail.
pub fn exact_tbc_guarded(
    graph: &TemporalGraph,
    opt: PathOptimality,
    limit: Option<f64>,
) -> Result<ScoreVector> {
    if let Some(limit) = limit {
        let estimate = work_estimate(graph, opt);
        if estimate > limit {
            return Err(Error::Guardrail { estimate, limit });
        }
    }
    Ok(exact_tbc(graph, opt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbfs::fixtures::g1;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn g1_exact_values() {
        let g = g1();
        assert_eq!(
            exact_tbc_rational(&g, PathOptimality::Shortest),
            vec![q(0, 1), q(1, 24), q(1, 24), q(0, 1)]
        );
        assert_eq!(
            exact_tbc_rational(&g, PathOptimality::PrefixForemost),
            vec![q(0, 1), q(7, 72), q(7, 72), q(0, 1)]
        );
        let sv = exact_tbc(&g, PathOptimality::Shortest);
        assert_eq!(sv.values, vec![0.0, 1.0 / 24.0, 1.0 / 24.0, 0.0]);
        assert_eq!(sv.sample_size, None);
    }

    #[test]
    fn no_two_hop_paths_means_all_zero() {
        // every edge at the same time: no strict path has an internal node
        let g = TemporalGraph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)], false)
            .unwrap();
        for opt in PathOptimality::ALL {
            assert!(exact_tbc(&g, opt).values.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn tiny_graphs_are_all_zero() {
        let g = TemporalGraph::from_edges(1, [], false).unwrap();
        assert_eq!(exact_tbc(&g, PathOptimality::Shortest).values, vec![0.0]);
    }

    #[test]
    fn pairwise_agrees_on_g1() {
        let g = g1();
        for opt in PathOptimality::ALL {
            assert_eq!(
                exact_tbc_pairwise(&g, opt),
                exact_tbc_rational(&g, opt),
                "{opt}"
            );
        }
    }

    #[test]
    fn guardrail_trips() {
        let err = exact_tbc_guarded(&g1(), PathOptimality::Shortest, Some(1.0)).unwrap_err();
        assert!(matches!(err, Error::Guardrail { .. }));
        assert!(exact_tbc_guarded(&g1(), PathOptimality::Shortest, None).is_ok());
    }
}

//! Exhaustive enumeration of strict simple temporal paths.
//!
//! This is the ground-truth oracle for the counting engines and is only meant
//! for tiny graphs. It shares nothing with the engines beyond the graph type:
//! paths are grown by depth-first search and filtered by the optimality
//! definitions directly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::PathOptimality;
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, Time, VertexAppearance};

/// A temporal path as the sequence of edge indices it traverses.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalPath {
    pub edges: Vec<usize>,
}

impl TemporalPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn arrival(&self, graph: &TemporalGraph) -> Time {
        self.edges.last().map_or(0, |&e| graph.edge(e).time)
    }

    /// `(s, 0)` followed by the head appearance of every edge.
    pub fn appearances(&self, graph: &TemporalGraph) -> Vec<VertexAppearance> {
        let Some(&first) = self.edges.first() else {
            return Vec::new();
        };
        let mut out = vec![VertexAppearance::new(graph.edge(first).src, 0)];
        out.extend(self.edges.iter().map(|&e| {
            let edge = graph.edge(e);
            VertexAppearance::new(edge.dst, edge.time)
        }));
        out
    }

    /// Nodes strictly between the endpoints.
    pub fn internal_nodes(&self, graph: &TemporalGraph) -> Vec<usize> {
        self.edges[..self.edges.len().saturating_sub(1)]
            .iter()
            .map(|&e| graph.edge(e).dst)
            .collect()
    }
}

/// Every strict simple temporal path out of `source`, grouped by endpoint.
fn all_paths_from(
    graph: &TemporalGraph,
    source: usize,
    budget: usize,
) -> Result<BTreeMap<usize, Vec<TemporalPath>>> {
    struct Dfs<'a> {
        graph: &'a TemporalGraph,
        visited: Vec<bool>,
        stack: Vec<usize>,
        out: BTreeMap<usize, Vec<TemporalPath>>,
        explored: usize,
        budget: usize,
    }

    impl Dfs<'_> {
        fn grow(&mut self, node: usize, last: Time) -> Result<()> {
            for &e in self.graph.out_edges(node) {
                let edge = self.graph.edge(e);
                if edge.time <= last || self.visited[edge.dst] {
                    continue;
                }
                self.explored += 1;
                if self.explored > self.budget {
                    return Err(Error::BudgetExceeded {
                        explored: self.explored,
                    });
                }
                self.stack.push(e);
                self.visited[edge.dst] = true;
                self.out.entry(edge.dst).or_default().push(TemporalPath {
                    edges: self.stack.clone(),
                });
                self.grow(edge.dst, edge.time)?;
                self.visited[edge.dst] = false;
                self.stack.pop();
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        graph,
        visited: vec![false; graph.node_count()],
        stack: Vec::new(),
        out: BTreeMap::new(),
        explored: 0,
        budget,
    };
    dfs.visited[source] = true;
    dfs.grow(source, 0)?;
    Ok(dfs.out)
}

fn select_optimal(
    graph: &TemporalGraph,
    paths: &BTreeMap<usize, Vec<TemporalPath>>,
    target: usize,
    opt: PathOptimality,
) -> Vec<TemporalPath> {
    let Some(candidates) = paths.get(&target) else {
        return Vec::new();
    };
    let mut chosen: Vec<TemporalPath> = match opt {
        PathOptimality::Shortest => {
            let best = candidates.iter().map(TemporalPath::len).min().unwrap_or(0);
            candidates
                .iter()
                .filter(|p| p.len() == best)
                .cloned()
                .collect()
        }
        PathOptimality::ShortestForemost => {
            let first = candidates
                .iter()
                .map(|p| p.arrival(graph))
                .min()
                .unwrap_or(0);
            let on_time: Vec<&TemporalPath> = candidates
                .iter()
                .filter(|p| p.arrival(graph) == first)
                .collect();
            let best = on_time.iter().map(|p| p.len()).min().unwrap_or(0);
            on_time
                .into_iter()
                .filter(|p| p.len() == best)
                .cloned()
                .collect()
        }
        PathOptimality::PrefixForemost => {
            let earliest: BTreeMap<usize, Time> = paths
                .iter()
                .map(|(&v, ps)| (v, ps.iter().map(|p| p.arrival(graph)).min().unwrap_or(0)))
                .collect();
            candidates
                .iter()
                .filter(|p| {
                    p.edges.iter().all(|&e| {
                        let edge = graph.edge(e);
                        earliest[&edge.dst] == edge.time
                    })
                })
                .cloned()
                .collect()
        }
    };
    chosen.sort();
    chosen
}

/// All `opt`-optimal strict simple temporal paths from `source` to `target`.
///
/// `budget` caps the number of partial paths explored.
pub fn enumerate_paths_bruteforce(
    graph: &TemporalGraph,
    source: usize,
    target: usize,
    opt: PathOptimality,
    budget: usize,
) -> Result<Vec<TemporalPath>> {
    if source == target {
        return Ok(Vec::new());
    }
    let paths = all_paths_from(graph, source, budget)?;
    Ok(select_optimal(graph, &paths, target, opt))
}

/// All optimal paths from `source`, keyed by target.
pub fn optimal_paths_from(
    graph: &TemporalGraph,
    source: usize,
    opt: PathOptimality,
    budget: usize,
) -> Result<BTreeMap<usize, Vec<TemporalPath>>> {
    let paths = all_paths_from(graph, source, budget)?;
    Ok(paths
        .keys()
        .filter(|&&z| z != source)
        .map(|&z| (z, select_optimal(graph, &paths, z, opt)))
        .collect())
}

/// Normalized temporal betweenness straight from the definition.
pub fn bruteforce_betweenness(
    graph: &TemporalGraph,
    opt: PathOptimality,
    budget: usize,
) -> Result<Vec<BigRational>> {
    let n = graph.node_count();
    let mut score = vec![BigRational::zero(); n];
    if n < 2 {
        return Ok(score);
    }
    for s in 0..n {
        for paths in optimal_paths_from(graph, s, opt, budget)?.values() {
            let sigma = BigInt::from(paths.len());
            let mut through = vec![0usize; n];
            for p in paths {
                for v in p.internal_nodes(graph) {
                    through[v] += 1;
                }
            }
            for (v, &c) in through.iter().enumerate().filter(|(_, &c)| c > 0) {
                score[v] += BigRational::new(BigInt::from(c), sigma.clone());
            }
        }
    }
    let norm = BigRational::from_integer(BigInt::from(n * (n - 1)));
    Ok(score.into_iter().map(|x| x / &norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbfs::fixtures::g1;

    fn node_seqs(g: &TemporalGraph, paths: &[TemporalPath]) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = paths
            .iter()
            .map(|p| p.appearances(g).into_iter().map(|a| a.node + 1).collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn g1_paths_by_optimality() {
        let g = g1();
        let sh = enumerate_paths_bruteforce(&g, 0, 3, PathOptimality::Shortest, 1000).unwrap();
        assert_eq!(node_seqs(&g, &sh), vec![vec![1, 2, 4], vec![1, 3, 4]]);
        let pfm =
            enumerate_paths_bruteforce(&g, 0, 3, PathOptimality::PrefixForemost, 1000).unwrap();
        assert_eq!(
            node_seqs(&g, &pfm),
            vec![vec![1, 2, 3, 4], vec![1, 2, 4], vec![1, 3, 4]]
        );
        for opt in PathOptimality::ALL {
            assert!(enumerate_paths_bruteforce(&g, 3, 0, opt, 1000)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn paths_are_strict_and_simple() {
        let g = g1();
        for s in 0..4 {
            for (_, paths) in all_paths_from(&g, s, 1000).unwrap() {
                for p in paths {
                    let app = p.appearances(&g);
                    assert!(app.windows(2).all(|w| w[0].time < w[1].time));
                    let mut nodes: Vec<usize> = app.iter().map(|a| a.node).collect();
                    nodes.sort_unstable();
                    nodes.dedup();
                    assert_eq!(nodes.len(), app.len());
                }
            }
        }
    }

    #[test]
    fn budget_overflow_is_reported() {
        let err = enumerate_paths_bruteforce(&g1(), 0, 3, PathOptimality::Shortest, 2).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn g1_betweenness_by_definition() {
        let g = g1();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(
            bruteforce_betweenness(&g, PathOptimality::Shortest, 1000).unwrap(),
            vec![q(0, 1), q(1, 24), q(1, 24), q(0, 1)]
        );
        assert_eq!(
            bruteforce_betweenness(&g, PathOptimality::PrefixForemost, 1000).unwrap(),
            vec![q(0, 1), q(7, 72), q(7, 72), q(0, 1)]
        );
    }
}

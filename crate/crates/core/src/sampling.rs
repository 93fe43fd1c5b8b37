//! Fixed-size sampling estimators.
//!
//! * `rtb` samples sources and runs a full search from each.
//! * `ob` samples ordered pairs and runs a truncated search per pair.
//! * `trk` samples ordered pairs, then one optimal path uniformly at random,
//!   and credits each internal node of that path.
//!
//! All three are unbiased for the normalized betweenness. Sample `i` draws
//! from random substream `i`, so estimates are identical for any thread count.

use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ScoreVector;
use crate::graph::{TemporalGraph, VertexAppearance};
use crate::parallel::ordered_samples;
use crate::rng::{draw_pair, substream, uniform_below, SampleRng};
use crate::tbfs::{engine, rational_to_f64, PathOptimality, TbfsResult, TemporalPath};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Rtb,
    Ob,
    Trk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub algorithm: SamplerKind,
    pub optimality: PathOptimality,
    pub sample_size: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn run(&self, graph: &TemporalGraph) -> Result<ScoreVector> {
        match self.algorithm {
            SamplerKind::Rtb => rtb_estimate(graph, self.optimality, self.sample_size, self.seed),
            SamplerKind::Ob => ob_estimate(graph, self.optimality, self.sample_size, self.seed),
            SamplerKind::Trk => trk_estimate(graph, self.optimality, self.sample_size, self.seed),
        }
    }
}

pub(crate) fn check_sampling(graph: &TemporalGraph, r: usize) -> Result<()> {
    if graph.node_count() < 2 {
        return Err(Error::invalid("sampling needs at least two nodes"));
    }
    if r == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    Ok(())
}

/// Source of sample `index` for source-sampling estimators.
pub fn draw_source(n: usize, seed: u64, index: usize) -> usize {
    substream(seed, index as u64).gen_range(0..n)
}

/// Pair of sample `index` for pair-sampling estimators.
pub fn draw_sample_pair(n: usize, seed: u64, index: usize) -> (usize, usize) {
    draw_pair(&mut substream(seed, index as u64), n)
}

/// Running sum of per-source dependencies, kept exact.
#[derive(Clone, Debug)]
pub(crate) struct DependencySum {
    pub sums: Vec<BigRational>,
    pub samples: usize,
}

impl DependencySum {
    pub fn new(n: usize) -> Self {
        DependencySum {
            sums: vec![BigRational::zero(); n],
            samples: 0,
        }
    }

    pub fn add(&mut self, dependency: Vec<BigRational>) {
        for (acc, d) in self.sums.iter_mut().zip(dependency) {
            if !d.is_zero() {
                *acc += d;
            }
        }
        self.samples += 1;
    }

    /// `sum / ((n - 1) r)` per node.
    pub fn estimate(&self, opt: PathOptimality) -> ScoreVector {
        let n = self.sums.len();
        let denom = BigRational::from_integer(BigInt::from((n - 1) * self.samples));
        let values: Vec<BigRational> = self.sums.iter().map(|x| x / &denom).collect();
        ScoreVector::from_rationals(opt, &values, Some(self.samples))
    }
}

/// rtb over an explicit source sequence, e.g. a census of all nodes.
pub fn rtb_from_sources(
    graph: &TemporalGraph,
    opt: PathOptimality,
    sources: &[usize],
) -> Result<ScoreVector> {
    check_sampling(graph, sources.len())?;
    let engine = engine(opt);
    let mut acc = DependencySum::new(graph.node_count());
    ordered_samples(
        0,
        sources.len(),
        |i| engine.full(graph, sources[i]).dependency,
        |_, dep| {
            acc.add(dep);
            ControlFlow::Continue(())
        },
    );
    Ok(acc.estimate(opt))
}

pub fn rtb_estimate(
    graph: &TemporalGraph,
    opt: PathOptimality,
    r: usize,
    seed: u64,
) -> Result<ScoreVector> {
    check_sampling(graph, r)?;
    let n = graph.node_count();
    let sources: Vec<usize> = (0..r).map(|i| draw_source(n, seed, i)).collect();
    rtb_from_sources(graph, opt, &sources)
}

/// Non-zero values `sigma_sz(v) / sigma_sz` for one pair.
pub fn ob_sample(
    graph: &TemporalGraph,
    opt: PathOptimality,
    s: usize,
    z: usize,
) -> Vec<(usize, BigRational)> {
    let r = engine(opt).truncated(graph, s, z);
    r.dependency
        .into_iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .collect()
}

fn ob_sample_f64(
    graph: &TemporalGraph,
    opt: PathOptimality,
    s: usize,
    z: usize,
) -> Vec<(usize, f64)> {
    ob_sample(graph, opt, s, z)
        .into_iter()
        .map(|(v, d)| (v, rational_to_f64(&d)))
        .collect()
}

fn finish_sums(opt: PathOptimality, sums: Vec<f64>, r: usize) -> ScoreVector {
    ScoreVector {
        optimality: opt,
        values: sums.into_iter().map(|x| x / r as f64).collect(),
        normalized: true,
        sample_size: Some(r),
    }
}

/// ob over an explicit pair sequence.
pub fn ob_from_pairs(
    graph: &TemporalGraph,
    opt: PathOptimality,
    pairs: &[(usize, usize)],
) -> Result<ScoreVector> {
    check_sampling(graph, pairs.len())?;
    let mut sums = vec![0.0; graph.node_count()];
    ordered_samples(
        0,
        pairs.len(),
        |i| ob_sample_f64(graph, opt, pairs[i].0, pairs[i].1),
        |_, vals| {
            for (v, h) in vals {
                sums[v] += h;
            }
            ControlFlow::Continue(())
        },
    );
    Ok(finish_sums(opt, sums, pairs.len()))
}

pub fn ob_estimate(
    graph: &TemporalGraph,
    opt: PathOptimality,
    r: usize,
    seed: u64,
) -> Result<ScoreVector> {
    check_sampling(graph, r)?;
    let n = graph.node_count();
    let pairs: Vec<(usize, usize)> = (0..r).map(|i| draw_sample_pair(n, seed, i)).collect();
    ob_from_pairs(graph, opt, &pairs)
}

/// A path drawn by the backward sampler, or the empty path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledPath {
    pub pair: (usize, usize),
    /// `(s, 0)` first, a target appearance of `z` last.
    pub appearances: Vec<VertexAppearance>,
    pub edges: Vec<usize>,
    pub empty: bool,
}

impl SampledPath {
    pub fn empty(pair: (usize, usize)) -> Self {
        SampledPath {
            pair,
            appearances: Vec::new(),
            edges: Vec::new(),
            empty: true,
        }
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        let k = self.appearances.len();
        self.appearances
            .iter()
            .take(k.saturating_sub(1))
            .skip(1)
            .map(|a| a.node)
    }
}

/// Draws one optimal `s -> z` path uniformly at random.
///
/// A target appearance is chosen with probability proportional to its path
/// count, then predecessors are chosen backwards, each with probability
/// proportional to its own path count, until `(s, 0)` is reached.
pub fn sample_optimal_path(
    result: &TbfsResult,
    z: usize,
    rng: &mut SampleRng,
) -> Result<SampledPath> {
    let targets = &result.per_target[z];
    if targets.sigma.is_zero() {
        return Err(Error::ContractViolation(format!(
            "no optimal path from {} to {z}",
            result.source
        )));
    }
    let mut pick = uniform_below(rng, &targets.sigma);
    let mut current = *targets
        .appearances
        .iter()
        .find(|&&y| {
            let s = &result.records[y].sigma;
            if pick < *s {
                true
            } else {
                pick -= s;
                false
            }
        })
        .expect("pick below total sigma");

    let mut appearances = vec![result.records[current].appearance];
    let mut edges = Vec::new();
    while current != 0 {
        let rec = &result.records[current];
        let mut pick = uniform_below(rng, &rec.sigma);
        let entry = rec
            .predecessors
            .iter()
            .find(|p| {
                let s = &result.records[p.record].sigma;
                if pick < *s {
                    true
                } else {
                    pick -= s;
                    false
                }
            })
            .expect("predecessor sigmas sum to sigma");
        edges.push(entry.edge);
        current = entry.record;
        appearances.push(result.records[current].appearance);
    }
    appearances.reverse();
    edges.reverse();
    Ok(SampledPath {
        pair: (result.source, z),
        appearances,
        edges,
        empty: false,
    })
}

/// Probability that [`sample_optimal_path`] returns `path`, as the exact
/// product of its branch probabilities. `None` if the path is not in the DAG.
pub fn path_probability(
    graph: &TemporalGraph,
    result: &TbfsResult,
    z: usize,
    path: &TemporalPath,
) -> Option<BigRational> {
    let last = graph.edge(*path.edges.last()?);
    let mut current = result.record_id(VertexAppearance::new(last.dst, last.time))?;
    let targets = &result.per_target[z];
    if !targets.appearances.contains(&current) {
        return None;
    }
    let ratio = |num: &BigUint, den: &BigUint| {
        BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    };
    let mut prob = ratio(&result.records[current].sigma, &targets.sigma);
    for k in (0..path.edges.len()).rev() {
        let pred_app = if k == 0 {
            VertexAppearance::new(result.source, 0)
        } else {
            let e = graph.edge(path.edges[k - 1]);
            VertexAppearance::new(e.dst, e.time)
        };
        let pred = result.record_id(pred_app)?;
        let rec = &result.records[current];
        if !rec
            .predecessors
            .iter()
            .any(|p| p.record == pred && p.edge == path.edges[k])
        {
            return None;
        }
        prob *= ratio(&result.records[pred].sigma, &rec.sigma);
        current = pred;
    }
    (current == 0).then_some(prob)
}

/// One trk draw: a uniform pair, then a uniform optimal path between them.
pub fn trk_sample(
    graph: &TemporalGraph,
    opt: PathOptimality,
    seed: u64,
    index: usize,
) -> SampledPath {
    let mut rng = substream(seed, index as u64);
    let (s, z) = draw_pair(&mut rng, graph.node_count());
    let result = engine(opt).truncated(graph, s, z);
    if result.is_reachable(z) {
        sample_optimal_path(&result, z, &mut rng).expect("reachable pair")
    } else {
        SampledPath::empty((s, z))
    }
}

pub fn trk_estimate(
    graph: &TemporalGraph,
    opt: PathOptimality,
    r: usize,
    seed: u64,
) -> Result<ScoreVector> {
    check_sampling(graph, r)?;
    let mut hits = vec![0u64; graph.node_count()];
    ordered_samples(
        0,
        r,
        |i| trk_sample(graph, opt, seed, i),
        |_, path| {
            for v in path.internal_nodes() {
                hits[v] += 1;
            }
            ControlFlow::Continue(())
        },
    );
    Ok(finish_sums(
        opt,
        hits.into_iter().map(|h| h as f64).collect(),
        r,
    ))
}

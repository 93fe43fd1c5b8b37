//! Shortest-temporal distance statistics from sampled sources.
//!
//! Each sampled source runs a hop-layered search from `(s, 0)` and records
//! the hop count at which every other node is first reached. The histograms
//! are scaled by `n / s` into an estimated reach profile `R[h]`: the number
//! of ordered distinct pairs at distance at most `h`.

use std::ops::ControlFlow;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, Time};
use crate::parallel::ordered_samples;
use crate::rng::substream;
use crate::sampling::draw_source;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSampling {
    #[default]
    WithReplacement,
    WithoutReplacement,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceSummary {
    pub diameter: u32,
    pub effective_diameter: u32,
    pub tau: f64,
    pub connectivity_rate: f64,
    pub avg_distance: f64,
    /// False when no pair was reached and `avg_distance` is a placeholder 0.
    pub avg_distance_defined: bool,
    /// `R[0..=diameter]`; `R[0] = 0` since self-pairs are excluded.
    pub reach_profile: Vec<f64>,
    pub sample_size: usize,
    pub census: bool,
}

/// `hist[h]` = number of nodes other than `source` first reached after `h` hops.
pub fn first_reach_histogram(graph: &TemporalGraph, source: usize) -> Vec<u64> {
    let n = graph.node_count();
    // earliest arrival over all layers so far; a later arrival at the same or
    // a larger hop count can never reach anything new
    let mut best: Vec<Option<Time>> = vec![None; n];
    best[source] = Some(0);
    let mut layer: Vec<(usize, Time)> = vec![(source, 0)];
    let mut hist = vec![0u64];
    let mut next_time: Vec<Option<Time>> = vec![None; n];
    let mut touched = Vec::new();
    while !layer.is_empty() {
        for &(u, t) in &layer {
            let out = graph.out_edges_after(u, t);
            for &e in out {
                let edge = graph.edge(e);
                if best[edge.dst].is_some_and(|b| b <= edge.time) {
                    continue;
                }
                match next_time[edge.dst] {
                    Some(x) if x <= edge.time => {}
                    prev => {
                        if prev.is_none() {
                            touched.push(edge.dst);
                        }
                        next_time[edge.dst] = Some(edge.time);
                    }
                }
            }
        }
        let mut fresh = 0;
        layer.clear();
        for &w in &touched {
            let t = next_time[w].take().expect("touched");
            if best[w].is_none() {
                fresh += 1;
            }
            best[w] = Some(t);
            layer.push((w, t));
        }
        touched.clear();
        if !layer.is_empty() {
            hist.push(fresh);
        }
    }
    while hist.len() > 1 && *hist.last().unwrap() == 0 {
        hist.pop();
    }
    hist
}

fn summarize(
    n: usize,
    hist: &[u64],
    scale: f64,
    tau: f64,
    sample_size: usize,
    census: bool,
) -> DistanceSummary {
    let diameter = hist.iter().rposition(|&c| c > 0).unwrap_or(0);
    let mut reach = Vec::with_capacity(diameter + 1);
    let mut acc = 0u64;
    for &c in &hist[..=diameter.min(hist.len().saturating_sub(1))] {
        acc += c;
        reach.push(scale * acc as f64);
    }
    if reach.is_empty() {
        reach.push(0.0);
    }
    let total = *reach.last().unwrap();
    let pairs = (n * n.saturating_sub(1)) as f64;
    let defined = total > 0.0;
    let (avg, eff) = if defined {
        let weighted: u64 = hist.iter().enumerate().map(|(h, &c)| h as u64 * c).sum();
        let avg = weighted as f64 / acc as f64;
        let eff = reach
            .iter()
            .position(|&x| x / total >= tau)
            .unwrap_or(diameter);
        (avg, eff)
    } else {
        (0.0, 0)
    };
    DistanceSummary {
        diameter: diameter as u32,
        effective_diameter: eff as u32,
        tau,
        connectivity_rate: if pairs > 0.0 { total / pairs } else { 0.0 },
        avg_distance: avg,
        avg_distance_defined: defined,
        reach_profile: reach,
        sample_size,
        census,
    }
}

/// Estimates diameter, effective diameter, connectivity rate and average
/// distance from `s` sampled sources. `s >= n` runs every source once.
pub fn estimate_distances(
    graph: &TemporalGraph,
    s: usize,
    tau: f64,
    seed: u64,
    sampling: SourceSampling,
) -> Result<DistanceSummary> {
    if s == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::invalid(format!("tau must lie in (0, 1], got {tau}")));
    }
    let n = graph.node_count();
    if n == 0 {
        return Ok(summarize(0, &[0], 0.0, tau, 0, true));
    }
    let census = s >= n;
    let sources: Vec<usize> = if census {
        (0..n).collect()
    } else {
        match sampling {
            SourceSampling::WithReplacement => (0..s).map(|i| draw_source(n, seed, i)).collect(),
            SourceSampling::WithoutReplacement => {
                index::sample(&mut substream(seed, u64::MAX - 1), n, s).into_vec()
            }
        }
    };
    let mut hist = vec![0u64];
    ordered_samples(
        0,
        sources.len(),
        |i| first_reach_histogram(graph, sources[i]),
        |_, h| {
            if h.len() > hist.len() {
                hist.resize(h.len(), 0);
            }
            for (acc, c) in hist.iter_mut().zip(h) {
                *acc += c;
            }
            ControlFlow::Continue(())
        },
    );
    let scale = n as f64 / sources.len() as f64;
    Ok(summarize(n, &hist, scale, tau, sources.len(), census))
}

/// `ceil(ln n / eps^2)` sources.
pub fn recommended_sample_size(n: usize, epsilon: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid("need at least two nodes"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    Ok(((n as f64).ln() / (epsilon * epsilon)).ceil() as usize)
}

//! Estimators behind one trait, looked up by name at runtime.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_tbc_guarded, ScoreVector};
use crate::graph::TemporalGraph;
use crate::progressive::{progressive_estimate, prtb_estimate, ProgressiveConfig, StopReport};
use crate::sampling::{SamplerConfig, SamplerKind};
use crate::tbfs::PathOptimality;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorParams {
    pub optimality: PathOptimality,
    pub samples: Option<usize>,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub c: f64,
    pub seed: u64,
    /// Upper limit on samples for the progressive estimators.
    pub max_samples: Option<usize>,
    /// Work limit for exact runs; `None` disables the guardrail.
    pub max_work: Option<f64>,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams {
            optimality: PathOptimality::Shortest,
            samples: None,
            epsilon: 0.1,
            delta: 0.1,
            alpha: 1.5,
            c: 2.0,
            seed: 0,
            max_samples: None,
            max_work: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub scores: ScoreVector,
    pub stop: Option<StopReport>,
}

pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn estimate(&self, graph: &TemporalGraph, params: &EstimatorParams) -> Result<Estimate>;
}

struct Exact;

impl Estimator for Exact {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn estimate(&self, graph: &TemporalGraph, p: &EstimatorParams) -> Result<Estimate> {
        Ok(Estimate {
            scores: exact_tbc_guarded(graph, p.optimality, p.max_work)?,
            stop: None,
        })
    }
}

struct Fixed(SamplerKind, &'static str);

impl Estimator for Fixed {
    fn name(&self) -> &'static str {
        self.1
    }

    fn estimate(&self, graph: &TemporalGraph, p: &EstimatorParams) -> Result<Estimate> {
        let r = p
            .samples
            .ok_or_else(|| Error::invalid(format!("{} needs a sample size", self.1)))?;
        let cfg = SamplerConfig {
            algorithm: self.0,
            optimality: p.optimality,
            sample_size: r,
            seed: p.seed,
        };
        Ok(Estimate {
            scores: cfg.run(graph)?,
            stop: None,
        })
    }
}

struct Prtb;

impl Estimator for Prtb {
    fn name(&self) -> &'static str {
        "prtb"
    }

    fn estimate(&self, graph: &TemporalGraph, p: &EstimatorParams) -> Result<Estimate> {
        let (scores, stop) = prtb_estimate(graph, p.optimality, p.c, p.seed, p.max_samples)?;
        Ok(Estimate {
            scores,
            stop: Some(stop),
        })
    }
}

struct Progressive(SamplerKind, &'static str);

impl Estimator for Progressive {
    fn name(&self) -> &'static str {
        self.1
    }

    fn estimate(&self, graph: &TemporalGraph, p: &EstimatorParams) -> Result<Estimate> {
        let cfg = ProgressiveConfig {
            epsilon: p.epsilon,
            delta: p.delta,
            alpha: p.alpha,
            algorithm: self.0,
            seed: p.seed,
            iteration_cap: p.max_samples,
        };
        let (scores, stop) = progressive_estimate(graph, p.optimality, &cfg)?;
        Ok(Estimate {
            scores,
            stop: Some(stop),
        })
    }
}

#[derive(Default)]
pub struct EstimatorRegistry {
    entries: BTreeMap<&'static str, Box<dyn Estimator>>,
}

impl EstimatorRegistry {
    /// exact, rtb, ob, trk, prtb, progressive-ob, progressive-trk.
    pub fn standard() -> Self {
        let mut r = EstimatorRegistry::default();
        r.register(Box::new(Exact));
        r.register(Box::new(Fixed(SamplerKind::Rtb, "rtb")));
        r.register(Box::new(Fixed(SamplerKind::Ob, "ob")));
        r.register(Box::new(Fixed(SamplerKind::Trk, "trk")));
        r.register(Box::new(Prtb));
        r.register(Box::new(Progressive(SamplerKind::Ob, "progressive-ob")));
        r.register(Box::new(Progressive(SamplerKind::Trk, "progressive-trk")));
        r
    }

    /// Adds or replaces an estimator under its own name.
    pub fn register(&mut self, estimator: Box<dyn Estimator>) {
        self.entries.insert(estimator.name(), estimator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Estimator> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "estimator",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

//! Exact and sampling-based temporal betweenness centrality.
//!
//! The crate covers three path optimality criteria (shortest,
//! shortest-foremost, prefix-foremost) over strict temporal paths, an exact
//! all-sources algorithm, fixed-size and progressive sampling estimators,
//! a-priori sample-size bounds, a temporal distance estimator and ranking
//! quality metrics.

pub mod bounds;
pub mod distance;
pub mod error;
pub mod eval;
pub mod exact;
pub mod generate;
pub mod graph;
mod parallel;
pub mod progressive;
pub mod registry;
pub mod rng;
pub mod sampling;
pub mod tbfs;

pub use bounds::{hoeffding_size, vc_size};
pub use distance::{estimate_distances, recommended_sample_size, DistanceSummary, SourceSampling};
pub use error::{Error, Result};
pub use eval::{compare, EvalReport};
pub use exact::{exact_tbc, ScoreVector};
pub use graph::{LoadOptions, TemporalEdge, TemporalGraph, Time, VertexAppearance};
pub use progressive::{
    initial_sample_size, progressive_estimate, prtb_estimate, ProgressiveConfig, StopReason,
    StopReport,
};
pub use registry::{Estimate, Estimator, EstimatorParams, EstimatorRegistry};
pub use sampling::{ob_estimate, rtb_estimate, sample_optimal_path, trk_estimate, SamplerKind};
pub use tbfs::{full_tbfs, truncated_tbfs, PathEngine, PathOptimality, TbfsResult};

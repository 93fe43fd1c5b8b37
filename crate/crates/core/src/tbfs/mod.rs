//! Temporal BFS engines that count optimal strict temporal paths.
//!
//! Every engine builds a predecessor DAG over vertex appearances `(v, t)`
//! rooted at the source appearance `(s, 0)`. Records are stored in
//! topological order (every predecessor has a smaller record id), which the
//! backward dependency pass relies on.
//!
//! The three supported optimality criteria each live behind [`PathEngine`]:
//!
//! * `sh`: shortest, the minimum number of hops over all arrival times.
//! * `sfm`: shortest-foremost, the minimum number of hops among paths that
//!   arrive at the earliest possible time.
//! * `pfm`: prefix-foremost, foremost paths whose every prefix is foremost.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, Time, VertexAppearance};

pub mod bruteforce;
mod foremost;
mod shortest;

pub use bruteforce::{bruteforce_betweenness, enumerate_paths_bruteforce, TemporalPath};
pub use foremost::{earliest_arrival, PrefixForemostEngine};
pub use shortest::{ShortestEngine, ShortestForemostEngine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathOptimality {
    #[serde(rename = "sh")]
    Shortest,
    #[serde(rename = "sfm")]
    ShortestForemost,
    #[serde(rename = "pfm")]
    PrefixForemost,
}

impl PathOptimality {
    pub const ALL: [PathOptimality; 3] = [
        PathOptimality::Shortest,
        PathOptimality::ShortestForemost,
        PathOptimality::PrefixForemost,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            PathOptimality::Shortest => "sh",
            PathOptimality::ShortestForemost => "sfm",
            PathOptimality::PrefixForemost => "pfm",
        }
    }
}

impl fmt::Display for PathOptimality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PathOptimality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sh" | "shortest" => Ok(PathOptimality::Shortest),
            "sfm" | "shortest-foremost" => Ok(PathOptimality::ShortestForemost),
            "pfm" | "prefix-foremost" => Ok(PathOptimality::PrefixForemost),
            _ => Err(Error::Unknown {
                kind: "path optimality",
                name: s.to_string(),
            }),
        }
    }
}

/// One incoming DAG arc: the predecessor record and the temporal edge used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PredEntry {
    pub record: usize,
    pub edge: usize,
}

#[derive(Clone, Debug)]
pub struct AppearanceRecord {
    pub appearance: VertexAppearance,
    /// Minimum number of hops from `(s, 0)` to this appearance in the DAG.
    pub hops: u32,
    /// Number of admissible paths from the source ending at this appearance.
    pub sigma: BigUint,
    pub predecessors: Vec<PredEntry>,
}

/// The optimal target appearances of one node and their total path count.
#[derive(Clone, Debug, Default)]
pub struct TargetSet {
    pub appearances: Vec<usize>,
    pub sigma: BigUint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Every node is a target.
    Full,
    /// Only the given node is a target.
    Pair(usize),
}

/// Output of one temporal BFS from a single source.
///
/// With [`Scope::Full`], `dependency[v]` is the sum over all targets `z` of
/// `sigma_sz(v) / sigma_sz`. With [`Scope::Pair`] it is that single ratio.
#[derive(Clone, Debug)]
pub struct TbfsResult {
    pub source: usize,
    pub optimality: PathOptimality,
    pub scope: Scope,
    pub records: Vec<AppearanceRecord>,
    pub per_target: Vec<TargetSet>,
    pub dependency: Vec<BigRational>,
    index: HashMap<VertexAppearance, usize>,
}

impl TbfsResult {
    pub(crate) fn new(
        source: usize,
        optimality: PathOptimality,
        scope: Scope,
        records: Vec<AppearanceRecord>,
        per_target: Vec<TargetSet>,
    ) -> Self {
        let index = records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.appearance, i))
            .collect();
        let dependency = accumulate_dependency(source, &records, &per_target);
        TbfsResult {
            source,
            optimality,
            scope,
            records,
            per_target,
            dependency,
            index,
        }
    }

    pub fn sigma(&self, z: usize) -> &BigUint {
        &self.per_target[z].sigma
    }

    pub fn is_reachable(&self, z: usize) -> bool {
        !self.per_target[z].sigma.is_zero()
    }

    pub fn record_id(&self, appearance: VertexAppearance) -> Option<usize> {
        self.index.get(&appearance).copied()
    }

    /// Nodes with a non-zero dependency, paired with it as a float.
    pub fn nonzero_dependency_f64(&self) -> Vec<(usize, f64)> {
        self.dependency
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(v, d)| (v, rational_to_f64(d)))
            .collect()
    }
}

/// Common interface of the per-source counting engines.
pub trait PathEngine: Send + Sync {
    fn optimality(&self) -> PathOptimality;

    /// Counts optimal paths from `source` to every other node.
    fn full(&self, graph: &TemporalGraph, source: usize) -> TbfsResult;

    /// Counts optimal paths from `source` to `target` only, pruning work that
    /// cannot reach an optimal `target` appearance.
    fn truncated(&self, graph: &TemporalGraph, source: usize, target: usize) -> TbfsResult;
}

static SH: ShortestEngine = ShortestEngine;
static SFM: ShortestForemostEngine = ShortestForemostEngine;
static PFM: PrefixForemostEngine = PrefixForemostEngine;

pub fn engine(opt: PathOptimality) -> &'static dyn PathEngine {
    match opt {
        PathOptimality::Shortest => &SH,
        PathOptimality::ShortestForemost => &SFM,
        PathOptimality::PrefixForemost => &PFM,
    }
}

/// Full temporal BFS from `source` under `opt`.
pub fn full_tbfs(graph: &TemporalGraph, source: usize, opt: PathOptimality) -> TbfsResult {
    assert!(source < graph.node_count(), "source {source} out of range");
    engine(opt).full(graph, source)
}

/// Temporal BFS from `source` restricted to the single target `target`.
pub fn truncated_tbfs(
    graph: &TemporalGraph,
    source: usize,
    target: usize,
    opt: PathOptimality,
) -> Result<TbfsResult> {
    let n = graph.node_count();
    if source >= n || target >= n {
        return Err(Error::ContractViolation(format!(
            "pair ({source}, {target}) out of range for n = {n}"
        )));
    }
    if source == target {
        return Err(Error::ContractViolation(
            "truncated search needs distinct endpoints".into(),
        ));
    }
    Ok(engine(opt).truncated(graph, source, target))
}

pub(crate) fn source_record(source: usize) -> AppearanceRecord {
    AppearanceRecord {
        appearance: VertexAppearance::new(source, 0),
        hops: 0,
        sigma: BigUint::one(),
        predecessors: Vec::new(),
    }
}

/// Groups record ids by node, for target selection.
pub(crate) fn appearances_by_node(n: usize, records: &[AppearanceRecord]) -> Vec<Vec<usize>> {
    let mut by_node = vec![Vec::new(); n];
    for (i, r) in records.iter().enumerate().skip(1) {
        by_node[r.appearance.node].push(i);
    }
    by_node
}

pub(crate) fn target_set(records: &[AppearanceRecord], ids: Vec<usize>) -> TargetSet {
    let sigma = ids.iter().map(|&i| &records[i].sigma).sum();
    TargetSet {
        appearances: ids,
        sigma,
    }
}

/// Exact backward pass over the DAG.
///
/// Every target appearance `y` of node `z` is seeded with `L / sigma_sz`,
/// where `L` is the lcm of all target sigmas, so the pass stays in integers.
/// `down[x]` accumulates the seeded weight of every DAG path leaving `x`, and
/// `sigma[x] * down[x]` is then `L` times the share of optimal paths through
/// the appearance `x`.
fn accumulate_dependency(
    source: usize,
    records: &[AppearanceRecord],
    per_target: &[TargetSet],
) -> Vec<BigRational> {
    let n = per_target.len();
    let mut lcm = BigUint::one();
    for t in per_target.iter().filter(|t| !t.sigma.is_zero()) {
        lcm = lcm.lcm(&t.sigma);
    }

    let mut seed: Vec<BigUint> = vec![BigUint::zero(); records.len()];
    for t in per_target.iter().filter(|t| !t.sigma.is_zero()) {
        let w = &lcm / &t.sigma;
        for &y in &t.appearances {
            seed[y] += &w;
        }
    }

    let mut down: Vec<BigUint> = vec![BigUint::zero(); records.len()];
    let mut numer: Vec<BigUint> = vec![BigUint::zero(); n];
    for x in (1..records.len()).rev() {
        let total = &down[x] + &seed[x];
        if total.is_zero() {
            continue;
        }
        let node = records[x].appearance.node;
        if node != source && !down[x].is_zero() {
            numer[node] += &records[x].sigma * &down[x];
        }
        for p in &records[x].predecessors {
            down[p.record] += &total;
        }
    }

    let denom = BigInt::from(lcm);
    numer
        .into_iter()
        .map(|num| BigRational::new(BigInt::from(num), denom.clone()))
        .collect()
}

/// Correctly rounded conversion, saturating at the extremes.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.numer().sign() == num_bigint::Sign::Minus {
            f64::MIN
        } else {
            f64::MAX
        }
    })
}

/// Times of the target appearances of `z`, for diagnostics and tests.
pub fn target_times(result: &TbfsResult, z: usize) -> Vec<Time> {
    let mut times: Vec<Time> = result.per_target[z]
        .appearances
        .iter()
        .map(|&i| result.records[i].appearance.time)
        .collect();
    times.sort_unstable();
    times
}


#[cfg(test)]
mod tests {
    use super::fixtures::g1;
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn g1_shortest_from_first_node() {
        let r = full_tbfs(&g1(), 0, PathOptimality::Shortest);
        assert_eq!(r.sigma(3), &BigUint::from(2u32));
        assert_eq!(r.dependency, vec![q(0, 1), q(1, 2), q(1, 2), q(0, 1)]);
    }

    #[test]
    fn g1_prefix_foremost_from_first_node() {
        let r = full_tbfs(&g1(), 0, PathOptimality::PrefixForemost);
        assert_eq!(r.sigma(2), &BigUint::from(2u32));
        assert_eq!(r.sigma(3), &BigUint::from(3u32));
        // node 3 (id 2) is an endpoint of both paths to itself, so only the
        // paths to node 4 through it count.
        assert_eq!(r.dependency, vec![q(0, 1), q(7, 6), q(2, 3), q(0, 1)]);
    }

    #[test]
    fn g1_shortest_foremost_from_first_node() {
        let r = full_tbfs(&g1(), 0, PathOptimality::ShortestForemost);
        // foremost arrival at 4 is t3; both 2-hop paths arrive then
        assert_eq!(r.sigma(3), &BigUint::from(2u32));
        // foremost arrival at 3 is t2 via the direct edge (1 hop)
        assert_eq!(r.sigma(2), &BigUint::from(1u32));
        assert_eq!(r.dependency, vec![q(0, 1), q(1, 2), q(1, 2), q(0, 1)]);
    }

    #[test]
    fn truncated_matches_full_on_g1() {
        let g = g1();
        let sh = truncated_tbfs(&g, 0, 3, PathOptimality::Shortest).unwrap();
        assert_eq!(sh.sigma(3), &BigUint::from(2u32));
        assert_eq!(sh.dependency, vec![q(0, 1), q(1, 2), q(1, 2), q(0, 1)]);

        let pfm = truncated_tbfs(&g, 0, 3, PathOptimality::PrefixForemost).unwrap();
        assert_eq!(pfm.sigma(3), &BigUint::from(3u32));
        assert_eq!(pfm.dependency, vec![q(0, 1), q(2, 3), q(2, 3), q(0, 1)]);

        let back = truncated_tbfs(&g, 3, 0, PathOptimality::Shortest).unwrap();
        assert!(back.sigma(0).is_zero());
        assert!(back.dependency.iter().all(Zero::is_zero));
    }

    #[test]
    fn isolated_source_has_no_paths() {
        let g = TemporalGraph::from_edges(3, [(1, 2, 1)], false).unwrap();
        for opt in PathOptimality::ALL {
            let r = full_tbfs(&g, 0, opt);
            assert!((0..3).all(|z| r.sigma(z).is_zero()));
            assert!(r.dependency.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn truncated_rejects_equal_endpoints() {
        let err = truncated_tbfs(&g1(), 1, 1, PathOptimality::Shortest).unwrap_err();
        assert!(matches!(err, Error::ContractViolation(_)));
    }

    #[test]
    fn records_are_topologically_ordered() {
        let g = g1();
        for opt in PathOptimality::ALL {
            let r = full_tbfs(&g, 0, opt);
            for (i, rec) in r.records.iter().enumerate() {
                for p in &rec.predecessors {
                    assert!(p.record < i);
                    assert!(r.records[p.record].appearance.time < rec.appearance.time);
                }
            }
        }
    }

    #[test]
    fn optimality_parses_tags() {
        assert_eq!(
            "SFM".parse::<PathOptimality>().unwrap(),
            PathOptimality::ShortestForemost
        );
        assert!("fastest".parse::<PathOptimality>().is_err());
    }
}

//! Progressive sampling.
//!
//! Two schemes live here. `prtb` keeps sampling sources until some node's
//! accumulated dependency reaches `c * n`. The Rademacher scheme grows a pair
//! sample along a geometric schedule and stops once a data-dependent bound on
//! the supremum deviation drops below `epsilon`; it drives both `ob` and `trk`.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::bounds::{check_unit, hoeffding_size};
use crate::error::{Error, Result};
use crate::exact::ScoreVector;
use crate::graph::TemporalGraph;
use crate::parallel::ordered_samples;
use crate::sampling::{
    check_sampling, draw_sample_pair, draw_source, trk_sample, DependencySum, SamplerKind,
};
use crate::tbfs::{engine, PathOptimality};

/// Running per-node sums of the sample function values plus the multiset of
/// per-node squared norms, which is all the Rademacher bound needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RademacherState {
    /// Squared norm (as `f64` bits) -> number of nodes holding it. Only
    /// positive norms are stored; untouched nodes are counted by `zero_count`.
    pub b: BTreeMap<u64, usize>,
    pub b1: Vec<f64>,
    pub b2: Vec<f64>,
    touched: usize,
}

impl RademacherState {
    pub fn new(n: usize) -> Self {
        RademacherState {
            b: BTreeMap::new(),
            b1: vec![0.0; n],
            b2: vec![0.0; n],
            touched: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.b1.len()
    }

    /// Nodes whose vector is still all zero.
    pub fn zero_count(&self) -> usize {
        self.node_count() - self.touched
    }

    /// `(squared norm, multiplicity)` pairs in ascending norm order.
    pub fn norms(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.b.iter().map(|(&k, &c)| (f64::from_bits(k), c))
    }

    /// Records value `h` of node `u` for the current sample.
    pub fn update_values(&mut self, u: usize, h: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::ContractViolation(format!(
                "sample value {h} for node {u} outside [0, 1]"
            )));
        }
        if u >= self.node_count() {
            return Err(Error::ContractViolation(format!("node {u} out of range")));
        }
        if h == 0.0 {
            return Ok(());
        }
        let v = self.b2[u];
        let v1 = v + h * h;
        *self.b.entry(v1.to_bits()).or_insert(0) += 1;
        if v > 0.0 {
            let key = v.to_bits();
            let count = self.b.get_mut(&key).expect("old norm present");
            *count -= 1;
            if *count == 0 {
                self.b.remove(&key);
            }
        } else {
            self.touched += 1;
        }
        self.b1[u] += h;
        self.b2[u] = v1;
        Ok(())
    }
}

const S_MIN: f64 = 1e-4;
const S_MAX: f64 = 1e6;

/// `w(s) = (1/s) ln(sum over nodes of exp(s^2 |v|^2 / (2 r^2)))`.
pub fn rademacher_w(state: &RademacherState, r: usize, s: f64) -> f64 {
    let scale = s * s / (2.0 * (r as f64) * (r as f64));
    let mut terms: Vec<(f64, f64)> = state.norms().map(|(k, c)| (k * scale, c as f64)).collect();
    if state.zero_count() > 0 {
        terms.push((0.0, state.zero_count() as f64));
    }
    let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|&(a, c)| c * (a - top).exp()).sum();
    (top + sum.ln()) / s
}

/// Upper bound on the empirical Rademacher average: the minimum of `w` over
/// `s` in `[1e-4, 1e6]`, by golden-section search on `ln s`.
pub fn rademacher_bound(state: &RademacherState, r: usize) -> f64 {
    assert!(r >= 1, "sample size must be positive");
    if state.b.is_empty() {
        return 0.0;
    }
    let w = |x: f64| rademacher_w(state, r, x.exp());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (S_MIN.ln(), S_MAX.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut wc, mut wd) = (w(c), w(d));
    while b - a > 1e-12 {
        if wc <= wd {
            b = d;
            d = c;
            wd = wc;
            c = b - inv_phi * (b - a);
            wc = w(c);
        } else {
            a = c;
            c = d;
            wc = wd;
            d = a + inv_phi * (b - a);
            wd = w(d);
        }
    }
    [wc, wd, w(S_MIN.ln()), w(S_MAX.ln())]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Deviation bound for sample size `r`, Rademacher bound `rad` and failure
/// probability `delta_i`.
pub fn stopping_xi(rad: f64, r: usize, delta_i: f64) -> f64 {
    let r = r as f64;
    let l = (3.0 / delta_i).ln();
    2.0 * rad + (l + ((l + 4.0 * r * rad) * l).sqrt()) / r + (l / (2.0 * r)).sqrt()
}

/// `ceil((1 + 8 eps + sqrt(1 + 16 eps)) ln(6/delta) / (4 eps^2))`.
pub fn initial_sample_size(epsilon: f64, delta: f64) -> Result<usize> {
    check_unit("epsilon", epsilon)?;
    check_unit("delta", delta)?;
    let x = (1.0 + 8.0 * epsilon + (1.0 + 16.0 * epsilon).sqrt()) * (6.0 / delta).ln()
        / (4.0 * epsilon * epsilon);
    Ok(x.ceil() as usize)
}

/// Smallest `r` with `stopping_xi(0, r, delta / 2) <= epsilon`.
pub fn zero_bound_sample_size(epsilon: f64, delta: f64) -> Result<usize> {
    check_unit("epsilon", epsilon)?;
    check_unit("delta", delta)?;
    let ok = |r: usize| stopping_xi(0.0, r, delta / 2.0) <= epsilon;
    let mut hi = 1;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if lo >= 1 && ok(lo) { lo } else { hi })
}

/// Geometric schedule `|S_i| = ceil(alpha^(i-1) |S_1|)`, `delta_i = delta / 2^i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub initial: usize,
    pub alpha: f64,
    pub delta: f64,
}

impl Schedule {
    pub fn new(initial: usize, alpha: f64, delta: f64) -> Result<Self> {
        if initial == 0 {
            return Err(Error::invalid("initial sample size must be positive"));
        }
        if alpha.is_nan() || alpha <= 1.0 || alpha.is_infinite() {
            return Err(Error::invalid(format!("alpha must exceed 1, got {alpha}")));
        }
        check_unit("delta", delta)?;
        Ok(Schedule {
            initial,
            alpha,
            delta,
        })
    }

    /// Sample size at iteration `i >= 1`.
    pub fn size(&self, i: u32) -> usize {
        (self.alpha.powi(i as i32 - 1) * self.initial as f64).ceil() as usize
    }

    pub fn delta_at(&self, i: u32) -> f64 {
        self.delta / 2f64.powi(i as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    BoundMet,
    IterationCap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StopReport {
    pub final_sample_size: usize,
    pub iterations: u32,
    /// Final deviation bound; absent for `prtb`.
    pub xi: Option<f64>,
    pub rademacher: Option<f64>,
    pub epsilon: Option<f64>,
    pub stopped_by: StopReason,
    pub cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProgressiveConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub algorithm: SamplerKind,
    pub seed: u64,
    pub iteration_cap: Option<usize>,
}

impl ProgressiveConfig {
    pub fn new(epsilon: f64, delta: f64, alpha: f64, algorithm: SamplerKind, seed: u64) -> Self {
        ProgressiveConfig {
            epsilon,
            delta,
            alpha,
            algorithm,
            seed,
            iteration_cap: None,
        }
    }
}

fn ob_values(graph: &TemporalGraph, opt: PathOptimality, seed: u64, i: usize) -> Vec<(usize, f64)> {
    let (s, z) = draw_sample_pair(graph.node_count(), seed, i);
    engine(opt).truncated(graph, s, z).nonzero_dependency_f64()
}

fn trk_values(
    graph: &TemporalGraph,
    opt: PathOptimality,
    seed: u64,
    i: usize,
) -> Vec<(usize, f64)> {
    trk_sample(graph, opt, seed, i)
        .internal_nodes()
        .map(|v| (v, 1.0))
        .collect()
}

/// Rademacher-bounded progressive `ob` or `trk`.
///
/// Sample `i` is the same draw `ob_estimate` / `trk_estimate` would make, so
/// the returned scores equal the fixed-size estimate at the final size. `trk`
/// is capped at the Hoeffding size unless an explicit cap is given.
pub fn progressive_estimate(
    graph: &TemporalGraph,
    opt: PathOptimality,
    config: &ProgressiveConfig,
) -> Result<(ScoreVector, StopReport)> {
    let ProgressiveConfig {
        epsilon,
        delta,
        alpha,
        algorithm,
        seed,
        iteration_cap,
    } = *config;
    check_unit("epsilon", epsilon)?;
    let schedule = Schedule::new(initial_sample_size(epsilon, delta)?, alpha, delta)?;
    check_sampling(graph, schedule.initial)?;
    let n = graph.node_count();
    let cap = match (iteration_cap, algorithm) {
        (Some(0), _) => return Err(Error::invalid("iteration cap must be positive")),
        (Some(c), _) => Some(c),
        (None, SamplerKind::Trk) => Some(hoeffding_size(epsilon, delta, n)?),
        (None, SamplerKind::Ob) => None,
        (None, SamplerKind::Rtb) => return Err(Error::invalid("progressive rtb is prtb")),
    };
    let produce = |i: usize| match algorithm {
        SamplerKind::Trk => trk_values(graph, opt, seed, i),
        _ => ob_values(graph, opt, seed, i),
    };

    let mut state = RademacherState::new(n);
    let mut taken = 0;
    let mut i = 1u32;
    loop {
        let target = schedule.size(i);
        let end = cap.map_or(target, |c| target.min(c));
        let mut failure = None;
        ordered_samples(taken, end, produce, |_, vals| {
            for (v, h) in vals {
                if let Err(e) = state.update_values(v, h) {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(e) = failure {
            return Err(e);
        }
        taken = end;
        let rad = rademacher_bound(&state, taken);
        let xi = stopping_xi(rad, taken, schedule.delta_at(i));
        let capped = cap.is_some_and(|c| taken >= c);
        if xi <= epsilon || capped {
            let report = StopReport {
                final_sample_size: taken,
                iterations: i,
                xi: Some(xi),
                rademacher: Some(rad),
                epsilon: Some(epsilon),
                stopped_by: if xi <= epsilon {
                    StopReason::BoundMet
                } else {
                    StopReason::IterationCap
                },
                cap,
            };
            let scores = ScoreVector {
                optimality: opt,
                values: state.b1.iter().map(|x| x / taken as f64).collect(),
                normalized: true,
                sample_size: Some(taken),
            };
            return Ok((scores, report));
        }
        i += 1;
    }
}

/// Default `prtb` sample cap when none is given, as a multiple of `n`.
pub const PRTB_DEFAULT_CAP_FACTOR: usize = 10;

/// Source-sampling with the `c * n` stopping rule.
///
/// Sources are drawn exactly as in `rtb_estimate` with the same seed, and the
/// output is the `rtb` formula at the stopping size.
pub fn prtb_estimate(
    graph: &TemporalGraph,
    opt: PathOptimality,
    c: f64,
    seed: u64,
    max_samples: Option<usize>,
) -> Result<(ScoreVector, StopReport)> {
    if c.is_nan() || c < 2.0 || c.is_infinite() {
        return Err(Error::invalid(format!("c must be at least 2, got {c}")));
    }
    let n = graph.node_count();
    let cap = max_samples.unwrap_or(PRTB_DEFAULT_CAP_FACTOR * n.max(1));
    check_sampling(graph, cap)?;
    let threshold = BigRational::from_float(c).expect("finite c") * BigInt::from(n);
    let engine = engine(opt);
    let mut acc = DependencySum::new(n);
    let mut met = false;
    ordered_samples(
        0,
        cap,
        |i| engine.full(graph, draw_source(n, seed, i)).dependency,
        |_, dep| {
            let touched: Vec<usize> = dep
                .iter()
                .enumerate()
                .filter(|(_, d)| !d.is_zero())
                .map(|(v, _)| v)
                .collect();
            acc.add(dep);
            if touched.iter().any(|&v| acc.sums[v] >= threshold) {
                met = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    );
    let r = acc.samples;
    let report = StopReport {
        final_sample_size: r,
        iterations: r as u32,
        xi: None,
        rademacher: None,
        epsilon: None,
        stopped_by: if met {
            StopReason::BoundMet
        } else {
            StopReason::IterationCap
        },
        cap: Some(cap),
    };
    Ok((acc.estimate(opt), report))
}

/// The unnormalized total dependency estimate `n F / r` for node `v`, the
/// quantity the `prtb` factor guarantee is stated for.
pub fn prtb_total_estimate(scores: &ScoreVector, v: usize) -> f64 {
    let n = scores.len() as f64;
    scores.values[v] * n * (n - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{ob_estimate, rtb_estimate, trk_estimate};
    use crate::tbfs::fixtures::g1;

    #[test]
    fn update_trace() {
        let mut st = RademacherState::new(3);
        st.update_values(1, 0.5).unwrap();
        assert_eq!(st.norms().collect::<Vec<_>>(), vec![(0.25, 1)]);
        assert_eq!((st.b1[1], st.b2[1]), (0.5, 0.25));
        st.update_values(1, 0.5).unwrap();
        assert_eq!(st.norms().collect::<Vec<_>>(), vec![(0.5, 1)]);
        assert_eq!((st.b1[1], st.b2[1]), (1.0, 0.5));
        let before = st.clone();
        st.update_values(2, 0.0).unwrap();
        st.update_values(1, 0.0).unwrap();
        assert_eq!(st, before);
        assert_eq!(st.zero_count(), 2);
    }

    #[test]
    fn shared_norms_are_counted() {
        let mut st = RademacherState::new(4);
        st.update_values(0, 1.0).unwrap();
        st.update_values(1, 1.0).unwrap();
        assert_eq!(st.norms().collect::<Vec<_>>(), vec![(1.0, 2)]);
        st.update_values(0, 1.0).unwrap();
        assert_eq!(st.norms().collect::<Vec<_>>(), vec![(1.0, 1), (2.0, 1)]);
    }

    #[test]
    fn update_rejects_out_of_range() {
        let mut st = RademacherState::new(2);
        assert!(st.update_values(0, 1.5).is_err());
        assert!(st.update_values(0, -0.1).is_err());
        assert!(st.update_values(0, f64::NAN).is_err());
        assert!(st.update_values(5, 0.5).is_err());
    }

    #[test]
    fn all_zero_state_bound_is_zero() {
        assert_eq!(rademacher_bound(&RademacherState::new(10), 7), 0.0);
    }

    #[test]
    fn two_norm_state_against_closed_form_minimum() {
        // w(s) = ln(e^{s^2/8} + e^{s^2/32}) / s
        let mut st = RademacherState::new(2);
        st.update_values(0, 1.0).unwrap();
        for _ in 0..4 {
            st.update_values(1, 0.5).unwrap();
        }
        for _ in 0..3 {
            st.update_values(0, 1.0).unwrap();
        }
        assert_eq!(st.norms().collect::<Vec<_>>(), vec![(1.0, 1), (4.0, 1)]);
        let got = rademacher_bound(&st, 4);
        let grid = (1..=200_000)
            .map(|k| {
                let s = k as f64 * 1e-4;
                ((s * s / 8.0).exp() + (s * s / 32.0).exp()).ln() / s
            })
            .fold(f64::INFINITY, f64::min);
        assert!(got <= grid + 1e-9 && got >= grid - 1e-6, "{got} vs {grid}");
    }

    #[test]
    fn xi_reference_value() {
        // 50-digit evaluation of the closed form at R = 0, r = 100, delta_i = 1/2
        let expected = 0.130_486_113_025_803_37;
        assert!((stopping_xi(0.0, 100, 0.5) - expected).abs() < 1e-15);
    }

    #[test]
    fn xi_monotone() {
        let mut last = f64::INFINITY;
        for r in [100, 1_000, 10_000, 100_000, 1_000_000] {
            let xi = stopping_xi(0.0, r, 0.05);
            assert!(xi < last);
            last = xi;
        }
        assert!(stopping_xi(0.01, 500, 0.05) < stopping_xi(0.02, 500, 0.05));
    }

    #[test]
    fn initial_sizes() {
        assert_eq!(initial_sample_size(0.1, 0.1).unwrap(), 350);
        assert_eq!(initial_sample_size(0.05, 0.1).unwrap(), 1123);
        assert_eq!(zero_bound_sample_size(0.1, 0.1).unwrap(), 350);
        assert_eq!(zero_bound_sample_size(0.05, 0.1).unwrap(), 1123);
        assert!(initial_sample_size(0.0, 0.1).is_err());
    }

    #[test]
    fn schedule_sizes_and_budgets() {
        let s = Schedule::new(350, 1.5, 0.1).unwrap();
        assert_eq!(
            (1..=4).map(|i| s.size(i)).collect::<Vec<_>>(),
            vec![350, 525, 788, 1182]
        );
        let total: f64 = (1..60).map(|i| s.delta_at(i)).sum();
        assert!(total <= 0.1);
        assert!(Schedule::new(350, 1.0, 0.1).is_err());
    }

    #[test]
    fn progressive_matches_fixed_estimators() {
        let g = g1();
        for algo in [SamplerKind::Ob, SamplerKind::Trk] {
            let cfg = ProgressiveConfig::new(0.3, 0.1, 1.5, algo, 17);
            let (scores, report) =
                progressive_estimate(&g, PathOptimality::Shortest, &cfg).unwrap();
            let r = report.final_sample_size;
            assert!(
                r >= initial_sample_size(0.3, 0.1).unwrap()
                    || report.stopped_by == StopReason::IterationCap
            );
            let fixed = match algo {
                SamplerKind::Ob => ob_estimate(&g, PathOptimality::Shortest, r, 17),
                _ => trk_estimate(&g, PathOptimality::Shortest, r, 17),
            }
            .unwrap();
            assert_eq!(scores.values, fixed.values);
            assert!(scores.values.iter().all(|&x| (0.0..=1.0).contains(&x)));
            if report.stopped_by == StopReason::BoundMet {
                assert!(report.xi.unwrap() <= 0.3);
            }
        }
    }

    #[test]
    fn trk_cap_is_hoeffding() {
        let g = g1();
        let cfg = ProgressiveConfig::new(0.1, 0.1, 1.5, SamplerKind::Trk, 3);
        let (_, report) = progressive_estimate(&g, PathOptimality::Shortest, &cfg).unwrap();
        assert_eq!(report.cap, Some(hoeffding_size(0.1, 0.1, 4).unwrap()));
        assert!(report.final_sample_size <= report.cap.unwrap());
    }

    #[test]
    fn no_connected_pairs_stops_at_first_check() {
        let g = TemporalGraph::from_edges(5, [], false).unwrap();
        let cfg = ProgressiveConfig::new(0.1, 0.1, 1.5, SamplerKind::Ob, 1);
        let (scores, report) = progressive_estimate(&g, PathOptimality::Shortest, &cfg).unwrap();
        assert_eq!(report.iterations, 1);
        assert_eq!(report.final_sample_size, 350);
        assert_eq!(report.xi, Some(stopping_xi(0.0, 350, 0.05)));
        assert!(scores.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn prtb_stops_at_first_crossing_and_equals_rtb() {
        let g = g1();
        let opt = PathOptimality::Shortest;
        let (scores, report) = prtb_estimate(&g, opt, 2.0, 5, Some(1000)).unwrap();
        assert_eq!(report.stopped_by, StopReason::BoundMet);
        let r = report.final_sample_size;
        assert_eq!(scores.values, rtb_estimate(&g, opt, r, 5).unwrap().values);
        // replay: the running max first reaches c * n = 8 at sample r
        let mut f = [0.0f64; 4];
        let first = (0..1000)
            .position(|i| {
                let dep = engine(opt)
                    .full(&g, draw_source(4, 5, i))
                    .nonzero_dependency_f64();
                for (v, d) in dep {
                    f[v] += d;
                }
                f.iter().any(|&x| x >= 8.0)
            })
            .unwrap();
        assert_eq!(first + 1, r);
        let (_, capped) = prtb_estimate(&g, opt, 2.0, 5, Some(r - 1)).unwrap();
        assert_eq!(capped.stopped_by, StopReason::IterationCap);
    }

    #[test]
    fn prtb_single_sample_stop() {
        // hub 0: every leaf reaches every other leaf through it
        let g = crate::generate::two_phase_star(12, 0);
        let (_, report) = prtb_estimate(&g, PathOptimality::Shortest, 2.0, 0, None).unwrap();
        // one leaf source gives dependency 11 < 26; three leaves reach 33
        assert_eq!(report.stopped_by, StopReason::BoundMet);
        assert!(report.final_sample_size >= 3);
        assert!(prtb_estimate(&g, PathOptimality::Shortest, 1.5, 0, None).is_err());
    }
}

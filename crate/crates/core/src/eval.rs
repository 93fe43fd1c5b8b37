//! Quality of an approximate score vector against exact scores.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ScoreVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub sup_deviation: f64,
    pub mse: f64,
    /// `None` when either vector is constant and the tau is undefined.
    pub weighted_kendall: Option<f64>,
    pub topk_intersection: usize,
    pub k: usize,
    pub sample_size: Option<usize>,
    pub runtime_seconds: Option<f64>,
}

pub fn compare(exact: &ScoreVector, approx: &ScoreVector, k: usize) -> Result<EvalReport> {
    if exact.len() != approx.len() {
        return Err(Error::invalid(format!(
            "score vectors differ in length: {} vs {}",
            exact.len(),
            approx.len()
        )));
    }
    if exact.optimality != approx.optimality {
        return Err(Error::invalid(format!(
            "score vectors use different optimalities: {} vs {}",
            exact.optimality, approx.optimality
        )));
    }
    let (sup, mse) = deviations(&exact.values, &approx.values);
    Ok(EvalReport {
        sup_deviation: sup,
        mse,
        weighted_kendall: weighted_kendall_tau(&exact.values, &approx.values),
        topk_intersection: topk_intersection(&exact.values, &approx.values, k),
        k,
        sample_size: approx.sample_size,
        runtime_seconds: None,
    })
}

/// Supremum absolute deviation and mean squared error.
pub fn deviations(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return (0.0, 0.0);
    }
    let mut sup = 0.0f64;
    let mut sq = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = (x - y).abs();
        sup = sup.max(d);
        sq += d * d;
    }
    (sup, sq / a.len() as f64)
}

/// Indices sorted by descending score, ties by ascending index.
pub fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]).then(i.cmp(&j)));
    idx
}

/// `|top_k(a) ∩ top_k(b)|` with ties broken by node id.
pub fn topk_intersection(a: &[f64], b: &[f64], k: usize) -> usize {
    let k = k.min(a.len());
    let mut in_a = vec![false; a.len()];
    for &i in &ranking(a)[..k] {
        in_a[i] = true;
    }
    ranking(b)[..k].iter().filter(|&&i| in_a[i]).count()
}

/// Hyperbolic weighted Kendall tau: additive weights `1/(1 + rank)`, averaged
/// over the ranking induced by `a` and the one induced by `b`.
pub fn weighted_kendall_tau(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len());
    let t1 = weighted_tau_ranked(a, b)?;
    let t2 = weighted_tau_ranked(b, a)?;
    Some((t1 + t2) / 2.0)
}

/// Element weights for the ranking by `x` (ties by `y`, then by index).
fn rank_weights(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| {
        x[j].total_cmp(&x[i])
            .then(y[j].total_cmp(&y[i]))
            .then(i.cmp(&j))
    });
    let mut w = vec![0.0; x.len()];
    for (rank, &i) in idx.iter().enumerate() {
        w[i] = 1.0 / (1.0 + rank as f64);
    }
    w
}

struct Fenwick(Vec<usize>);

impl Fenwick {
    fn add(&mut self, mut i: usize) {
        i += 1;
        while i < self.0.len() {
            self.0[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Count of inserted positions `< i`.
    fn below(&self, mut i: usize) -> usize {
        let mut s = 0;
        while i > 0 {
            s += self.0[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// Dense ranks of `v` (equal values share a rank).
fn dense_ranks(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut r = vec![0; v.len()];
    let mut cur = 0;
    for k in 0..idx.len() {
        if k > 0 && v[idx[k]].total_cmp(&v[idx[k - 1]]) != Ordering::Equal {
            cur += 1;
        }
        r[idx[k]] = cur;
    }
    r
}

/// Per element: partners tied with it under `key`.
fn tie_partners<K: Ord + Copy>(key: impl Fn(usize) -> K, n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| key(i));
    let mut out = vec![0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && key(idx[end]) == key(idx[start]) {
            end += 1;
        }
        for &i in &idx[start..end] {
            out[i] = end - start - 1;
        }
        start = end;
    }
    out
}

fn weighted_tau_ranked(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 {
        return None;
    }
    let w = rank_weights(x, y);
    let rx = dense_ranks(x);
    let ry = dense_ranks(y);
    let ny = ry.iter().max().map_or(0, |&m| m + 1);

    // discordant partners: x_j < x_i with y_j > y_i, plus x_j > x_i with y_j < y_i
    let mut disc = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| rx[i]);
    for pass in 0..2 {
        let mut tree = Fenwick(vec![0; ny + 1]);
        let seq: Vec<usize> = if pass == 0 {
            order.clone()
        } else {
            order.iter().rev().copied().collect()
        };
        let mut g = 0;
        while g < n {
            let mut h = g + 1;
            while h < n && rx[seq[h]] == rx[seq[g]] {
                h += 1;
            }
            for &i in &seq[g..h] {
                let inserted = g;
                disc[i] += if pass == 0 {
                    inserted - tree.below(ry[i] + 1)
                } else {
                    tree.below(ry[i])
                };
            }
            for &i in &seq[g..h] {
                tree.add(ry[i]);
            }
            g = h;
        }
    }

    let tie_x = tie_partners(|i| rx[i], n);
    let tie_y = tie_partners(|i| ry[i], n);
    let tie_xy = tie_partners(|i| (rx[i], ry[i]), n);
    let sum = |c: &[usize]| -> f64 { w.iter().zip(c).map(|(wi, &ci)| wi * ci as f64).sum() };
    let all: Vec<usize> = vec![n - 1; n];
    let tot = sum(&all);
    let (u, v, t) = (sum(&tie_x), sum(&tie_y), sum(&tie_xy));
    let d = sum(&disc);
    let den_x = tot - u;
    let den_y = tot - v;
    if den_x <= 0.0 || den_y <= 0.0 {
        return None;
    }
    Some(((tot - (u + v - t)) - 2.0 * d) / den_x.sqrt() / den_y.sqrt())
}

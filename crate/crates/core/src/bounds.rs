//! A-priori sample sizes for the fixed-size estimators.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_UNIVERSAL_CONSTANT: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundInputs {
    pub epsilon: f64,
    pub delta: f64,
    pub n: usize,
    /// Shortest-temporal vertex diameter (hop diameter + 1), when known.
    pub vd: Option<usize>,
    pub c_univ: f64,
}

pub(crate) fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must lie in (0, 1), got {x}"
        )))
    }
}

/// Hoeffding plus a union bound over `n` nodes: `ceil(ln(2n/delta) / (2 eps^2))`.
pub fn hoeffding_size(epsilon: f64, delta: f64, n: usize) -> Result<usize> {
    check_unit("epsilon", epsilon)?;
    check_unit("delta", delta)?;
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    Ok(((2.0 * n as f64 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as usize)
}

/// Pseudo-dimension bound for shortest-temporal betweenness:
/// `ceil(c / eps^2 * (floor(log2(vd - 2)) + 1 + ln(1/delta)))`.
///
/// The guarantee only holds when shortest temporal paths are unique; treat
/// the result as a heuristic otherwise. For `vd < 3` every optimal path has at
/// most one internal node and the bracket degenerates to `1 + ln(1/delta)`.
pub fn vc_size(epsilon: f64, delta: f64, vd: usize, c_univ: f64) -> Result<usize> {
    check_unit("epsilon", epsilon)?;
    check_unit("delta", delta)?;
    if vd < 2 {
        return Err(Error::invalid(format!(
            "vertex diameter must be at least 2, got {vd}"
        )));
    }
    if c_univ <= 0.0 {
        return Err(Error::invalid("universal constant must be positive"));
    }
    let dim = if vd >= 3 {
        (vd - 2).ilog2() as f64 + 1.0
    } else {
        1.0
    };
    Ok((c_univ / (epsilon * epsilon) * (dim + (1.0 / delta).ln())).ceil() as usize)
}

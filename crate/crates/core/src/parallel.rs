use std::ops::ControlFlow;

use rayon::prelude::*;

/// Produces samples `start..end` on the current rayon pool and hands them to
/// `consume` strictly in index order. `consume` may stop the run early; the
/// return value is the index one past the last consumed sample.
pub(crate) fn ordered_samples<T, P, C>(
    start: usize,
    end: usize,
    produce: P,
    mut consume: C,
) -> usize
where
    T: Send,
    P: Fn(usize) -> T + Sync,
    C: FnMut(usize, T) -> ControlFlow<()>,
{
    let chunk = (rayon::current_num_threads() * 8).max(16);
    let mut lo = start;
    while lo < end {
        let hi = (lo + chunk).min(end);
        let batch: Vec<T> = (lo..hi).into_par_iter().map(&produce).collect();
        for (offset, item) in batch.into_iter().enumerate() {
            if consume(lo + offset, item).is_break() {
                return lo + offset + 1;
            }
        }
        lo = hi;
    }
    end
}

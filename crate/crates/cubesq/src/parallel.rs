//! Data-parallel scan/reduce used by every sweep.
//!
//! With the `parallel` feature (default) the item loop runs on rayon; without
//! it the same code runs sequentially. Reductions are exact min/count folds
//! with ties broken by the lowest `(item, op)` key, so the result is
//! identical regardless of work splitting — and of whether the parallel or
//! the sequential path ran.

use crate::Result;

/// Accumulator for gap statistics over a sweep.
///
/// `record` feeds one gap labelled by `(item, op)`; `op` distinguishes the
/// different inequalities checked at the same point.
#[derive(Debug, Clone)]
pub struct GapStats {
    pub tol: f64,
    pub n_checked: u64,
    pub n_violations: u64,
    pub worst_gap: f64,
    pub worst_item: u64,
    pub worst_op: u32,
}

impl GapStats {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            n_checked: 0,
            n_violations: 0,
            worst_gap: f64::INFINITY,
            worst_item: u64::MAX,
            worst_op: u32::MAX,
        }
    }

    pub fn record(&mut self, gap: f64, item: u64, op: u32) {
        self.n_checked += 1;
        // NaN counts as a violation and as the worst possible gap.
        let gap = if gap.is_nan() { f64::NEG_INFINITY } else { gap };
        if gap < -self.tol {
            self.n_violations += 1;
        }
        if (gap, item, op) < (self.worst_gap, self.worst_item, self.worst_op) {
            self.worst_gap = gap;
            self.worst_item = item;
            self.worst_op = op;
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.n_checked += other.n_checked;
        self.n_violations += other.n_violations;
        if (other.worst_gap, other.worst_item, other.worst_op)
            < (self.worst_gap, self.worst_item, self.worst_op)
        {
            self.worst_gap = other.worst_gap;
            self.worst_item = other.worst_item;
            self.worst_op = other.worst_op;
        }
        self
    }
}

/// Sequential scan; always available, and the benchmark baseline.
pub fn scan_seq<F>(items: u64, tol: f64, eval: F) -> GapStats
where
    F: Fn(u64, &mut GapStats) + Sync,
{
    let mut stats = GapStats::new(tol);
    for i in 0..items {
        eval(i, &mut stats);
    }
    stats
}

/// Fallible sequential scan; stops at the first error.
pub fn try_scan_seq<F>(items: u64, tol: f64, eval: F) -> Result<GapStats>
where
    F: Fn(u64, &mut GapStats) -> Result<()> + Sync,
{
    let mut stats = GapStats::new(tol);
    for i in 0..items {
        eval(i, &mut stats)?;
    }
    Ok(stats)
}

#[cfg(feature = "parallel")]
pub fn scan<F>(items: u64, tol: f64, eval: F) -> GapStats
where
    F: Fn(u64, &mut GapStats) + Sync,
{
    use rayon::prelude::*;
    (0..items)
        .into_par_iter()
        .fold(
            || GapStats::new(tol),
            |mut stats, i| {
                eval(i, &mut stats);
                stats
            },
        )
        .reduce(|| GapStats::new(tol), GapStats::merge)
}

#[cfg(not(feature = "parallel"))]
pub fn scan<F>(items: u64, tol: f64, eval: F) -> GapStats
where
    F: Fn(u64, &mut GapStats) + Sync,
{
    scan_seq(items, tol, eval)
}

#[cfg(feature = "parallel")]
pub fn try_scan<F>(items: u64, tol: f64, eval: F) -> Result<GapStats>
where
    F: Fn(u64, &mut GapStats) -> Result<()> + Sync,
{
    use rayon::prelude::*;
    (0..items)
        .into_par_iter()
        .try_fold(
            || GapStats::new(tol),
            |mut stats, i| {
                eval(i, &mut stats)?;
                Ok(stats)
            },
        )
        .try_reduce(|| GapStats::new(tol), |a, b| Ok(a.merge(b)))
}

#[cfg(not(feature = "parallel"))]
pub fn try_scan<F>(items: u64, tol: f64, eval: F) -> Result<GapStats>
where
    F: Fn(u64, &mut GapStats) -> Result<()> + Sync,
{
    try_scan_seq(items, tol, eval)
}

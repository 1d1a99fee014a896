//! Grid specifications and violation reports shared by all sweeps.

use crate::{Error, Result};

/// One axis of a rectangular sweep grid: `count` points spaced evenly over
/// `[min, max]` (both endpoints included).
#[derive(Debug, Clone, Copy)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min < max) || count < 2 {
            return Err(Error::InvalidParameter(format!(
                "axis requires min < max and count >= 2, got [{min}, {max}] x {count}"
            )));
        }
        Ok(Self { min, max, count })
    }

    pub fn value(&self, k: usize) -> f64 {
        self.min + (self.max - self.min) * (k as f64) / ((self.count - 1) as f64)
    }
}

/// A rectangular grid over the free variables of a verification sweep.
///
/// Cells are indexed `0..cells()` in row-major order with the **last** axis
/// varying fastest; the ordering is part of the determinism contract.
#[derive(Debug, Clone)]
pub struct GridSpec {
    axes: Vec<AxisSpec>,
}

impl GridSpec {
    pub fn new(axes: Vec<AxisSpec>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one axis".into()));
        }
        Ok(Self { axes })
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn cells(&self) -> u64 {
        self.axes.iter().map(|a| a.count as u64).product()
    }

    /// Decodes a cell index into coordinates (last axis fastest).
    pub fn coords(&self, index: u64) -> Vec<f64> {
        let mut rem = index;
        let mut out = vec![0.0; self.axes.len()];
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            let k = (rem % axis.count as u64) as usize;
            rem /= axis.count as u64;
            *slot = axis.value(k);
        }
        out
    }
}

/// Outcome of sweeping one or more gap inequalities over a set of points.
///
/// `worst_gap` is the minimum gap seen (sign convention: the verified
/// contracts are `gap ≥ 0`, so negative is bad); a point counts as a
/// violation when its gap is below `-tol`.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub worst_gap: f64,
    pub worst_location: Vec<f64>,
    pub n_checked: u64,
    pub n_violations: u64,
    pub tol: f64,
}

//! Numerical certification: sampled restricted constants, per-iterate checks
//! of the rate bounds, empirical rate fits and the stepsize-grid optimum.

mod appendix;
mod bounds;
mod estimate;
mod rates;

pub use appendix::{appendix_grid, GridOptimum};
pub use bounds::{
    check_bounds, check_bounds_with, check_dual_gap_geometric, check_points, BoundOptions,
    BoundReport, ConstantsUsed, TheoremId, SLACK,
};
pub use estimate::{
    converse_secant, estimate_rlg, estimate_rsi, Bias, ConstantEstimate, EstimateMethod, Witness,
    DEGENERATE_DIST, RLG_MAX_SWEEPS, RLG_REL_TOL, SEGMENT_POINTS,
};
pub use rates::{fit_rate, fit_rate_series, RateFit, RateModel, TraceQuantity, MIN_FIT_POINTS};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numkit::{DenseVector, GaussianStream};

/// Axis-aligned box `[lo, hi]` to draw sample points from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl SamplingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(invalid("box", "bounds must be nonempty and of equal length"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && l < h)) {
            return Err(invalid("box", "need finite lo < hi in every coordinate"));
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// One-dimensional boxes give the uniform grid `lo + (hi−lo)·i/n`,
    /// `i = 0..=n`, which nests under doubling `n`. Higher dimensions give
    /// `n` seeded uniform draws, a prefix of the draws for any larger `n`.
    pub fn points(&self, n: usize, seed: u64) -> Vec<DenseVector> {
        if self.dim() == 1 {
            let (lo, hi) = (self.lo[0], self.hi[0]);
            return (0..=n)
                .map(|i| DenseVector::from_raw(vec![lo + (hi - lo) * (i as f64 / n as f64)]))
                .collect();
        }
        let mut s = GaussianStream::new(seed);
        (0..n)
            .map(|_| {
                DenseVector::from_raw(
                    self.lo
                        .iter()
                        .zip(&self.hi)
                        .map(|(l, h)| l + (h - l) * s.next_uniform())
                        .collect(),
                )
            })
            .collect()
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::SolverTrace;

pub const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// `log v` against `k`; the factor is `exp(slope)`.
    LinearGeometric,
    /// `log v` against `log k`; the factor is the slope (ideally −1).
    #[serde(rename = "sublinear_1_over_k")]
    Sublinear1OverK,
    /// As above, ideally −2.
    #[serde(rename = "sublinear_1_over_k2")]
    Sublinear1OverK2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceQuantity {
    Gap,
    Dist,
    GradNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub model: RateModel,
    pub fitted_factor: f64,
    pub r_squared: f64,
    /// `(k_start, k_end)`, inclusive, after any shrinking.
    pub window: (usize, usize),
    /// True when nonpositive values forced the window to shrink.
    pub shrunk: bool,
}

/// Least-squares fit over the points with `k_start ≤ k ≤ k_end` (default: all).
/// A nonpositive value ends the window just before it; fewer than
/// [`MIN_FIT_POINTS`] remaining points is an error.
pub fn fit_rate_series(
    ks: &[usize],
    values: &[f64],
    model: RateModel,
    window: Option<(usize, usize)>,
) -> Result<RateFit> {
    let (k_start, k_end) = window.unwrap_or((0, usize::MAX));
    let min_k = if model == RateModel::LinearGeometric { 0 } else { 1 };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut shrunk = false;
    let mut last_k = k_start;
    for (&k, &v) in ks.iter().zip(values) {
        if k < k_start.max(min_k) || k > k_end {
            continue;
        }
        if v.is_nan() || v <= 0.0 || !v.is_finite() {
            shrunk = true;
            break;
        }
        xs.push(match model {
            RateModel::LinearGeometric => k as f64,
            _ => (k as f64).ln(),
        });
        ys.push(v.ln());
        last_k = k;
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { available: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (my + slope * (x - mx));
            e * e
        })
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    let first_k = ks
        .iter()
        .copied()
        .find(|&k| k >= k_start.max(min_k))
        .unwrap_or(k_start);
    Ok(RateFit {
        model,
        fitted_factor: match model {
            RateModel::LinearGeometric => slope.exp(),
            _ => slope,
        },
        r_squared,
        window: (first_k, last_k),
        shrunk,
    })
}

/// Fits the chosen per-record quantity of a trace.
pub fn fit_rate(
    trace: &SolverTrace,
    quantity: TraceQuantity,
    model: RateModel,
    window: Option<(usize, usize)>,
) -> Result<RateFit> {
    let values = match quantity {
        TraceQuantity::Gap => trace
            .gaps()
            .ok_or_else(|| Error::MissingCapability("f*".into()))?,
        TraceQuantity::Dist => trace
            .dists()
            .ok_or_else(|| Error::MissingCapability("project".into()))?,
        TraceQuantity::GradNorm => trace.records().iter().map(|r| r.grad_norm).collect(),
    };
    let ks: Vec<usize> = trace.records().iter().map(|r| r.k).collect();
    fit_rate_series(&ks, &values, model, window)
}

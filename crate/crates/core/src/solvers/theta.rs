use serde::Serialize;

use crate::error::{invalid, Result};

/// Acceleration state `(θ_k, β_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaState {
    pub theta: f64,
    pub beta: f64,
}

impl ThetaState {
    pub fn initial() -> Self {
        Self {
            theta: 1.0,
            beta: 0.0,
        }
    }

    pub fn next(self) -> Result<Self> {
        let (theta, beta) = theta_step(self.theta)?;
        Ok(Self { theta, beta })
    }
}

/// One step of the dampening recursion.
///
/// `θ_{k+1} = 2θ_k / (√(θ_k²+4) + θ_k)`, the cancellation-free form of
/// `θ_k(√(θ_k²+4) − θ_k)/2`, and `β_{k+1} = (1 − θ_k) θ_{k+1} / θ_k`.
/// The pair satisfies `θ_{k+1}² = (1 − θ_{k+1}) θ_k²`.
pub fn theta_step(theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(invalid("theta", format!("must lie in (0, 1], got {theta}")));
    }
    Ok(theta_step_unchecked(theta))
}

#[inline]
pub(crate) fn theta_step_unchecked(theta: f64) -> (f64, f64) {
    let next = 2.0 * theta / ((theta * theta + 4.0).sqrt() + theta);
    let beta = (1.0 - theta) * next / theta;
    (next, beta)
}

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// What the adaptive scheme does when its gradient trigger fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResetPolicy {
    /// `θ_k ← 1`, `β_{k+1} ← 0`.
    Restart,
    /// `β_{k+1} ← 0`, θ untouched.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Variant {
    #[serde(rename = "gd")]
    GradientDescent,
    Nesterov,
    /// Nesterov restarted every `interval` iterations.
    RestartFixed { interval: usize },
    /// Nesterov with the gradient-scheme reset trigger.
    Adaptive { policy: ResetPolicy },
}

impl Variant {
    pub fn label(&self) -> String {
        match self {
            Variant::GradientDescent => "gd".into(),
            Variant::Nesterov => "nesterov".into(),
            Variant::RestartFixed { interval } => format!("restart_fixed(K={interval})"),
            Variant::Adaptive {
                policy: ResetPolicy::Restart,
            } => "adaptive(restart)".into(),
            Variant::Adaptive {
                policy: ResetPolicy::Skip,
            } => "adaptive(skip)".into(),
        }
    }

    pub fn is_accelerated(&self) -> bool {
        !matches!(self, Variant::GradientDescent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub stepsize_h: f64,
    pub max_iters: usize,
    /// Stop once `‖∇f(x^{(k)})‖ ≤ grad_tol`. Zero runs the full budget unless
    /// the gradient vanishes exactly.
    pub grad_tol: f64,
    pub variant: Variant,
}

impl SolverConfig {
    pub fn new(variant: Variant, stepsize_h: f64, max_iters: usize) -> Self {
        Self {
            stepsize_h,
            max_iters,
            grad_tol: 0.0,
            variant,
        }
    }

    pub fn with_grad_tol(mut self, tol: f64) -> Self {
        self.grad_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.stepsize_h > 0.0 && self.stepsize_h.is_finite()) {
            return Err(invalid("stepsize_h", format!("must be positive, got {}", self.stepsize_h)));
        }
        if self.max_iters < 1 {
            return Err(invalid("max_iters", "must be at least 1"));
        }
        if self.grad_tol.is_nan() || self.grad_tol < 0.0 {
            return Err(invalid("grad_tol", format!("must be >= 0, got {}", self.grad_tol)));
        }
        if let Variant::RestartFixed { interval } = self.variant {
            if interval < 1 {
                return Err(invalid("K", "restart interval must be at least 1"));
            }
        }
        Ok(())
    }
}

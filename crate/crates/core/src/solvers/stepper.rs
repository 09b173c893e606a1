//! The iteration shared by every variant. Keeps `x^{(k)}`, the extrapolated
//! point `y^{(k)}` where the gradient is taken, and `θ_k`.

use crate::numkit::DenseVector;
use crate::solvers::config::{ResetPolicy, SolverConfig, Variant};
use crate::solvers::theta::theta_step_unchecked;
use crate::solvers::trace::ResetEvent;

#[derive(Debug, Clone)]
pub struct Stepper {
    variant: Variant,
    h: f64,
    k: usize,
    x: DenseVector,
    y: DenseVector,
    theta: f64,
    y_is_x: bool,
    /// `(y^{(k−1)}, ∇f(y^{(k−1)}))` for the adaptive trigger.
    previous: Option<(DenseVector, DenseVector)>,
}

impl Stepper {
    pub fn new(x0: DenseVector, cfg: &SolverConfig) -> Self {
        Self {
            variant: cfg.variant,
            h: cfg.stepsize_h,
            k: 0,
            y: x0.clone(),
            x: x0,
            theta: 1.0,
            y_is_x: true,
            previous: None,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `x^{(k)}`
    pub fn iterate(&self) -> &DenseVector {
        &self.x
    }

    /// `y^{(k)}`, where the next gradient must be evaluated.
    pub fn eval_point(&self) -> &DenseVector {
        &self.y
    }

    /// Whether `y^{(k)}` is `x^{(k)}` (no extrapolation pending).
    pub fn eval_point_is_iterate(&self) -> bool {
        self.y_is_x
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Gradient trigger: momentum pointing uphill for a minimization,
    /// `⟨∇f(y^{(k−1)}), y^{(k)} − y^{(k−1)}⟩ > 0`.
    fn trigger_fires(&self) -> bool {
        match &self.previous {
            Some((y_prev, g_prev)) => g_prev.dot(&self.y.sub(y_prev)) > 0.0,
            None => false,
        }
    }

    /// Consumes `∇f(y^{(k)})`, produces `x^{(k+1)}` and `y^{(k+1)}`. Returns
    /// the reset applied to the extrapolation, if any.
    pub fn advance(&mut self, grad_y: DenseVector) -> ResetEvent {
        let x_next = self.y.axpy(-self.h, &grad_y);
        let mut event = ResetEvent::None;
        let (theta_next, beta) = match self.variant {
            Variant::GradientDescent => (1.0, 0.0),
            Variant::Nesterov => theta_step_unchecked(self.theta),
            Variant::RestartFixed { interval } => {
                if (self.k + 1).is_multiple_of(interval) {
                    event = ResetEvent::Restart;
                    theta_step_unchecked(1.0)
                } else {
                    theta_step_unchecked(self.theta)
                }
            }
            Variant::Adaptive { policy } => {
                if self.trigger_fires() {
                    match policy {
                        ResetPolicy::Restart => {
                            event = ResetEvent::Restart;
                            theta_step_unchecked(1.0)
                        }
                        ResetPolicy::Skip => {
                            event = ResetEvent::Skip;
                            (theta_step_unchecked(self.theta).0, 0.0)
                        }
                    }
                } else {
                    theta_step_unchecked(self.theta)
                }
            }
        };

        let y_next = if beta == 0.0 {
            x_next.clone()
        } else {
            x_next.axpy(beta, &x_next.sub(&self.x))
        };
        if matches!(self.variant, Variant::Adaptive { .. }) {
            let y_prev = std::mem::replace(&mut self.y, y_next);
            self.previous = Some((y_prev, grad_y));
        } else {
            self.y = y_next;
        }
        self.y_is_x = beta == 0.0;
        self.x = x_next;
        self.theta = theta_next;
        self.k += 1;
        event
    }
}

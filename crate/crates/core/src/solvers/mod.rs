//! Gradient descent, Nesterov acceleration, fixed-interval restart and the
//! adaptive restart/skip scheme. Every run produces an immutable trace of
//! `x^{(k)}` (never the extrapolated `y^{(k)}`).

mod config;
mod stepper;
mod theta;
mod trace;

pub use config::{ResetPolicy, SolverConfig, Variant};
pub use stepper::Stepper;
pub use theta::{theta_step, ThetaState};
pub use trace::{parse_trace_csv, ResetEvent, SolverTrace, TerminalStatus, TraceRecord, TraceRow};

use crate::error::{invalid, Error, Result};
use crate::numkit::DenseVector;
use crate::oracles::{Evaluation, ObjectiveOracle};

/// Abort once `f` rises this many initial gaps above `f(x0)`.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// `⌈√(8eR/ν)⌉`, the epoch length for fixed restart.
pub fn restart_interval(r: f64, nu: f64) -> Result<usize> {
    if !(r > 0.0 && nu > 0.0 && r.is_finite() && nu.is_finite()) {
        return Err(invalid("R, nu", format!("must be positive, got R={r}, nu={nu}")));
    }
    Ok((8.0 * std::f64::consts::E * r / nu).sqrt().ceil().max(1.0) as usize)
}

struct Guard {
    f0: f64,
    scale: f64,
}

impl Guard {
    fn new(f0: f64, f_star: Option<f64>) -> Self {
        let gap = match f_star {
            Some(fs) => f0 - fs,
            None => f0.abs().max(1.0),
        };
        let scale = gap.max(f64::EPSILON * (1.0 + f0.abs()));
        Self { f0, scale }
    }

    fn tripped(&self, f: f64) -> bool {
        f - self.f0 > DIVERGENCE_FACTOR * self.scale
    }
}

/// Runs any variant from `x0`.
///
/// The oracle is called at `y^{(k)}` and, for accelerated variants, again at
/// `x^{(k+1)}` to fill the trace. Gradient descent reuses the evaluation since
/// `y^{(k)} = x^{(k)}`.
pub fn solve<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    x0: &DenseVector,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    cfg.validate()?;
    if x0.len() != oracle.dim() {
        return Err(Error::DimensionMismatch {
            context: "solve (dim(x0) vs dim(oracle))",
            expected: oracle.dim(),
            got: x0.len(),
        });
    }
    let mut trace = SolverTrace::new(oracle.f_star());
    let first = oracle.eval(x0)?;
    let guard = Guard::new(first.value, oracle.f_star());
    let mut grad_norm = first.gradient.norm();
    trace.push(TraceRecord {
        k: 0,
        x: x0.clone(),
        f: first.value,
        grad_norm,
        dist_to_sol: oracle.dist_to_solution(x0),
        reset_event: ResetEvent::None,
    });
    if grad_norm <= cfg.grad_tol {
        return Ok(trace.finish(TerminalStatus::TolReached));
    }

    let mut stepper = Stepper::new(x0.clone(), cfg);
    let mut at_x: Evaluation = first;
    for k in 0..cfg.max_iters {
        let grad_y = if stepper.eval_point_is_iterate() {
            std::mem::replace(&mut at_x.gradient, DenseVector::zeros(0))
        } else {
            match oracle.eval(stepper.eval_point()) {
                Ok(e) => e.gradient,
                Err(Error::NonFinite(_)) => return Ok(trace.finish(TerminalStatus::Diverged)),
                Err(e) => return Err(e),
            }
        };
        let event = stepper.advance(grad_y);
        at_x = match oracle.eval(stepper.iterate()) {
            Ok(e) => e,
            Err(Error::NonFinite(_)) => return Ok(trace.finish(TerminalStatus::Diverged)),
            Err(e) => return Err(e),
        };
        if guard.tripped(at_x.value) {
            return Ok(trace.finish(TerminalStatus::Diverged));
        }
        grad_norm = at_x.gradient.norm();
        let reached = grad_norm <= cfg.grad_tol;
        let terminal = reached || k + 1 == cfg.max_iters;
        trace.push(TraceRecord {
            k: k + 1,
            x: stepper.iterate().clone(),
            f: at_x.value,
            grad_norm,
            dist_to_sol: oracle.dist_to_solution(stepper.iterate()),
            reset_event: if terminal { ResetEvent::None } else { event },
        });
        if reached {
            return Ok(trace.finish(TerminalStatus::TolReached));
        }
    }
    Ok(trace.finish(TerminalStatus::MaxIters))
}

fn require(cfg: &SolverConfig, ok: bool, expected: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(
            "variant",
            format!("expected {expected}, got {}", cfg.variant.label()),
        ))
    }
}

/// `x^{(k+1)} = x^{(k)} − h∇f(x^{(k)})`.
pub fn gradient_descent<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    x0: &DenseVector,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    require(cfg, cfg.variant == Variant::GradientDescent, "gd")?;
    solve(oracle, x0, cfg)
}

pub fn nesterov<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    x0: &DenseVector,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    require(cfg, cfg.variant == Variant::Nesterov, "nesterov")?;
    solve(oracle, x0, cfg)
}

/// Nesterov in epochs of `K` iterations; records closing an epoch carry
/// [`ResetEvent::Restart`].
pub fn nesterov_restart_fixed<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    x0: &DenseVector,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    require(cfg, matches!(cfg.variant, Variant::RestartFixed { .. }), "restart_fixed")?;
    solve(oracle, x0, cfg)
}

pub fn nesterov_adaptive<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    x0: &DenseVector,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    require(cfg, matches!(cfg.variant, Variant::Adaptive { .. }), "adaptive")?;
    solve(oracle, x0, cfg)
}

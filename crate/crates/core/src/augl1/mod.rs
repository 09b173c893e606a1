//! Augmented-ℓ1 sparse recovery by linearized Bregman iteration, run as
//! gradient methods on the negated dual.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkit::{gaussian_matrix, DenseMatrix, DenseVector, GaussianStream};
use crate::oracles::{make_augl1_dual, Augl1Dual};
use crate::solvers::{ResetEvent, ResetPolicy, SolverConfig, Stepper, TerminalStatus, Variant};

/// Stop once `‖A x − b‖ < RESIDUAL_REL_TOL · ‖b‖`.
pub const RESIDUAL_REL_TOL: f64 = 1e-14;

/// `sign(v) max(|v| − β, 0)`
#[inline]
pub fn shrink_scalar(v: f64, beta: f64) -> f64 {
    if v > beta {
        v - beta
    } else if v < -beta {
        v + beta
    } else {
        0.0
    }
}

/// Elementwise soft threshold.
pub fn shrink(x: &DenseVector, beta: f64) -> Result<DenseVector> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", format!("must be positive, got {beta}")));
    }
    Ok(x.map(|v| shrink_scalar(v, beta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    /// Standard-normal nonzeros.
    Gaussian,
    /// Equiprobable ±1 nonzeros.
    PmOne,
}

/// Sensing matrix, measurements and the planted sparse signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseProblem {
    pub a: DenseMatrix,
    pub b: DenseVector,
    pub x_true: DenseVector,
    pub alpha: f64,
    pub seed: u64,
}

impl SparseProblem {
    pub fn dual_oracle(&self) -> Result<Augl1Dual> {
        make_augl1_dual(self.a.clone(), self.b.clone(), self.alpha)
    }
}

/// `A` comes from the seed's primary stream, so both signal kinds share it.
/// Support (a uniform `k`-subset) and nonzero values come from substream 1.
pub fn gen_sparse_problem(
    seed: u64,
    m: usize,
    n: usize,
    k: usize,
    signal: SignalKind,
) -> Result<SparseProblem> {
    if m == 0 || m >= n {
        return Err(invalid("m", format!("need 0 < m < n, got m={m}, n={n}")));
    }
    if k > n {
        return Err(invalid("k", format!("need k <= n, got k={k}, n={n}")));
    }
    let a = gaussian_matrix(m, n, seed);
    let mut s = GaussianStream::substream(seed, 1);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + s.next_index(n - i);
        idx.swap(i, j);
    }
    let mut x = vec![0.0; n];
    let mut support = idx[..k].to_vec();
    support.sort_unstable();
    for &j in &support {
        x[j] = match signal {
            SignalKind::Gaussian => s.next_gaussian(),
            SignalKind::PmOne => {
                if s.next_u64() >> 63 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
    }
    let x_true = DenseVector::from_raw(x);
    let b = a.matvec_unchecked(x_true.as_slice());
    let alpha = 10.0 * x_true.norm_inf();
    Ok(SparseProblem {
        a,
        b,
        x_true,
        alpha,
        seed,
    })
}

/// `x⁺ = α shrink₁(Aᵀy)`, `y⁺ = y + h(b − A x⁺)`.
pub fn lbreg_step(problem: &SparseProblem, y: &DenseVector, h: f64) -> Result<(DenseVector, DenseVector)> {
    let z = problem.a.matvec_t(y)?;
    let x = z.map(|v| problem.alpha * shrink_scalar(v, 1.0));
    let ax = problem.a.matvec_unchecked(x.as_slice());
    let y_next = y.axpy(h, &problem.b.sub(&ax));
    Ok((x, y_next))
}

/// Entry `i` of every curve describes `x^{(i+1)} = α shrink₁(Aᵀy^{(i)})`,
/// so all curves have length `iters`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryResult {
    #[serde(skip)]
    pub x_final: DenseVector,
    /// Absent when `x° = 0`.
    pub rel_error_curve: Option<Vec<f64>>,
    pub primal_residual_curve: Vec<f64>,
    /// Negated dual objective at each evaluation point.
    pub dual_objective_curve: Vec<f64>,
    /// Reset applied to the extrapolation right after the entry's evaluation.
    pub reset_events: Vec<ResetEvent>,
    pub iters: usize,
    pub variant: Variant,
    pub stepsize_h: f64,
    pub status: TerminalStatus,
}

impl RecoveryResult {
    pub fn final_rel_error(&self) -> Option<f64> {
        self.rel_error_curve.as_ref().and_then(|c| c.last().copied())
    }

    /// `k,rel_error,primal_residual,reset_event`; `k` counts from 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,rel_error,primal_residual,reset_event\n");
        for i in 0..self.iters {
            let rel = self
                .rel_error_curve
                .as_ref()
                .map(|c| format!("{:e}", c[i]))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{:e},{}",
                i + 1,
                rel,
                self.primal_residual_curve[i],
                self.reset_events[i].as_str()
            );
        }
        out
    }
}

/// The four schemes compared in the recovery experiments.
pub const RECOVERY_VARIANTS: [Variant; 4] = [
    Variant::GradientDescent,
    Variant::Nesterov,
    Variant::Adaptive {
        policy: ResetPolicy::Restart,
    },
    Variant::Adaptive {
        policy: ResetPolicy::Skip,
    },
];

/// Runs `variant` on the negated dual from `y^{(0)} = 0`, default
/// `h = 1/(α‖A‖²)`, stopping at `‖A x − b‖ < 1e-14‖b‖` or `max_iters`
/// gradient evaluations.
pub fn recover(
    problem: &SparseProblem,
    variant: Variant,
    h: Option<f64>,
    max_iters: usize,
) -> Result<RecoveryResult> {
    if matches!(variant, Variant::RestartFixed { .. }) {
        return Err(invalid("variant", "recovery compares gd, nesterov, restart and skip"));
    }
    let n = problem.a.cols();
    let x_norm = problem.x_true.norm();
    if problem.b.norm() == 0.0 {
        return Ok(RecoveryResult {
            x_final: DenseVector::zeros(n),
            rel_error_curve: (x_norm > 0.0).then(Vec::new),
            primal_residual_curve: Vec::new(),
            dual_objective_curve: Vec::new(),
            reset_events: Vec::new(),
            iters: 0,
            variant,
            stepsize_h: h.unwrap_or(f64::NAN),
            status: TerminalStatus::TolReached,
        });
    }
    let oracle = problem.dual_oracle()?;
    let h = h.unwrap_or(1.0 / oracle.lipschitz());
    let cfg = SolverConfig::new(variant, h, max_iters);
    cfg.validate()?;

    let threshold = RESIDUAL_REL_TOL * problem.b.norm();
    let mut stepper = Stepper::new(DenseVector::zeros(problem.a.rows()), &cfg);
    let mut rel = Vec::new();
    let mut residual = Vec::new();
    let mut dual = Vec::new();
    let mut events = Vec::new();
    let mut x_final = DenseVector::zeros(n);
    let mut status = TerminalStatus::MaxIters;
    let mut f0 = None;

    for _ in 0..max_iters {
        let (eval, x) = match oracle.eval_with_primal(stepper.eval_point()) {
            Ok(v) => v,
            Err(Error::NonFinite(_)) => {
                status = TerminalStatus::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        let f_start = *f0.get_or_insert(eval.value);
        if eval.value - f_start > crate::solvers::DIVERGENCE_FACTOR * f_start.abs().max(1.0) {
            status = TerminalStatus::Diverged;
            break;
        }
        let res = eval.gradient.norm();
        if x_norm > 0.0 {
            rel.push(x.distance(&problem.x_true) / x_norm);
        }
        residual.push(res);
        dual.push(eval.value);
        x_final = x;
        if res < threshold {
            events.push(ResetEvent::None);
            status = TerminalStatus::TolReached;
            break;
        }
        events.push(stepper.advance(eval.gradient));
    }
    let iters = residual.len();
    Ok(RecoveryResult {
        x_final,
        rel_error_curve: (x_norm > 0.0).then_some(rel),
        primal_residual_curve: residual,
        dual_objective_curve: dual,
        reset_events: events,
        iters,
        variant,
        stepsize_h: h,
        status,
    })
}

/// One `(seed, variant)` cell of a recovery experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    pub variant: Variant,
    pub iters: usize,
    pub status: TerminalStatus,
    pub final_rel_error: Option<f64>,
    pub final_residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub signal: SignalKind,
    pub max_iters: usize,
}

/// Every variant on every seed; results ordered by seed, then by the order
/// of `variants`, whatever the thread schedule.
pub fn run_experiment(
    spec: &ExperimentSpec,
    seeds: &[u64],
    variants: &[Variant],
) -> Result<Vec<TrialSummary>> {
    let per_seed: Vec<Result<Vec<TrialSummary>>> = seeds
        .par_iter()
        .map(|&seed| {
            let p = gen_sparse_problem(seed, spec.m, spec.n, spec.k, spec.signal)?;
            variants
                .iter()
                .map(|&v| {
                    let r = recover(&p, v, None, spec.max_iters)?;
                    Ok(TrialSummary {
                        seed,
                        variant: v,
                        iters: r.iters,
                        status: r.status,
                        final_rel_error: r.final_rel_error(),
                        final_residual: r.primal_residual_curve.last().copied(),
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for r in per_seed {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::ObjectiveOracle;
    use crate::solvers::{gradient_descent, SolverConfig};
    use proptest::prelude::*;

    #[test]
    fn shrink_formula() {
        let x = DenseVector::from(vec![1.5, -0.3, 0.0]);
        assert_eq!(shrink(&x, 1.0).unwrap().as_slice(), &[0.5, 0.0, 0.0]);
        assert!(shrink(&x, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn shrink_zero_inside_box(v in prop::collection::vec(-1.0f64..1.0, 1..20), beta in 1.0f64..5.0) {
            let s = shrink(&DenseVector::from(v), beta).unwrap();
            prop_assert!(s.iter().all(|&e| e == 0.0));
        }

        #[test]
        fn shrink_nonexpansive(pair in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..30), beta in 0.01f64..3.0) {
            let (a, b): (Vec<f64>, Vec<f64>) = pair.into_iter().unzip();
            let (a, b) = (DenseVector::from(a), DenseVector::from(b));
            let d = shrink(&a, beta).unwrap().distance(&shrink(&b, beta).unwrap());
            prop_assert!(d <= a.distance(&b) * (1.0 + 1e-15));
        }

        #[test]
        fn shrink_composes(v in prop::collection::vec(-10.0f64..10.0, 1..30), beta in 0.01f64..3.0) {
            let x = DenseVector::from(v);
            let twice = shrink(&shrink(&x, beta).unwrap(), beta).unwrap();
            let once = shrink(&x, 2.0 * beta).unwrap();
            for (p, q) in twice.iter().zip(once.iter()) {
                prop_assert!((p - q).abs() <= 1e-12 * (1.0 + q.abs()));
            }
        }
    }

    #[test]
    fn problem_shapes() {
        let p = gen_sparse_problem(3, 256, 512, 25, SignalKind::Gaussian).unwrap();
        assert_eq!((p.a.rows(), p.a.cols()), (256, 512));
        assert_eq!(p.x_true.iter().filter(|v| **v != 0.0).count(), 25);
        let q = gen_sparse_problem(3, 256, 512, 25, SignalKind::PmOne).unwrap();
        assert!(q.x_true.iter().all(|v| *v == 0.0 || v.abs() == 1.0));
        assert_eq!(q.alpha, 10.0);
        assert_eq!(p.a, q.a);
        assert_eq!(q, gen_sparse_problem(3, 256, 512, 25, SignalKind::PmOne).unwrap());
        let ax = p.a.matvec(&p.x_true).unwrap();
        assert!(ax.distance(&p.b) <= 1e-12 * p.b.norm());
    }

    #[test]
    fn bad_shapes() {
        assert!(gen_sparse_problem(1, 5, 5, 1, SignalKind::Gaussian).is_err());
        assert!(gen_sparse_problem(1, 4, 5, 6, SignalKind::Gaussian).is_err());
    }

    #[test]
    fn step_from_zero() {
        let p = gen_sparse_problem(5, 10, 30, 3, SignalKind::Gaussian).unwrap();
        let (x, y) = lbreg_step(&p, &DenseVector::zeros(10), 0.1).unwrap();
        assert!(x.iter().all(|v| *v == 0.0));
        assert_eq!(y, p.b.scale(0.1));
    }

    #[test]
    fn scalar_fixed_point() {
        let p = SparseProblem {
            a: DenseMatrix::from_rows(&[vec![2.0]]).unwrap(),
            b: DenseVector::from(vec![2.0]),
            x_true: DenseVector::from(vec![1.0]),
            alpha: 1.0,
            seed: 0,
        };
        let (x, y) = lbreg_step(&p, &DenseVector::from(vec![1.0]), 0.25).unwrap();
        assert_eq!(x.as_slice(), &[1.0]);
        assert_eq!(y.as_slice(), &[1.0]);
    }

    #[test]
    fn step_is_gradient_step_on_negated_dual() {
        let p = gen_sparse_problem(9, 12, 40, 4, SignalKind::PmOne).unwrap();
        let oracle = p.dual_oracle().unwrap();
        let h = 1.0 / oracle.lipschitz();
        let mut y = DenseVector::zeros(12);
        let cfg = SolverConfig::new(Variant::GradientDescent, h, 25);
        let trace = gradient_descent(&oracle, &y, &cfg).unwrap();
        for rec in trace.records().iter().skip(1) {
            let (x, y_next) = lbreg_step(&p, &y, h).unwrap();
            let g = oracle.eval(&y).unwrap().gradient;
            let ascent = p.b.sub(&p.a.matvec(&x).unwrap());
            assert!(ascent.add(&g).norm() <= 1e-12 * (1.0 + g.norm()));
            assert!(y_next.distance(&rec.x) <= 1e-12 * (1.0 + y_next.norm()));
            y = y_next;
        }
    }

    #[test]
    fn zero_signal_is_immediate() {
        let mut p = gen_sparse_problem(1, 5, 10, 0, SignalKind::Gaussian).unwrap();
        p.alpha = 1.0;
        let r = recover(&p, Variant::GradientDescent, None, 100).unwrap();
        assert_eq!(r.iters, 0);
        assert!(r.rel_error_curve.is_none());
        assert_eq!(r.status, TerminalStatus::TolReached);
    }

    #[test]
    fn small_recovery_converges() {
        let p = gen_sparse_problem(2, 40, 80, 4, SignalKind::PmOne).unwrap();
        for v in RECOVERY_VARIANTS {
            let r = recover(&p, v, None, 100_000).unwrap();
            assert_eq!(r.status, TerminalStatus::TolReached, "{}", v.label());
            assert!(r.final_rel_error().unwrap() < 1e-6, "{}", v.label());
            assert_eq!(r.primal_residual_curve.len(), r.iters);
            assert!(*r.primal_residual_curve.last().unwrap() < RESIDUAL_REL_TOL * p.b.norm());
        }
    }
}

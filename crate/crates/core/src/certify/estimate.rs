use serde::Serialize;

use crate::certify::SamplingBox;
use crate::error::{invalid, Error, Result};
use crate::numkit::DenseVector;
use crate::oracles::ObjectiveOracle;
use crate::solvers::SolverTrace;

/// Samples this close to the solution set are excluded from ratios (0/0).
pub const DEGENERATE_DIST: f64 = 1e-8;
/// Points per segment in the restricted-Lipschitz sweep.
pub const SEGMENT_POINTS: usize = 32;
pub const RLG_REL_TOL: f64 = 1e-6;
pub const RLG_MAX_SWEEPS: usize = 50;
const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    SegmentSampling,
    ProjectionRatio,
    ContractionConverse,
}

/// Direction in which a sampled extremum can miss the true constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bias {
    /// A sampled minimum: never below the true infimum.
    OverEstimate,
    /// A sampled maximum: never above the true supremum.
    UnderEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Attains `⟨∇f(x), x − x_prj⟩ / ‖x − x_prj‖²`.
    Point(DenseVector),
    /// Attains `‖∇f(x) − ∇f(y)‖ / ‖x − y‖`.
    Pair(DenseVector, DenseVector),
    /// Consecutive iterates attaining the worst contraction at stepsize `step`.
    Contraction {
        k: usize,
        from: DenseVector,
        to: DenseVector,
        step: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub witness: Witness,
    pub method: EstimateMethod,
    pub samples_used: usize,
    pub bias: Bias,
}

impl ConstantEstimate {
    /// Recomputes the value from the witness alone.
    pub fn reevaluate<O: ObjectiveOracle + ?Sized>(&self, oracle: &O) -> Result<f64> {
        match &self.witness {
            Witness::Point(x) => {
                rsi_ratio(oracle, x)?.ok_or_else(|| Error::NoSamples("witness on solution set".into()))
            }
            Witness::Pair(x, y) => {
                let gx = oracle.eval(x)?.gradient;
                let gy = oracle.eval(y)?.gradient;
                Ok(gx.distance(&gy) / x.distance(y))
            }
            Witness::Contraction { from, to, step, .. } => {
                let missing = || Error::MissingCapability("project".into());
                let r0 = oracle.dist_to_solution(from).ok_or_else(missing)?;
                let r1 = oracle.dist_to_solution(to).ok_or_else(missing)?;
                let q = r1 / r0;
                Ok((1.0 - q * q) / (2.0 * step))
            }
        }
    }
}

fn rsi_ratio<O: ObjectiveOracle + ?Sized>(oracle: &O, x: &DenseVector) -> Result<Option<f64>> {
    let p = oracle
        .project(x)
        .ok_or_else(|| Error::MissingCapability("project".into()))?;
    let d = x.sub(&p);
    let dist = oracle.dist_to_solution(x).unwrap_or_else(|| d.norm());
    if dist <= DEGENERATE_DIST {
        return Ok(None);
    }
    let g = oracle.eval(x)?.gradient;
    Ok(Some(g.dot(&d) / (dist * dist)))
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(invalid("n_samples", format!("need at least {MIN_SAMPLES}, got {n}")));
    }
    Ok(())
}

/// Sampled restricted secant constant: the minimum over samples off the
/// solution set of `⟨∇f(x), x − x_prj⟩ / ‖x − x_prj‖²`. Points where the
/// gradient is not finite are skipped.
pub fn estimate_rsi<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    domain: &SamplingBox,
    n_samples: usize,
    seed: u64,
) -> Result<ConstantEstimate> {
    check_samples(n_samples)?;
    if !oracle.has_projection() {
        return Err(Error::MissingCapability("project".into()));
    }
    let mut best: Option<(f64, DenseVector)> = None;
    let mut used = 0;
    for x in domain.points(n_samples, seed) {
        let ratio = match rsi_ratio(oracle, &x) {
            Ok(Some(r)) => r,
            Ok(None) | Err(Error::NonFinite(_)) => continue,
            Err(e) => return Err(e),
        };
        used += 1;
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, x));
        }
    }
    let (value, x) =
        best.ok_or_else(|| Error::NoSamples("every sample lies on the solution set".into()))?;
    Ok(ConstantEstimate {
        value,
        witness: Witness::Point(x),
        method: EstimateMethod::ProjectionRatio,
        samples_used: used,
        bias: Bias::OverEstimate,
    })
}

struct PairMax {
    value: f64,
    pair: Option<(DenseVector, DenseVector)>,
}

impl PairMax {
    fn offer(&mut self, x: &DenseVector, gx: &DenseVector, y: &DenseVector, gy: &DenseVector) {
        let d = x.distance(y);
        if d == 0.0 {
            return;
        }
        let ratio = gx.distance(gy) / d;
        if ratio > self.value {
            self.value = ratio;
            self.pair = Some((x.clone(), y.clone()));
        }
    }
}

fn grad_or_blowup<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    at: &DenseVector,
    z: &DenseVector,
) -> Result<DenseVector> {
    match oracle.eval(at) {
        Ok(e) => Ok(e.gradient),
        Err(Error::NonFinite(_)) => Err(Error::GradientBlowUp {
            z: z.as_slice().to_vec(),
        }),
        Err(e) => Err(e),
    }
}

/// Sampled restricted Lipschitz constant by fixed-point iteration over the
/// segment family `⌊z, z − ∇f(z)/R⌋`.
///
/// `R₀` is the largest gradient ratio between consecutive samples. Each sweep
/// takes [`SEGMENT_POINTS`] equispaced points per segment, offers the 31
/// consecutive pairs and the endpoint pair, and sets `R_{i+1} = max(R_i,
/// sweep max)`, stopping once the increase is at most [`RLG_REL_TOL`]`·R_i`.
/// For oracles with a projection, each sweep also turns every sample's offset
/// from the solution set toward its gradient (same distance), which steers
/// segments toward the steepest curvature. The result is a witnessed lower
/// bound on `R`.
pub fn estimate_rlg<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    domain: &SamplingBox,
    n_samples: usize,
    seed: u64,
) -> Result<ConstantEstimate> {
    check_samples(n_samples)?;
    let mut cloud = domain.points(n_samples, seed);
    let mut grads = cloud
        .iter()
        .map(|z| grad_or_blowup(oracle, z, z))
        .collect::<Result<Vec<_>>>()?;
    let mut best = PairMax {
        value: 0.0,
        pair: None,
    };
    for i in 1..cloud.len() {
        best.offer(&cloud[i - 1], &grads[i - 1], &cloud[i], &grads[i]);
    }
    if best.value <= 0.0 || !best.value.is_finite() {
        return Err(Error::NoSamples(
            "gradient is constant over the sample cloud; no initial R".into(),
        ));
    }
    let mut used = cloud.len();
    let steepen = oracle.has_projection();
    let last = (SEGMENT_POINTS - 1) as f64;

    for _ in 0..RLG_MAX_SWEEPS {
        let r = best.value;
        for (z, gz) in cloud.iter().zip(&grads) {
            let gn = gz.norm();
            if gn <= 1e-12 * (1.0 + z.norm()) {
                continue;
            }
            let mut prev = (z.clone(), gz.clone());
            let mut end = prev.clone();
            for j in 1..SEGMENT_POINTS {
                let p = z.axpy(-(j as f64) / (last * r), gz);
                let gp = grad_or_blowup(oracle, &p, z)?;
                best.offer(&prev.0, &prev.1, &p, &gp);
                prev = (p, gp);
                if j == SEGMENT_POINTS - 1 {
                    end = prev.clone();
                }
            }
            best.offer(z, gz, &end.0, &end.1);
            used += SEGMENT_POINTS - 1;
        }
        if steepen {
            for (z, gz) in cloud.iter_mut().zip(grads.iter_mut()) {
                let (Some(p), Some(d)) = (oracle.project(z), oracle.dist_to_solution(z)) else {
                    continue;
                };
                let gn = gz.norm();
                if d <= DEGENERATE_DIST || gn == 0.0 {
                    continue;
                }
                let moved = p.axpy(d / gn, gz);
                let gm = grad_or_blowup(oracle, &moved, z)?;
                *z = moved;
                *gz = gm;
                used += 1;
            }
        }
        if best.value - r <= RLG_REL_TOL * r {
            break;
        }
    }
    let (x, y) = best.pair.expect("positive ratio has a pair");
    Ok(ConstantEstimate {
        value: best.value,
        witness: Witness::Pair(x, y),
        method: EstimateMethod::SegmentSampling,
        samples_used: used,
        bias: Bias::UnderEstimate,
    })
}

/// Secant constant implied by an observed gradient-descent contraction:
/// `δ̂ = 1 − max_k (r_{k+1}/r_k)²`, `ν̂ = δ̂/(2h)`. Ratios are taken while
/// `r_k` exceeds `1e-12·max(1, r_0)`.
pub fn converse_secant<O: ObjectiveOracle + ?Sized>(
    trace: &SolverTrace,
    oracle: &O,
    h: f64,
) -> Result<ConstantEstimate> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("h", format!("must be positive, got {h}")));
    }
    let r = trace
        .dists()
        .ok_or_else(|| Error::MissingCapability("project".into()))?;
    let floor = 1e-12 * r.first().copied().unwrap_or(0.0).max(1.0);
    let mut worst: Option<(f64, usize)> = None;
    for k in 0..r.len().saturating_sub(1) {
        if r[k] <= floor {
            break;
        }
        let q = r[k + 1] / r[k];
        if worst.is_none_or(|(w, _)| q > w) {
            worst = Some((q, k));
        }
    }
    let Some((q, k)) = worst else {
        return Err(Error::NonContracting { delta: 0.0 });
    };
    let delta = 1.0 - q * q;
    if delta <= 0.0 {
        return Err(Error::NonContracting { delta });
    }
    let recs = trace.records();
    if recs[0].x.len() != oracle.dim() {
        return Err(Error::DimensionMismatch {
            context: "converse secant (trace vs oracle)",
            expected: oracle.dim(),
            got: recs[0].x.len(),
        });
    }
    Ok(ConstantEstimate {
        value: delta / (2.0 * h),
        witness: Witness::Contraction {
            k,
            from: recs[k].x.clone(),
            to: recs[k + 1].x.clone(),
            step: h,
        },
        method: EstimateMethod::ContractionConverse,
        samples_used: r.len(),
        bias: Bias::OverEstimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{DenseMatrix, DenseVector};
    use crate::oracles::{make_example_1d, make_quadratic_composite, Example1dKind};
    use crate::solvers::{solve, SolverConfig, Variant};

    fn halfsq() -> impl ObjectiveOracle {
        make_quadratic_composite(DenseMatrix::identity(1), DenseVector::zeros(1)).unwrap()
    }

    #[test]
    fn rsi_f3_is_one() {
        let f3 = make_example_1d(Example1dKind::F3 { beta: 1.0 }).unwrap();
        let dom = SamplingBox::interval(-5.0, 5.0).unwrap();
        let e = estimate_rsi(&f3, &dom, 1000, 0).unwrap();
        assert!((e.value - 1.0).abs() <= 1e-9);
        assert!((e.reevaluate(&f3).unwrap() - e.value).abs() <= 1e-9);
    }

    #[test]
    fn rsi_needs_projection_and_samples() {
        let dom = SamplingBox::interval(0.0, 1.0).unwrap();
        assert!(estimate_rsi(&halfsq(), &dom, 10, 0).is_err());
        let tiny = SamplingBox::interval(-1e-9, 1e-9).unwrap();
        assert!(matches!(estimate_rsi(&halfsq(), &tiny, 100, 0), Err(Error::NoSamples(_))));
    }

    #[test]
    fn rlg_unit_quadratic_exact() {
        let dom = SamplingBox::interval(-3.0, 7.0).unwrap();
        let e = estimate_rlg(&halfsq(), &dom, 200, 0).unwrap();
        assert!((e.value - 1.0).abs() <= 1e-9);
        assert_eq!(e.bias, Bias::UnderEstimate);
    }

    #[test]
    fn rlg_f3_nonexpansive() {
        let f3 = make_example_1d(Example1dKind::F3 { beta: 1.0 }).unwrap();
        let dom = SamplingBox::interval(-5.0, 5.0).unwrap();
        let e = estimate_rlg(&f3, &dom, 500, 0).unwrap();
        assert!(e.value <= 1.0 + 1e-9);
        assert!((e.reevaluate(&f3).unwrap() - e.value).abs() <= 1e-9);
    }

    #[test]
    fn rlg_reports_blowup() {
        let f1 = make_example_1d(Example1dKind::F1).unwrap();
        let dom = SamplingBox::interval(0.0, 2.0).unwrap();
        match estimate_rlg(&f1, &dom, 100, 0) {
            Err(Error::GradientBlowUp { z }) => assert_eq!(z, vec![1.0]),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn converse_on_half_square() {
        let cfg = SolverConfig::new(Variant::GradientDescent, 0.5, 20);
        let t = solve(&halfsq(), &DenseVector::from(vec![4.0]), &cfg).unwrap();
        let e = converse_secant(&t, &halfsq(), 0.5).unwrap();
        assert!((e.value - 0.75).abs() <= 1e-12);
        assert!((e.reevaluate(&halfsq()).unwrap() - e.value).abs() <= 1e-9);
    }

    #[test]
    fn converse_rejects_optimal_start() {
        let cfg = SolverConfig::new(Variant::GradientDescent, 0.5, 20);
        let t = solve(&halfsq(), &DenseVector::from(vec![0.0]), &cfg).unwrap();
        assert!(matches!(
            converse_secant(&t, &halfsq(), 0.5),
            Err(Error::NonContracting { .. })
        ));
    }
}

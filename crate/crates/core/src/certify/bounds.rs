use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::certify::converse_secant;
use crate::certify::rates::{fit_rate_series, RateModel};
use crate::error::{invalid, Error, Result};
use crate::numkit::DenseVector;
use crate::oracles::ObjectiveOracle;
use crate::solvers::{SolverConfig, SolverTrace, Variant};

/// Multiplicative slack: `lhs ≤ rhs·(1 + SLACK)`.
pub const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    Thm1Sublinear,
    Thm2Linear,
    Thm2Converse,
    Thm3Linear,
    Thm4Accel,
    Thm6Restart,
    #[serde(rename = "thm8_augl1")]
    Thm8Augl1,
    #[serde(rename = "lemma1_part2")]
    Lemma1Part2,
    #[serde(rename = "lemma2_combined")]
    Lemma2Combined,
    #[serde(rename = "lemma3_growth")]
    Lemma3Growth,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::Thm1Sublinear,
        TheoremId::Thm2Linear,
        TheoremId::Thm2Converse,
        TheoremId::Thm3Linear,
        TheoremId::Thm4Accel,
        TheoremId::Thm6Restart,
        TheoremId::Thm8Augl1,
        TheoremId::Lemma1Part2,
        TheoremId::Lemma2Combined,
        TheoremId::Lemma3Growth,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Thm1Sublinear => "thm1_sublinear",
            TheoremId::Thm2Linear => "thm2_linear",
            TheoremId::Thm2Converse => "thm2_converse",
            TheoremId::Thm3Linear => "thm3_linear",
            TheoremId::Thm4Accel => "thm4_accel",
            TheoremId::Thm6Restart => "thm6_restart",
            TheoremId::Thm8Augl1 => "thm8_augl1",
            TheoremId::Lemma1Part2 => "lemma1_part2",
            TheoremId::Lemma2Combined => "lemma2_combined",
            TheoremId::Lemma3Growth => "lemma3_growth",
        }
    }

    fn is_pointwise(&self) -> bool {
        matches!(
            self,
            TheoremId::Lemma1Part2 | TheoremId::Lemma2Combined | TheoremId::Lemma3Growth
        )
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem id `{s}`")))
    }
}

/// The constants a report was computed with.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ConstantsUsed {
    pub r: Option<f64>,
    pub l: Option<f64>,
    pub nu: Option<f64>,
    pub f_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem_id: TheoremId,
    pub pass: bool,
    /// Largest `lhs/rhs − 1` over the checked points (0 if none).
    pub max_violation: f64,
    pub first_fail_k: Option<usize>,
    pub checked: usize,
    pub constants: ConstantsUsed,
}

/// Overrides for the oracle's own constants, e.g. estimated ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub r: Option<f64>,
    pub l: Option<f64>,
    pub nu: Option<f64>,
    pub f_star: Option<f64>,
}

impl BoundOptions {
    fn resolve<O: ObjectiveOracle + ?Sized>(&self, oracle: &O, trace_f_star: Option<f64>) -> ConstantsUsed {
        let c = oracle.constants();
        let r = self.r.or(c.restricted_lipschitz());
        ConstantsUsed {
            r,
            l: self.l.or(c.l).or(r),
            nu: self.nu.or(c.nu),
            f_star: self.f_star.or(trace_f_star).or(oracle.f_star()),
        }
    }
}

fn need(v: Option<f64>, what: &str) -> Result<f64> {
    match v {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::MissingCapability(format!("constant {what}"))),
    }
}

struct Tally {
    id: TheoremId,
    max: Option<f64>,
    first_fail: Option<usize>,
    checked: usize,
}

impl Tally {
    fn new(id: TheoremId) -> Self {
        Self {
            id,
            max: None,
            first_fail: None,
            checked: 0,
        }
    }

    /// Records `lhs ≤ rhs` at index `k`.
    fn le(&mut self, k: usize, lhs: f64, rhs: f64) {
        let v = if rhs > 0.0 {
            lhs / rhs - 1.0
        } else if lhs <= rhs {
            0.0
        } else {
            f64::INFINITY
        };
        let v = if v.is_nan() { f64::INFINITY } else { v };
        self.checked += 1;
        self.max = Some(self.max.map_or(v, |m| m.max(v)));
        if v > SLACK && self.first_fail.is_none() {
            self.first_fail = Some(k);
        }
    }

    fn finish(self, constants: ConstantsUsed) -> BoundReport {
        let max_violation = self.max.unwrap_or(0.0);
        BoundReport {
            theorem_id: self.id,
            pass: max_violation <= SLACK,
            max_violation,
            first_fail_k: self.first_fail,
            checked: self.checked,
            constants,
        }
    }
}

/// Per-point data for the pointwise inequalities.
struct PointData {
    f: f64,
    g: DenseVector,
    d: DenseVector,
    dist: f64,
}

fn point_data<O: ObjectiveOracle + ?Sized>(oracle: &O, x: &DenseVector) -> Result<PointData> {
    let e = oracle.eval(x)?;
    let p = oracle
        .project(x)
        .ok_or_else(|| Error::MissingCapability("project".into()))?;
    let d = x.sub(&p);
    let dist = oracle.dist_to_solution(x).unwrap_or_else(|| d.norm());
    Ok(PointData {
        f: e.value,
        g: e.gradient,
        d,
        dist,
    })
}

fn check_pointwise(
    tally: &mut Tally,
    k: usize,
    pd: &PointData,
    c: &ConstantsUsed,
) -> Result<()> {
    let inner = pd.g.dot(&pd.d);
    match tally.id {
        TheoremId::Lemma1Part2 => {
            let r = need(c.r, "R")?;
            tally.le(k, pd.g.norm_sq() / (2.0 * r), inner);
        }
        TheoremId::Lemma2Combined => {
            let (r, nu) = (need(c.r, "R")?, need(c.nu, "nu")?);
            tally.le(k, pd.g.norm_sq() / (4.0 * r) + 0.5 * nu * pd.dist * pd.dist, inner);
        }
        TheoremId::Lemma3Growth => {
            let (nu, fs) = (need(c.nu, "nu")?, need(c.f_star, "f*")?);
            tally.le(k, 0.5 * nu * pd.dist * pd.dist, pd.f - fs);
        }
        _ => unreachable!("pointwise ids only"),
    }
    Ok(())
}

fn pointwise_preconditions<O: ObjectiveOracle + ?Sized>(oracle: &O, id: TheoremId) -> Result<()> {
    if !oracle.has_projection() {
        return Err(Error::MissingCapability("project".into()));
    }
    if matches!(id, TheoremId::Lemma1Part2 | TheoremId::Lemma2Combined) && !oracle.is_convex() {
        return Err(Error::MissingCapability("convexity".into()));
    }
    Ok(())
}

/// Checks a lemma inequality at arbitrary points; `first_fail_k` is then the
/// point index.
pub fn check_points<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    id: TheoremId,
    points: &[DenseVector],
    opts: &BoundOptions,
) -> Result<BoundReport> {
    if !id.is_pointwise() {
        return Err(invalid("theorem_id", format!("{} is not a pointwise inequality", id.as_str())));
    }
    pointwise_preconditions(oracle, id)?;
    let c = opts.resolve(oracle, None);
    let mut tally = Tally::new(id);
    for (i, x) in points.iter().enumerate() {
        let pd = match point_data(oracle, x) {
            Ok(pd) => pd,
            Err(Error::NonFinite(_)) => continue,
            Err(e) => return Err(e),
        };
        check_pointwise(&mut tally, i, &pd, &c)?;
    }
    Ok(tally.finish(c))
}

/// [`check_bounds_with`] using the oracle's own constants.
pub fn check_bounds<O: ObjectiveOracle + ?Sized>(
    trace: &SolverTrace,
    oracle: &O,
    id: TheoremId,
    cfg: &SolverConfig,
) -> Result<BoundReport> {
    check_bounds_with(trace, oracle, id, cfg, &BoundOptions::default())
}

fn dists(trace: &SolverTrace) -> Result<Vec<f64>> {
    trace
        .dists()
        .ok_or_else(|| Error::MissingCapability("project".into()))
}

fn gaps(trace: &SolverTrace, f_star: Option<f64>) -> Result<Vec<f64>> {
    let fs = need(f_star, "f*")?;
    Ok(trace.records().iter().map(|r| r.f - fs).collect())
}

/// Below this, distances are rounding noise and ratios are not checked.
fn dist_floor(r: &[f64]) -> f64 {
    1e-12 * r.first().copied().unwrap_or(0.0).max(1.0)
}

fn check_contraction(tally: &mut Tally, r: &[f64], q: f64) {
    let floor = dist_floor(r);
    for k in 0..r.len().saturating_sub(1) {
        if r[k] <= floor {
            break;
        }
        tally.le(k + 1, r[k + 1], q * r[k]);
    }
}

/// Evaluates the inequality named by `id` at every applicable record.
///
/// Rate bounds assume the stepsize their statement prescribes; the report
/// records which constants were used so a mismatch is visible.
pub fn check_bounds_with<O: ObjectiveOracle + ?Sized>(
    trace: &SolverTrace,
    oracle: &O,
    id: TheoremId,
    cfg: &SolverConfig,
    opts: &BoundOptions,
) -> Result<BoundReport> {
    if trace.is_empty() {
        return Err(Error::NoSamples("empty trace".into()));
    }
    let c = opts.resolve(oracle, trace.f_star());
    let mut tally = Tally::new(id);
    match id {
        TheoremId::Thm2Linear => {
            let (r_const, nu) = (need(c.r, "R")?, need(c.nu, "nu")?);
            let rate = 1.0 - nu / (2.0 * r_const);
            let r = dists(trace)?;
            check_contraction(&mut tally, &r, rate.sqrt());
            if c.f_star.is_some() {
                let g = gaps(trace, c.f_star)?;
                let floor = dist_floor(&r);
                let scale = 0.5 * r_const * r[0] * r[0];
                for k in 0..g.len() {
                    if r[k] <= floor {
                        break;
                    }
                    tally.le(k, g[k], scale * rate.powf(k as f64));
                }
            }
        }
        TheoremId::Thm3Linear => {
            let (l, nu) = (need(c.l, "L")?, need(c.nu, "nu")?);
            check_contraction(&mut tally, &dists(trace)?, (1.0 - nu / l).sqrt());
        }
        TheoremId::Thm1Sublinear => {
            let r_const = need(c.r, "R")?;
            let alpha = cfg.stepsize_h * r_const;
            if !(alpha > 0.0 && alpha <= 1.0 + SLACK) {
                return Err(invalid("h", format!("need h = alpha/R with alpha in (0, 1], got alpha={alpha}")));
            }
            let r = dists(trace)?;
            let g = gaps(trace, c.f_star)?;
            let step = alpha * (2.0 - alpha) / (2.0 * r_const * r[0] * r[0]);
            for k in 0..g.len() {
                let rhs = if g[0] > 0.0 { 1.0 / (1.0 / g[0] + k as f64 * step) } else { 0.0 };
                tally.le(k, g[k], rhs);
            }
            let floor = dist_floor(&r);
            for k in 0..r.len().saturating_sub(1) {
                if r[k] <= floor {
                    break;
                }
                tally.le(k + 1, r[k + 1], r[k]);
            }
        }
        TheoremId::Thm4Accel => {
            let r_const = need(c.r, "R")?;
            let r = dists(trace)?;
            let g = gaps(trace, c.f_star)?;
            if r.len() > 1 {
                let scale = 4.0 * r_const * r[1] * r[1];
                for (k, gk) in g.iter().enumerate().skip(1) {
                    let kp1 = (k + 1) as f64;
                    tally.le(k, *gk, scale / (kp1 * kp1));
                }
            }
        }
        TheoremId::Thm6Restart => {
            let Variant::RestartFixed { interval } = cfg.variant else {
                return Err(invalid("variant", "thm6_restart needs a restart_fixed trace"));
            };
            let g = gaps(trace, c.f_star)?;
            let mut j = 1;
            while j * interval < g.len() {
                tally.le(j * interval, g[j * interval], (-(j as f64)).exp() * g[0]);
                j += 1;
            }
        }
        TheoremId::Thm2Converse => {
            let nu_hat = converse_secant(trace, oracle, cfg.stepsize_h)?.value;
            let r = dists(trace)?;
            let floor = dist_floor(&r);
            for (k, rec) in trace.records().iter().enumerate() {
                if r[k] <= floor {
                    break;
                }
                let pd = point_data(oracle, &rec.x)?;
                tally.le(k, nu_hat * pd.dist * pd.dist, pd.g.dot(&pd.d));
            }
            let mut rep = tally.finish(c);
            rep.constants.nu = Some(nu_hat);
            return Ok(rep);
        }
        TheoremId::Thm8Augl1 => {
            let fs: Vec<f64> = trace.records().iter().map(|r| r.f).collect();
            return check_dual_gap_geometric(&fs, opts.f_star);
        }
        TheoremId::Lemma1Part2 | TheoremId::Lemma2Combined | TheoremId::Lemma3Growth => {
            pointwise_preconditions(oracle, id)?;
            let r = dists(trace)?;
            let floor = dist_floor(&r);
            for (k, rec) in trace.records().iter().enumerate() {
                if r[k] <= floor {
                    break;
                }
                check_pointwise(&mut tally, k, &point_data(oracle, &rec.x)?, &c)?;
            }
        }
    }
    Ok(tally.finish(c))
}

/// Geometric decay of the (negated) dual gap `f_k − f*`. With no `f*`, the
/// best value seen stands in for it. The fit uses the second half of the
/// longest prefix whose gaps stay above rounding level; the report's
/// violation is `max(ρ̂ − 1, 0.95 − r²)`.
pub fn check_dual_gap_geometric(values: &[f64], f_star: Option<f64>) -> Result<BoundReport> {
    let fs = f_star.unwrap_or_else(|| values.iter().copied().fold(f64::INFINITY, f64::min));
    if !fs.is_finite() {
        return Err(Error::NoSamples("no objective values".into()));
    }
    let noise = 64.0 * f64::EPSILON * fs.abs().max(1.0);
    let resolved = values.iter().take_while(|&&f| f - fs > noise).count();
    let gaps: Vec<f64> = values[..resolved].iter().map(|f| f - fs).collect();
    let ks: Vec<usize> = (0..resolved).collect();
    let window = (resolved / 2, resolved.saturating_sub(1));
    let fit = fit_rate_series(&ks, &gaps, RateModel::LinearGeometric, Some(window))?;
    let max_violation = (fit.fitted_factor - 1.0).max(0.95 - fit.r_squared);
    Ok(BoundReport {
        theorem_id: TheoremId::Thm8Augl1,
        pass: fit.fitted_factor < 1.0 && fit.r_squared > 0.95,
        max_violation,
        first_fail_k: None,
        checked: fit.window.1 + 1 - fit.window.0,
        constants: ConstantsUsed {
            f_star: Some(fs),
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{DenseMatrix, DenseVector};
    use crate::oracles::{make_example_1d, make_quadratic_composite, Example1dKind};
    use crate::solvers::{solve, ResetPolicy};

    fn halfsq() -> impl ObjectiveOracle {
        make_quadratic_composite(DenseMatrix::identity(1), DenseVector::zeros(1)).unwrap()
    }

    #[test]
    fn ids_roundtrip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
    }

    #[test]
    fn optimal_start_passes_trivially() {
        let o = halfsq();
        let cfg = SolverConfig::new(Variant::GradientDescent, 0.5, 10);
        let t = solve(&o, &DenseVector::from(vec![0.0]), &cfg).unwrap();
        for id in [TheoremId::Thm2Linear, TheoremId::Thm1Sublinear, TheoremId::Lemma3Growth] {
            let rep = check_bounds(&t, &o, id, &cfg).unwrap();
            assert!(rep.pass, "{id:?}");
            assert!(rep.max_violation <= 0.0);
        }
    }

    #[test]
    fn f3_hand_trace_meets_linear_bound() {
        let f3 = make_example_1d(Example1dKind::F3 { beta: 1.0 }).unwrap();
        let cfg = SolverConfig::new(Variant::GradientDescent, 0.5, 30);
        let t = solve(&f3, &DenseVector::from(vec![3.0]), &cfg).unwrap();
        let rep = check_bounds(&t, &f3, TheoremId::Thm2Linear, &cfg).unwrap();
        assert!(rep.pass);
        // Δ_0 = (R/2) r_0² exactly for this function.
        assert!(rep.max_violation <= 0.0);
    }

    #[test]
    fn missing_constants_are_named() {
        let f1 = make_example_1d(Example1dKind::F1).unwrap();
        let cfg = SolverConfig::new(Variant::GradientDescent, 0.1, 5);
        let t = solve(&f1, &DenseVector::from(vec![0.5]), &cfg).unwrap();
        match check_bounds(&t, &f1, TheoremId::Thm2Linear, &cfg) {
            Err(Error::MissingCapability(m)) => assert!(m.contains('R')),
            other => panic!("{other:?}"),
        }
        match check_bounds(&t, &f1, TheoremId::Lemma1Part2, &cfg) {
            Err(Error::MissingCapability(m)) => assert!(m.contains("convexity")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn too_large_step_is_caught() {
        let o = halfsq();
        let cfg = SolverConfig::new(Variant::GradientDescent, 1.9, 10);
        let t = solve(&o, &DenseVector::from(vec![1.0]), &cfg).unwrap();
        let rep = check_bounds(&t, &o, TheoremId::Thm2Linear, &cfg).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.first_fail_k, Some(1));
    }

    #[test]
    fn restart_requires_fixed_variant() {
        let o = halfsq();
        let cfg = SolverConfig::new(
            Variant::Adaptive {
                policy: ResetPolicy::Skip,
            },
            1.0,
            5,
        );
        let t = solve(&o, &DenseVector::from(vec![1.0]), &cfg).unwrap();
        assert!(check_bounds(&t, &o, TheoremId::Thm6Restart, &cfg).is_err());
    }

    #[test]
    fn geometric_gap_detected() {
        let fs: Vec<f64> = (0..200).map(|k| -3.0 + 0.9f64.powi(k)).collect();
        let rep = check_dual_gap_geometric(&fs, Some(-3.0)).unwrap();
        assert!(rep.pass);
        let stalled: Vec<f64> = (0..200).map(|k| 1.0 + 0.5 * (k as f64).sin()).collect();
        let rep = check_dual_gap_geometric(&stalled, Some(0.0)).unwrap();
        assert!(!rep.pass);
    }
}

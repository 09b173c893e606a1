use std::f64::consts::SQRT_2;

use crate::augl1::shrink_scalar;
use crate::error::{invalid, Result};
use crate::numkit::DenseVector;
use crate::oracles::{Evaluation, KnownConstants, ObjectiveOracle};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Example1dKind {
    /// Non-convex, RSI, gradient unbounded near `x = 1`.
    F1,
    /// Non-convex, RSI, Lipschitz gradient.
    F2,
    /// `½ shrink_β(x)²`: convex, RSC(1), not strictly convex.
    F3 { beta: f64 },
}

/// One of the scalar example functions.
#[derive(Debug, Clone)]
pub struct Example1d {
    kind: Example1dKind,
}

pub fn make_example_1d(kind: Example1dKind) -> Result<Example1d> {
    if let Example1dKind::F3 { beta } = kind {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("must be positive, got {beta}")));
        }
    }
    Ok(Example1d { kind })
}

// f1 junction where the circular arc meets the tail parabola
const F1_TAIL: f64 = 2.0 - SQRT_2 / 2.0;

fn f2_c() -> f64 {
    ((SQRT_2 - 1.0) / 2.0).sqrt()
}

impl Example1d {
    pub fn kind(&self) -> Example1dKind {
        self.kind
    }

    /// `(f(x), f'(x))`; the derivative is infinite at `x = 1` for `f1`.
    pub fn value_and_derivative(&self, x: f64) -> (f64, f64) {
        match self.kind {
            Example1dKind::F1 => {
                if x <= 0.0 {
                    (0.0, 0.0)
                } else if x <= 1.0 {
                    let s = (1.0 - x * x).sqrt();
                    (1.0 - s, x / s)
                } else if x <= F1_TAIL {
                    let u = x - 2.0;
                    let s = (1.0 - u * u).sqrt();
                    (1.0 + s, -u / s)
                } else {
                    let u = x - 1.0 + SQRT_2 / 2.0;
                    (0.5 * u * u + (1.0 + SQRT_2) / 2.0, u)
                }
            }
            Example1dKind::F2 => {
                if x <= 0.0 {
                    (0.0, 0.0)
                } else if x <= SQRT_2 / 2.0 {
                    let s = (1.0 - x * x).sqrt();
                    (1.0 - s, x / s)
                } else if x <= 1.0 {
                    let u = x - SQRT_2;
                    let s = (1.0 - u * u).sqrt();
                    (s - SQRT_2 + 1.0, -u / s)
                } else {
                    let u = x - 1.0 + f2_c();
                    let offset = (2.0 * SQRT_2 - 2.0).sqrt() + (5.0 - 5.0 * SQRT_2) / 4.0;
                    (0.5 * u * u + offset, u)
                }
            }
            Example1dKind::F3 { beta } => {
                let s = shrink_scalar(x, beta);
                (0.5 * s * s, s)
            }
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self.kind {
            Example1dKind::F1 => vec![0.0, 1.0, F1_TAIL],
            Example1dKind::F2 => vec![0.0, SQRT_2 / 2.0, 1.0],
            Example1dKind::F3 { beta } => vec![-beta, beta],
        }
    }
}

impl ObjectiveOracle for Example1d {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &DenseVector) -> Result<Evaluation> {
        let (f, g) = self.value_and_derivative(x[0]);
        Evaluation::checked(f, DenseVector::from_raw(vec![g]))
    }

    fn project(&self, x: &DenseVector) -> Option<DenseVector> {
        let p = match self.kind {
            Example1dKind::F1 | Example1dKind::F2 => x[0].min(0.0),
            Example1dKind::F3 { beta } => x[0].clamp(-beta, beta),
        };
        Some(DenseVector::from_raw(vec![p]))
    }

    fn has_projection(&self) -> bool {
        true
    }

    fn constants(&self) -> KnownConstants {
        match self.kind {
            Example1dKind::F1 => KnownConstants {
                nu: Some(2.0 / (4.0 - SQRT_2)),
                ..Default::default()
            },
            // |f2''| peaks at 2√2 on both sides of x = √2/2
            Example1dKind::F2 => KnownConstants {
                nu: Some(f2_c()),
                l: Some(2.0 * SQRT_2),
                ..Default::default()
            },
            Example1dKind::F3 { .. } => KnownConstants {
                r: Some(1.0),
                l: Some(1.0),
                nu: Some(1.0),
                mu: None,
            },
        }
    }

    fn f_star(&self) -> Option<f64> {
        Some(0.0)
    }

    fn is_convex(&self) -> bool {
        matches!(self.kind, Example1dKind::F3 { .. })
    }

    fn near_kink(&self, x: &DenseVector, margin: f64) -> bool {
        self.kinks().iter().any(|k| (x[0] - k).abs() < margin)
    }

    fn name(&self) -> String {
        match self.kind {
            Example1dKind::F1 => "f1".into(),
            Example1dKind::F2 => "f2".into(),
            Example1dKind::F3 { beta } => format!("f3:beta={beta}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64) -> DenseVector {
        DenseVector::from(vec![x])
    }

    #[test]
    fn f3_eval_and_project() {
        let f3 = make_example_1d(Example1dKind::F3 { beta: 1.0 }).unwrap();
        let e = f3.eval(&v(3.0)).unwrap();
        assert_eq!((e.value, e.gradient[0]), (2.0, 2.0));
        assert_eq!(f3.project(&v(3.0)).unwrap()[0], 1.0);
        assert_eq!(f3.project(&v(-0.5)).unwrap()[0], -0.5);
    }

    #[test]
    fn f3_rejects_nonpositive_beta() {
        assert!(make_example_1d(Example1dKind::F3 { beta: 0.0 }).is_err());
        assert!(make_example_1d(Example1dKind::F3 { beta: -1.0 }).is_err());
    }

    #[test]
    fn published_secant_constants() {
        let f1 = make_example_1d(Example1dKind::F1).unwrap();
        let nu = f1.constants().nu.unwrap();
        assert!((nu - 0.7735).abs() < 1e-4);
        assert!(f1.constants().l.is_none());
        let f2 = make_example_1d(Example1dKind::F2).unwrap();
        assert!((f2.constants().nu.unwrap() - 0.45509).abs() < 1e-5);
    }

    #[test]
    fn pieces_join_continuously() {
        let eps = 1e-9;
        for kind in [Example1dKind::F1, Example1dKind::F2] {
            let f = make_example_1d(kind).unwrap();
            for &k in &f.kinks() {
                if kind == Example1dKind::F1 && k == 1.0 {
                    let (a, _) = f.value_and_derivative(k - eps);
                    let (b, _) = f.value_and_derivative(k + eps);
                    assert!((a - b).abs() < 1e-4);
                    continue;
                }
                let (a, da) = f.value_and_derivative(k - eps);
                let (b, db) = f.value_and_derivative(k + eps);
                assert!((a - b).abs() < 1e-8, "{kind:?} value jump at {k}");
                assert!((da - db).abs() < 1e-4, "{kind:?} slope jump at {k}");
            }
        }
    }

    #[test]
    fn f1_gradient_blows_up_at_one() {
        let f1 = make_example_1d(Example1dKind::F1).unwrap();
        assert!(f1.eval(&v(1.0)).is_err());
    }

    #[test]
    fn minimizer_sets() {
        let f1 = make_example_1d(Example1dKind::F1).unwrap();
        assert_eq!(f1.project(&v(2.0)).unwrap()[0], 0.0);
        assert_eq!(f1.project(&v(-3.0)).unwrap()[0], -3.0);
        assert_eq!(f1.eval(&v(-3.0)).unwrap().value, 0.0);
    }
}

//! Objective oracles: value, gradient, optional exact projection onto the
//! minimizer set, and whatever restricted constants are known analytically.

mod augl1_dual;
mod compose;
mod examples1d;
mod fdcheck;
mod quadratic;
mod zoo;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numkit::DenseVector;

pub use augl1_dual::{make_augl1_dual, Augl1Dual};
pub use compose::{compose_constants, CompositionMode};
pub use examples1d::{make_example_1d, Example1d, Example1dKind};
pub use fdcheck::{finite_diff_check, FD_KINK_MARGIN};
pub use quadratic::{make_quadratic_composite, QuadraticComposite};
pub use zoo::{oracle_from_id, OracleSpec, DEFAULT_ZOO};

/// Value and gradient at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub gradient: DenseVector,
}

impl Evaluation {
    pub(crate) fn checked(value: f64, gradient: DenseVector) -> Result<Self> {
        if !value.is_finite() {
            return Err(crate::Error::NonFinite("objective value"));
        }
        if !gradient.is_finite() {
            return Err(crate::Error::NonFinite("gradient"));
        }
        Ok(Self { value, gradient })
    }
}

/// Analytically known constants. `r` is the restricted Lipschitz constant,
/// `l` the global one, `nu` the restricted secant constant and `mu` a strong
/// convexity modulus (only used when composing with a linear map).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct KnownConstants {
    pub r: Option<f64>,
    pub l: Option<f64>,
    pub nu: Option<f64>,
    pub mu: Option<f64>,
}

impl KnownConstants {
    /// Best available restricted Lipschitz constant: `R` if known, else `L`.
    pub fn restricted_lipschitz(&self) -> Option<f64> {
        self.r.or(self.l)
    }
}

/// A differentiable objective to be minimized.
pub trait ObjectiveOracle: Send + Sync + std::fmt::Debug {
    fn dim(&self) -> usize;

    /// Fails with [`crate::Error::NonFinite`] where the gradient blows up.
    fn eval(&self, x: &DenseVector) -> Result<Evaluation>;

    /// Euclidean projection onto the minimizer set, when it has a closed form.
    fn project(&self, _x: &DenseVector) -> Option<DenseVector> {
        None
    }

    /// `‖x − Proj(x)‖`. Implementations may compute it without forming the
    /// projection to avoid cancellation.
    fn dist_to_solution(&self, x: &DenseVector) -> Option<f64> {
        self.project(x).map(|p| x.distance(&p))
    }

    fn has_projection(&self) -> bool;

    fn constants(&self) -> KnownConstants {
        KnownConstants::default()
    }

    fn f_star(&self) -> Option<f64> {
        None
    }

    fn is_convex(&self) -> bool;

    /// True if `x` lies within `margin` of a point where the gradient is not
    /// smooth (a kink or a blow-up).
    fn near_kink(&self, _x: &DenseVector, _margin: f64) -> bool {
        false
    }

    fn name(&self) -> String;
}

impl<T: ObjectiveOracle + ?Sized> ObjectiveOracle for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &DenseVector) -> Result<Evaluation> {
        (**self).eval(x)
    }
    fn project(&self, x: &DenseVector) -> Option<DenseVector> {
        (**self).project(x)
    }
    fn dist_to_solution(&self, x: &DenseVector) -> Option<f64> {
        (**self).dist_to_solution(x)
    }
    fn has_projection(&self) -> bool {
        (**self).has_projection()
    }
    fn constants(&self) -> KnownConstants {
        (**self).constants()
    }
    fn f_star(&self) -> Option<f64> {
        (**self).f_star()
    }
    fn is_convex(&self) -> bool {
        (**self).is_convex()
    }
    fn near_kink(&self, x: &DenseVector, margin: f64) -> bool {
        (**self).near_kink(x, margin)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

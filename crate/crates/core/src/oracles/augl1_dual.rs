use crate::augl1::shrink_scalar;
use crate::error::{invalid, Error, Result};
use crate::numkit::{spectral_norm_sq, DenseMatrix, DenseVector};
use crate::oracles::{Evaluation, KnownConstants, ObjectiveOracle};

/// Negated dual of the augmented-ℓ1 model, as a minimization objective:
/// `f(y) = −bᵀy + (α/2)‖shrink₁(Aᵀy)‖²`, `∇f(y) = −b + α A shrink₁(Aᵀy)`.
///
/// The solution set has no closed form, so there is no projection.
#[derive(Debug, Clone)]
pub struct Augl1Dual {
    a: DenseMatrix,
    /// `Aᵀ` stored row-major so both products stream contiguous rows and
    /// `A x` skips the zero entries of the sparse primal.
    at: DenseMatrix,
    b: DenseVector,
    alpha: f64,
    lipschitz: f64,
}

pub fn make_augl1_dual(a: DenseMatrix, b: DenseVector, alpha: f64) -> Result<Augl1Dual> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "augmented-l1 dual (rows(A) vs dim(b))",
            expected: a.rows(),
            got: b.len(),
        });
    }
    if a.is_zero() {
        return Err(invalid("A", "must be nonzero"));
    }
    if b.norm() == 0.0 {
        return Err(invalid("b", "must be nonzero"));
    }
    let lipschitz = alpha * spectral_norm_sq(&a)?.value;
    Ok(Augl1Dual {
        at: a.transpose(),
        a,
        b,
        alpha,
        lipschitz,
    })
}

impl Augl1Dual {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &DenseVector {
        &self.b
    }

    /// `α‖A‖²`
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Evaluation plus the primal point `x = α shrink₁(Aᵀy)` it induces.
    /// The gradient equals `A x − b`, i.e. minus the ascent direction of the
    /// linearized Bregman update.
    pub fn eval_with_primal(&self, y: &DenseVector) -> Result<(Evaluation, DenseVector)> {
        if y.len() != self.a.rows() {
            return Err(Error::DimensionMismatch {
                context: "augmented-l1 dual eval",
                expected: self.a.rows(),
                got: y.len(),
            });
        }
        let z = self.at.matvec_unchecked(y.as_slice());
        let s = z.map(|v| shrink_scalar(v, 1.0));
        let x = s.scale(self.alpha);
        let ax = self.at.matvec_t_unchecked(x.as_slice());
        let value = -self.b.dot(y) + 0.5 * self.alpha * s.norm_sq();
        let grad = ax.sub(&self.b);
        Ok((Evaluation::checked(value, grad)?, x))
    }
}

impl ObjectiveOracle for Augl1Dual {
    fn dim(&self) -> usize {
        self.a.rows()
    }

    fn eval(&self, y: &DenseVector) -> Result<Evaluation> {
        self.eval_with_primal(y).map(|(e, _)| e)
    }

    fn has_projection(&self) -> bool {
        false
    }

    fn constants(&self) -> KnownConstants {
        KnownConstants {
            l: Some(self.lipschitz),
            ..Default::default()
        }
    }

    fn is_convex(&self) -> bool {
        true
    }

    fn near_kink(&self, y: &DenseVector, margin: f64) -> bool {
        let z = self.at.matvec_unchecked(y.as_slice());
        z.iter().any(|v| (v.abs() - 1.0).abs() < margin)
    }

    fn name(&self) -> String {
        format!("augl1({}x{}, alpha={})", self.a.rows(), self.a.cols(), self.alpha)
    }
}

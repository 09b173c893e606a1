use crate::error::{invalid, Error, Result};
use crate::numkit::spectral::require_full_row_rank;
use crate::numkit::vector::dot_minus_compensated;
use crate::numkit::{Cholesky, DenseMatrix, DenseVector, SpectralSummary};
use crate::oracles::{Evaluation, KnownConstants, ObjectiveOracle};

/// `f(x) = ½‖Ax − b‖²` with full-row-rank `A`. The minimizer set is the
/// affine space `{x : Ax = b}`.
#[derive(Debug, Clone)]
pub struct QuadraticComposite {
    a: DenseMatrix,
    b: DenseVector,
    gram: Cholesky,
    spectrum: SpectralSummary,
}

pub fn make_quadratic_composite(a: DenseMatrix, b: DenseVector) -> Result<QuadraticComposite> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "quadratic composite (rows(A) vs dim(b))",
            expected: a.rows(),
            got: b.len(),
        });
    }
    if a.rows() > a.cols() {
        return Err(invalid(
            "A",
            format!("need m <= n for a surjective map, got {}x{}", a.rows(), a.cols()),
        ));
    }
    let spectrum = require_full_row_rank(&a)?;
    let gram = Cholesky::factor(&a.gram_rows())?;
    Ok(QuadraticComposite {
        a,
        b,
        gram,
        spectrum,
    })
}

impl QuadraticComposite {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &DenseVector {
        &self.b
    }

    /// Spectrum of `AAᵀ`.
    pub fn gram_spectrum(&self) -> SpectralSummary {
        self.spectrum
    }

    /// `Ax − b` in compensated arithmetic, so distances stay accurate far
    /// below `‖A‖‖x‖·eps`.
    fn residual(&self, x: &DenseVector) -> DenseVector {
        DenseVector::from_raw(
            (0..self.a.rows())
                .map(|i| dot_minus_compensated(self.a.row(i), x.as_slice(), self.b[i]))
                .collect(),
        )
    }

    /// `x − Proj(x) = Aᵀ(AAᵀ)⁻¹(Ax − b)`.
    fn offset_from_solution(&self, x: &DenseVector) -> DenseVector {
        let residual = self.residual(x);
        let z = self.gram.solve(residual.as_slice());
        self.a.matvec_t_unchecked(&z)
    }
}

impl ObjectiveOracle for QuadraticComposite {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn eval(&self, x: &DenseVector) -> Result<Evaluation> {
        if x.len() != self.a.cols() {
            return Err(Error::DimensionMismatch {
                context: "quadratic composite eval",
                expected: self.a.cols(),
                got: x.len(),
            });
        }
        let r = self.residual(x);
        let g = self.a.matvec_t_unchecked(r.as_slice());
        Evaluation::checked(0.5 * r.norm_sq(), g)
    }

    fn project(&self, x: &DenseVector) -> Option<DenseVector> {
        Some(x.sub(&self.offset_from_solution(x)))
    }

    fn dist_to_solution(&self, x: &DenseVector) -> Option<f64> {
        Some(self.offset_from_solution(x).norm())
    }

    fn has_projection(&self) -> bool {
        true
    }

    fn constants(&self) -> KnownConstants {
        let l = self.spectrum.lambda_max;
        KnownConstants {
            r: Some(l),
            l: Some(l),
            nu: Some(self.spectrum.lambda_min),
            mu: None,
        }
    }

    fn f_star(&self) -> Option<f64> {
        Some(0.0)
    }

    fn is_convex(&self) -> bool {
        true
    }

    fn name(&self) -> String {
        format!("quad({}x{})", self.a.rows(), self.a.cols())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_zero_rhs() {
        let q = make_quadratic_composite(DenseMatrix::identity(3), DenseVector::zeros(3)).unwrap();
        let x = DenseVector::from(vec![1.0, -2.0, 2.0]);
        let e = q.eval(&x).unwrap();
        assert_eq!(e.value, 4.5);
        assert_eq!(e.gradient, x);
        assert!(q.project(&x).unwrap().norm() < 1e-15);
        assert_eq!(q.dist_to_solution(&x), Some(3.0));
    }

    #[test]
    fn projection_by_symmetry() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let q = make_quadratic_composite(a, DenseVector::from(vec![2.0])).unwrap();
        let p = q.project(&DenseVector::zeros(2)).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
        let c = q.constants();
        assert!((c.l.unwrap() - 2.0).abs() < 1e-14);
        assert!((c.nu.unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_rank_deficiency_and_tall() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            make_quadratic_composite(a, DenseVector::zeros(2)),
            Err(Error::RankDeficient { .. })
        ));
        let tall = DenseMatrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        assert!(make_quadratic_composite(tall, DenseVector::zeros(2)).is_err());
    }
}

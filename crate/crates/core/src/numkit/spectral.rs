//! Spectral quantities: power iteration for `‖A‖²`, cyclic Jacobi for
//! symmetric eigendecompositions, and a Cholesky-based minimum-norm solve.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::matrix::DenseMatrix;
use crate::numkit::vector::{dot, DenseVector};

pub const POWER_REL_TOL: f64 = 1e-10;
pub const POWER_MAX_ITERS: usize = 100_000;
/// Eigenvalues below this fraction of `λ_max` count as zero.
pub const ZERO_EIG_REL: f64 = 1e-10;
pub const JACOBI_OFF_TOL: f64 = 1e-12;
pub const JACOBI_MAX_DIM: usize = 1024;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Result of a power iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// `λ_max(AᵀA) = ‖A‖₂²` by power iteration on the smaller Gram operator.
///
/// Starts from the normalized all-ones vector. When the iteration cap is hit
/// the best estimate is returned with `converged == false`.
pub fn spectral_norm_sq(a: &DenseMatrix) -> Result<PowerEstimate> {
    if a.is_zero() {
        return Err(Error::InvalidParameter {
            name: "A",
            reason: "spectral norm requested for the zero matrix".into(),
        });
    }
    let wide = a.rows() <= a.cols();
    let dim = if wide { a.rows() } else { a.cols() };
    let apply = |v: &[f64]| -> DenseVector {
        if wide {
            let t = a.matvec_t_unchecked(v);
            a.matvec_unchecked(t.as_slice())
        } else {
            let t = a.matvec_unchecked(v);
            a.matvec_t_unchecked(t.as_slice())
        }
    };

    let mut v = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut lambda = 0.0;
    for it in 1..=POWER_MAX_ITERS {
        let w = apply(&v);
        let next = dot(&v, w.as_slice());
        let wn = w.norm();
        if wn == 0.0 {
            // start vector in the null space; fall back to a basis vector sweep
            v = vec![0.0; dim];
            v[(it - 1) % dim] = 1.0;
            continue;
        }
        v = w.into_vec();
        v.iter_mut().for_each(|x| *x /= wn);
        if (next - lambda).abs() <= POWER_REL_TOL * next.abs() {
            return Ok(PowerEstimate {
                value: next,
                converged: true,
                iterations: it,
            });
        }
        lambda = next;
    }
    Ok(PowerEstimate {
        value: lambda,
        converged: false,
        iterations: POWER_MAX_ITERS,
    })
}

/// Extreme eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// Smallest strictly positive eigenvalue; `None` when there is none.
    pub lambda_min_pp: Option<f64>,
}

/// Full eigendecomposition `S = V diag(values) Vᵀ`, eigenvalues ascending,
/// eigenvectors in the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn summary(&self) -> SpectralSummary {
        let lambda_max = *self.values.last().unwrap_or(&0.0);
        let lambda_min = *self.values.first().unwrap_or(&0.0);
        let cut = ZERO_EIG_REL * lambda_max.max(0.0);
        let lambda_min_pp = self.values.iter().copied().find(|&v| v > cut && v > 0.0);
        SpectralSummary {
            lambda_max,
            lambda_min,
            lambda_min_pp,
        }
    }
}

pub fn check_symmetric(s: &DenseMatrix) -> Result<()> {
    if s.rows() != s.cols() {
        return Err(Error::DimensionMismatch {
            context: "symmetric matrix must be square",
            expected: s.rows(),
            got: s.cols(),
        });
    }
    for i in 0..s.rows() {
        for j in (i + 1)..s.cols() {
            let gap = (s.get(i, j) - s.get(j, i)).abs();
            if gap > 1e-12 {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    gap,
                });
            }
        }
    }
    Ok(())
}

/// Cyclic Jacobi eigensolver.
pub fn sym_eig(s: &DenseMatrix) -> Result<SymmetricEigen> {
    check_symmetric(s)?;
    let n = s.rows();
    if n > JACOBI_MAX_DIM {
        return Err(Error::TooLarge(n));
    }
    let mut a: Vec<f64> = s.data().to_vec();
    let mut v = DenseMatrix::identity(n).data().to_vec();
    let scale = s.frobenius_norm().max(1.0);
    let off_norm = |a: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[i * n + j] * a[i * n + j];
                }
            }
        }
        acc.sqrt()
    };

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS && off_norm(&a) >= JACOBI_OFF_TOL * scale {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                // rotate rows/cols p and q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - sn * akq;
                    a[k * n + q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sn * aqk;
                    a[q * n + k] = sn * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v[row * n + src]);
        }
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

pub fn sym_eig_summary(s: &DenseMatrix) -> Result<SpectralSummary> {
    Ok(sym_eig(s)?.summary())
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn factor(s: &DenseMatrix) -> Result<Self> {
        check_symmetric(s)?;
        let n = s.rows();
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = s.get(j, j) - dot(&l[j * n..j * n + j], &l[j * n..j * n + j]);
            if d <= 0.0 {
                return Err(Error::RankDeficient {
                    lambda_min: d,
                    lambda_max: s.frobenius_norm(),
                });
            }
            d = d.sqrt();
            l[j * n + j] = d;
            for i in (j + 1)..n {
                let v = s.get(i, j) - dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
                l[i * n + j] = v / d;
            }
        }
        Ok(Self { n, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = (b[i] - dot(&self.l[i * n..i * n + i], &y[..i])) / self.l[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for (k, xk) in x.iter().enumerate().skip(i + 1) {
                acc -= self.l[k * n + i] * xk;
            }
            x[i] = acc / self.l[i * n + i];
        }
        x
    }
}

/// Checks `λ_min(AAᵀ) > 1e-12·λ_max` and returns the Gram summary.
pub fn require_full_row_rank(a: &DenseMatrix) -> Result<SpectralSummary> {
    let summary = sym_eig_summary(&a.gram_rows())?;
    if summary.lambda_min <= 1e-12 * summary.lambda_max || summary.lambda_max <= 0.0 {
        return Err(Error::RankDeficient {
            lambda_min: summary.lambda_min,
            lambda_max: summary.lambda_max,
        });
    }
    Ok(summary)
}

/// Minimum-norm solution of `A x = t` for full-row-rank `A`:
/// `x = Aᵀ z` with `AAᵀ z = t` solved by Cholesky.
pub fn least_squares_min_norm(a: &DenseMatrix, t: &DenseVector) -> Result<DenseVector> {
    if t.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "least_squares_min_norm (rows(A) vs dim(t))",
            expected: a.rows(),
            got: t.len(),
        });
    }
    require_full_row_rank(a)?;
    let chol = Cholesky::factor(&a.gram_rows())?;
    let z = chol.solve(t.as_slice());
    Ok(a.matvec_t_unchecked(&z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_identity_and_diag() {
        let e = spectral_norm_sq(&DenseMatrix::identity(3)).unwrap();
        assert!(e.converged);
        assert!((e.value - 1.0).abs() < 1e-12);
        let e = spectral_norm_sq(&DenseMatrix::diag(&[3.0, 4.0])).unwrap();
        assert!((e.value - 16.0).abs() < 1e-8);
    }

    #[test]
    fn power_rejects_zero() {
        assert!(spectral_norm_sq(&DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn eig_diag_summary() {
        let s = sym_eig_summary(&DenseMatrix::diag(&[0.0, 2.0, 5.0])).unwrap();
        assert_eq!(s.lambda_max, 5.0);
        assert_eq!(s.lambda_min, 0.0);
        assert_eq!(s.lambda_min_pp, Some(2.0));
    }

    #[test]
    fn eig_identity_summary() {
        let s = sym_eig_summary(&DenseMatrix::identity(4)).unwrap();
        assert_eq!((s.lambda_max, s.lambda_min, s.lambda_min_pp), (1.0, 1.0, Some(1.0)));
    }

    #[test]
    fn eig_rank_one() {
        // [[1,1],[1,1]] has eigenvalues {0, 2}
        let s = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let sum = sym_eig_summary(&s).unwrap();
        assert!(sum.lambda_min.abs() < 1e-14);
        assert!((sum.lambda_max - 2.0).abs() < 1e-14);
        assert!((sum.lambda_min_pp.unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_asymmetric() {
        let s = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eig(&s), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn min_norm_small_cases() {
        let a = DenseMatrix::identity(3);
        let b = DenseVector::from(vec![1.0, -2.0, 0.5]);
        let x = least_squares_min_norm(&a, &b).unwrap();
        for (u, v) in x.iter().zip(b.iter()) {
            assert!((u - v).abs() < 1e-14);
        }
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let x = least_squares_min_norm(&a, &DenseVector::from(vec![2.0])).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn min_norm_rank_deficient() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let err = least_squares_min_norm(&a, &DenseVector::from(vec![1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { .. }));
    }
}

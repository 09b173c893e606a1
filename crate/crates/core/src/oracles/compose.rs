use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::spectral::require_full_row_rank;
use crate::numkit::{sym_eig_summary, DenseMatrix};
use crate::oracles::KnownConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionMode {
    /// `A` has full row rank and `g` is RSC(ν) with a unique minimizer.
    Surjective,
    /// `g` is strongly convex with modulus μ near the solution; any nonzero `A`.
    StrictlyConvex,
}

/// Constants of `f(x) = g(Ax)` from those of `g`.
///
/// Surjective: `(L‖A‖², ν λ_min(AAᵀ))`. Strictly convex: `(L‖A‖², μ λ⁺⁺_min(AᵀA))`.
pub fn compose_constants(
    g: &KnownConstants,
    a: &DenseMatrix,
    mode: CompositionMode,
) -> Result<KnownConstants> {
    let l = g
        .l
        .ok_or_else(|| Error::MissingCapability("g constant L".into()))?;
    let (l_bar, nu_bar) = match mode {
        CompositionMode::Surjective => {
            let nu = g
                .nu
                .ok_or_else(|| Error::MissingCapability("g constant nu".into()))?;
            let gram = require_full_row_rank(a)?;
            (l * gram.lambda_max, nu * gram.lambda_min)
        }
        CompositionMode::StrictlyConvex => {
            let mu = g
                .mu
                .ok_or_else(|| Error::MissingCapability("g constant mu".into()))?;
            let gram = sym_eig_summary(&a.gram_cols())?;
            let pp = gram.lambda_min_pp.ok_or(Error::RankDeficient {
                lambda_min: gram.lambda_min,
                lambda_max: gram.lambda_max,
            })?;
            (l * gram.lambda_max, mu * pp)
        }
    };
    Ok(KnownConstants {
        r: Some(l_bar),
        l: Some(l_bar),
        nu: Some(nu_bar),
        mu: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(nu: bool) -> KnownConstants {
        KnownConstants {
            l: Some(1.0),
            nu: nu.then_some(1.0),
            mu: (!nu).then_some(1.0),
            r: None,
        }
    }

    #[test]
    fn identity_keeps_constants() {
        let c = compose_constants(&unit(true), &DenseMatrix::identity(3), CompositionMode::Surjective)
            .unwrap();
        assert_eq!((c.l, c.nu), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn diagonal_surjective() {
        let c = compose_constants(
            &unit(true),
            &DenseMatrix::diag(&[2.0, 3.0]),
            CompositionMode::Surjective,
        )
        .unwrap();
        assert_eq!((c.l, c.nu), (Some(9.0), Some(4.0)));
    }

    #[test]
    fn rank_one_strictly_convex() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let c = compose_constants(&unit(false), &a, CompositionMode::StrictlyConvex).unwrap();
        assert!((c.l.unwrap() - 2.0).abs() < 1e-14);
        assert!((c.nu.unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn missing_constant_is_named() {
        let g = KnownConstants {
            l: Some(1.0),
            ..Default::default()
        };
        let err = compose_constants(&g, &DenseMatrix::identity(2), CompositionMode::Surjective)
            .unwrap_err();
        assert_eq!(err, Error::MissingCapability("g constant nu".into()));
        let err = compose_constants(&g, &DenseMatrix::identity(2), CompositionMode::StrictlyConvex)
            .unwrap_err();
        assert_eq!(err, Error::MissingCapability("g constant mu".into()));
    }

    #[test]
    fn surjective_needs_full_row_rank() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(compose_constants(&unit(true), &a, CompositionMode::Surjective).is_err());
    }
}

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOptimum {
    pub theta_star: f64,
    pub h_star: f64,
    pub min_value: f64,
    pub case_a_value: f64,
    pub case_b_value: f64,
    pub case_a_argmin: (f64, f64),
    pub case_b_argmin: (f64, f64),
    pub grid_steps: usize,
}

/// Squared contraction factor for `h ≤ θ/R`.
fn f1(r: f64, nu: f64, theta: f64, h: f64) -> f64 {
    nu * nu * h * h - 2.0 * ((1.0 - theta) * nu + theta * nu * nu / (2.0 * r)) * h + 1.0
}

/// Squared contraction factor for `h ≥ θ/R`.
fn f2(r: f64, nu: f64, theta: f64, h: f64) -> f64 {
    4.0 * r * r * h * h - 2.0 * (2.0 * theta * r + (1.0 - theta) * nu) * h + 1.0
}

/// Minimizes both cases over `θ_i = i/N`. Case A takes `h = (j/N)·θ/R`,
/// `j = 1..=N`; case B takes `N+1` equispaced `h` from `θ/R` to `4/R` (the
/// parabola in `h` has its vertex below `4/R`). Ties keep the first point in
/// `(θ, h)` order.
pub fn appendix_grid(r: f64, nu: f64, grid_steps: usize) -> Result<GridOptimum> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid("R", format!("must be positive, got {r}")));
    }
    if !(nu > 0.0 && nu < 2.0 * r) {
        return Err(invalid("nu", format!("need 0 < nu < 2R, got nu={nu}, R={r}")));
    }
    if grid_steps < 1000 {
        return Err(invalid("grid_steps", format!("need at least 1000, got {grid_steps}")));
    }
    let n = grid_steps as f64;
    let mut a = (f64::INFINITY, 0.0, 0.0);
    let mut b = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=grid_steps {
        let theta = i as f64 / n;
        let edge = theta / r;
        for j in 1..=grid_steps {
            let h = (j as f64 / n) * edge;
            if h <= 0.0 {
                break;
            }
            let v = f1(r, nu, theta, h);
            if v < a.0 {
                a = (v, theta, h);
            }
        }
        let span = 4.0 / r - edge;
        for j in 0..=grid_steps {
            let h = if j == 0 { edge } else { edge + (j as f64 / n) * span };
            let v = f2(r, nu, theta, h);
            if v < b.0 {
                b = (v, theta, h);
            }
        }
    }
    let best = if a.0 <= b.0 { a } else { b };
    Ok(GridOptimum {
        theta_star: best.1,
        h_star: best.2,
        min_value: best.0,
        case_a_value: a.0,
        case_b_value: b.0,
        case_a_argmin: (a.1, a.2),
        case_b_argmin: (b.1, b.2),
        grid_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_r_half_nu() {
        let g = appendix_grid(1.0, 0.5, 2000).unwrap();
        assert!((g.min_value - 0.75).abs() <= 1e-6);
        assert!((g.theta_star - 0.5).abs() <= 1.0 / 2000.0);
        assert!((g.h_star - 0.5).abs() <= 0.5 / 2000.0);
        assert!((g.case_a_value - 0.75).abs() <= 1e-12);
        assert!((g.case_b_value - 0.75).abs() <= 1e-12);
        assert_eq!(g.min_value, g.case_a_value.min(g.case_b_value));
    }

    #[test]
    fn larger_r() {
        let g = appendix_grid(10.0, 1.0, 1000).unwrap();
        assert!((g.min_value - 0.95).abs() <= 1e-9);
        assert!((g.theta_star - 0.5).abs() <= 1e-3);
        assert!((g.h_star - 0.05).abs() <= 1e-4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(appendix_grid(1.0, 2.0, 1000).is_err());
        assert!(appendix_grid(1.0, 0.5, 999).is_err());
        assert!(appendix_grid(0.0, 0.5, 1000).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn closed_form_is_lower_envelope(r in 0.1f64..50.0, frac in 0.01f64..0.99) {
            let nu = frac * r;
            let g = appendix_grid(r, nu, 1000).unwrap();
            prop_assert!(g.min_value >= 1.0 - nu / (2.0 * r) - 1e-12);
        }
    }
}

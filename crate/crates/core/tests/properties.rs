//! Cross-module invariants checked through the public API.

use gradbound::augl1::{gen_sparse_problem, shrink_scalar, SignalKind};
use gradbound::certify::{appendix_grid, check_bounds, TheoremId};
use gradbound::numkit::{DenseVector, GaussianStream};
use gradbound::oracles::{oracle_from_id, ObjectiveOracle};
use gradbound::solvers::{solve, theta_step, ResetPolicy, SolverConfig, Variant};
use proptest::prelude::*;

fn quad(seed: u64) -> Box<dyn ObjectiveOracle> {
    oracle_from_id(&format!("quad:m=6,n=12,seed={seed}")).unwrap()
}

fn start(dim: usize, seed: u64) -> DenseVector {
    DenseVector::new(GaussianStream::new(seed).gaussians(dim)).unwrap().scale(5.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // gd at h = 1/(2R) never moves away from the solution set
    #[test]
    fn gd_distance_is_nonincreasing(seed in 0u64..1000, x_seed in 0u64..1000) {
        let f = quad(seed);
        let r = f.constants().r.unwrap();
        let cfg = SolverConfig::new(Variant::GradientDescent, 1.0 / (2.0 * r), 60);
        let trace = solve(f.as_ref(), &start(f.dim(), x_seed), &cfg).unwrap();
        let d = trace.dists().unwrap();
        for w in d.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-13);
        }
    }

    #[test]
    fn linear_bound_holds_for_random_quadratics(seed in 0u64..1000, x_seed in 0u64..1000) {
        let f = quad(seed);
        let r = f.constants().r.unwrap();
        let cfg = SolverConfig::new(Variant::GradientDescent, 1.0 / (2.0 * r), 80);
        let trace = solve(f.as_ref(), &start(f.dim(), x_seed), &cfg).unwrap();
        let rep = check_bounds(&trace, f.as_ref(), TheoremId::Thm2Linear, &cfg).unwrap();
        prop_assert!(rep.pass, "violation {}", rep.max_violation);
    }

    // θ stays in (0, 1] and decreases; β stays in [0, 1)
    #[test]
    fn theta_recursion_stays_in_range(theta in 1e-6f64..=1.0) {
        let (next, beta) = theta_step(theta).unwrap();
        prop_assert!(next > 0.0 && next < theta);
        prop_assert!((0.0..1.0).contains(&beta));
        // θ_{k+1}² = (1 − θ_{k+1}) θ_k²
        prop_assert!((next * next - (1.0 - next) * theta * theta).abs() <= 1e-14);
    }

    #[test]
    fn adaptive_variants_make_progress(seed in 0u64..500) {
        let f = quad(seed);
        let h = 1.0 / f.constants().restricted_lipschitz().unwrap();
        let x0 = start(f.dim(), seed + 1);
        for policy in [ResetPolicy::Restart, ResetPolicy::Skip] {
            let cfg = SolverConfig::new(Variant::Adaptive { policy }, h, 100);
            let gaps = solve(f.as_ref(), &x0, &cfg).unwrap().gaps().unwrap();
            prop_assert!(*gaps.last().unwrap() < gaps[0]);
        }
    }

    #[test]
    fn appendix_minimum_is_one_minus_ratio(r in 0.5f64..10.0, frac in 0.01f64..1.99) {
        let nu = frac * r;
        let g = appendix_grid(r, nu, 1000).unwrap();
        prop_assert!((g.min_value - (1.0 - nu / (2.0 * r))).abs() < 1e-9);
    }

    #[test]
    fn sparse_problem_is_consistent(seed in 0u64..10_000, k in 1usize..8) {
        let p = gen_sparse_problem(seed, 12, 24, k, SignalKind::PmOne).unwrap();
        let nnz = p.x_true.iter().filter(|v| **v != 0.0).count();
        prop_assert_eq!(nnz, k);
        prop_assert!(p.x_true.iter().all(|v| *v == 0.0 || v.abs() == 1.0));
        prop_assert_eq!(p.alpha, 10.0);
        let again = gen_sparse_problem(seed, 12, 24, k, SignalKind::PmOne).unwrap();
        prop_assert_eq!(p.b, again.b);
    }

    #[test]
    fn shrink_is_odd(v in -1e3f64..1e3, beta in 0.0f64..10.0) {
        prop_assert_eq!(shrink_scalar(-v, beta), -shrink_scalar(v, beta));
    }
}

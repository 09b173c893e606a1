//! Exercises the C ABI the way a foreign caller would: raw pointers, status
//! codes and the thread-local error slot.

use std::ffi::{c_char, CString};
use std::process::Command;
use std::ptr;

use gradbound_ffi::*;

fn last_error() -> String {
    unsafe {
        let n = gb_last_error_message(ptr::null_mut(), 0);
        let mut buf = vec![0 as c_char; n + 1];
        gb_last_error_message(buf.as_mut_ptr(), buf.len());
        std::ffi::CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn oracle(id: &str) -> *mut GbOracle {
    let id = CString::new(id).unwrap();
    let mut o = ptr::null_mut();
    assert_eq!(unsafe { gb_oracle_from_id(id.as_ptr(), &mut o) }, GbStatus::Ok);
    o
}

#[test]
fn unknown_oracle_sets_status_and_message() {
    let id = CString::new("nope").unwrap();
    let mut o = ptr::null_mut();
    let st = unsafe { gb_oracle_from_id(id.as_ptr(), &mut o) };
    assert_eq!(st, GbStatus::UnknownOracle);
    assert!(o.is_null());
    assert!(last_error().contains("nope"));
}

#[test]
fn null_pointers_are_rejected() {
    let st = unsafe { gb_oracle_from_id(ptr::null(), ptr::null_mut()) };
    assert_eq!(st, GbStatus::NullPointer);
    assert_eq!(unsafe { gb_oracle_dim(ptr::null()) }, 0);
    assert_eq!(unsafe { gb_trace_len(ptr::null()) }, 0);
    unsafe {
        gb_oracle_free(ptr::null_mut());
        gb_trace_free(ptr::null_mut());
    }
}

#[test]
fn eval_matches_known_values_and_checks_dimension() {
    let o = oracle("f3:beta=1");
    unsafe {
        assert_eq!(gb_oracle_dim(o), 1);
        let (mut f, mut g) = (0.0, [0.0]);
        assert_eq!(gb_oracle_eval(o, [3.0].as_ptr(), 1, &mut f, g.as_mut_ptr()), GbStatus::Ok);
        assert_eq!((f, g[0]), (2.0, 2.0));
        let mut g2 = [0.0; 2];
        let st = gb_oracle_eval(o, [0.0, 0.0].as_ptr(), 2, &mut f, g2.as_mut_ptr());
        assert_eq!(st, GbStatus::DimensionMismatch);
        gb_oracle_free(o);
    }
}

#[test]
fn solve_then_check_bound() {
    let o = oracle("quad:m=6,n=12,seed=5");
    unsafe {
        let n = gb_oracle_dim(o);
        let x0 = vec![1.0; n];
        let mut g = vec![0.0; n];
        let mut f = 0.0;
        gb_oracle_eval(o, x0.as_ptr(), n, &mut f, g.as_mut_ptr());
        let cfg = GbSolverConfig {
            variant: GbVariant::AdaptiveRestart,
            restart_interval: 0,
            stepsize_h: 0.01,
            max_iters: 40,
            grad_tol: 0.0,
        };
        let mut t = ptr::null_mut();
        assert_eq!(gb_solve(o, x0.as_ptr(), n, &cfg, &mut t), GbStatus::Ok, "{}", last_error());
        assert_eq!(gb_trace_len(t), 41);
        let mut status = GbTerminalStatus::Diverged;
        assert_eq!(gb_trace_status(t, &mut status), GbStatus::Ok);
        assert_eq!(status, GbTerminalStatus::MaxIters);

        let mut rec = std::mem::zeroed::<GbTraceRecord>();
        assert_eq!(gb_trace_get(t, 0, &mut rec), GbStatus::Ok);
        assert_eq!(rec.k, 0);
        assert_eq!(rec.f, f);
        assert!(rec.dist_to_sol.is_finite());
        assert_eq!(gb_trace_get(t, 41, &mut rec), GbStatus::OutOfRange);

        let mut x = vec![0.0; n];
        assert_eq!(gb_trace_iterate(t, 0, x.as_mut_ptr(), n), GbStatus::Ok);
        assert_eq!(x, x0);
        assert_eq!(gb_trace_iterate(t, 0, x.as_mut_ptr(), n - 1), GbStatus::BufferTooSmall);

        let thm = CString::new("thm3_linear").unwrap();
        let mut rep = std::mem::zeroed::<GbBoundReport>();
        let st = gb_check_bound(t, o, thm.as_ptr(), &cfg, &mut rep);
        assert!(st == GbStatus::Ok || st == GbStatus::MissingCapability, "{}", last_error());
        let bad = CString::new("thm99").unwrap();
        assert_eq!(gb_check_bound(t, o, bad.as_ptr(), &cfg, &mut rep), GbStatus::InvalidArgument);

        gb_trace_free(t);
        gb_oracle_free(o);
    }
}

#[test]
fn linear_bound_passes_through_the_abi() {
    let o = oracle("quad:m=6,n=12,seed=5");
    unsafe {
        let n = gb_oracle_dim(o);
        let x0 = vec![2.0; n];
        let cfg = GbSolverConfig {
            variant: GbVariant::GradientDescent,
            restart_interval: 0,
            stepsize_h: 1e-3,
            max_iters: 50,
            grad_tol: 0.0,
        };
        let mut t = ptr::null_mut();
        assert_eq!(gb_solve(o, x0.as_ptr(), n, &cfg, &mut t), GbStatus::Ok);
        let thm = CString::new("thm1_sublinear").unwrap();
        let mut rep = std::mem::zeroed::<GbBoundReport>();
        assert_eq!(gb_check_bound(t, o, thm.as_ptr(), &cfg, &mut rep), GbStatus::Ok, "{}", last_error());
        assert!(rep.pass);
        assert_eq!(rep.first_fail_k, -1);
        gb_trace_free(t);
        gb_oracle_free(o);
    }
}

#[test]
fn theta_and_grid() {
    unsafe {
        let (mut t, mut b) = (0.0, 0.0);
        assert_eq!(gb_theta_step(1.0, &mut t, &mut b), GbStatus::Ok);
        assert!((t - (5f64.sqrt() - 1.0) / 2.0).abs() <= 2.0 * f64::EPSILON);
        assert_eq!(b, 0.0);
        assert_eq!(gb_theta_step(-1.0, &mut t, &mut b), GbStatus::InvalidArgument);

        let mut g = GbGridOptimum::default();
        assert_eq!(gb_appendix_grid(2.0, 1.0, 2000, &mut g), GbStatus::Ok);
        assert!((g.min_value - 0.75).abs() < 1e-12);
        assert_eq!(gb_appendix_grid(1.0, 5.0, 2000, &mut g), GbStatus::InvalidArgument);
    }
}

// the generated header must be consumable by both C and C++ compilers
#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/gradbound.h");
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header])
            .output()
        else {
            eprintln!("{cc} not available; skipping");
            continue;
        };
        assert!(out.status.success(), "{cc}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

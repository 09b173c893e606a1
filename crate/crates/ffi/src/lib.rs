//! C ABI over `gradbound`.
//!
//! Conventions:
//! - every fallible call returns a [`GbStatus`]; `GB_STATUS_OK` is 0;
//! - objects cross the boundary as opaque handles created by `gb_*_new`-style
//!   constructors and released with the matching `gb_*_free`;
//! - on failure the message is kept per thread and read back with
//!   [`gb_last_error_message`];
//! - panics never unwind into C: they surface as `GB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gradbound::certify::{appendix_grid, check_bounds, TheoremId};
use gradbound::numkit::DenseVector;
use gradbound::oracles::{oracle_from_id, ObjectiveOracle};
use gradbound::solvers::{
    solve, theta_step, ResetEvent, ResetPolicy, SolverConfig, SolverTrace, TerminalStatus, Variant,
};
use gradbound::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownOracle = 3,
    DimensionMismatch = 4,
    MissingCapability = 5,
    /// NaN or infinity, gradient blow-up, rank deficiency, failed fit.
    Numeric = 6,
    OutOfRange = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Solver family; `restart_interval` in [`GbSolverConfig`] is read only for
/// `RestartFixed`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbVariant {
    GradientDescent = 0,
    Nesterov = 1,
    RestartFixed = 2,
    AdaptiveRestart = 3,
    AdaptiveSkip = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GbSolverConfig {
    pub variant: GbVariant,
    pub restart_interval: usize,
    pub stepsize_h: f64,
    pub max_iters: usize,
    pub grad_tol: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbTerminalStatus {
    TolReached = 0,
    MaxIters = 1,
    Diverged = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbResetEvent {
    None = 0,
    Restart = 1,
    Skip = 2,
}

/// One trace row without the iterate; `dist_to_sol` is NaN when unknown.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GbTraceRecord {
    pub k: usize,
    pub f: f64,
    pub grad_norm: f64,
    pub dist_to_sol: f64,
    pub reset_event: GbResetEvent,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GbGridOptimum {
    pub theta_star: f64,
    pub h_star: f64,
    pub min_value: f64,
    pub case_a_value: f64,
    pub case_b_value: f64,
}

/// `first_fail_k` is -1 when the bound held everywhere.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GbBoundReport {
    pub pass: bool,
    pub max_violation: f64,
    pub first_fail_k: i64,
    pub checked: usize,
}

/// Opaque objective oracle.
pub struct GbOracle(Box<dyn ObjectiveOracle>);

/// Opaque solver trace.
pub struct GbTrace(SolverTrace);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend_from_slice(msg.as_bytes());
    });
}

fn fail(status: GbStatus, msg: impl AsRef<str>) -> GbStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: Error) -> GbStatus {
    let status = match &e {
        Error::UnknownOracle(_) => GbStatus::UnknownOracle,
        Error::DimensionMismatch { .. } => GbStatus::DimensionMismatch,
        Error::MissingCapability(_) => GbStatus::MissingCapability,
        Error::InvalidParameter { .. } | Error::Parse(_) | Error::TooLarge(_) | Error::Io(_) => {
            GbStatus::InvalidArgument
        }
        Error::NonFinite(_)
        | Error::GradientBlowUp { .. }
        | Error::NonContracting { .. }
        | Error::RankDeficient { .. }
        | Error::NotSymmetric { .. }
        | Error::TooFewPoints { .. }
        | Error::NoSamples(_) => GbStatus::Numeric,
    };
    fail(status, e.to_string())
}

/// Runs `body`, turning panics into `Panic` and clearing the error slot on
/// success.
fn guard(body: impl FnOnce() -> Result<(), GbStatus>) -> GbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            GbStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(GbStatus::Panic, "internal panic"),
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), GbStatus> {
    if p.is_null() {
        Err(fail(GbStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be valid for `len` reads when non-null.
unsafe fn slice<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], GbStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, name)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes). Returns the full message length in bytes,
/// so a caller can size the buffer with a first call using `len = 0`.
///
/// # Safety
/// `buf` must be valid for `len` writes when `len > 0`.
#[no_mangle]
pub unsafe extern "C" fn gb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Builds an oracle from a textual id such as `"f2"` or
/// `"quad:m=20,n=50,seed=7"`.
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_oracle_from_id(id: *const c_char, out: *mut *mut GbOracle) -> GbStatus {
    guard(|| {
        non_null(id, "id")?;
        non_null(out, "out")?;
        let id = CStr::from_ptr(id)
            .to_str()
            .map_err(|_| fail(GbStatus::InvalidArgument, "oracle id is not UTF-8"))?;
        let oracle = oracle_from_id(id).map_err(from_error)?;
        *out = Box::into_raw(Box::new(GbOracle(oracle)));
        Ok(())
    })
}

/// # Safety
/// `oracle` must come from [`gb_oracle_from_id`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gb_oracle_free(oracle: *mut GbOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// Dimension of the oracle's domain; 0 for a null handle.
///
/// # Safety
/// `oracle` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gb_oracle_dim(oracle: *const GbOracle) -> usize {
    oracle.as_ref().map_or(0, |o| o.0.dim())
}

/// Evaluates `f(x)` and `∇f(x)`; `x` and `grad` both have length `n`.
///
/// # Safety
/// `x` must be readable and `grad` writable for `n` doubles; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn gb_oracle_eval(
    oracle: *const GbOracle,
    x: *const f64,
    n: usize,
    value: *mut f64,
    grad: *mut f64,
) -> GbStatus {
    guard(|| {
        non_null(oracle, "oracle")?;
        non_null(value, "value")?;
        let o = &(*oracle).0;
        if n != o.dim() {
            return Err(fail(
                GbStatus::DimensionMismatch,
                format!("x has length {n}, oracle dimension is {}", o.dim()),
            ));
        }
        non_null(grad, "grad")?;
        let x = DenseVector::new(slice(x, n, "x")?.to_vec()).map_err(from_error)?;
        let ev = o.eval(&x).map_err(from_error)?;
        *value = ev.value;
        ptr::copy_nonoverlapping(ev.gradient.as_slice().as_ptr(), grad, n);
        Ok(())
    })
}

fn to_config(c: &GbSolverConfig) -> SolverConfig {
    let variant = match c.variant {
        GbVariant::GradientDescent => Variant::GradientDescent,
        GbVariant::Nesterov => Variant::Nesterov,
        GbVariant::RestartFixed => Variant::RestartFixed {
            interval: c.restart_interval,
        },
        GbVariant::AdaptiveRestart => Variant::Adaptive {
            policy: ResetPolicy::Restart,
        },
        GbVariant::AdaptiveSkip => Variant::Adaptive {
            policy: ResetPolicy::Skip,
        },
    };
    SolverConfig::new(variant, c.stepsize_h, c.max_iters).with_grad_tol(c.grad_tol)
}

/// Runs one solver from `x0` (length `n`). A diverged run still yields a
/// trace; inspect it with [`gb_trace_status`].
///
/// # Safety
/// `x0` must be readable for `n` doubles; `config` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gb_solve(
    oracle: *const GbOracle,
    x0: *const f64,
    n: usize,
    config: *const GbSolverConfig,
    out: *mut *mut GbTrace,
) -> GbStatus {
    guard(|| {
        non_null(oracle, "oracle")?;
        non_null(config, "config")?;
        non_null(out, "out")?;
        let x0 = DenseVector::new(slice(x0, n, "x0")?.to_vec()).map_err(from_error)?;
        let trace = solve((*oracle).0.as_ref(), &x0, &to_config(&*config)).map_err(from_error)?;
        *out = Box::into_raw(Box::new(GbTrace(trace)));
        Ok(())
    })
}

/// # Safety
/// `trace` must come from [`gb_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gb_trace_free(trace: *mut GbTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Number of records (iterates `x^(0) .. x^(k)`); 0 for a null handle.
///
/// # Safety
/// `trace` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gb_trace_len(trace: *const GbTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `trace` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gb_trace_status(trace: *const GbTrace, out: *mut GbTerminalStatus) -> GbStatus {
    guard(|| {
        non_null(trace, "trace")?;
        non_null(out, "out")?;
        *out = match (*trace).0.status() {
            TerminalStatus::TolReached => GbTerminalStatus::TolReached,
            TerminalStatus::MaxIters => GbTerminalStatus::MaxIters,
            TerminalStatus::Diverged => GbTerminalStatus::Diverged,
        };
        Ok(())
    })
}

unsafe fn record<'a>(trace: *const GbTrace, index: usize) -> Result<&'a gradbound::solvers::TraceRecord, GbStatus> {
    non_null(trace, "trace")?;
    let records = (*trace).0.records();
    records.get(index).ok_or_else(|| {
        fail(
            GbStatus::OutOfRange,
            format!("record {index} requested, trace has {}", records.len()),
        )
    })
}

/// # Safety
/// `trace` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gb_trace_get(trace: *const GbTrace, index: usize, out: *mut GbTraceRecord) -> GbStatus {
    guard(|| {
        non_null(out, "out")?;
        let r = record(trace, index)?;
        *out = GbTraceRecord {
            k: r.k,
            f: r.f,
            grad_norm: r.grad_norm,
            dist_to_sol: r.dist_to_sol.unwrap_or(f64::NAN),
            reset_event: match r.reset_event {
                ResetEvent::None => GbResetEvent::None,
                ResetEvent::Restart => GbResetEvent::Restart,
                ResetEvent::Skip => GbResetEvent::Skip,
            },
        };
        Ok(())
    })
}

/// Copies iterate `index` into `buf`, which holds `len` doubles.
///
/// # Safety
/// `trace` must be a live handle; `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gb_trace_iterate(trace: *const GbTrace, index: usize, buf: *mut f64, len: usize) -> GbStatus {
    guard(|| {
        let r = record(trace, index)?;
        let x = r.x.as_slice();
        if len < x.len() {
            return Err(fail(
                GbStatus::BufferTooSmall,
                format!("buffer holds {len}, iterate has {}", x.len()),
            ));
        }
        non_null(buf, "buf")?;
        ptr::copy_nonoverlapping(x.as_ptr(), buf, x.len());
        Ok(())
    })
}

/// Checks one named bound (e.g. `"thm2_linear"`) along `trace`, which must
/// have been produced on `oracle` with `config`.
///
/// # Safety
/// All pointers must be live; `theorem` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gb_check_bound(
    trace: *const GbTrace,
    oracle: *const GbOracle,
    theorem: *const c_char,
    config: *const GbSolverConfig,
    out: *mut GbBoundReport,
) -> GbStatus {
    guard(|| {
        non_null(trace, "trace")?;
        non_null(oracle, "oracle")?;
        non_null(theorem, "theorem")?;
        non_null(config, "config")?;
        non_null(out, "out")?;
        let name = CStr::from_ptr(theorem)
            .to_str()
            .map_err(|_| fail(GbStatus::InvalidArgument, "theorem id is not UTF-8"))?;
        let id: TheoremId = name.parse().map_err(from_error)?;
        let rep = check_bounds(&(*trace).0, (*oracle).0.as_ref(), id, &to_config(&*config))
            .map_err(from_error)?;
        *out = GbBoundReport {
            pass: rep.pass,
            max_violation: rep.max_violation,
            first_fail_k: rep.first_fail_k.map_or(-1, |k| k as i64),
            checked: rep.checked,
        };
        Ok(())
    })
}

/// One step of the momentum recursion: `θ_{k+1}` and `β_{k+1}` from `θ_k`.
///
/// # Safety
/// `next` and `beta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_theta_step(theta: f64, next: *mut f64, beta: *mut f64) -> GbStatus {
    guard(|| {
        non_null(next, "next")?;
        non_null(beta, "beta")?;
        let (t, b) = theta_step(theta).map_err(from_error)?;
        *next = t;
        *beta = b;
        Ok(())
    })
}

/// Grid minimum of the stepsize contraction factors for given `R` and `ν`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gb_appendix_grid(r: f64, nu: f64, grid_steps: usize, out: *mut GbGridOptimum) -> GbStatus {
    guard(|| {
        non_null(out, "out")?;
        let g = appendix_grid(r, nu, grid_steps).map_err(from_error)?;
        *out = GbGridOptimum {
            theta_star: g.theta_star,
            h_star: g.h_star,
            min_value: g.min_value,
            case_a_value: g.case_a_value,
            case_b_value: g.case_b_value,
        };
        Ok(())
    })
}

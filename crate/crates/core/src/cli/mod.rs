//! Command-line front end: `solve`, `certify`, `verify`, `rates`, `recover`
//! and `appendix`. Flags override values from `--config <file.json>`; the
//! resolved configuration is written to `<out>/config.json`.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage error, 3 numeric abort.

pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::augl1::{gen_sparse_problem, recover, SignalKind};
use crate::certify::{
    appendix_grid, check_bounds, estimate_rlg, estimate_rsi, fit_rate_series, RateModel,
    SamplingBox, TheoremId,
};
use crate::error::Error;
use crate::numkit::{DenseVector, GaussianStream};
use crate::oracles::{oracle_from_id, ObjectiveOracle};
use crate::solvers::{
    parse_trace_csv, restart_interval, solve, ResetPolicy, SolverConfig, SolverTrace,
    TerminalStatus, Variant,
};
use output::{log_chart_svg, write_atomic, Series};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gradbound", version, about = "Restricted-condition gradient methods: solve, certify, verify, recover")]
pub struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write SVG charts.
    #[arg(long, global = true)]
    svg: bool,
    /// JSON file with default values; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one solver on one oracle and write its trace.
    Solve(SolveArgs),
    /// Estimate the restricted constants of an oracle by sampling.
    Certify(CertifyArgs),
    /// Run a solver and check one rate bound along its trace.
    Verify(VerifyArgs),
    /// Fit an empirical rate to a trace CSV.
    Rates(RatesArgs),
    /// Sparse recovery by linearized Bregman on the augmented-l1 dual.
    Recover(RecoverArgs),
    /// Minimize the stepsize-grid contraction factors.
    Appendix(AppendixArgs),
}

#[derive(Debug, Args, Clone, Default)]
struct SolveArgs {
    /// Oracle id, e.g. `quad:m=20,n=50,seed=7`.
    #[arg(long)]
    oracle: Option<String>,
    /// gd | nesterov | restart_fixed | restart | skip
    #[arg(long)]
    variant: Option<String>,
    /// Stepsize, or `auto`.
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    grad_tol: Option<f64>,
    /// Restart interval for restart_fixed, or `auto`.
    #[arg(long = "K")]
    restart_interval: Option<String>,
    /// `zeros`, `fill:<v>`, `gauss:<scale>`, or comma-separated entries.
    #[arg(long)]
    x0: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    theorem: Option<String>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    /// Lower corner of the sampling box (every coordinate).
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
}

#[derive(Debug, Args)]
struct RatesArgs {
    /// Trace CSV written by `solve`.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// gap | dist | grad_norm
    #[arg(long)]
    quantity: Option<String>,
    /// linear_geometric | sublinear_1_over_k | sublinear_1_over_k2
    #[arg(long)]
    model: Option<String>,
    /// `start:end`, inclusive.
    #[arg(long)]
    window: Option<String>,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// gaussian | pm_one
    #[arg(long)]
    signal: Option<String>,
    /// gd | nesterov | restart | skip | all
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Comma-separated seeds; defaults to `--seed`.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
struct AppendixArgs {
    #[arg(long = "R")]
    r: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    grid_steps: Option<usize>,
}

/// Values accepted in the `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    out: Option<PathBuf>,
    svg: Option<bool>,
    oracle: Option<String>,
    variant: Option<String>,
    h: Option<Value>,
    max_iters: Option<usize>,
    grad_tol: Option<f64>,
    #[serde(rename = "K")]
    restart_interval: Option<Value>,
    x0: Option<String>,
    theorem: Option<String>,
    samples: Option<usize>,
    lo: Option<f64>,
    hi: Option<f64>,
    trace: Option<PathBuf>,
    quantity: Option<String>,
    model: Option<String>,
    window: Option<String>,
    m: Option<usize>,
    n: Option<usize>,
    k: Option<usize>,
    signal: Option<String>,
    seeds: Option<Vec<u64>>,
    #[serde(rename = "R")]
    r: Option<f64>,
    nu: Option<f64>,
    grid_steps: Option<usize>,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::NonFinite(_) => (EXIT_NUMERIC, "non_finite"),
            Error::GradientBlowUp { .. } => (EXIT_NUMERIC, "gradient_blow_up"),
            Error::NonContracting { .. } => (EXIT_NUMERIC, "non_contracting"),
            Error::RankDeficient { .. } => (EXIT_NUMERIC, "rank_deficient"),
            Error::NotSymmetric { .. } => (EXIT_NUMERIC, "not_symmetric"),
            Error::TooFewPoints { .. } => (EXIT_NUMERIC, "too_few_points"),
            Error::NoSamples(_) => (EXIT_NUMERIC, "no_samples"),
            Error::TooLarge(_) => (EXIT_USAGE, "too_large"),
            Error::DimensionMismatch { .. } => (EXIT_USAGE, "dimension_mismatch"),
            Error::InvalidParameter { .. } => (EXIT_USAGE, "invalid_parameter"),
            Error::MissingCapability(_) => (EXIT_USAGE, "missing_capability"),
            Error::UnknownOracle(_) => (EXIT_USAGE, "unknown_oracle"),
            Error::Parse(_) => (EXIT_USAGE, "parse"),
            Error::Io(_) => (EXIT_USAGE, "io"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

struct Common {
    seed: u64,
    out: PathBuf,
    svg: bool,
}

impl Common {
    fn write(&self, name: &str, contents: &str) -> Result<(), Failure> {
        write_atomic(&self.out.join(name), contents.as_bytes()).map_err(Failure::from)
    }

    fn echo_config(&self, command: &str, mut body: Value) -> Result<(), Failure> {
        let obj = body.as_object_mut().expect("config body is an object");
        obj.insert("command".into(), json!(command));
        obj.insert("seed".into(), json!(self.seed));
        obj.insert("out".into(), json!(self.out));
        obj.insert("svg".into(), json!(self.svg));
        let text = serde_json::to_string_pretty(&body).expect("config serializes") + "\n";
        self.write("config.json", &text)
    }
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serializes")
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code; reports go to stdout, errors to stderr as
/// one JSON line.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", json!({"error": f.kind, "message": f.message}));
            f.code
        }
    }
}

fn load_file(path: Option<&Path>) -> Result<FileConfig, Failure> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
}

fn dispatch(cli: Cli) -> CmdResult {
    let file = load_file(cli.config.as_deref())?;
    let common = Common {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        out: cli.out.clone().or(file.out.clone()).unwrap_or_else(|| PathBuf::from("out")),
        svg: cli.svg || file.svg.unwrap_or(false),
    };
    match cli.command {
        Command::Solve(a) => cmd_solve(&common, &file, a),
        Command::Verify(a) => cmd_verify(&common, &file, a),
        Command::Certify(a) => cmd_certify(&common, &file, a),
        Command::Rates(a) => cmd_rates(&common, &file, a),
        Command::Recover(a) => cmd_recover(&common, &file, a),
        Command::Appendix(a) => cmd_appendix(&common, &file, a),
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn required<T>(v: Option<T>, key: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::usage(format!("missing required `{key}`")))
}

fn parse_variant(s: &str, interval: Option<usize>) -> Result<Variant, Failure> {
    Ok(match s {
        "gd" => Variant::GradientDescent,
        "nesterov" => Variant::Nesterov,
        "restart_fixed" => Variant::RestartFixed {
            interval: required(interval, "K")?,
        },
        "restart" | "adaptive_restart" => Variant::Adaptive {
            policy: ResetPolicy::Restart,
        },
        "skip" | "adaptive_skip" => Variant::Adaptive {
            policy: ResetPolicy::Skip,
        },
        other => return Err(Failure::usage(format!("unknown variant `{other}`"))),
    })
}

fn parse_x0(spec: &str, dim: usize, seed: u64) -> Result<DenseVector, Failure> {
    let bad = || Failure::usage(format!("bad x0 `{spec}`"));
    if spec == "zeros" {
        return Ok(DenseVector::zeros(dim));
    }
    if let Some(v) = spec.strip_prefix("fill:") {
        let v: f64 = v.parse().map_err(|_| bad())?;
        return DenseVector::new(vec![v; dim]).map_err(Failure::from);
    }
    if let Some(s) = spec.strip_prefix("gauss:") {
        let s: f64 = s.parse().map_err(|_| bad())?;
        return DenseVector::new(GaussianStream::new(seed).gaussians(dim))
            .map(|x| x.scale(s))
            .map_err(Failure::from);
    }
    let entries = spec
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    if entries.len() != dim {
        return Err(Failure::usage(format!("x0 has {} entries, oracle needs {dim}", entries.len())));
    }
    DenseVector::new(entries).map_err(Failure::from)
}

/// `auto`: `1/(2R)` for gd when `R` and `ν` are known, `1/L` for gd when only
/// `L` is, and `1/R` for accelerated variants.
fn resolve_h<O: ObjectiveOracle + ?Sized>(spec: &str, oracle: &O, variant: Variant) -> Result<f64, Failure> {
    if spec != "auto" {
        return spec
            .parse::<f64>()
            .map_err(|_| Failure::usage(format!("bad h `{spec}`")));
    }
    let c = oracle.constants();
    let h = match variant {
        Variant::GradientDescent => match (c.r, c.nu, c.l) {
            (Some(r), Some(_), _) => 1.0 / (2.0 * r),
            (_, _, Some(l)) => 1.0 / l,
            _ => None.ok_or_else(|| Failure::usage("h auto: oracle has neither R with nu nor L"))?,
        },
        _ => 1.0 / required(c.restricted_lipschitz(), "h (oracle has no R or L for auto)")?,
    };
    Ok(h)
}

struct SolveSetup {
    oracle: Box<dyn ObjectiveOracle>,
    oracle_id: String,
    x0: DenseVector,
    x0_spec: String,
    cfg: SolverConfig,
}

fn setup_solve(common: &Common, file: &FileConfig, a: SolveArgs) -> Result<SolveSetup, Failure> {
    let oracle_id = required(a.oracle.or(file.oracle.clone()), "oracle")?;
    let oracle = oracle_from_id(&oracle_id)?;
    let variant_name = a.variant.or(file.variant.clone()).unwrap_or_else(|| "gd".into());
    let h_spec = a
        .h
        .or(file.h.as_ref().map(value_text))
        .unwrap_or_else(|| "auto".into());
    let k_spec = a.restart_interval.or(file.restart_interval.as_ref().map(value_text));
    let interval = match k_spec.as_deref() {
        None => None,
        Some("auto") => {
            let c = oracle.constants();
            let r = required(c.restricted_lipschitz(), "K auto needs R")?;
            Some(restart_interval(r, required(c.nu, "K auto needs nu")?)?)
        }
        Some(s) => Some(s.parse().map_err(|_| Failure::usage(format!("bad K `{s}`")))?),
    };
    let variant = parse_variant(&variant_name, interval)?;
    let h = resolve_h(&h_spec, oracle.as_ref(), variant)?;
    let cfg = SolverConfig::new(variant, h, a.max_iters.or(file.max_iters).unwrap_or(1000))
        .with_grad_tol(a.grad_tol.or(file.grad_tol).unwrap_or(0.0));
    cfg.validate()?;
    let x0_spec = a.x0.or(file.x0.clone()).unwrap_or_else(|| "gauss:1".into());
    let x0 = parse_x0(&x0_spec, oracle.dim(), common.seed)?;
    Ok(SolveSetup {
        oracle,
        oracle_id,
        x0,
        x0_spec,
        cfg,
    })
}

fn trace_svg(trace: &SolverTrace, title: &str) -> String {
    let (label, values): (&str, Vec<f64>) = match (trace.gaps(), trace.dists()) {
        (Some(g), _) => ("f - f*", g),
        (None, Some(d)) => ("dist to solution", d),
        _ => ("grad norm", trace.records().iter().map(|r| r.grad_norm).collect()),
    };
    let points = values.iter().enumerate().map(|(k, v)| (k as f64, *v)).collect();
    log_chart_svg(title, &format!("log10 {label}"), &[Series { label, points }])
}

fn status_code(status: TerminalStatus) -> i32 {
    if status == TerminalStatus::Diverged {
        EXIT_NUMERIC
    } else {
        EXIT_PASS
    }
}

fn run_solve(common: &Common, s: &SolveSetup, command: &str, extra: Value) -> Result<SolverTrace, Failure> {
    let mut body = json!({
        "oracle": s.oracle_id,
        "solver": s.cfg,
        "x0": s.x0_spec,
    });
    if let (Some(obj), Value::Object(more)) = (body.as_object_mut(), extra) {
        obj.extend(more);
    }
    common.echo_config(command, body)?;
    let trace = solve(s.oracle.as_ref(), &s.x0, &s.cfg)?;
    common.write("trace.csv", &trace.to_csv())?;
    if common.svg {
        common.write("trace.svg", &trace_svg(&trace, &format!("{} on {}", s.cfg.variant.label(), s.oracle_id)))?;
    }
    Ok(trace)
}

fn trace_summary(s: &SolveSetup, trace: &SolverTrace) -> Value {
    let last = trace.last().expect("trace has x0");
    json!({
        "oracle": s.oracle_id,
        "variant": s.cfg.variant.label(),
        "h": s.cfg.stepsize_h,
        "status": trace.status(),
        "iterations": last.k,
        "f": last.f,
        "grad_norm": last.grad_norm,
        "dist_to_sol": last.dist_to_sol,
    })
}

fn cmd_solve(common: &Common, file: &FileConfig, a: SolveArgs) -> CmdResult {
    let s = setup_solve(common, file, a)?;
    let trace = run_solve(common, &s, "solve", json!({}))?;
    println!("{}", trace_summary(&s, &trace));
    Ok(status_code(trace.status()))
}

fn cmd_verify(common: &Common, file: &FileConfig, a: VerifyArgs) -> CmdResult {
    let theorem: TheoremId = required(a.theorem.or(file.theorem.clone()), "theorem")?.parse()?;
    let s = setup_solve(common, file, a.solve)?;
    let trace = run_solve(common, &s, "verify", json!({"theorem": theorem}))?;
    if trace.status() == TerminalStatus::Diverged {
        println!("{}", trace_summary(&s, &trace));
        return Ok(EXIT_NUMERIC);
    }
    let report = check_bounds(&trace, s.oracle.as_ref(), theorem, &s.cfg)?;
    let line = json_line(&report);
    common.write("report.jsonl", &format!("{line}\n"))?;
    println!("{line}");
    Ok(if report.pass { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn cmd_certify(common: &Common, file: &FileConfig, a: CertifyArgs) -> CmdResult {
    let oracle_id = required(a.oracle.or(file.oracle.clone()), "oracle")?;
    let oracle = oracle_from_id(&oracle_id)?;
    let samples = a.samples.or(file.samples).unwrap_or(1000);
    let lo = a.lo.or(file.lo).unwrap_or(-5.0);
    let hi = a.hi.or(file.hi).unwrap_or(5.0);
    common.echo_config(
        "certify",
        json!({"oracle": oracle_id, "samples": samples, "lo": lo, "hi": hi}),
    )?;
    let domain = SamplingBox::cube(oracle.dim(), lo, hi)?;
    let mut lines = Vec::new();
    if oracle.has_projection() {
        let e = estimate_rsi(oracle.as_ref(), &domain, samples, common.seed)?;
        lines.push(json!({"constant": "nu", "oracle": oracle_id, "estimate": e}).to_string());
    }
    // an unbounded gradient is a finding, not a crash: report it next to nu
    let code = match estimate_rlg(oracle.as_ref(), &domain, samples, common.seed) {
        Ok(e) => {
            lines.push(json!({"constant": "R", "oracle": oracle_id, "estimate": e}).to_string());
            EXIT_PASS
        }
        Err(Error::GradientBlowUp { z }) => {
            lines.push(
                json!({"constant": "R", "oracle": oracle_id, "estimate": null, "gradient_blow_up_at": z})
                    .to_string(),
            );
            EXIT_NUMERIC
        }
        Err(e) => return Err(e.into()),
    };
    let text = lines.join("\n") + "\n";
    common.write("certify.jsonl", &text)?;
    print!("{text}");
    Ok(code)
}

fn parse_named<T: for<'de> Deserialize<'de>>(s: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_value(Value::String(s.to_string()))
        .map_err(|_| Failure::usage(format!("unknown {what} `{s}`")))
}

fn cmd_rates(common: &Common, file: &FileConfig, a: RatesArgs) -> CmdResult {
    let path = required(a.trace.or(file.trace.clone()), "trace")?;
    let quantity = a.quantity.or(file.quantity.clone()).unwrap_or_else(|| "gap".into());
    let model: RateModel = parse_named(
        &a.model.or(file.model.clone()).unwrap_or_else(|| "linear_geometric".into()),
        "model",
    )?;
    let window = match a.window.or(file.window.clone()) {
        None => None,
        Some(w) => {
            let (s, e) = w
                .split_once(':')
                .ok_or_else(|| Failure::usage(format!("bad window `{w}`, want start:end")))?;
            let p = |t: &str| t.trim().parse::<usize>().map_err(|_| Failure::usage(format!("bad window `{w}`")));
            Some((p(s)?, p(e)?))
        }
    };
    common.echo_config(
        "rates",
        json!({"trace": path, "quantity": quantity, "model": model, "window": window}),
    )?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::usage(format!("cannot read trace {}: {e}", path.display())))?;
    let rows = parse_trace_csv(&text)?;
    let ks: Vec<usize> = rows.iter().map(|r| r.k).collect();
    let column = |f: &dyn Fn(&crate::solvers::TraceRow) -> Option<f64>, name: &str| {
        rows.iter()
            .map(f)
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Failure::usage(format!("trace has blank `{name}` cells")))
    };
    let values = match quantity.as_str() {
        "gap" => column(&|r| r.fgap, "fgap")?,
        "dist" => column(&|r| r.dist_to_sol, "dist_to_sol")?,
        "grad_norm" => column(&|r| Some(r.grad_norm), "grad_norm")?,
        other => return Err(Failure::usage(format!("unknown quantity `{other}`"))),
    };
    let fit = fit_rate_series(&ks, &values, model, window)?;
    let line = json_line(&json!({"trace": path, "quantity": quantity, "fit": fit}));
    common.write("rates.jsonl", &format!("{line}\n"))?;
    println!("{line}");
    Ok(EXIT_PASS)
}

fn cmd_recover(common: &Common, file: &FileConfig, a: RecoverArgs) -> CmdResult {
    let m = a.m.or(file.m).unwrap_or(256);
    let n = a.n.or(file.n).unwrap_or(512);
    let k = a.k.or(file.k).unwrap_or(25);
    let signal: SignalKind = parse_named(
        &a.signal.or(file.signal.clone()).unwrap_or_else(|| "gaussian".into()),
        "signal",
    )?;
    let variant_name = a.variant.or(file.variant.clone()).unwrap_or_else(|| "all".into());
    let variants: Vec<Variant> = if variant_name == "all" {
        crate::augl1::RECOVERY_VARIANTS.to_vec()
    } else {
        let v = parse_variant(&variant_name, None)?;
        if matches!(v, Variant::RestartFixed { .. }) {
            return Err(Failure::usage("recover compares gd, nesterov, restart and skip"));
        }
        vec![v]
    };
    let h = a.h.or(file.h.as_ref().and_then(Value::as_f64));
    let max_iters = a.max_iters.or(file.max_iters).unwrap_or(200_000);
    let seeds = a.seeds.or(file.seeds.clone()).unwrap_or_else(|| vec![common.seed]);
    if seeds.is_empty() {
        return Err(Failure::usage("seeds must be nonempty"));
    }
    common.echo_config(
        "recover",
        json!({
            "m": m, "n": n, "k": k, "signal": signal,
            "variants": variants.iter().map(|v| v.label()).collect::<Vec<_>>(),
            "h": h, "max_iters": max_iters, "seeds": seeds,
        }),
    )?;
    let mut code = EXIT_PASS;
    let mut lines = String::new();
    for &seed in &seeds {
        let problem = gen_sparse_problem(seed, m, n, k, signal)?;
        let mut series = Vec::new();
        for &v in &variants {
            let res = recover(&problem, v, h, max_iters)?;
            let tag = match v {
                Variant::GradientDescent => "gd",
                Variant::Nesterov => "nesterov",
                Variant::Adaptive { policy: ResetPolicy::Restart } => "restart",
                _ => "skip",
            };
            common.write(&format!("recovery_s{seed}_{tag}.csv"), &res.to_csv())?;
            let line = json_line(&json!({
                "seed": seed,
                "variant": v.label(),
                "status": res.status,
                "iters": res.iters,
                "stepsize_h": res.stepsize_h,
                "final_rel_error": res.final_rel_error(),
                "final_residual": res.primal_residual_curve.last(),
            }));
            println!("{line}");
            lines.push_str(&line);
            lines.push('\n');
            code = code.max(match res.status {
                TerminalStatus::TolReached => EXIT_PASS,
                TerminalStatus::MaxIters => EXIT_CHECK_FAILED,
                TerminalStatus::Diverged => EXIT_NUMERIC,
            });
            if let Some(curve) = res.rel_error_curve {
                series.push((v.label(), curve));
            }
        }
        if common.svg && !series.is_empty() {
            let s: Vec<Series<'_>> = series
                .iter()
                .map(|(label, c)| Series {
                    label,
                    points: c.iter().enumerate().map(|(i, v)| ((i + 1) as f64, *v)).collect(),
                })
                .collect();
            let title = format!("relative error, seed {seed}, {m}x{n}, k={k}");
            common.write(&format!("recovery_s{seed}.svg"), &log_chart_svg(&title, "log10 relative error", &s))?;
        }
    }
    common.write("recovery.jsonl", &lines)?;
    Ok(code)
}

fn cmd_appendix(common: &Common, file: &FileConfig, a: AppendixArgs) -> CmdResult {
    let r = required(a.r.or(file.r), "R")?;
    let nu = required(a.nu.or(file.nu), "nu")?;
    let steps = a.grid_steps.or(file.grid_steps).unwrap_or(2000);
    common.echo_config("appendix", json!({"R": r, "nu": nu, "grid_steps": steps}))?;
    let g = appendix_grid(r, nu, steps)?;
    let line = json_line(&g);
    common.write("appendix.json", &format!("{line}\n"))?;
    println!("{line}");
    Ok(EXIT_PASS)
}

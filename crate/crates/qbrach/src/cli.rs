//! `qbrach` command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qbrach_core::engine::{
    conservation_drift, geodesic_residual, propagate, rescale_f_initial, shoot_for_target, ConstraintSet,
    PropagateOptions, ShootingOptions, Trajectory,
};
use qbrach_core::fast::commutation_closure_check;
use qbrach_core::gates::{
    self, alpha_trace, integer_search, GateKind, SynthesisResult, DEFAULT_DT_DIVISOR, GEODESIC_THRESHOLD,
    MAX_CONSTRAINT_RESIDUAL, MAX_INFIDELITY,
};
use qbrach_core::heisenberg::heisenberg_constraints;
use qbrach_core::ops::gate_fidelity;

use crate::formats::{
    self, named_target, read_json, rows_to_json, to_json_string, trajectory_header, trajectory_rows, write_alpha_csv,
    write_trajectory_csv, ClosureJson, CustomTargetJson, PropagateJson, ShootingJson, SynthesisJson, ALPHA_COLUMNS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// Environment variable seeding the random restarts of custom-target shooting.
pub const SEED_VAR: &str = "QBRACH_SEED";

#[derive(Debug, Parser)]
#[command(name = "qbrach", version, about = "Time-optimal quantum gate synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the time-optimal Hamiltonian for a gate.
    Synthesize(SynthesizeArgs),
    /// Re-integrate a stored result and check it.
    Verify(VerifyArgs),
    /// Write the brachistochrone trajectory U(t) with per-sample diagnostics.
    Propagate(PropagateArgs),
    /// Write the alpha coefficients of the closed-form evolution.
    Trace(TraceArgs),
    /// Check the commutator closure of the fast subgroups on n qubits.
    CheckAlgebra(CheckAlgebraArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Gate {
    Swap,
    QftPrime,
    Entangler,
    Custom,
}

impl From<Gate> for GateKind {
    fn from(g: Gate) -> Self {
        match g {
            Gate::Swap => GateKind::Swap,
            Gate::QftPrime => GateKind::QftPrime,
            Gate::Entangler => GateKind::Entangler,
            Gate::Custom => GateKind::Custom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    #[arg(long, value_enum)]
    pub gate: Option<Gate>,
    /// Entangler angle in [0, π].
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Energy scale ω.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[command(flatten)]
    pub gate: GateArgs,
    /// Integer search box |m|, |n|, |p|, |q|, |r| ≤ bounds.
    #[arg(long, default_value_t = 4)]
    pub bounds: u32,
    /// Verification step dt = T / dt-divisor.
    #[arg(long, default_value_t = DEFAULT_DT_DIVISOR)]
    pub dt_divisor: usize,
    /// Custom target: {"matrix": ..., "constraints": ...}.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Write the result as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DT_DIVISOR)]
    pub dt_divisor: usize,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    #[command(flatten)]
    pub gate: GateArgs,
    /// {"constraints": ..., "f0": ..., "T": ...} instead of a named gate.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DT_DIVISOR)]
    pub dt_divisor: usize,
    /// Number of recorded intervals (rows minus one).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub gate: GateArgs,
    #[arg(long, default_value_t = 4)]
    pub bounds: u32,
    /// Number of rows.
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckAlgebraArgs {
    /// Qubit count, 2 to 4.
    #[arg(long)]
    pub n: usize,
    /// Write the per-pair report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match run(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

pub fn run(command: &Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Synthesize(a) => synthesize(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Propagate(a) => propagate_cmd(a, stdout),
        Command::Trace(a) => trace(a, stdout),
        Command::CheckAlgebra(a) => check_algebra(a, stdout),
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        bail!("omega must be positive and finite, got {omega}");
    }
    Ok(())
}

fn check_divisor(d: usize) -> Result<()> {
    if d == 0 {
        bail!("dt-divisor must be positive");
    }
    Ok(())
}

fn write_output(path: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => Ok(stdout.write_all(body)?),
    }
}

fn pass_label(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn require_gate(g: &GateArgs) -> Result<Gate> {
    g.gate.ok_or_else(|| anyhow!("--gate is required"))
}

fn synthesize_named(g: &GateArgs, bounds: u32, dt_divisor: usize) -> Result<SynthesisResult> {
    check_omega(g.omega)?;
    check_divisor(dt_divisor)?;
    let gate = require_gate(g)?;
    let target = named_target(GateKind::from(gate).name(), g.phi)?;
    let mut result = integer_search(&target, g.omega, bounds)?;
    if dt_divisor != DEFAULT_DT_DIVISOR {
        result.verification = gates::verify(&result, dt_divisor)?;
    }
    Ok(result)
}

fn print_synthesis(out: &mut dyn Write, r: &SynthesisResult) -> Result<()> {
    let v = &r.verification;
    writeln!(out, "gate: {}", r.target.kind)?;
    if let Some(phi) = r.target.phi {
        writeln!(out, "phi = {phi}")?;
    }
    writeln!(out, "omega = {}", r.params.omega)?;
    writeln!(out, "omega_T = {}", r.omega_t())?;
    writeln!(out, "T = {}", r.duration)?;
    writeln!(out, "chi = {}", r.chi)?;
    writeln!(out, "tuple (m,n,p,q,r) = {}", r.tuple)?;
    print_checks(out, v.infidelity, v.constraint_residual, v.geodesic_residual, v.trf2_drift)?;
    writeln!(out, "status: {}", pass_label(v.passed))?;
    Ok(())
}

fn print_checks(out: &mut dyn Write, infidelity: f64, constraint: f64, geodesic: f64, drift: f64) -> Result<()> {
    writeln!(out, "infidelity = {infidelity:e} (max {MAX_INFIDELITY:e})")?;
    writeln!(out, "constraint_residual = {constraint:e} (max {MAX_CONSTRAINT_RESIDUAL:e})")?;
    writeln!(out, "geodesic_residual = {geodesic:e}")?;
    writeln!(out, "geodesic: {}", yes_no(geodesic < GEODESIC_THRESHOLD))?;
    writeln!(out, "trF2_drift = {drift:e}")?;
    Ok(())
}

fn custom_constraints(given: Option<&formats::ConstraintSetJson>, dim: usize, omega: f64) -> Result<ConstraintSet> {
    match given {
        Some(c) => c.to_constraints(),
        None if dim == 4 => Ok(heisenberg_constraints(omega)?),
        None => Ok(ConstraintSet::unconstrained(omega)?),
    }
}

fn shooting_seed() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().with_context(|| format!("{SEED_VAR} must be an unsigned integer, got {s:?}")),
        Err(_) => Ok(ShootingOptions::default().seed),
    }
}

fn synthesize(a: &SynthesizeArgs, out: &mut dyn Write) -> Result<i32> {
    if a.gate.gate == Some(Gate::Custom) || (a.gate.gate.is_none() && a.input.is_some()) {
        return synthesize_custom(a, out);
    }
    let r = synthesize_named(&a.gate, a.bounds, a.dt_divisor)?;
    print_synthesis(out, &r)?;
    if let Some(p) = &a.out {
        write_output(Some(p), out, to_json_string(&SynthesisJson::from_result(&r))?.as_bytes())?;
    }
    Ok(if r.verification.passed { EXIT_OK } else { EXIT_FAILED })
}

fn synthesize_custom(a: &SynthesizeArgs, out: &mut dyn Write) -> Result<i32> {
    check_omega(a.gate.omega)?;
    check_divisor(a.dt_divisor)?;
    let path = a.input.as_ref().ok_or_else(|| anyhow!("--gate custom needs --in <target.json>"))?;
    let doc: CustomTargetJson = read_json(path)?;
    let target = doc.matrix.to_unitary()?;
    let constraints = custom_constraints(doc.constraints.as_ref(), target.dim(), a.gate.omega)?;
    let opts = ShootingOptions { seed: shooting_seed()?, verify_divisor: a.dt_divisor, ..Default::default() };
    let report = shoot_for_target(&target, &constraints, opts)?;
    writeln!(out, "gate: custom")?;
    writeln!(out, "omega = {}", constraints.omega())?;
    writeln!(out, "omega_T = {}", constraints.omega() * report.duration)?;
    writeln!(out, "T = {}", report.duration)?;
    writeln!(out, "chi = {}", report.chi)?;
    writeln!(out, "infidelity = {:e} (max {:e})", report.infidelity, opts.tol)?;
    writeln!(out, "evaluations = {}", report.evaluations)?;
    writeln!(out, "status: {}", pass_label(report.success))?;
    if let Some(p) = &a.out {
        write_output(Some(p), out, to_json_string(&ShootingJson::new(&target, &constraints, &report))?.as_bytes())?;
    }
    Ok(if report.success { EXIT_OK } else { EXIT_FAILED })
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    check_divisor(a.dt_divisor)?;
    let value: serde_json::Value = read_json(&a.input)?;
    let is_custom = value.get("target").and_then(|t| t.as_str()) == Some(GateKind::Custom.name());
    if is_custom {
        let doc: ShootingJson = serde_json::from_value(value).context("parsing custom result")?;
        return verify_custom(&doc, a.dt_divisor, out);
    }
    let doc: SynthesisJson = serde_json::from_value(value).context("parsing synthesis result")?;
    let result = doc.to_result()?;
    let v = gates::verify(&result, a.dt_divisor)?;
    writeln!(out, "gate: {}", result.target.kind)?;
    writeln!(out, "T = {}", result.duration)?;
    print_checks(out, v.infidelity, v.constraint_residual, v.geodesic_residual, v.trf2_drift)?;
    writeln!(out, "status: {}", pass_label(v.passed))?;
    Ok(if v.passed { EXIT_OK } else { EXIT_FAILED })
}

fn verify_custom(doc: &ShootingJson, dt_divisor: usize, out: &mut dyn Write) -> Result<i32> {
    let target = doc.target_matrix.to_unitary()?;
    let constraints = doc.constraints.to_constraints()?;
    let f0 = doc.f0.to_hermitian()?;
    if !(doc.t.is_finite() && doc.t >= 0.0) {
        bail!("duration must be finite and non-negative, got {}", doc.t);
    }
    let (infidelity, constraint, geodesic, drift) = if doc.t == 0.0 {
        let id = qbrach_core::UnitaryOperator::identity(target.dim());
        (1.0 - gate_fidelity(&target, &id)?, 0.0, 0.0, 0.0)
    } else {
        let traj = propagate(
            &f0,
            &constraints,
            doc.t,
            doc.t / dt_divisor as f64,
            PropagateOptions { record_every: (dt_divisor / 1000).max(1), ..Default::default() },
        )?;
        let last = traj.final_state().ok_or_else(|| anyhow!("empty trajectory"))?;
        let d = traj.diagnostics;
        (
            1.0 - gate_fidelity(&target, &last.u)?,
            d.norm_residual.max(d.linear_residual),
            geodesic_residual(&traj).unwrap_or(0.0),
            conservation_drift(&traj, 2)?,
        )
    };
    let passed = infidelity <= MAX_INFIDELITY && constraint <= MAX_CONSTRAINT_RESIDUAL;
    writeln!(out, "gate: custom")?;
    writeln!(out, "T = {}", doc.t)?;
    print_checks(out, infidelity, constraint, geodesic, drift)?;
    writeln!(out, "status: {}", pass_label(passed))?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

/// Brachistochrone trajectory of a named gate: `F(0) = H(0) + F'` rescaled
/// onto the constraint surface, flowed for the synthesized `T`.
fn named_trajectory(g: &GateArgs, dt_divisor: usize, samples: usize) -> Result<Trajectory> {
    let r = synthesize_named(g, 4, DEFAULT_DT_DIVISOR)?;
    let c = heisenberg_constraints(r.params.omega)?;
    let f0 = rescale_f_initial(&r.params.initial_f(), &c)?;
    flow(&f0, &c, r.duration, dt_divisor, samples)
}

fn flow(
    f0: &qbrach_core::HermitianOperator,
    c: &ConstraintSet,
    duration: f64,
    dt_divisor: usize,
    samples: usize,
) -> Result<Trajectory> {
    check_divisor(dt_divisor)?;
    if samples == 0 {
        bail!("samples must be positive");
    }
    let record_every = (dt_divisor / samples).max(1);
    Ok(propagate(
        f0,
        c,
        duration,
        duration / dt_divisor as f64,
        PropagateOptions { record_every, ..Default::default() },
    )?)
}

fn propagate_cmd(a: &PropagateArgs, out: &mut dyn Write) -> Result<i32> {
    let traj = match (&a.input, a.gate.gate) {
        (Some(path), None | Some(Gate::Custom)) => {
            let doc: PropagateJson = read_json(path)?;
            let c = doc.constraints.to_constraints()?;
            let f0 = doc.f0.to_hermitian()?;
            let f0 = if doc.rescale { rescale_f_initial(&f0, &c)? } else { f0 };
            if !(doc.t.is_finite() && doc.t > 0.0) {
                bail!("duration T must be positive and finite, got {}", doc.t);
            }
            flow(&f0, &c, doc.t, a.dt_divisor, a.samples)?
        }
        (None, Some(Gate::Custom)) => bail!("--gate custom needs --in <flow.json>"),
        (_, Some(_)) => named_trajectory(&a.gate, a.dt_divisor, a.samples)?,
        (None, None) => bail!("either --gate or --in is required"),
    };
    let body = match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_trajectory_csv(&mut buf, &traj)?;
            buf
        }
        Format::Json => {
            let n = traj.samples.first().map_or(0, |s| s.u.dim());
            to_json_string(&rows_to_json(&trajectory_header(n), &trajectory_rows(&traj)?))?.into_bytes()
        }
    };
    write_output(a.out.as_deref(), out, &body)?;
    Ok(EXIT_OK)
}

fn trace(a: &TraceArgs, out: &mut dyn Write) -> Result<i32> {
    if a.gate.gate == Some(Gate::Custom) {
        bail!("trace needs a named gate; custom targets have no closed form");
    }
    let r = synthesize_named(&a.gate, a.bounds, DEFAULT_DT_DIVISOR)?;
    let rows = alpha_trace(&r, a.samples)?;
    let body = match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_alpha_csv(&mut buf, &rows)?;
            buf
        }
        Format::Json => {
            let header: Vec<String> = ALPHA_COLUMNS.iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
            to_json_string(&rows_to_json(&header, &rows))?.into_bytes()
        }
    };
    write_output(a.out.as_deref(), out, &body)?;
    Ok(EXIT_OK)
}

fn check_algebra(a: &CheckAlgebraArgs, out: &mut dyn Write) -> Result<i32> {
    if !(2..=4).contains(&a.n) {
        bail!("qubit count {} out of supported range 2..=4", a.n);
    }
    let mut reports = Vec::new();
    for j in 1..=a.n {
        for k in j..=a.n {
            let r = commutation_closure_check(a.n, j, k)?;
            writeln!(
                out,
                "n={} j={} k={} predicted={:?} pairs={} max_outside={:e} {}",
                r.n,
                r.j,
                r.k,
                r.predicted,
                r.pairs_checked,
                r.max_outside,
                pass_label(r.passed())
            )?;
            reports.push(ClosureJson::from(&r));
        }
    }
    let all = reports.iter().all(|r| r.violations.is_empty());
    writeln!(out, "status: {}", pass_label(all))?;
    if let Some(p) = &a.out {
        let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
        w.write_all(to_json_string(&reports)?.as_bytes())?;
        w.flush()?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILED })
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = main_with_args(std::env::args_os(), &mut lock, &mut io::stderr());
    let _ = lock.flush();
    code
}

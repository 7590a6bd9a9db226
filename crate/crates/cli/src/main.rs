//! `qkl`: evaluate special functions, verify bilinear generating-function
//! identities, sweep parameter grids and check orthonormality.
//!
//! Exit codes: 0 success, 1 identity failures, 2 bad input, 3 divergence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod check;
mod eval;
mod ortho;
mod params;
mod report;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qkl_core::hyper::TruncationPolicy;
use qkl_core::identities::{IdentityId, PrecisionPolicy};
use qkl_core::QklError;
use serde_json::json;

use crate::params::{load_file, Assignments};
use crate::report::{Format, Report};

#[derive(Parser)]
#[command(name = "qkl", version, about = "Bilinear generating functions: evaluation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a polynomial, kernel or series, e.g. `eval series type=2F1 a=1 b=1 c=2 z=0.5`.
    Eval(EvalArgs),
    /// Verify identities on seeded samples, a parameter file, or exactly.
    Check(CheckArgs),
    /// Evaluate one identity over a grid of parameter values (CSV by default).
    Sweep(SweepArgs),
    /// Gram matrix of the orthonormal MP or ASC polynomials, e.g. `ortho family=mp k=0.8 phi=1.1 nmax=8`.
    Ortho(OrthoArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct NumericArgs {
    /// Relative tolerance, replacing each identity's default.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "auto", value_parser = parse_precision)]
    precision: PrecisionPolicy,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(value_enum)]
    target: eval::Target,
    /// `name=value` assignments; complex values as `[re,im]`.
    assignments: Vec<String>,
    /// JSON file of extra parameters; command-line values take precedence.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, default_value = "standard", value_parser = parse_precision)]
    precision: PrecisionPolicy,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CheckArgs {
    /// Identity to check; repeat for several.
    #[arg(long, value_parser = parse_identity)]
    identity: Vec<IdentityId>,
    /// Check every identity.
    #[arg(long)]
    all: bool,
    /// Inclusive seed range `A..B` (default 0..49).
    #[arg(long, value_parser = parse_seeds)]
    seeds: Option<(u64, u64)>,
    /// JSON parameter file for a single identity.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Exact rational check of the coefficient identities.
    #[arg(long)]
    exact: bool,
    /// Highest power of z compared by --exact.
    #[arg(long = "K", default_value_t = 8)]
    big_k: usize,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_identity)]
    identity: IdentityId,
    /// Grid axis `name=v1,v2,…`; repeat for more axes, the first is outermost.
    #[arg(long = "grid", required = true, value_parser = sweep::parse_axis)]
    grid: Vec<sweep::Axis>,
    /// Base parameters; defaults to the seeded sample.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Seed of the base sample when no --params file is given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OrthoArgs {
    /// `family=mp k=… phi=… nmax=…` or `family=asc q=… a=… b=… nmax=…`.
    assignments: Vec<String>,
    #[arg(long)]
    params: Option<PathBuf>,
    /// Largest allowed deviation from the identity matrix.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_precision(s: &str) -> Result<PrecisionPolicy, QklError> {
    s.parse()
}

fn parse_identity(s: &str) -> Result<IdentityId, QklError> {
    s.parse()
}

fn parse_seeds(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("expected A..B with A <= B, got '{s}'");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let (a, b) = (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Truncation policy with `QKL_MAX_TERMS` applied.
fn policy_from_env() -> Result<TruncationPolicy> {
    let mut policy = TruncationPolicy::default();
    if let Ok(v) = std::env::var("QKL_MAX_TERMS") {
        let n: usize = v.trim().parse().with_context(|| format!("QKL_MAX_TERMS = '{v}' is not an integer"))?;
        policy = TruncationPolicy::new(n, policy.tail_tol, policy.quiet_window)?;
    }
    Ok(policy)
}

fn assignments(items: &[String], file: Option<&PathBuf>) -> Result<Assignments> {
    let mut a = Assignments::parse(items)?;
    if let Some(path) = file {
        a.merge_file(load_file(path)?);
    }
    Ok(a)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Eval(args) => {
            let policy = policy_from_env()?;
            let a = assignments(&args.assignments, args.params.as_ref())?;
            let record = eval::evaluate(args.target, &a, args.precision, &policy)?;
            let config = json!({
                "target": record["target"],
                "precision": args.precision.as_str(),
                "max_terms": policy.max_terms,
            });
            Report { command: "eval", config, results: vec![record] }
                .emit(args.output.format.unwrap_or(Format::Json), args.output.out.as_deref())?;
            Ok(0)
        }
        Command::Check(args) => {
            let cfg = check::CheckConfig {
                ids: args.identity,
                all: args.all,
                seeds: args.seeds,
                params: args.params,
                tol: args.numeric.tol,
                precision: args.numeric.precision,
                policy: policy_from_env()?,
                exact: args.exact,
                big_k: args.big_k,
            };
            let (report, outcome) = check::run(&cfg)?;
            report.emit(args.output.format.unwrap_or(Format::Json), args.output.out.as_deref())?;
            eprintln!("{}", outcome.summary());
            if let Some(e) = outcome.input_error {
                return Err(e.into());
            }
            Ok(if outcome.failed + outcome.errored > 0 { 1 } else { 0 })
        }
        Command::Sweep(args) => {
            let cfg = sweep::SweepConfig {
                id: args.identity,
                axes: args.grid,
                params: args.params,
                seed: args.seed,
                tol: args.numeric.tol,
                precision: args.numeric.precision,
                policy: policy_from_env()?,
            };
            sweep::run(&cfg)?.emit(args.output.format.unwrap_or(Format::Csv), args.output.out.as_deref())?;
            Ok(0)
        }
        Command::Ortho(args) => {
            let a = assignments(&args.assignments, args.params.as_ref())?;
            let (record, ok) = ortho::run(&a, args.tol)?;
            let config = json!({ "tol": report::float(args.tol) });
            Report { command: "ortho", config, results: vec![record] }
                .emit(args.output.format.unwrap_or(Format::Json), args.output.out.as_deref())?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<QklError>() {
        Some(e) if e.is_divergence() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use anyhow::anyhow;

    #[test]
    fn seed_ranges() {
        assert_eq!(parse_seeds("0..9"), Ok((0, 9)));
        assert_eq!(parse_seeds("3..=5"), Ok((3, 5)));
        assert_eq!(parse_seeds("7"), Ok((7, 7)));
        assert!(parse_seeds("5..2").is_err());
        assert!(parse_seeds("a..b").is_err());
    }

    #[test]
    fn divergence_has_its_own_exit_code() {
        let e = anyhow!(QklError::Divergence("|z| = 2".into()));
        assert_eq!(exit_code(&e), 3);
        assert_eq!(exit_code(&anyhow!(QklError::Hypothesis("k > 0".into()))), 2);
        assert_eq!(exit_code(&anyhow!("bad flag")), 2);
    }
}

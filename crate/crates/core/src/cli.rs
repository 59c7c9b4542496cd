//! The `genfrac` command line.
//!
//! Exit codes: 0 success, 1 evaluation failure or inequality violation,
//! 2 usage or parameter error, 3 quadrature non-convergence or too many
//! inconclusive trials.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::function::{Interval, TestFunction};
use crate::inequality::{run_suite, SuiteConfig, Theorem};
use crate::operator::{evaluate, hadamard_limit_advisory, oracle_sweep, reduce_to_classical, OperatorParams, Side};
use crate::quadrature::QuadratureConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Oracle sweep pass threshold on the relative error.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "genfrac", version, about = "Generalized fractional integrals and inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the generalized operator on a test function.
    Eval(EvalArgs),
    /// Report which classical integral a parameterization reduces to.
    Reduce(ReduceArgs),
    /// Compare quadrature with the monomial closed form over the 540-point grid.
    Oracle(OracleArgs),
    /// Run seeded inequality trials and emit a report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: f64,
    /// Lower endpoint a (may be -inf for classification).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a: f64,
    /// Upper endpoint b of the right-sided operator (default +inf).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
}

impl ParamArgs {
    fn params(&self) -> OperatorParams {
        let mut p = OperatorParams::left(self.alpha, self.beta, self.rho, self.eta, self.kappa, self.a)
            .with_side(self.side.into());
        p.upper = self.b;
        p
    }
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    /// Test function, e.g. `const:1`, `mono:sigma=2`, `expoly:0,1 * poly:1,1`.
    #[arg(long = "fn")]
    pub function: String,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Matching tolerance for the parameter patterns.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Largest rho reported as approaching the Hadamard limit.
    #[arg(long, default_value_t = 1e-2)]
    pub hadamard_tol: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1.5)]
    pub x: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// 8..15, or `all`.
    #[arg(long)]
    pub theorem: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exponent(s) p >= 1, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    /// Lower ratio bound(s), paired with --M.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<f64>,
    /// Upper ratio bound(s), paired with --m.
    #[arg(long = "M", value_delimiter = ',', required = true)]
    pub big_m: Vec<f64>,
    /// T12 parameter, 0 < c < m (default m/2).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Use the printed 2^(p-1) factor in c4.
    #[arg(long)]
    pub paper_statement_constants: bool,
    #[arg(long, default_value_t = 2.0)]
    pub slack_factor: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } => EXIT_INCONCLUSIVE,
        Error::Domain(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(e)
}

fn cmd_eval(args: &EvalArgs) -> i32 {
    let params = args.params.params();
    if let Err(e) = params.validate() {
        return fail(&e.into());
    }
    if let Err(e) = params.check_point(args.x) {
        return fail(&e.into());
    }
    let domain = match params.side {
        Side::Left => Interval::new(params.lower, args.x),
        Side::Right => Interval::new(args.x, params.upper.unwrap_or(f64::INFINITY)),
    };
    let f = match domain.and_then(|d| TestFunction::parse(&args.function, d)) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    match evaluate(&params, &f, args.x, &args.quad.config()) {
        Ok(r) => {
            println!("value = {}", r.value);
            println!("error_estimate = {:e}", r.error_estimate);
            println!("evaluations = {}", r.evaluations);
            EXIT_OK
        }
        Err(e) => {
            if let Error::NonConvergence { best, .. } = &e {
                println!("value = {}", best.value);
                println!("error_estimate = {:e}", best.error_estimate);
                println!("evaluations = {}", best.evaluations);
            }
            fail(&e)
        }
    }
}

fn cmd_reduce(args: &ReduceArgs) -> i32 {
    let params = args.params.params();
    for (name, v) in [("alpha", params.alpha), ("rho", params.rho)] {
        if !(v > 0.0 && v.is_finite()) {
            eprintln!("error: {name} must be positive and finite");
            return EXIT_USAGE;
        }
    }
    println!("{}", reduce_to_classical(&params, args.tol));
    if hadamard_limit_advisory(&params, args.tol, args.hadamard_tol) {
        eprintln!("note: rho is near 0 on the beta = alpha, kappa = eta = 0 path; the operator approaches the Hadamard integral");
    }
    EXIT_OK
}

fn cmd_oracle(args: &OracleArgs) -> i32 {
    let started = std::time::Instant::now();
    match oracle_sweep(args.x, &args.quad.config()) {
        Ok(rep) => {
            let w = &rep.worst;
            println!("points = {}", rep.points);
            println!("max_rel_error = {:e}", rep.max_rel_error);
            println!("worst = {} sigma={}", w.params, w.sigma);
            println!("elapsed_s = {:.3}", started.elapsed().as_secs_f64());
            if rep.max_rel_error <= ORACLE_TOLERANCE {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => fail(&e),
    }
}

fn suite_config(args: &VerifyArgs) -> Result<SuiteConfig, Error> {
    if args.m.len() != args.big_m.len() {
        return Err(Error::Config(format!(
            "--m and --M must list the same number of values ({} vs {})",
            args.m.len(),
            args.big_m.len()
        )));
    }
    let conjugate_ok = args.p.iter().any(|&p| p > 1.0);
    let theorems: Vec<Theorem> = if args.theorem.trim() == "all" {
        let all = Theorem::OPERATOR.iter().copied();
        if conjugate_ok {
            all.collect()
        } else {
            eprintln!("note: T10 and T11 need p > 1 and are skipped");
            all.filter(|t| !t.needs_conjugate()).collect()
        }
    } else {
        let th: Theorem = args.theorem.parse()?;
        if !Theorem::OPERATOR.contains(&th) {
            return Err(Error::Config(format!("--theorem must be 8..15 or all, got `{}`", args.theorem)));
        }
        vec![th]
    };
    Ok(SuiteConfig {
        theorems,
        trials: args.trials,
        seed: args.seed,
        ps: args.p.clone(),
        bands: args.m.iter().copied().zip(args.big_m.iter().copied()).collect(),
        c: args.c,
        slack_factor: args.slack_factor,
        paper_statement_constants: args.paper_statement_constants,
        quadrature: args.quad.config(),
        ..SuiteConfig::default()
    })
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let cfg = match suite_config(args) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let json = match report.to_json() {
        Ok(j) => j,
        Err(e) => return fail(&e),
    };
    match &args.json {
        Some(path) => {
            if let Err(e) = fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_FAILURE;
            }
        }
        None => println!("{json}"),
    }
    if let Some(path) = &args.csv {
        let res = fs::File::create(path)
            .map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))
            .and_then(|f| report.write_csv(f));
        if let Err(e) = res {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    }
    for s in &report.summaries {
        let margin = s.min_margin.map_or_else(|| "n/a".to_string(), |m| format!("{m:.3e}"));
        eprintln!(
            "{}: trials={} passes={} failures={} inconclusive={} min_margin={}",
            s.theorem, s.trials, s.passes, s.failures, s.inconclusive, margin
        );
    }
    if report.total_failures() > 0 {
        for r in &report.failures {
            eprintln!("FAIL {} trial={} seed={} op={} x={} p={}", r.theorem, r.trial, r.seed, r.operator.label(), r.x, r.p);
        }
        EXIT_FAILURE
    } else if report.inconclusive_exceeded() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

/// Runs the command line with explicit arguments and returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_from(["genfrac", "verify", "--theorem", "8", "--p", "2", "--M", "2"]), EXIT_USAGE);
        assert_eq!(run_from(["genfrac", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn reduce_accepts_negative_infinity() {
        let code = run_from([
            "genfrac", "reduce", "--alpha", "0.5", "--beta", "0.5", "--rho", "1", "--eta", "0", "--kappa", "0", "--a",
            "-inf",
        ]);
        assert_eq!(code, EXIT_OK);
    }
}

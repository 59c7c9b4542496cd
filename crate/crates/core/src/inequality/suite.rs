//! Seeded multi-trial runs of the operator checks.
//!
//! Trial `i` of a theorem uses grid cell `i mod (cells)` and a pair seed mixed
//! from `(master seed, theorem, i)`, so every trial is independent of
//! scheduling and the report is identical for any thread count.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{generate_box_pair, generate_ratio_pair, BoxBounds, Interval, PositivePair};
use crate::operator::{ClassicalOperator, Operator, OperatorParams};
use crate::quadrature::QuadratureConfig;

use super::{run_check, CheckConfig, InequalityCheck, Theorem, Verdict};

/// Largest tolerated fraction of inconclusive trials per theorem.
pub const INCONCLUSIVE_THRESHOLD: f64 = 0.01;

/// Environment variable capping the worker threads of a suite run.
pub const THREADS_ENV: &str = "GENFRAC_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub theorems: Vec<Theorem>,
    pub trials: usize,
    pub seed: u64,
    pub ps: Vec<f64>,
    /// `(m, M)` ratio bands.
    pub bands: Vec<(f64, f64)>,
    pub operators: Vec<Operator>,
    pub c: Option<f64>,
    pub slack_factor: f64,
    pub paper_statement_constants: bool,
    pub quadrature: QuadratureConfig,
    /// Worker cap; falls back to `GENFRAC_THREADS`, then to the global pool.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            theorems: Theorem::OPERATOR.to_vec(),
            trials: 1000,
            seed: 0,
            ps: vec![1.0, 2.0, 3.0],
            bands: vec![(0.5, 2.0), (1.0, 1.0), (0.9, 1.1)],
            operators: default_operator_grid(),
            c: None,
            slack_factor: 2.0,
            paper_statement_constants: false,
            quadrature: QuadratureConfig::default(),
            threads: None,
        }
    }
}

/// Riemann–Liouville (α ∈ {0.5, 1, 2}), Katugampola (ρ = 2), Erdélyi–Kober, one
/// generic point, and directly evaluated Hadamard integrals.
pub fn default_operator_grid() -> Vec<Operator> {
    let mut ops: Vec<Operator> = [0.5, 1.0, 2.0]
        .into_iter()
        .map(|a| Operator::Generalized(OperatorParams::riemann_liouville(a, 0.0)))
        .collect();
    ops.extend([0.5, 1.5].map(|a| Operator::Generalized(OperatorParams::katugampola(a, 2.0, 0.0))));
    ops.push(Operator::Generalized(OperatorParams::erdelyi_kober(0.5, 2.0, 0.3, 0.0)));
    ops.push(Operator::Generalized(OperatorParams::left(0.7, 0.3, 1.5, 0.5, 0.8, 0.0)));
    ops.extend([0.5, 2.0].map(|a| Operator::Classical(ClassicalOperator::Hadamard { alpha: a, a: 1.0 })));
    ops
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescription {
    pub theorems: Vec<Theorem>,
    pub trials_per_theorem: usize,
    pub operators: Vec<Operator>,
    pub bands: Vec<Band>,
    pub ps: Vec<f64>,
    pub c: Option<f64>,
    pub slack_factor: f64,
    pub paper_statement_constants: bool,
    pub quadrature: QuadratureConfig,
    pub inconclusive_threshold: f64,
}

/// Everything needed to rerun one trial, plus its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub theorem: Theorem,
    pub trial: usize,
    pub seed: u64,
    pub operator: Operator,
    pub x: f64,
    pub p: f64,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub c: Option<f64>,
    pub complexity: u32,
    pub f: String,
    pub g: String,
    pub verdict: Verdict,
    pub check: Option<InequalityCheck>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub theorem: Theorem,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub inconclusive: usize,
    /// Smallest relative margin over conclusive trials.
    pub min_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub timestamp: String,
    pub grid: GridDescription,
    pub summaries: Vec<TheoremSummary>,
    pub failures: Vec<TrialRecord>,
    pub trials: Vec<TrialRecord>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_seed(master: u64, theorem: Theorem, trial: usize) -> u64 {
    let lane = splitmix64(theorem as u64 + 1) ^ splitmix64(trial as u64 ^ 0xA5A5_5A5A_0000_0000);
    splitmix64(splitmix64(master) ^ lane)
}

/// Grid cells `(operator, band, p)` admissible for `theorem`.
fn cells(cfg: &SuiteConfig, theorem: Theorem) -> Vec<(usize, (f64, f64), f64)> {
    let mut out = Vec::new();
    for oi in 0..cfg.operators.len() {
        for &band in &cfg.bands {
            for &p in &cfg.ps {
                if !theorem.needs_conjugate() || p > 1.0 {
                    out.push((oi, band, p));
                }
            }
        }
    }
    out
}

fn validate(cfg: &SuiteConfig) -> Result<()> {
    if cfg.theorems.is_empty() || cfg.operators.is_empty() || cfg.bands.is_empty() || cfg.ps.is_empty() {
        return Err(Error::Config("suite grid must contain theorems, operators, bands and exponents".into()));
    }
    if let Some(th) = cfg.theorems.iter().find(|t| matches!(t, Theorem::Young | Theorem::PowerMean)) {
        return Err(Error::Config(format!("{th} is a scalar lemma and is not run by the suite")));
    }
    for &p in &cfg.ps {
        CheckConfig {
            p,
            slack_factor: cfg.slack_factor,
            ..CheckConfig::default()
        }
        .validate()?;
    }
    for &(m, big_m) in &cfg.bands {
        if !(m > 0.0 && m.is_finite() && big_m.is_finite() && m <= big_m) {
            return Err(Error::InvalidBounds(format!("need 0 < m <= M, got m = {m}, M = {big_m}")));
        }
        if let Some(c) = cfg.c {
            if cfg.theorems.contains(&Theorem::T12) && !(c > 0.0 && c < m) {
                return Err(Error::Config(format!("T12 needs 0 < c < m, got c = {c} with m = {m}")));
            }
        }
    }
    for op in &cfg.operators {
        op.validate()?;
    }
    cfg.quadrature.validate()?;
    for &th in &cfg.theorems {
        if cells(cfg, th).is_empty() {
            return Err(Error::Config(format!("{th} needs some p > 1 in the grid")));
        }
    }
    Ok(())
}

struct TrialSpec {
    theorem: Theorem,
    trial: usize,
    seed: u64,
    operator: Operator,
    x: f64,
    p: f64,
    m: f64,
    big_m: f64,
    c: Option<f64>,
    complexity: u32,
}

fn make_spec(cfg: &SuiteConfig, theorem: Theorem, trial: usize, grid: &[(usize, (f64, f64), f64)]) -> TrialSpec {
    let (oi, (m, big_m), p) = grid[trial % grid.len()];
    let operator = cfg.operators[oi];
    let seed = trial_seed(cfg.seed, theorem, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed));
    let x = operator.lower() + rng.gen_range(0.5..=2.5);
    let complexity = rng.gen_range(1..=4);
    TrialSpec {
        theorem,
        trial,
        seed,
        operator,
        x,
        p,
        m,
        big_m,
        c: cfg.c,
        complexity,
    }
}

fn make_pair(s: &TrialSpec) -> Result<PositivePair> {
    let domain = Interval::new(s.operator.lower(), s.x)?;
    if s.theorem == Theorem::T13 {
        let b = BoxBounds {
            a_lo: s.m,
            a_hi: s.big_m,
            b_lo: s.m,
            b_hi: s.big_m,
        };
        generate_box_pair(s.seed, b, domain, s.complexity)
    } else {
        generate_ratio_pair(s.seed, s.m, s.big_m, domain, s.complexity)
    }
}

fn run_trial(s: TrialSpec, cfg: &SuiteConfig) -> TrialRecord {
    let check_cfg = CheckConfig {
        p: s.p,
        c: s.c,
        slack_factor: cfg.slack_factor,
        paper_statement_constants: cfg.paper_statement_constants,
    };
    let (f, g, outcome) = match make_pair(&s) {
        Ok(pair) => {
            let res = run_check(s.theorem, &pair, &s.operator, s.x, &check_cfg, &cfg.quadrature);
            (pair.f.to_string(), pair.g.to_string(), res)
        }
        Err(e) => (String::new(), String::new(), Err(e)),
    };
    let (verdict, check, error) = match outcome {
        Ok(c) => (c.verdict, Some(c), None),
        Err(e) => (Verdict::Inconclusive, None, Some(e.to_string())),
    };
    TrialRecord {
        theorem: s.theorem,
        trial: s.trial,
        seed: s.seed,
        operator: s.operator,
        x: s.x,
        p: s.p,
        m: s.m,
        big_m: s.big_m,
        c: s.c,
        complexity: s.complexity,
        f,
        g,
        verdict,
        check,
        error,
    }
}

/// Reruns a recorded trial with the slack, constants and quadrature settings
/// of `cfg`.
pub fn replay_trial(record: &TrialRecord, cfg: &SuiteConfig) -> TrialRecord {
    let spec = TrialSpec {
        theorem: record.theorem,
        trial: record.trial,
        seed: record.seed,
        operator: record.operator,
        x: record.x,
        p: record.p,
        m: record.m,
        big_m: record.big_m,
        c: record.c,
        complexity: record.complexity,
    };
    run_trial(spec, cfg)
}

fn thread_cap(cfg: &SuiteConfig) -> Result<Option<usize>> {
    if let Some(n) = cfg.threads {
        return Ok(Some(n.max(1)));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|n| Some(n.max(1)))
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn summarize(theorem: Theorem, records: &[TrialRecord]) -> TheoremSummary {
    let mine = records.iter().filter(|r| r.theorem == theorem);
    let mut s = TheoremSummary {
        theorem,
        trials: 0,
        passes: 0,
        failures: 0,
        inconclusive: 0,
        min_margin: None,
    };
    for r in mine {
        s.trials += 1;
        match r.verdict {
            Verdict::Satisfied => s.passes += 1,
            Verdict::Violated => s.failures += 1,
            Verdict::Inconclusive => s.inconclusive += 1,
        }
        if r.verdict != Verdict::Inconclusive {
            if let Some(c) = &r.check {
                s.min_margin = Some(s.min_margin.map_or(c.margin, |mm: f64| mm.min(c.margin)));
            }
        }
    }
    s
}

/// Runs `trials` checks per selected theorem.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    validate(cfg)?;
    let specs: Vec<TrialSpec> = cfg
        .theorems
        .iter()
        .flat_map(|&th| {
            let grid = cells(cfg, th);
            (0..cfg.trials).map(move |i| (th, i, grid.clone()))
        })
        .map(|(th, i, grid)| make_spec(cfg, th, i, &grid))
        .collect();

    let work = || -> Vec<TrialRecord> { specs.into_par_iter().map(|s| run_trial(s, cfg)).collect() };
    let records = match thread_cap(cfg)? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?
            .install(work),
        None => work(),
    };

    let summaries = cfg.theorems.iter().map(|&th| summarize(th, &records)).collect();
    let failures = records.iter().filter(|r| r.verdict == Verdict::Violated).cloned().collect();
    Ok(SuiteReport {
        tool: "genfrac".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: cfg.seed,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        grid: GridDescription {
            theorems: cfg.theorems.clone(),
            trials_per_theorem: cfg.trials,
            operators: cfg.operators.clone(),
            bands: cfg.bands.iter().map(|&(m, big_m)| Band { m, big_m }).collect(),
            ps: cfg.ps.clone(),
            c: cfg.c,
            slack_factor: cfg.slack_factor,
            paper_statement_constants: cfg.paper_statement_constants,
            quadrature: cfg.quadrature,
            inconclusive_threshold: INCONCLUSIVE_THRESHOLD,
        },
        summaries,
        failures,
        trials: records,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SuiteReport {
    pub fn total_failures(&self) -> usize {
        self.summaries.iter().map(|s| s.failures).sum()
    }

    pub fn total_inconclusive(&self) -> usize {
        self.summaries.iter().map(|s| s.inconclusive).sum()
    }

    /// Whether some theorem has more inconclusive trials than the threshold allows.
    pub fn inconclusive_exceeded(&self) -> bool {
        self.summaries
            .iter()
            .any(|s| s.inconclusive as f64 > INCONCLUSIVE_THRESHOLD * s.trials as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(format!("cannot serialize report: {e}")))
    }

    /// One row per trial.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Config(format!("cannot write CSV: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "theorem", "trial", "seed", "operator", "x", "p", "m", "M", "c", "complexity", "verdict", "lhs", "middle",
            "rhs", "constant", "slack", "margin", "lhs_err", "rhs_err", "alt_rhs", "error", "f", "g",
        ])
        .map_err(io)?;
        for r in &self.trials {
            let ch = r.check.as_ref();
            let num = |get: fn(&InequalityCheck) -> f64| ch.map(|c| get(c).to_string()).unwrap_or_default();
            w.write_record([
                r.theorem.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.operator.label(),
                r.x.to_string(),
                r.p.to_string(),
                r.m.to_string(),
                r.big_m.to_string(),
                opt(r.c),
                r.complexity.to_string(),
                format!("{:?}", r.verdict).to_lowercase(),
                num(|c| c.lhs),
                opt(ch.and_then(|c| c.middle)),
                num(|c| c.rhs),
                num(|c| c.constant),
                num(|c| c.slack),
                num(|c| c.margin),
                num(|c| c.lhs_err),
                num(|c| c.rhs_err),
                opt(ch.and_then(|c| c.alt_rhs)),
                r.error.clone().unwrap_or_default(),
                r.f.clone(),
                r.g.clone(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Config(format!("cannot write CSV: {e}")))?;
        Ok(())
    }
}

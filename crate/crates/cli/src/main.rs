//! `qsl2`: exact tables, coupled simulations and check suites for the L²
//! distance between normalized QuickSort costs and their limit.

mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qsl2_core::estimate::{self, CoupledBatch, EstimateReport, Execution, McConfig, DEFAULT_SEED};
use qsl2_core::exact::{self, HarmonicTable};
use qsl2_core::verify::{self, Level, VerifyOptions};
use qsl2_core::{oracles, Error};

use output::{Format, RecordWriter};

const AFTER_HELP: &str = "\
Exit codes: 0 all gates pass, 1 a gate or check failed, 2 usage error, 3 resource refusal.
The worker count comes from QSL2_WORKERS (unset or 0: all cores, 1: sequential).
Output does not depend on the worker count.";

#[derive(Parser, Debug)]
#[command(name = "qsl2", version, about, after_help = AFTER_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct SeedArg {
    /// Master seed, decimal or 0x-prefixed hex.
    #[arg(long, value_parser = parse_seed, default_value = "0x5EEDC0DE20120126")]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact H_n, mu_n, a_n^2 and b_n^2 for a range of n.
    Table {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Coupled Monte Carlo estimates of a_n^2 and its decomposition.
    Simulate {
        #[arg(long)]
        n: u64,
        /// Pruning width of the limit series.
        #[arg(long, default_value_t = estimate::DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = estimate::DEFAULT_REPS)]
        reps: u64,
        #[command(flatten)]
        seed: SeedArg,
        /// Refuse runs expected to visit more series nodes than this.
        #[arg(long, default_value_t = estimate::DEFAULT_NODE_BUDGET)]
        node_budget: f64,
    },
    /// Run a check suite and print one line per check.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[command(flatten)]
        seed: SeedArg,
        /// Coupled-gate replications in the full suite.
        #[arg(long)]
        reps: Option<u64>,
        /// Pruning width in the full suite.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Brute-force mean comparison counts and the quadrature oracles.
    Oracle {
        /// Enumerate all orders for n = 0..=N (N <= 9).
        #[arg(long, default_value_t = 8)]
        mu_max: u64,
    },
    /// Quantile-coupling estimate of the minimal L2 distance.
    D2 {
        #[arg(long)]
        n: u64,
        /// Samples per law.
        #[arg(long, default_value_t = estimate::DEFAULT_D2_SAMPLES)]
        m: u64,
        #[arg(long, default_value_t = estimate::DEFAULT_D2_EPS)]
        eps: f64,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

enum Failure {
    Usage(String),
    Refusal(String),
    Gate,
    Io(io::Error),
    Other(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            Error::ResourceRefusal(_) => Failure::Refusal(e.to_string()),
            Error::Quadrature(_) => Failure::Other(e.to_string()),
        }
    }
}

/// One row of `table`. Exact values are strings.
#[derive(Serialize)]
struct TableRow {
    n: u64,
    harmonic: String,
    mu: String,
    a_sq_rational: String,
    a_sq_pi2: String,
    a_sq_exact: String,
    a_sq: f64,
    b_sq: Option<f64>,
    asymptote: Option<f64>,
    residual: Option<f64>,
}

/// Flat report for CSV output.
#[derive(Serialize)]
struct ReportRow<'a> {
    quantity: &'a str,
    n: Option<u64>,
    eps: Option<f64>,
    level: Option<u32>,
    reps: u64,
    seed: u64,
    estimate: f64,
    std_error: f64,
    ci_low: f64,
    ci_high: f64,
    target: Option<f64>,
    z_score: Option<f64>,
    bias_budget: f64,
    gate_sigmas: f64,
    passed: Option<bool>,
    bounds: String,
}

impl<'a> From<&'a EstimateReport> for ReportRow<'a> {
    fn from(r: &'a EstimateReport) -> Self {
        let bounds = r
            .bounds
            .iter()
            .map(|b| format!("{}<={}:{}", b.name, b.bound, if b.passed { "pass" } else { "fail" }))
            .collect::<Vec<_>>()
            .join(";");
        Self {
            quantity: &r.quantity,
            n: r.n,
            eps: r.eps,
            level: r.level,
            reps: r.reps,
            seed: r.seed,
            estimate: r.estimate,
            std_error: r.std_error,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            target: r.target,
            z_score: r.z_score,
            bias_budget: r.bias_budget,
            gate_sigmas: r.gate_sigmas,
            passed: r.passed,
            bounds,
        }
    }
}

fn write_reports(cli: &Cli, reports: &[EstimateReport]) -> Result<(), Failure> {
    let mut w = RecordWriter::new(output::open(cli.out.as_deref())?, cli.format);
    for r in reports {
        match cli.format {
            Format::Json => w.write(r)?,
            Format::Csv => w.write(&ReportRow::from(r))?,
        }
    }
    w.finish()?;
    if reports.iter().any(EstimateReport::failed) {
        Err(Failure::Gate)
    } else {
        Ok(())
    }
}

fn mc_config(seed: u64) -> McConfig {
    McConfig { seed, execution: Execution::from_env(), ..McConfig::default() }
}

fn cmd_table(cli: &Cli, from: u64, to: u64) -> Result<(), Failure> {
    if from > to {
        return Err(Failure::Usage(format!("empty range: --from {from} is after --to {to}")));
    }
    let table = HarmonicTable::range(from, to);
    let a = exact::a_sq_closed_table(&table);
    let b = exact::b_sq_table(&table);
    let mu = exact::mu_from_table(&table);
    let mut w = RecordWriter::new(output::open(cli.out.as_deref())?, cli.format);
    for (i, n) in (from..=to).enumerate() {
        let a_sq = a[i].to_f64();
        let (asymptote, residual) = if n >= 1 {
            let ln = (n as f64).ln();
            (Some(2.0 * ln / n as f64), Some(n as f64 * a_sq - 2.0 * ln))
        } else {
            (None, None)
        };
        w.write(&TableRow {
            n,
            harmonic: table.h1(n).to_string(),
            mu: mu[i].to_string(),
            a_sq_rational: a[i].rat.to_string(),
            a_sq_pi2: a[i].pi2.to_string(),
            a_sq_exact: a[i].to_string(),
            a_sq,
            b_sq: b[i].as_ref().map(|v| v.to_f64()),
            asymptote,
            residual,
        })?;
    }
    w.finish()?;
    Ok(())
}

fn cmd_simulate(cli: &Cli, n: u64, eps: f64, reps: u64, seed: u64, node_budget: f64) -> Result<(), Failure> {
    if reps < 2 {
        return Err(Failure::Usage(format!("--reps must be at least 2 for a standard error, got {reps}")));
    }
    let cfg = McConfig { node_budget, ..mc_config(seed) };
    let batch = CoupledBatch::run(n, eps, reps, &cfg)?;
    write_reports(cli, &batch.reports())
}

fn cmd_verify(level: LevelArg, seed: u64, reps: Option<u64>, eps: Option<f64>) -> Result<(), Failure> {
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        seed,
        execution: Execution::from_env(),
        reps: reps.unwrap_or(defaults.reps),
        eps: eps.unwrap_or(defaults.eps),
        ..defaults
    };
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let mut stdout = io::stdout().lock();
    let mut failed = 0;
    let mut total = 0;
    let mut report = |c: &verify::CheckOutcome| -> io::Result<()> {
        total += 1;
        if !c.passed {
            failed += 1;
        }
        writeln!(stdout, "{}  [{:.1}s]", c.line(), c.seconds)
    };
    for check in verify::run(level, &opts) {
        report(&check)?;
    }
    writeln!(io::stdout(), "{} of {total} checks passed", total - failed)?;
    if failed == 0 { Ok(()) } else { Err(Failure::Gate) }
}

#[derive(Serialize)]
struct OracleRow {
    check: String,
    n: Option<u64>,
    k: Option<u64>,
    oracle: String,
    closed_form: String,
    error_estimate: Option<f64>,
    passed: bool,
}

fn cmd_oracle(cli: &Cli, mu_max: u64) -> Result<(), Failure> {
    if mu_max > oracles::MU_BRUTEFORCE_MAX {
        return Err(Failure::Refusal(format!(
            "--mu-max {mu_max} would enumerate {mu_max}! orders (limit {})",
            oracles::MU_BRUTEFORCE_MAX
        )));
    }
    let mut rows = Vec::new();
    for n in 0..=mu_max {
        let brute = oracles::mu_bruteforce(n)?;
        let closed = exact::mu(n);
        rows.push(OracleRow {
            check: "mean_comparisons".into(),
            n: Some(n),
            k: None,
            passed: brute == closed,
            oracle: brute.to_string(),
            closed_form: closed.to_string(),
            error_estimate: None,
        });
    }
    for (n, k) in oracles::d_grid() {
        let r = oracles::d_quadrature(n, k)?;
        let target = oracles::d_closed_form(n, k);
        rows.push(OracleRow {
            check: "beta_log_moment".into(),
            n: Some(n),
            k: Some(k),
            oracle: format!("{}", r.value),
            closed_form: format!("{target}"),
            error_estimate: Some(r.error_estimate),
            passed: (r.value - target).abs() <= r.error_estimate.max(1e-9),
        });
    }
    let r = oracles::ec2_quadrature()?;
    let target = exact::sigma_sq().to_f64() / 3.0;
    rows.push(OracleRow {
        check: "toll_second_moment".into(),
        n: None,
        k: None,
        oracle: format!("{}", r.value),
        closed_form: format!("{target}"),
        error_estimate: Some(r.error_estimate),
        passed: (r.value - target).abs() < 1e-10,
    });
    let mut w = RecordWriter::new(output::open(cli.out.as_deref())?, cli.format);
    for row in &rows {
        w.write(row)?;
    }
    w.finish()?;
    if rows.iter().all(|r| r.passed) { Ok(()) } else { Err(Failure::Gate) }
}

fn cmd_d2(cli: &Cli, n: u64, m: u64, eps: f64, seed: u64) -> Result<(), Failure> {
    let report = estimate::estimate_d2(n, eps, m, &mc_config(seed))?;
    write_reports(cli, &[report])
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Table { from, to } => cmd_table(cli, from, to),
        Command::Simulate { n, eps, reps, seed, node_budget } => {
            cmd_simulate(cli, n, eps, reps, seed.seed, node_budget)
        }
        Command::Verify { level, seed, reps, eps } => cmd_verify(level, seed.seed, reps, eps),
        Command::Oracle { mu_max } => cmd_oracle(cli, mu_max),
        Command::D2 { n, m, eps, seed } => cmd_d2(cli, n, m, eps, seed.seed),
    }
}

fn main() -> ExitCode {
    debug_assert_eq!(parse_seed("0x5EEDC0DE20120126"), Ok(DEFAULT_SEED));
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Gate) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("qsl2: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refusal(msg)) => {
            eprintln!("qsl2: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("qsl2: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("qsl2: {msg}");
            ExitCode::from(1)
        }
    }
}

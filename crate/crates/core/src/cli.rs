//! The `grouptest` command line.
//!
//! Exit codes: 0 success (an infinite value is a success), 1 usage error,
//! 2 verification failure or cache conflict, 3 budget exhausted.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::evaluator::worst_case_tests;
use crate::family::Instance;
use crate::records::{
    self, append_cache, read_cache, render_table, CacheRecord, Source, TableFormat,
};
use crate::solver::{SolveConfig, SolveError, Solver};
use crate::strategies::by_name;
use crate::verify::{run_suite, scan_pairs_conjecture, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "grouptest",
    version,
    about = "Exact worst-case group testing with fixed-size pools"
)]
pub struct Cli {
    /// Solver threads; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PoolArgs {
    /// Pool size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Pools of any size.
    #[arg(long)]
    pub unrestricted: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact worst-case number of tests for one instance.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        pools: PoolArgs,
        #[arg(long)]
        budget_secs: Option<f64>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Worst case and soundness of a named strategy.
    Run {
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        pools: PoolArgs,
        /// Print the worst-case branch.
        #[arg(long)]
        trace: bool,
    },
    /// Exact values over a range of n.
    Table {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        pools: PoolArgs,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// plain, csv or latex.
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        budget_secs: Option<f64>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_parser = ["paper"])]
        suite: String,
        /// Skip the slowest instance.
        #[arg(long)]
        fast: bool,
    },
    /// Exact values for pools of two against ceil(n/2) + 2d - 3.
    Conjecture {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        budget_secs: f64,
    },
    /// Merge cache files; conflicting values exit with 2.
    Merge {
        /// Destination; printed to stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

/// Runs the process command line.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure(i32, String);

fn usage(e: impl ToString) -> Failure {
    Failure(EXIT_USAGE, e.to_string())
}

fn io_failure(e: io::Error) -> Failure {
    Failure(EXIT_USAGE, e.to_string())
}

fn instance(n: usize, d: usize, pools: &PoolArgs) -> Result<Instance, Failure> {
    match pools.k {
        Some(k) => Instance::fixed(n, d, k),
        None => Instance::unrestricted(n, d),
    }
    .map_err(usage)
}

fn budget(secs: Option<f64>) -> Result<Option<Duration>, Failure> {
    match secs {
        None => Ok(None),
        Some(s) if s > 0.0 && s.is_finite() => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(usage(format!("--budget-secs must be positive, got {s}"))),
    }
}

fn config(threads: usize, budget: Option<Duration>) -> SolveConfig {
    SolveConfig {
        budget,
        ..SolveConfig::default().with_threads(threads)
    }
}

fn cache_records(path: Option<&Path>) -> Result<Vec<CacheRecord>, Failure> {
    match path {
        Some(p) => read_cache(p).map_err(usage),
        None => Ok(Vec::new()),
    }
}

/// Cached record for `inst`, or a fresh solve appended to the cache.
fn solve_record(
    inst: &Instance,
    config: &SolveConfig,
    cached: &[CacheRecord],
    cache: Option<&Path>,
) -> Result<CacheRecord, SolveError> {
    if let Some(rec) = cached.iter().find(|r| r.matches(inst)) {
        return Ok(*rec);
    }
    let start = Instant::now();
    let value = Solver::new(*inst, config.clone()).value()?;
    let rec = CacheRecord::new(
        inst,
        value,
        Source::Solver,
        start.elapsed().as_millis() as u64,
    );
    if let Some(path) = cache {
        // a cache that cannot be written is not worth failing the answer for
        let _ = append_cache(path, &[rec]);
    }
    Ok(rec)
}

fn budget_failure(inst: &Instance, e: SolveError) -> Failure {
    match e {
        SolveError::BudgetExceeded { lower, upper } => Failure(
            EXIT_BUDGET,
            format!("budget exhausted for {inst}: value is between {lower} and {upper}"),
        ),
        other => usage(other),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let threads = cli.threads.max(1);
    match cli.command {
        Command::Solve {
            n,
            d,
            pools,
            budget_secs,
            cache,
        } => {
            let inst = instance(n, d, &pools)?;
            let config = config(threads, budget(budget_secs)?);
            let cached = cache_records(cache.as_deref())?;
            let rec = solve_record(&inst, &config, &cached, cache.as_deref())
                .map_err(|e| budget_failure(&inst, e))?;
            writeln!(out, "{inst} = {}", rec.value).map_err(io_failure)?;
            Ok(EXIT_OK)
        }
        Command::Run {
            strategy,
            n,
            d,
            pools,
            trace,
        } => {
            let inst = instance(n, d, &pools)?;
            let s = by_name(&strategy, inst).map_err(usage)?;
            let report = worst_case_tests(s.as_ref(), &inst)
                .map_err(|e| Failure(EXIT_VERIFY, e.to_string()))?;
            if trace {
                for (pool, outcome) in &report.worst_trace {
                    writeln!(out, "test {pool} -> {}", outcome.as_str()).map_err(io_failure)?;
                }
            }
            writeln!(
                out,
                "worst_case = {}, sound = {}",
                report.worst_case, report.sound
            )
            .map_err(io_failure)?;
            Ok(if report.sound { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Table {
            d,
            pools,
            n_min,
            n_max,
            format,
            budget_secs,
            cache,
        } => {
            let format: TableFormat = format.parse().map_err(usage)?;
            let config = config(threads, budget(budget_secs)?);
            let cached = cache_records(cache.as_deref())?;
            let mut rows = Vec::new();
            for n in n_min..=n_max {
                // sizes that do not fit n are skipped
                let Ok(inst) = instance(n, d, &pools) else {
                    continue;
                };
                let rec = solve_record(&inst, &config, &cached, cache.as_deref())
                    .map_err(|e| budget_failure(&inst, e))?;
                rows.push(rec);
            }
            out.write_all(render_table(&rows, format).as_bytes())
                .map_err(io_failure)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite: _, fast } => {
            let _ = writeln!(
                err,
                "running the verification suite{}",
                if fast { " (fast)" } else { "" }
            );
            let report = run_suite(&SuiteOptions { fast, threads });
            writeln!(out, "{report}").map_err(io_failure)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Conjecture {
            d,
            n_max,
            budget_secs,
        } => {
            let budget = budget(Some(budget_secs))?.expect("checked positive");
            let rows = scan_pairs_conjecture(d, n_max, budget, &config(threads, None));
            if rows.is_empty() {
                writeln!(
                    out,
                    "no instance with n <= {n_max} has 3 <= d <= floor(n/2) - 1 for d = {d}"
                )
                .map_err(io_failure)?;
            }
            for row in &rows {
                writeln!(out, "{row}").map_err(io_failure)?;
            }
            let refuted = rows.iter().filter(|r| !r.agrees()).count();
            let undecided = rows.iter().filter(|r| r.outcome.is_err()).count();
            writeln!(
                out,
                "{} agree, {refuted} disagree, {undecided} undecided",
                rows.len() - refuted - undecided
            )
            .map_err(io_failure)?;
            Ok(EXIT_OK)
        }
        Command::Merge { output, inputs } => {
            let mut lists = Vec::new();
            for path in &inputs {
                if !path.exists() {
                    return Err(usage(format!("{} does not exist", path.display())));
                }
                lists.push(read_cache(path).map_err(usage)?);
            }
            let merged = match records::merge_records(lists.iter().map(Vec::as_slice)) {
                Ok(m) => m,
                Err(e @ records::RecordError::Conflict { .. }) => {
                    return Err(Failure(EXIT_VERIFY, e.to_string()))
                }
                Err(e) => return Err(usage(e)),
            };
            match output {
                Some(path) => records::write_cache(&path, &merged).map_err(usage)?,
                None => out
                    .write_all(render_table(&merged, TableFormat::Csv).as_bytes())
                    .map_err(io_failure)?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Convenience for tests and examples: runs and captures both streams.
pub fn run_captured<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(args, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

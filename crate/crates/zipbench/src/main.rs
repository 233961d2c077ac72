//! Command-line front end: `derive` prints symbolic type derivatives,
//! `gen` writes workload stream files, `bench` times one configuration,
//! and `verify` runs the oracle suites from the release binary.
//!
//! Exit codes: 0 on success, 1 on a validation problem (the message names
//! the offending flag), 2 when an internal invariant breaks.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use zipbench::bench::{
    append_csv, run_bench, BenchConfig, BenchError, Task, Variant, DEFAULT_MIN_ITERS,
    DEFAULT_TIME_LIMIT,
};
use zipbench::typecalc::{differentiate, normalize, TypeExpr};
use zipbench::verify::{run_all, run_suite};
use zipbench::workload::{emit_pair, read_stream, GenConfig, GenError, Scenario, WorkloadError};

#[derive(Parser)]
#[command(
    name = "zipbench",
    version,
    about = "Cursor vs. root-anchored editing on persistent and mutable trees"
)]
struct Cli {
    /// Seed for every randomized subcommand.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Suppress all non-error output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Differentiate a type expression with respect to a variable.
    Derive {
        /// S-expression syntax, e.g. "(mu x (+ 1 (* x (* a x))))".
        #[arg(long)]
        expr: String,

        /// Variable to differentiate with respect to.
        #[arg(long)]
        var: String,

        /// Print the sum-of-products normal form of the derivative.
        #[arg(long)]
        normalize: bool,
    },

    /// Generate one workload as a cursor-encoded and a root-encoded file.
    Gen {
        /// Perfect-tree depth the stream navigates.
        #[arg(long)]
        depth: u32,

        /// Number of set commands.
        #[arg(long)]
        count: u64,

        /// uniform, bottom, right, or bottom-right.
        #[arg(long)]
        scenario: String,

        /// Writes <prefix>.cursor.cmds and <prefix>.root.cmds.
        #[arg(long)]
        out_prefix: PathBuf,
    },

    /// Time one task and variant, and optionally append a CSV row.
    Bench {
        /// traversal or insertion.
        #[arg(long)]
        task: String,

        /// persistent-cursor, persistent-root, mutable-cursor, or mutable-root.
        #[arg(long)]
        variant: String,

        /// Traversal: the stream file to replay (encoding must match the variant).
        #[arg(long)]
        input: Option<PathBuf>,

        /// Traversal: require the input to be generated for this scenario.
        #[arg(long)]
        scenario: Option<String>,

        /// Traversal: require the input to be generated at this depth.
        #[arg(long)]
        depth: Option<u32>,

        /// Insertion: how many descending elements each iteration inserts.
        #[arg(long)]
        count: Option<u64>,

        /// Keep iterating until this many seconds have elapsed (default 10).
        #[arg(long)]
        time_limit: Option<f64>,

        /// Report at least this many iterations (default 3).
        #[arg(long)]
        min_iters: Option<u64>,

        /// Append the measurement to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },

    /// Run the oracle and invariant suites.
    Verify {
        /// all, traversal, insertion, cadence, typecalc, or workload.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Validation(String),
    Internal(String),
}

impl Failure {
    fn report(&self) -> (&str, u8) {
        match self {
            Failure::Validation(m) => (m, 1),
            Failure::Internal(m) => (m, 2),
        }
    }
}

fn validation(message: impl Into<String>) -> Failure {
    Failure::Validation(message.into())
}

fn parse_flag<T>(flag: &str, value: &str) -> Result<T, Failure>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| validation(format!("{flag}: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (message, code) = failure.report();
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Derive { expr, var, normalize: to_normal } => {
            let parsed: TypeExpr = parse_flag("--expr", expr)?;
            let derivative = differentiate(&parsed, var)
                .map_err(|e| validation(format!("--expr: {e}")))?;
            let out = if *to_normal {
                normalize(&derivative).into_expr()
            } else {
                derivative
            };
            if !cli.quiet {
                println!("{out}");
            }
            Ok(())
        }

        Command::Gen { depth, count, scenario, out_prefix } => {
            let scenario: Scenario = parse_flag("--scenario", scenario)?;
            let config = GenConfig {
                depth: *depth,
                count: *count,
                scenario,
                seed: cli.seed,
            };
            let (cursor, root) = emit_pair(&config, out_prefix).map_err(|e| match e {
                WorkloadError::Gen(GenError::BadDepth { .. }) => validation(format!("--depth: {e}")),
                WorkloadError::Gen(GenError::BadCount) => validation(format!("--count: {e}")),
                WorkloadError::File(_) => validation(format!("--out-prefix: {e}")),
            })?;
            if !cli.quiet {
                println!("wrote {}", cursor.display());
                println!("wrote {}", root.display());
            }
            Ok(())
        }

        Command::Bench {
            task,
            variant,
            input,
            scenario,
            depth,
            count,
            time_limit,
            min_iters,
            csv,
        } => {
            let task: Task = parse_flag("--task", task)?;
            let variant: Variant = parse_flag("--variant", variant)?;
            match task {
                Task::Traversal => {
                    if count.is_some() {
                        return Err(validation("--count applies only to the insertion task"));
                    }
                    let input = input
                        .as_ref()
                        .ok_or_else(|| validation("--input is required for the traversal task"))?;
                    if scenario.is_some() || depth.is_some() {
                        let header = read_stream(input)
                            .map_err(|e| validation(format!("--input: {e}")))?;
                        if let Some(s) = scenario {
                            let s: Scenario = parse_flag("--scenario", s)?;
                            if s != header.scenario {
                                return Err(validation(format!(
                                    "--scenario: the input file was generated for {}",
                                    header.scenario
                                )));
                            }
                        }
                        if let Some(d) = depth {
                            if *d != header.depth {
                                return Err(validation(format!(
                                    "--depth: the input file was generated at depth {}",
                                    header.depth
                                )));
                            }
                        }
                    }
                }
                Task::Insertion => {
                    if input.is_some() {
                        return Err(validation("--input applies only to the traversal task"));
                    }
                    if scenario.is_some() {
                        return Err(validation("--scenario applies only to the traversal task"));
                    }
                    if depth.is_some() {
                        return Err(validation("--depth applies only to the traversal task"));
                    }
                    if count.is_none() {
                        return Err(validation("--count is required for the insertion task"));
                    }
                }
            }
            let time_limit = match time_limit {
                None => DEFAULT_TIME_LIMIT,
                Some(secs) if secs.is_finite() && *secs > 0.0 => Duration::from_secs_f64(*secs),
                Some(_) => {
                    return Err(validation("--time-limit must be a positive number of seconds"))
                }
            };
            let min_iters = min_iters.unwrap_or(DEFAULT_MIN_ITERS);
            if min_iters == 0 {
                return Err(validation("--min-iters must be positive"));
            }

            let config = BenchConfig {
                task,
                variant,
                input: input.clone(),
                count: *count,
                time_limit,
                min_iters,
            };
            let run = run_bench(&config).map_err(|e| match e {
                BenchError::Engine(_) | BenchError::TwoThree(_) => {
                    Failure::Internal(format!("a validated workload failed to replay: {e}"))
                }
                BenchError::File(inner) => validation(format!("--input: {inner}")),
                BenchError::EncodingMismatch { .. } => validation(format!("--input: {e}")),
                other => validation(other.to_string()),
            })?;
            if let Some(csv) = csv {
                append_csv(&run.record, csv).map_err(|e| validation(format!("--csv: {e}")))?;
            }
            if !cli.quiet {
                let r = &run.record;
                let scenario = r.scenario.map_or("-".to_string(), |s| s.to_string());
                println!(
                    "task {} variant {} scenario {} size {}",
                    r.task, r.variant, scenario, r.size
                );
                println!(
                    "iterations {}  mean {:.1} ns  stddev {:.1} ns",
                    r.iterations, r.mean_ns, r.stddev_ns
                );
                println!("checksum {:#018x}", run.checksum);
            }
            Ok(())
        }

        Command::Verify { suite } => {
            let reports = if suite == "all" {
                run_all(cli.seed)
            } else {
                vec![run_suite(suite, cli.seed)
                    .map_err(|e| validation(format!("--suite: {e}")))?]
            };
            let mut failing = Vec::new();
            for report in &reports {
                if !cli.quiet {
                    println!("{report}");
                }
                if !report.passed() {
                    for line in &report.failures {
                        eprintln!("  {}: {line}", report.name);
                    }
                    if report.suppressed > 0 {
                        eprintln!("  {}: ...and {} more failures", report.name, report.suppressed);
                    }
                    failing.push(report.name.clone());
                }
            }
            if failing.is_empty() {
                Ok(())
            } else {
                Err(Failure::Internal(format!("suites failed: {}", failing.join(", "))))
            }
        }
    }
}

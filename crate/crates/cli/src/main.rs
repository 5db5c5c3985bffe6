//! `moment-forge`: predicted and computed sixth moments of Dirichlet
//! L-functions, and numerical checks of the identities behind them.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "moment-forge", version, about, propagate_version = true)]
struct Cli {
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// working precision in decimal digits for the predictor
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// largest prime in truncated Euler products
    #[arg(long, global = true)]
    euler_cutoff: Option<u64>,
    /// confluence step for zero shifts
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker threads (default: one per core)
    #[arg(long, global = true, env = "MOMENT_FORGE_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// include wall-clock seconds in the output
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// a_3, a_3(L), 42 a_3 / 9!, Gamma(1/4) and K(1) zeta(2)
    Constants,
    /// Predicted shifted moment Q_{A,B}(q)
    Predict {
        #[arg(long)]
        q: u64,
        /// `zero` for the confluent limit at A = B = {0,..,0}, or a JSON file
        /// `{"a": [[re, im], ..], "b": [[re, im], ..]}`
        #[arg(long, default_value = "zero")]
        shifts: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        /// number of shifts per side in zero mode
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Family averages over even primitive characters against the prediction
    Empirical {
        #[arg(long, required_unless_present = "range", conflicts_with = "range")]
        q: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["Q1", "Q2"])]
        range: Option<Vec<u64>>,
        /// JSON shift file (see `predict`); zero shifts when absent
        #[arg(long, value_name = "FILE")]
        shifts: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
    },
    /// Both sides of the averaged moment theorem over Q < q < 2Q
    Theorem1 {
        #[arg(long = "Q", value_name = "Q")]
        big_q: u64,
        /// JSON shift file; staggered real shifts j*delta when absent
        #[arg(long, value_name = "FILE")]
        shifts: Option<PathBuf>,
    },
    /// int_0^T |zeta(1/2+it)|^6 dt
    Zeta6 {
        #[arg(long = "T", value_name = "T")]
        big_t: f64,
        /// compare with the integral of P_3(log(t/2 pi))
        #[arg(long)]
        compare_p3: bool,
    },
    /// Run identity suites; exit code 1 if any check fails
    Verify {
        #[arg(long, value_parser = commands::parse_suite)]
        suite: commands::SuiteChoice,
        #[arg(long)]
        draws: Option<usize>,
    },
}

fn build_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    c.digits = cli.digits.unwrap_or(c.digits);
    c.euler_cutoff = cli.euler_cutoff.unwrap_or(c.euler_cutoff);
    c.delta = cli.delta.unwrap_or(c.delta);
    c.seed = cli.seed.unwrap_or(c.seed);
    c.threads = cli.threads.or(c.threads);
    c.format = cli.format.unwrap_or(c.format);
    c.output = cli.output.clone().or(c.output);
    c.validate()?;
    Ok(c)
}

fn run(cli: &Cli, config: &RunConfig) -> anyhow::Result<output::Output> {
    match &cli.command {
        Command::Constants => commands::constants(config),
        Command::Predict { q, shifts, t, k } => commands::predict(config, *q, shifts, *t, *k),
        Command::Empirical { q, range, shifts, t } => {
            let qs: Vec<u64> = match (q, range) {
                (Some(q), _) => vec![*q],
                (None, Some(r)) if r[0] <= r[1] => (r[0]..=r[1]).collect(),
                (None, Some(r)) => anyhow::bail!("empty range {}..{}", r[0], r[1]),
                (None, None) => unreachable!("clap requires one of q, range"),
            };
            commands::empirical(config, &qs, shifts.as_deref(), *t, cli.timings)
        }
        Command::Theorem1 { big_q, shifts } => commands::theorem1(config, *big_q, shifts.as_deref(), cli.timings),
        Command::Zeta6 { big_t, compare_p3 } => commands::zeta6(config, *big_t, *compare_p3, cli.timings),
        Command::Verify { suite, draws } => commands::verify(config, suite, *draws),
    }
}

// 1 for numerical failures and failed checks, 2 for bad input
fn error_code(e: &anyhow::Error) -> u8 {
    use moment_forge::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::NonConvergent(_) | E::PrecisionBudget(_) | E::Numerical(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = run(&cli, &config).and_then(|out| {
        let seconds = cli.timings.then(|| start.elapsed().as_secs_f64());
        let bytes = output::render(&out, &config, seconds)?;
        output::emit(&bytes, &config)?;
        Ok(out.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use multipack::verify::{self, Budget, ClosedForms, Suite};

mod curves;
mod output;
mod simulate;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "multipack",
    version,
    about = "Multiple-packing bounds, list-decoding exponents and channel simulations"
)]
struct Cli {
    /// Worker threads for simulations (results do not depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report rates and exponents in bits instead of nats
    #[arg(long, global = true)]
    bits: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity bounds for multiple packings as CSV
    Bounds(curves::BoundsArgs),
    /// List-decoding exponent of the power-constrained AWGN channel as CSV
    Exponents(curves::ExponentsArgs),
    /// List-decoding exponent of unbounded constellations as CSV
    ExponentsUnbounded(curves::UnboundedExponentsArgs),
    /// Random-coding and expurgated exponents of a discrete channel as CSV
    Dmc(curves::DmcArgs),
    /// Monte Carlo experiments, reported as JSON
    #[command(subcommand)]
    Simulate(simulate::Simulate),
    /// Run the oracle and consistency checks
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = ["all", "bounds", "exponents", "geometry", "montecarlo"])]
    suite: String,
    #[arg(long, default_value = "fast", value_parser = ["fast", "full"])]
    budget: String,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
    VerifyFailed(usize),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(_) => EXIT_VERIFY_FAILED,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::VerifyFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl From<multipack::error::Error> for CliError {
    fn from(e: multipack::error::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn verify_cmd(a: &VerifyArgs, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let suite: Suite = a.suite.parse().map_err(CliError::Usage)?;
    let budget: Budget = a.budget.parse().map_err(CliError::Usage)?;
    let forms = ClosedForms::default();
    let mut report = String::new();
    let mut failed = 0;
    for check in verify::CHECKS.iter().filter(|c| suite == Suite::All || c.suite == suite) {
        let o = check.evaluate(&forms, budget);
        failed += !o.passed as usize;
        report.push_str(&format!(
            "{} {:<10} {:<26} max_deviation={:<10} tolerance={:e}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.suite.as_str(),
            o.name,
            format!("{:.3e}", o.max_deviation),
            o.tolerance
        ));
    }
    let mut w = output::sink(out)?;
    w.write_all(report.as_bytes())?;
    w.flush()?;
    if failed > 0 {
        Err(CliError::VerifyFailed(failed))
    } else {
        Ok(())
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Bounds(a) => curves::bounds(a, cli.bits, out),
        Command::Exponents(a) => curves::exponents(a, cli.bits, out),
        Command::ExponentsUnbounded(a) => curves::exponents_unbounded(a, cli.bits, out),
        Command::Dmc(a) => curves::dmc(a, cli.bits, out),
        Command::Simulate(s) => simulate::run(s, out),
        Command::Verify(a) => verify_cmd(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(CliError::usage("--threads must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::usage(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli))),
        None => dispatch(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

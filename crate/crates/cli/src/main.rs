mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::output::{CliError, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "turanlab", version, about = "Numerical checks for a converse prime number theorem")]
struct Cli {
    /// Directory for reports and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Base seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Experiment constants, one `key = value` per line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sieve Λ and compare ϖ(x) with B x^{1-H} log² x at log-spaced points.
    Psi(commands::PsiArgs),
    /// Zero-counting sweep over an ordinate table.
    Zeros(commands::ZerosArgs),
    /// Both sides of the weighted explicit formula and their residual.
    Explicit(commands::ExplicitArgs),
    /// Certificates for the second power-sum lemma on random systems.
    Powersum(commands::PowersumArgs),
    /// Exponent table, feasibility grid and zero-sum partition.
    Experiment(commands::ExperimentArgs),
    /// ζ(s) and its relatives by several representations.
    Zeta(commands::ZetaArgs),
}

/// Options shared by commands that read the zero table.
#[derive(Args, Debug, Clone)]
pub struct ZeroSource {
    /// Ordinate file; defaults to zeros_10k.txt in the data directory
    /// (`$TURANLAB_DATA`, else ./data).
    #[arg(long)]
    zeros: Option<PathBuf>,
}

impl ZeroSource {
    pub fn given(&self) -> bool {
        self.zeros.is_some()
    }

    pub fn path(&self) -> PathBuf {
        self.zeros.clone().unwrap_or_else(|| {
            let dir = std::env::var_os("TURANLAB_DATA").map_or_else(|| PathBuf::from("data"), PathBuf::from);
            dir.join("zeros_10k.txt")
        })
    }
}

pub struct Context {
    pub out: PathBuf,
    pub seed: u64,
    pub config: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(RunManifest, usize), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let ctx = Context { out: cli.out, seed: cli.seed, config: cli.config };
    std::fs::create_dir_all(&ctx.out).map_err(|e| CliError::io(&ctx.out, e))?;
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Psi(a) => commands::psi(&ctx, a),
        Command::Zeros(a) => commands::zeros(&ctx, a),
        Command::Explicit(a) => commands::explicit(&ctx, a),
        Command::Powersum(a) => commands::powersum(&ctx, a),
        Command::Experiment(a) => commands::experiment(&ctx, a),
        Command::Zeta(a) => commands::zeta(&ctx, a),
    }?;
    report.manifest.wall_time = start.elapsed().as_secs_f64();
    report.manifest.seed = ctx.seed;
    report.manifest.write(&ctx.out)?;
    Ok((report.manifest, report.violations.len()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((manifest, 0)) => {
            println!("{}: wrote {}", manifest.command, manifest.outputs.join(", "));
            ExitCode::SUCCESS
        }
        Ok((manifest, n)) => {
            eprintln!("{}: {n} invariant violation(s); see {}", manifest.command, manifest.outputs.join(", "));
            for v in &manifest.violations {
                eprintln!("  {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

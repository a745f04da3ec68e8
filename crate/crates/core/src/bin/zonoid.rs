//! Command line front end over the experiment runners.
//!
//! Exit codes: 0 on pass, 1 when a configured statistical check fails, 2 on
//! invalid input or any computational error, 3 when the limiting variance is
//! degenerate.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zonoid_core::experiment::{load_config, run_clt, run_exact, run_theorem1, run_zonoid,
    write_artifacts, CltConfig, ExactConfig, RunArtifacts, Theorem1Config, ZonoidConfig};
use zonoid_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "zonoid",
    version,
    about = "Exact zonotope valuations, zonoids of sampling laws, and their limit theorems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configuration's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory receiving the JSON and CSV artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Size of the worker pool; output bytes do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate valuations of an explicit zonotope.
    Exact(CommonArgs),
    /// Check the expectation identity for sampled zonoids.
    Theorem1(CommonArgs),
    /// Run the replicated central limit experiment.
    Clt(CommonArgs),
    /// Build a zonoid and compare supports against its reference body.
    Zonoid(CommonArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Exact(c) | Command::Theorem1(c) | Command::Clt(c) | Command::Zonoid(c) => c,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<ExitCode> {
    let common = command.common();
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(Error::Config("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }

    let artifacts = match command {
        Command::Exact(c) => {
            let cfg: ExactConfig = load_config(&c.config)?;
            run_exact(&cfg)?
        }
        Command::Theorem1(c) => {
            let mut cfg: Theorem1Config = load_config(&c.config)?;
            if let Some(seed) = c.seed {
                cfg.seed.master_seed = seed;
            }
            run_theorem1(&cfg)?
        }
        Command::Clt(c) => {
            let mut cfg: CltConfig = load_config(&c.config)?;
            if let Some(seed) = c.seed {
                cfg.seed.master_seed = seed;
            }
            run_clt(&cfg)?
        }
        Command::Zonoid(c) => {
            let mut cfg: ZonoidConfig = load_config(&c.config)?;
            if let Some(seed) = c.seed {
                cfg.seed.master_seed = seed;
            }
            run_zonoid(&cfg)?
        }
    };

    report(&artifacts, &common.out)
}

fn report(artifacts: &RunArtifacts, out: &PathBuf) -> Result<ExitCode> {
    for check in &artifacts.checks {
        println!(
            "check {}: {} (observed {:.6e}, threshold {:.6e})",
            check.name,
            if check.pass { "pass" } else { "fail" },
            check.observed,
            check.threshold
        );
    }
    println!("status: {}", artifacts.status.as_str());
    for path in write_artifacts(artifacts, out)? {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::from(artifacts.status.exit_code() as u8))
}

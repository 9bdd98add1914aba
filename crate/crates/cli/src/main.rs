use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tourpp_cli::config::VerifyConfig;
use tourpp_cli::{run_command, CliError, Command, RunConfig};

#[derive(Parser)]
#[command(name = "tourpp", version, about = "Projection pursuit experiments driven by a TOML run file")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Write a simulated dataset to data.csv.
    Simulate(Common),
    /// Evaluate indexes on column pairs or on the frames of a frames.csv.
    Evaluate(Common),
    /// Index traces along the nuisance or squint path.
    Trace(Common),
    /// Guided tour or scout-then-refine optimization.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Check the final anchor against the plane of these one-based columns, e.g. `5,6`.
        #[arg(long, value_parser = parse_pair)]
        verify: Option<[usize; 2]>,
        /// Largest accepted distance for --verify.
        #[arg(long, default_value_t = 0.15)]
        max_dist: f64,
    },
    /// Percentile table, rotation scan, timing, parameter sweep or squint angles.
    Diagnose(Common),
    /// SVG of a traces.csv or a scatterplot.
    Plot(Common),
}

#[derive(Args)]
struct Common {
    /// Run configuration file.
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory, replacing `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed, replacing `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Record measured evaluation times instead of zeros.
    #[arg(long)]
    timing: bool,
}

fn parse_pair(s: &str) -> Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok([
            a.trim().parse().map_err(|_| format!("bad column `{a}`"))?,
            b.trim().parse().map_err(|_| format!("bad column `{b}`"))?,
        ]),
        _ => Err(format!("expected two comma-separated columns, got `{s}`")),
    }
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.timing |= common.timing;
    Ok(cfg)
}

fn main_inner(cli: Cli) -> Result<PathBuf, CliError> {
    let (cmd, common) = match &cli.command {
        Sub::Simulate(c) => (Command::Simulate, c),
        Sub::Evaluate(c) => (Command::Evaluate, c),
        Sub::Trace(c) => (Command::Trace, c),
        Sub::Optimize { common, .. } => (Command::Optimize, common),
        Sub::Diagnose(c) => (Command::Diagnose, c),
        Sub::Plot(c) => (Command::Plot, c),
    };
    let mut cfg = load(common)?;
    if let Sub::Optimize {
        verify: Some(columns),
        max_dist,
        ..
    } = &cli.command
    {
        let oc = cfg
            .optimize
            .as_mut()
            .ok_or_else(|| CliError::Config("--verify needs an [optimize] section".into()))?;
        oc.verify = Some(VerifyConfig {
            columns: *columns,
            max_dist: *max_dist,
        });
    }
    run_command(cmd, &cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

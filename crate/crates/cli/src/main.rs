//! `hpr`: phase-transition sweeps, SNR curves, image recovery and self-checks
//! for quaternion and octonion phase retrieval.

mod commands;
mod io;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand};

use crate::commands::Status;
use crate::settings::RawConfig;

#[derive(Parser, Debug)]
#[command(name = "hpr", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `dotted.key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed. Without it the config file's `seed` is used, then HPR_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// qwf, qtwf, owf or concat-wf.
    #[arg(long, global = true)]
    solver: Option<String>,
    /// gaussian-q, gaussian-o, gaussian-r, coded-fourier, stft or wavelet.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Record wall-clock times. Outputs are then no longer reproducible byte for byte.
    #[arg(long, global = true)]
    timing: bool,
    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Success rate over an m/n grid; writes phase_transition.csv.
    Simulate,
    /// Recovery error against noise level; writes snr_curve.csv.
    Snr,
    /// Patch-wise recovery of an RGB or 8-band image; writes metrics.json.
    Recover(RecoverArgs),
    /// Algebra, representation, transform and gradient checks.
    Selftest(SelftestArgs),
    /// Closed-form gradients against central differences.
    Gradcheck(GradcheckArgs),
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    /// PNG/PPM file, directory of band_0..7.png, HPRMSI cube, or synthetic-rgb:WxH / synthetic-msi:WxH.
    #[arg(long)]
    pub input: Option<String>,
    /// Return the ground truth instead of solving, to check the I/O path.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Random samples per algebraic property.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Negate octonion product entry e_I e_J; the suite should then fail.
    #[arg(long, value_name = "I,J")]
    pub flip_sign: Option<String>,
}

#[derive(Args, Debug)]
pub struct GradcheckArgs {
    /// Random points per cost.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
}

fn raw_config(c: &Common) -> Result<RawConfig> {
    let mut raw = match &c.config {
        Some(p) => RawConfig::load(p)?,
        None => RawConfig::default(),
    };
    for pair in &c.set {
        raw.set_pair(pair)?;
    }
    if let Some(s) = &c.solver {
        raw.set("experiment.solver", s)?;
    }
    if let Some(m) = &c.model {
        raw.set("experiment.model", m)?;
    }
    if c.timing {
        raw.set("timing", "true")?;
    }
    match c.seed {
        Some(seed) => raw.set("seed", &seed.to_string())?,
        None if !raw.contains("seed") => {
            if let Ok(env) = std::env::var("HPR_SEED") {
                let seed: u64 = env
                    .trim()
                    .parse()
                    .with_context(|| format!("HPR_SEED=`{env}` is not a u64"))?;
                raw.set("seed", &seed.to_string())?;
            }
        }
        None => {}
    }
    Ok(raw)
}

fn run(cli: Cli) -> Result<Status> {
    let raw = raw_config(&cli.common)?;
    let out = &cli.common.out;
    match cli.command {
        Command::Simulate => commands::simulate(&raw, out),
        Command::Snr => commands::snr(&raw, out),
        Command::Recover(args) => commands::recover(raw, out, &args),
        Command::Selftest(args) => commands::selftest(&raw, &args),
        Command::Gradcheck(args) => commands::gradcheck(&raw, &args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.common.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(e.into()),
        },
        None => run(cli),
    };
    match result {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! `seqnystrom` command-line front end.
//!
//! Every command reads a layered [`config::Config`], writes its outputs and a
//! `config.resolved.toml` echo into `--out`, and maps failures onto the exit
//! codes of [`error::Category`].

pub mod commands;
pub mod config;
pub mod error;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use toml::Value;

use crate::config::Config;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "seqnystrom", version, about = "Nyström KRR with sequential sub-sampling")]
#[command(after_help = "Any config key can be set with --section.key=value; flags win over the --config file.")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Min-max rescale inputs and targets to [0, 1] before fitting.
    #[arg(long, global = true)]
    rescale: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Generate a synthetic series.
    Simulate,
    /// Fit a model to a series or dataset CSV.
    Fit,
    /// Predict with a saved model.
    Predict,
    /// One-step-ahead evaluation.
    Eval,
    /// Ratio, scaling or placement sweep.
    Sweep,
    /// Gram spectra of dependent and i.i.d. points.
    Spectrum,
    /// Residual noise extraction.
    Noise,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Fit => "fit",
            Command::Predict => "predict",
            Command::Eval => "eval",
            Command::Sweep => "sweep",
            Command::Spectrum => "spectrum",
            Command::Noise => "noise",
        }
    }
}

type Overrides = Vec<(String, String)>;

/// Pulls `--section.key=value` and `--section.key value` out of `args`.
fn split_overrides(args: Vec<String>) -> Result<(Vec<String>, Overrides), CliError> {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(body) = a.strip_prefix("--") else {
            rest.push(a);
            continue;
        };
        let (key, value) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), Some(v.to_string())),
            None => (body.to_string(), None),
        };
        if !key.contains('.') {
            rest.push(a);
            continue;
        }
        let value = match value {
            Some(v) => v,
            None => it.next().ok_or_else(|| CliError::config(format!("--{key} needs a value")))?,
        };
        overrides.push((key, value));
    }
    Ok((rest, overrides))
}

fn resolve(cli: &Cli, overrides: &[(String, String)]) -> Result<Config, CliError> {
    let mut cfg = Config::load(cli.command.name(), cli.config.as_deref(), overrides)?;
    if let Some(seed) = cli.seed {
        let seed = i64::try_from(seed).map_err(|_| CliError::config("--seed must fit in 63 bits"))?;
        cfg.set("run.seed", Value::Integer(seed))?;
    }
    if let Some(out) = &cli.out {
        cfg.set("run.out", Value::String(out.display().to_string()))?;
    }
    if cli.rescale {
        cfg.set("run.rescale", Value::Boolean(true))?;
    }
    Ok(cfg)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: Vec<String>) -> i32 {
    let (rest, overrides) = match split_overrides(args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return e.category.code();
        }
    };
    let cli = match Cli::try_parse_from(rest) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { error::Category::Config.code() } else { 0 };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .try_init();
    let result = resolve(&cli, &overrides).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs.unwrap_or(0))
            .build()
            .map_err(|e| CliError::config(format!("--jobs: {e}")))?;
        pool.install(|| commands::dispatch(cli.command.name(), &cfg))
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.category.code()
        }
    }
}

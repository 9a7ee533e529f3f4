//! Command-line front-end for `magicdist`: polarization sweeps, single-point
//! reports, iteration traces and the distillation threshold.

pub mod config;
pub mod numfmt;
pub mod sweep;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use magicdist::five_qubit::{iterate_distillation, threshold_locate};
use magicdist::noise::{NoiseConfig, NoiseMode};
use serde_json::json;

use config::{resolve_noise, ConfigFile, NoiseOverrides};
use numfmt::{rounded, sig, table};
use sweep::{evaluate, row_json, run_sweep, to_csv, to_json, OutputFormat, SweepSpec, Variant};

#[derive(Debug, Parser)]
#[command(name = "magicdist", version, about = "Five-qubit-code magic state distillation simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate p_out and theta0 over a grid of input polarizations
    Sweep(SweepArgs),
    /// Full sixteen-outcome report for one input polarization
    Run(RunArgs),
    /// Polarization after repeated rounds
    Iterate(IterateArgs),
    /// Print the distillation threshold
    Threshold,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// Dephasing model: none, T2, T2star or custom
    #[arg(long, value_parser = parse_mode)]
    pub noise: Option<NoiseMode>,
    /// TOML file with noise settings
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Total decode-circuit time in seconds
    #[arg(long)]
    pub total_time: Option<f64>,
    /// Number of dephasing slices
    #[arg(long)]
    pub slicing: Option<usize>,
}

impl NoiseArgs {
    fn resolve(&self) -> Result<NoiseConfig> {
        let file = self.config.as_deref().map(ConfigFile::load).transpose()?;
        resolve_noise(
            file.as_ref(),
            NoiseOverrides {
                mode: self.noise,
                total_circuit_time: self.total_time,
                slicing: self.slicing,
            },
        )
    }
}

fn parse_mode(s: &str) -> std::result::Result<NoiseMode, String> {
    s.parse().map_err(|e: magicdist::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub p_start: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub p_end: f64,
    #[arg(long, default_value_t = 51)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Variant::Decode)]
    pub variant: Variant,
    #[arg(long, default_value_t = 1)]
    pub iterations: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reserved for stochastic extensions
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p_in: f64,
    #[arg(long, value_enum, default_value_t = Variant::Decode)]
    pub variant: Variant,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p_start: f64,
    #[arg(long, default_value_t = 6)]
    pub rounds: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Sweep(args) => sweep_cmd(args, stdout),
        Command::Run(args) => run_cmd(args, stdout),
        Command::Iterate(args) => iterate_cmd(args, stdout),
        Command::Threshold => {
            writeln!(stdout, "{}", sig(threshold_locate(), 10))?;
            Ok(())
        }
    }
}

fn sweep_cmd(args: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let spec = SweepSpec {
        p_start: args.p_start,
        p_end: args.p_end,
        steps: args.steps,
        variant: args.variant,
        noise: args.noise.resolve()?,
        iterations: args.iterations,
        rng_seed: args.seed,
    };
    let rows = run_sweep(&spec)?;
    let text = match args.format {
        OutputFormat::Csv => to_csv(&spec, &rows),
        OutputFormat::Json => to_json(&spec, &rows),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verdict(p_in: f64, threshold: f64) -> &'static str {
    if p_in > threshold {
        "distillable"
    } else {
        "below threshold"
    }
}

fn run_cmd(args: &RunArgs, stdout: &mut dyn Write) -> Result<()> {
    if !(-1.0..=1.0).contains(&args.p_in) {
        bail!("p-in must lie in [-1, 1], got {}", args.p_in);
    }
    let noise = args.noise.resolve()?;
    let spec = SweepSpec {
        p_start: args.p_in,
        p_end: args.p_in,
        steps: 2,
        variant: args.variant,
        noise,
        iterations: 1,
        rng_seed: 0,
    };
    spec.validate()?;
    let row = evaluate(args.p_in, args.variant, &spec.noise, 1)?;
    let threshold = threshold_locate();
    match args.format {
        ReportFormat::Json => {
            let mut v = row_json(&spec, &row);
            v["threshold"] = json!(rounded(threshold));
            v["verdict"] = json!(verdict(args.p_in, threshold));
            writeln!(stdout, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        ReportFormat::Text => {
            writeln!(stdout, "p_in       {}", table(args.p_in))?;
            writeln!(stdout, "variant    {}", args.variant)?;
            writeln!(stdout, "noise      {}", spec.noise.mode)?;
            writeln!(stdout, "syndrome   theta            bloch")?;
            for (i, (t, b)) in row.theta.iter().zip(&row.bloch).enumerate() {
                let Some(t) = t else { continue };
                let b = match b {
                    Some([x, y, z]) => format!("({}, {}, {})", table(*x), table(*y), table(*z)),
                    None => "undefined".into(),
                };
                writeln!(stdout, "{i:>8}   {:<16} {b}", table(*t))?;
            }
            let p_out = row.p_out.map(table).unwrap_or_else(|| "undefined".into());
            writeln!(stdout, "p_out      {p_out}")?;
            writeln!(stdout, "theta0     {}", table(row.theta0))?;
            writeln!(stdout, "threshold  {}", sig(threshold, 10))?;
            writeln!(stdout, "verdict    {}", verdict(args.p_in, threshold))?;
        }
    }
    Ok(())
}

fn iterate_cmd(args: &IterateArgs, stdout: &mut dyn Write) -> Result<()> {
    if !(-1.0..=1.0).contains(&args.p_start) {
        bail!("p-start must lie in [-1, 1], got {}", args.p_start);
    }
    let rounds = iterate_distillation(args.p_start, args.rounds)?;
    match args.format {
        OutputFormat::Csv => {
            writeln!(stdout, "round,p,theta0")?;
            for r in &rounds {
                writeln!(stdout, "{},{},{}", r.round, table(r.p), table(r.theta0))?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<_> = rounds
                .iter()
                .map(|r| json!({"round": r.round, "p": rounded(r.p), "theta0": rounded(r.theta0)}))
                .collect();
            let doc = json!({"p_start": rounded(args.p_start), "rounds": rows});
            writeln!(stdout, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(())
}

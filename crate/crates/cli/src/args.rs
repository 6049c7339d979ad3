use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "zenoptics",
    version,
    about = "Classical optical Zeno effect: traces, sweeps and Monte Carlo checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intensity along the rotator stack, with and without measurements.
    Trace(TraceArgs),
    /// Output ratio against the number of measurements.
    Sweep(SweepArgs),
    /// Photon-ensemble Monte Carlo of the measured stack.
    Mc(McArgs),
    /// Measured stack with Gaussian rotation-angle errors.
    Jitter(JitterArgs),
    /// Propagate a beam through a chain described in JSON.
    Chain(ChainArgs),
    /// Repeat a run from its manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Continuous,
    Measured,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
    All,
}

fn parse_angle(s: &str) -> Result<f64, String> {
    zenoptics::io::parse_angle(s).map_err(|e| e.to_string())
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn parse_samples(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("`{s}` is not an integer ≥ 2")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("`{s}` is not a positive finite number")),
    }
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
        _ => Err(format!("`{s}` is not a non-negative finite number")),
    }
}

fn parse_photons(s: &str) -> Result<u64, String> {
    match s.trim().parse::<u64>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{s}` is not a positive photon count")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    /// Net rotation over all media, with unit: `90deg` or `1.5708rad`.
    #[arg(long, default_value = "90deg", value_parser = parse_angle, allow_hyphen_values = true)]
    pub total_angle: f64,
    /// Total length of the Faraday media in meters.
    #[arg(long, default_value = "1.0", value_parser = parse_positive, allow_hyphen_values = true)]
    pub length: f64,
    /// Input intensity.
    #[arg(long, default_value = "1.0", value_parser = parse_non_negative, allow_hyphen_values = true)]
    pub i0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    /// Measurement counts; repeat the flag or give a comma list.
    #[arg(long = "n", value_delimiter = ',', default_value = "1,2,4,8,16,32", value_parser = parse_count, allow_hyphen_values = true)]
    pub n: Vec<usize>,
    /// Samples per medium, both endpoints included.
    #[arg(long, default_value = "50", value_parser = parse_samples, allow_hyphen_values = true)]
    pub samples_per_segment: usize,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub kind: KindArg,
    /// Write files `<prefix>_N<k>.<ext>`; without it data goes to stdout.
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
    /// Defaults to `all` with --out-prefix and `csv` on stdout.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "1", value_parser = parse_count, allow_hyphen_values = true)]
    pub n_min: usize,
    #[arg(long, default_value = "100", value_parser = parse_count, allow_hyphen_values = true)]
    pub n_max: usize,
    /// Also include powers of two above --n-max up to this value (0 for none).
    #[arg(long, default_value = "1024")]
    pub extra_powers_to: usize,
    #[arg(long, default_value = "90deg", value_parser = parse_angle, allow_hyphen_values = true)]
    pub total_angle: f64,
    /// Logarithmic N axis in the SVG.
    #[arg(long)]
    pub log_x: bool,
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long = "n", value_parser = parse_count, allow_hyphen_values = true)]
    pub n: usize,
    #[arg(long, default_value = "1000000", value_parser = parse_photons, allow_hyphen_values = true)]
    pub photons: u64,
    #[arg(long, default_value = "42")]
    pub seed: u64,
    #[arg(long, default_value = "90deg", value_parser = parse_angle, allow_hyphen_values = true)]
    pub total_angle: f64,
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct JitterArgs {
    #[arg(long = "n", value_parser = parse_count, allow_hyphen_values = true)]
    pub n: usize,
    /// Standard deviation of each rotator's angle error, with unit.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, default_value = "10000", value_parser = parse_count, allow_hyphen_values = true)]
    pub trials: usize,
    #[arg(long, default_value = "42")]
    pub seed: u64,
    #[arg(long, default_value = "90deg", value_parser = parse_angle, allow_hyphen_values = true)]
    pub total_angle: f64,
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Chain description JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RerunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write to a different prefix than the original run.
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
}

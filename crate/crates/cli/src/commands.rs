use std::path::Path;

use anyhow::Context;
use clap::Parser;
use serde::Serialize;
use zenoptics::elements::{parse_chain, propagate, PolarizationState};
use zenoptics::io::{emit_svg, write_sweep_csv, write_trace_csv, write_traces_long_csv, PlotSpec, RunManifest, Series};
use zenoptics::stochastic::{
    jitter_expectation, jittered_output, mc_survival_exact_check, JitterConfig, MonteCarloConfig,
};
use zenoptics::zeno::{sample_trace, zeno_sweep, IntensityTrace, TraceKind, ZenoConfig};

use crate::args::{ChainArgs, Cli, Format, JitterArgs, KindArg, McArgs, RerunArgs, SweepArgs, TraceArgs};
use crate::output::{json_bytes, prefixed, to_stdout, write_file, write_manifest};
use crate::{dispatch, CliError, CliResult};

fn angle_arg(radians: f64) -> String {
    format!("{radians}rad")
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Svg => "svg",
        Format::All => "all",
    }
}

/// Resolves the output format: `all` for files, `csv` for stdout.
fn resolve_format(format: Option<Format>, prefix: Option<&Path>) -> CliResult<Format> {
    match (format, prefix) {
        (Some(Format::All), None) => Err(CliError::Usage(
            "--format all needs --out-prefix; stdout takes a single format".into(),
        )),
        (Some(f), _) => Ok(f),
        (None, Some(_)) => Ok(Format::All),
        (None, None) => Ok(Format::Csv),
    }
}

fn wants(format: Format, target: Format) -> bool {
    format == target || format == Format::All
}

#[derive(Debug, Serialize)]
struct TraceConfig {
    n: Vec<usize>,
    samples_per_segment: usize,
    total_angle_rad: f64,
    length_m: f64,
    i0: f64,
    kind: &'static str,
    format: &'static str,
}

pub fn trace(a: TraceArgs) -> CliResult {
    let format = resolve_format(a.format, a.out_prefix.as_deref())?;
    let kinds: &[TraceKind] = match a.kind {
        KindArg::Continuous => &[TraceKind::Continuous],
        KindArg::Measured => &[TraceKind::Measured],
        KindArg::Both => &[TraceKind::Measured, TraceKind::Continuous],
    };
    let g = &a.geometry;
    let configs: Vec<ZenoConfig> =
        a.n.iter()
            .map(|&n| ZenoConfig {
                n,
                i0: g.i0,
                length: g.length,
                total_angle: g.total_angle,
            })
            .collect();

    let mut traces: Vec<IntensityTrace> = Vec::new();
    for cfg in &configs {
        for &kind in kinds {
            traces.push(sample_trace(cfg, kind, a.samples_per_segment)?);
        }
    }

    let chart = trace_chart(&traces, a.kind == KindArg::Both, g.i0);

    let Some(prefix) = a.out_prefix.as_deref() else {
        let bytes = match format {
            Format::Csv => {
                let mut buf = Vec::new();
                write_traces_long_csv(&traces, &mut buf)?;
                buf
            }
            Format::Json => json_bytes(&traces)?,
            Format::Svg => emit_svg(&chart)?.into_bytes(),
            Format::All => unreachable!("rejected by resolve_format"),
        };
        return to_stdout(&bytes);
    };

    for t in &traces {
        let stem = match (a.kind, t.kind) {
            (KindArg::Both, TraceKind::Continuous) => format!("_continuous_N{}", t.config.n),
            _ => format!("_N{}", t.config.n),
        };
        if wants(format, Format::Csv) {
            let mut buf = Vec::new();
            write_trace_csv(t, &mut buf)?;
            write_file(&prefixed(prefix, &format!("{stem}.csv")), &buf)?;
        }
        if wants(format, Format::Json) {
            write_file(&prefixed(prefix, &format!("{stem}.json")), &json_bytes(t)?)?;
        }
    }
    if wants(format, Format::Svg) {
        write_file(&prefixed(prefix, ".svg"), emit_svg(&chart)?.as_bytes())?;
    }

    let kind_name = match a.kind {
        KindArg::Continuous => "continuous",
        KindArg::Measured => "measured",
        KindArg::Both => "both",
    };
    let config = TraceConfig {
        n: a.n.clone(),
        samples_per_segment: a.samples_per_segment,
        total_angle_rad: g.total_angle,
        length_m: g.length,
        i0: g.i0,
        kind: kind_name,
        format: format_name(format),
    };
    let args = vec![
        "trace".into(),
        "--n".into(),
        join(&a.n),
        "--samples-per-segment".into(),
        a.samples_per_segment.to_string(),
        "--total-angle".into(),
        angle_arg(g.total_angle),
        "--length".into(),
        g.length.to_string(),
        "--i0".into(),
        g.i0.to_string(),
        "--kind".into(),
        kind_name.into(),
        "--format".into(),
        format_name(format).into(),
        "--out-prefix".into(),
        prefix.display().to_string(),
    ];
    write_manifest(prefix, "trace", args, &config, None)
}

/// Measured curves per N; with both kinds, a single unmeasured reference
/// curve on the densest grid.
fn trace_chart(traces: &[IntensityTrace], both: bool, i0: f64) -> PlotSpec {
    let mut series: Vec<Series> = traces
        .iter()
        .filter(|t| !both || t.kind == TraceKind::Measured)
        .map(|t| Series::new(format!("{} N={}", t.kind.as_str(), t.config.n), t.points.clone()))
        .collect();
    if both {
        if let Some(reference) = traces
            .iter()
            .filter(|t| t.kind == TraceKind::Continuous)
            .max_by_key(|t| t.points.len())
        {
            series.push(Series::new("no measurement", reference.points.clone()));
        }
    }
    PlotSpec::intensity_chart(
        "y-polarized intensity along the rotator stack",
        "z (m)",
        "I(z)",
        i0,
        series,
    )
}

#[derive(Debug, Serialize)]
struct SweepConfig {
    n_min: usize,
    n_max: usize,
    extra_powers_to: usize,
    total_angle_rad: f64,
    log_x: bool,
    format: &'static str,
}

/// `n_min..=n_max` followed by the powers of two in `(n_max, extra_powers_to]`.
fn sweep_counts(n_min: usize, n_max: usize, extra_powers_to: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = (n_min..=n_max).collect();
    let mut p = 1usize;
    while p <= extra_powers_to {
        if p > n_max {
            ns.push(p);
        }
        match p.checked_mul(2) {
            Some(next) => p = next,
            None => break,
        }
    }
    ns
}

pub fn sweep(a: SweepArgs) -> CliResult {
    if a.n_min > a.n_max {
        return Err(CliError::Usage(format!(
            "--n-min ({}) must not exceed --n-max ({})",
            a.n_min, a.n_max
        )));
    }
    let format = resolve_format(a.format, a.out_prefix.as_deref())?;
    let ns = sweep_counts(a.n_min, a.n_max, a.extra_powers_to);
    let template = ZenoConfig {
        total_angle: a.total_angle,
        ..ZenoConfig::default()
    };
    let result = zeno_sweep(&ns, &template)?;

    let mut csv = Vec::new();
    write_sweep_csv(&result, &mut csv)?;
    let chart = PlotSpec {
        width: 800,
        height: 600,
        title: "Output ratio against the number of measurements".into(),
        x_label: "N".into(),
        y_label: "I_out / I0".into(),
        series: vec![Series::new(
            "ratio",
            result.rows.iter().map(|r| (r.n as f64, r.ratio)).collect(),
        )],
        y_range: Some((0.0, 1.05)),
        log_x: a.log_x,
    };

    let Some(prefix) = a.out_prefix.as_deref() else {
        let bytes = match format {
            Format::Csv => csv,
            Format::Json => json_bytes(&result)?,
            Format::Svg => emit_svg(&chart)?.into_bytes(),
            Format::All => unreachable!("rejected by resolve_format"),
        };
        return to_stdout(&bytes);
    };

    if wants(format, Format::Csv) {
        write_file(&prefixed(prefix, ".csv"), &csv)?;
    }
    if wants(format, Format::Json) {
        write_file(&prefixed(prefix, ".json"), &json_bytes(&result)?)?;
    }
    if wants(format, Format::Svg) {
        write_file(&prefixed(prefix, ".svg"), emit_svg(&chart)?.as_bytes())?;
    }

    let config = SweepConfig {
        n_min: a.n_min,
        n_max: a.n_max,
        extra_powers_to: a.extra_powers_to,
        total_angle_rad: a.total_angle,
        log_x: a.log_x,
        format: format_name(format),
    };
    let mut args = vec![
        "sweep".into(),
        "--n-min".into(),
        a.n_min.to_string(),
        "--n-max".into(),
        a.n_max.to_string(),
        "--extra-powers-to".into(),
        a.extra_powers_to.to_string(),
        "--total-angle".into(),
        angle_arg(a.total_angle),
        "--format".into(),
        format_name(format).into(),
        "--out-prefix".into(),
        prefix.display().to_string(),
    ];
    if a.log_x {
        args.push("--log-x".into());
    }
    write_manifest(prefix, "sweep", args, &config, None)
}

#[derive(Debug, Serialize)]
struct McReport {
    n: usize,
    photons: u64,
    seed: u64,
    total_angle_rad: f64,
    mean: f64,
    std_error: f64,
    exact: f64,
    /// `null` when the standard error is zero and the estimate is not exact.
    z_score: Option<f64>,
}

pub fn mc(a: McArgs) -> CliResult {
    let cfg = ZenoConfig {
        n: a.n,
        total_angle: a.total_angle,
        ..ZenoConfig::default()
    };
    let check = mc_survival_exact_check(&cfg, &MonteCarloConfig::new(a.photons, a.seed))?;
    let report = McReport {
        n: a.n,
        photons: a.photons,
        seed: a.seed,
        total_angle_rad: a.total_angle,
        mean: check.estimate.mean,
        std_error: check.estimate.std_error,
        exact: check.exact,
        z_score: check.z_score.is_finite().then_some(check.z_score),
    };
    let bytes = json_bytes(&report)?;
    let Some(prefix) = a.out_prefix.as_deref() else {
        return to_stdout(&bytes);
    };
    write_file(&prefixed(prefix, ".json"), &bytes)?;
    let args = vec![
        "mc".into(),
        "--n".into(),
        a.n.to_string(),
        "--photons".into(),
        a.photons.to_string(),
        "--seed".into(),
        a.seed.to_string(),
        "--total-angle".into(),
        angle_arg(a.total_angle),
        "--out-prefix".into(),
        prefix.display().to_string(),
    ];
    write_manifest(prefix, "mc", args, &cfg, Some(a.seed))
}

#[derive(Debug, Serialize)]
struct JitterReport {
    n: usize,
    sigma_rad: f64,
    trials: usize,
    seed: u64,
    total_angle_rad: f64,
    mean_ratio: f64,
    std_dev: f64,
    std_error: f64,
    expected: f64,
}

pub fn jitter(a: JitterArgs) -> CliResult {
    if a.sigma < 0.0 {
        return Err(CliError::Usage(format!(
            "--sigma must be non-negative, got {}",
            a.sigma
        )));
    }
    let cfg = ZenoConfig {
        n: a.n,
        total_angle: a.total_angle,
        ..ZenoConfig::default()
    };
    let jc = JitterConfig {
        sigma: a.sigma,
        trials: a.trials,
        seed: a.seed,
        threads: None,
    };
    let summary = jittered_output(&cfg, &jc)?;
    let report = JitterReport {
        n: a.n,
        sigma_rad: a.sigma,
        trials: a.trials,
        seed: a.seed,
        total_angle_rad: a.total_angle,
        mean_ratio: summary.mean_ratio,
        std_dev: summary.std_dev,
        std_error: summary.std_error(),
        expected: jitter_expectation(&cfg, a.sigma),
    };
    let bytes = json_bytes(&report)?;
    let Some(prefix) = a.out_prefix.as_deref() else {
        return to_stdout(&bytes);
    };
    write_file(&prefixed(prefix, ".json"), &bytes)?;
    let args = vec![
        "jitter".into(),
        "--n".into(),
        a.n.to_string(),
        "--sigma".into(),
        angle_arg(a.sigma),
        "--trials".into(),
        a.trials.to_string(),
        "--seed".into(),
        a.seed.to_string(),
        "--total-angle".into(),
        angle_arg(a.total_angle),
        "--out-prefix".into(),
        prefix.display().to_string(),
    ];
    write_manifest(prefix, "jitter", args, &jc, Some(a.seed))
}

#[derive(Debug, Serialize)]
struct ElementReport {
    index: usize,
    kind: &'static str,
    intensity: f64,
}

#[derive(Debug, Serialize)]
struct ChainReport {
    label: String,
    input_intensity: f64,
    elements: Vec<ElementReport>,
    final_state: PolarizationState,
    final_intensity: f64,
    /// `null` for a dark input beam.
    total_transmittance: Option<f64>,
}

pub fn chain(a: ChainArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.config).with_context(|| format!("cannot read {}", a.config.display()))?;
    let chain = parse_chain(&text).with_context(|| format!("in {}", a.config.display()))?;
    let result = propagate(&chain)?;
    let input_intensity = chain.input.intensity();
    let final_intensity = result.output.intensity();
    let report = ChainReport {
        label: chain.label.clone(),
        input_intensity,
        elements: chain
            .elements
            .iter()
            .zip(&result.states)
            .enumerate()
            .map(|(index, (e, s))| ElementReport {
                index,
                kind: e.kind_name(),
                intensity: s.intensity(),
            })
            .collect(),
        final_state: result.output,
        final_intensity,
        total_transmittance: (input_intensity > 0.0).then(|| final_intensity / input_intensity),
    };
    let bytes = json_bytes(&report)?;
    let Some(prefix) = a.out_prefix.as_deref() else {
        return to_stdout(&bytes);
    };
    write_file(&prefixed(prefix, ".json"), &bytes)?;
    let args = vec![
        "chain".into(),
        "--config".into(),
        a.config.display().to_string(),
        "--out-prefix".into(),
        prefix.display().to_string(),
    ];
    let config: serde_json::Value = serde_json::from_str(&text).context("chain description")?;
    write_manifest(prefix, "chain", args, &config, None)
}

/// Replays `manifest.args`, optionally redirecting `--out-prefix`.
pub fn rerun(a: RerunArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.manifest).with_context(|| format!("cannot read {}", a.manifest.display()))?;
    let manifest = RunManifest::from_json(&text).with_context(|| format!("in {}", a.manifest.display()))?;
    if manifest.args.first().map(String::as_str) == Some("rerun") {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "manifest {} replays itself",
            a.manifest.display()
        )));
    }
    let mut args = manifest.args.clone();
    if let Some(prefix) = &a.out_prefix {
        let new_prefix = prefix.display().to_string();
        match args.iter().position(|x| x == "--out-prefix") {
            Some(i) if i + 1 < args.len() => args[i + 1] = new_prefix,
            _ => args.extend(["--out-prefix".to_owned(), new_prefix]),
        }
    }
    let cli = Cli::try_parse_from(std::iter::once("zenoptics".to_owned()).chain(args))
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("manifest arguments no longer parse: {e}")))?;
    dispatch(cli)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_counts() {
        let ns = sweep_counts(1, 100, 1024);
        assert_eq!(ns.len(), 104);
        assert_eq!(&ns[98..], &[99, 100, 128, 256, 512, 1024]);
        assert_eq!(sweep_counts(5, 8, 0), vec![5, 6, 7, 8]);
        assert_eq!(sweep_counts(1, 1, 4), vec![1, 2, 4]);
    }

    #[test]
    fn format_resolution() {
        assert_eq!(resolve_format(None, None).unwrap(), Format::Csv);
        assert_eq!(resolve_format(None, Some(Path::new("p"))).unwrap(), Format::All);
        assert!(matches!(
            resolve_format(Some(Format::All), None),
            Err(CliError::Usage(_))
        ));
        assert_eq!(resolve_format(Some(Format::Svg), None).unwrap(), Format::Svg);
    }
}

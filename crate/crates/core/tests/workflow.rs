//! Library workflows exercised through the public API only.

use std::f64::consts::FRAC_PI_2;

use approx::assert_relative_eq;
use zenoptics::elements::{build_measured_chain, parse_chain, propagate, PolarizationState};
use zenoptics::io::{
    emit_svg, read_sweep_csv, read_trace_csv, write_sweep_csv, write_trace_csv, PlotSpec, RunManifest, Series,
};
use zenoptics::stochastic::{mc_survival_exact_check, MonteCarloConfig};
use zenoptics::zeno::{sample_trace, zeno_output, zeno_sweep, TraceKind, ZenoConfig};
use zenoptics::Error;

#[test]
fn hand_written_chain_matches_builder_and_closed_form() {
    let stage = r#"{"kind": "faraday", "angle_deg": 15, "length_m": 0.5},
                   {"kind": "polarizer", "axis_deg": 90}"#;
    let text = format!(
        r#"{{"label": "six stages", "input": {{"intensity": 2.0, "axis_deg": 90}},
            "elements": [{}]}}"#,
        [stage; 6].join(",")
    );
    let parsed = parse_chain(&text).unwrap();
    assert_eq!(parsed.len(), 12);
    assert_relative_eq!(parsed.total_length(), 3.0, max_relative = 1e-15);

    let built = build_measured_chain(6, FRAC_PI_2, 3.0, 2.0, FRAC_PI_2).unwrap();
    let a = propagate(&parsed).unwrap().output.intensity();
    let b = propagate(&built).unwrap().output.intensity();
    let cfg = ZenoConfig {
        n: 6,
        i0: 2.0,
        length: 3.0,
        total_angle: FRAC_PI_2,
    };
    assert_relative_eq!(a, b, max_relative = 1e-14);
    assert_relative_eq!(a, zeno_output(&cfg).unwrap(), max_relative = 1e-12);
}

#[test]
fn chain_errors_point_at_the_element() {
    let text = r#"{"input": {"intensity": 1, "axis_deg": 0},
                   "elements": [{"kind": "attenuator", "transmittance": 0.5},
                                {"kind": "attenuator", "transmittance": 1.5}]}"#;
    let chain = parse_chain(text);
    assert!(matches!(chain, Err(Error::Element { index: 1, .. })), "{chain:?}");
}

#[test]
fn depolarized_chain_reports_stokes_state() {
    let text = r#"{"input": {"intensity": 1, "axis_deg": 0},
                   "elements": [{"kind": "depolarizer", "p": 0.5},
                                {"kind": "polarizer", "axis_deg": 0}]}"#;
    let out = propagate(&parse_chain(text).unwrap()).unwrap().output;
    assert!(matches!(out, PolarizationState::Stokes(_)));
    // half the light stays polarized along x, the rest splits evenly
    assert_relative_eq!(out.intensity(), 0.75, max_relative = 1e-15);
}

#[test]
fn trace_and_sweep_survive_csv() {
    let cfg = ZenoConfig::with_n(5);
    let trace = sample_trace(&cfg, TraceKind::Measured, 7).unwrap();
    let mut buf = Vec::new();
    write_trace_csv(&trace, &mut buf).unwrap();
    let back = read_trace_csv(buf.as_slice()).unwrap();
    assert_eq!(back.len(), trace.points.len());
    for (a, b) in trace.points.iter().zip(&back) {
        assert_relative_eq!(a.0, b.0, epsilon = 1e-15, max_relative = 5e-9);
        assert_relative_eq!(a.1, b.1, epsilon = 1e-15, max_relative = 5e-9);
    }

    let sweep = zeno_sweep(&[1, 3, 9, 27, 81], &ZenoConfig::default()).unwrap();
    let mut buf = Vec::new();
    write_sweep_csv(&sweep, &mut buf).unwrap();
    let back = read_sweep_csv(buf.as_slice()).unwrap();
    for (a, b) in sweep.rows.iter().zip(&back.rows) {
        assert_eq!(a.n, b.n);
        assert_relative_eq!(a.ratio, b.ratio, epsilon = 1e-15, max_relative = 5e-9);
    }
}

#[test]
fn manifest_round_trips() {
    let m = RunManifest {
        command: "mc".into(),
        args: vec!["mc".into(), "--n".into(), "3".into()],
        config: serde_json::json!({"n": 3}),
        tool_version: "0.1.0".into(),
        timestamp: "2026-01-01T00:00:00Z".into(),
        seed: Some(9),
    };
    assert_eq!(RunManifest::from_json(&m.to_json().unwrap()).unwrap(), m);
}

#[test]
fn svg_is_reproducible() {
    let cfg = ZenoConfig::with_n(3);
    let series = vec![
        Series::new("measured", sample_trace(&cfg, TraceKind::Measured, 10).unwrap().points),
        Series::new("free", sample_trace(&cfg, TraceKind::Continuous, 10).unwrap().points),
    ];
    let spec = PlotSpec::intensity_chart("N=3", "z", "I", 1.0, series);
    let a = emit_svg(&spec).unwrap();
    assert_eq!(a, emit_svg(&spec).unwrap());
    assert!(a.starts_with("<svg") || a.starts_with("<?xml"));
    assert_eq!(a.matches("<polyline").count(), 2);
}

#[test]
fn monte_carlo_tracks_closed_form() {
    let cfg = ZenoConfig::with_n(3);
    let check = mc_survival_exact_check(&cfg, &MonteCarloConfig::new(200_000, 5)).unwrap();
    assert!(check.z_score.abs() < 5.0, "{check:?}");
    assert_eq!(check.estimate.photons, 200_000);
}

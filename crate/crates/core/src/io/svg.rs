//! Minimal self-contained SVG 1.1 line charts.

use std::fmt::Write;

use crate::error::{Error, Result};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub width: u32,
    pub height: u32,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Fixed y-range; derived from the data when `None`.
    pub y_range: Option<(f64, f64)>,
    pub log_x: bool,
}

impl PlotSpec {
    /// 800×600 chart with a `[0, 1.05·i0]` intensity axis.
    pub fn intensity_chart(title: &str, x_label: &str, y_label: &str, i0: f64, series: Vec<Series>) -> Self {
        Self {
            width: 800,
            height: 600,
            title: title.to_owned(),
            x_label: x_label.to_owned(),
            y_label: y_label.to_owned(),
            series,
            y_range: Some((0.0, 1.05 * i0)),
            log_x: false,
        }
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick positions at 1, 2 or 5 × 10^k covering `[lo, hi]`.
fn linear_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if span <= 0.0 {
        return vec![lo];
    }
    let raw = span / target as f64;
    let pow = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * pow)
        .find(|s| span / s <= target as f64)
        .unwrap_or(10.0 * pow);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    pixel_lo: f64,
    pixel_hi: f64,
    log: bool,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        let (v, lo, hi) = if self.log {
            (v.log10(), self.lo.log10(), self.hi.log10())
        } else {
            (v, self.lo, self.hi)
        };
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        self.pixel_lo + t * (self.pixel_hi - self.pixel_lo)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let first = self.lo.log10().ceil() as i32;
            let last = self.hi.log10().floor() as i32;
            (first..=last).map(|e| 10f64.powi(e)).collect()
        } else {
            linear_ticks(self.lo, self.hi, 8)
        }
    }
}

fn data_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Renders the chart. Output depends only on `spec`.
pub fn emit_svg(spec: &PlotSpec) -> Result<String> {
    if spec.series.is_empty() {
        return Err(Error::invalid("series", "a chart needs at least one series"));
    }
    for s in &spec.series {
        if s.points.is_empty() {
            return Err(Error::invalid("series", format!("series `{}` has no points", s.name)));
        }
        if s.points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::invalid(
                "series",
                format!("series `{}` has non-finite points", s.name),
            ));
        }
        if spec.log_x && s.points.iter().any(|&(x, _)| x <= 0.0) {
            return Err(Error::invalid("log_x", format!("series `{}` has x ≤ 0", s.name)));
        }
    }

    let all = || spec.series.iter().flat_map(|s| s.points.iter());
    let (x_lo, x_hi) = data_range(all().map(|p| p.0));
    let (y_lo, y_hi) = spec.y_range.unwrap_or_else(|| data_range(all().map(|p| p.1)));
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let x_axis = Axis {
        lo: x_lo,
        hi: x_hi,
        pixel_lo: MARGIN_LEFT,
        pixel_hi: w - MARGIN_RIGHT,
        log: spec.log_x,
    };
    let y_axis = Axis {
        lo: y_lo,
        hi: y_hi,
        pixel_lo: h - MARGIN_BOTTOM,
        pixel_hi: MARGIN_TOP,
        log: false,
    };

    let mut out = String::new();
    // fmt::Write into a String cannot fail
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        w / 2.0,
        escape(&spec.title)
    );

    let (left, right, top, bottom) = (x_axis.pixel_lo, x_axis.pixel_hi, y_axis.pixel_hi, y_axis.pixel_lo);
    let _ = writeln!(out, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        out,
        r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{left:.2}" y2="{top:.2}"/>"#
    );
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g class="ticks">"#);
    for t in x_axis.ticks() {
        let x = x_axis.map(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            tick_label(t)
        );
    }
    for t in y_axis.ticks() {
        let y = y_axis.map(t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        h - 15.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">{1}</text>"#,
        (top + bottom) / 2.0,
        escape(&spec.y_label)
    );

    let _ = writeln!(out, r#"<g class="series" fill="none" stroke-width="1.5">"#);
    for (k, s) in spec.series.iter().enumerate() {
        let points = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", x_axis.map(x), y_axis.map(y)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            r#"<polyline stroke="{}" points="{points}"/>"#,
            PALETTE[k % PALETTE.len()]
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g class="legend">"#);
    let legend_x = right - 150.0;
    for (k, s) in spec.series.iter().enumerate() {
        let y = top + 12.0 + 18.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{legend_x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            legend_x + 24.0,
            PALETTE[k % PALETTE.len()],
            legend_x + 30.0,
            y + 4.0,
            escape(&s.name)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(series: Vec<Series>) -> PlotSpec {
        PlotSpec::intensity_chart("t", "z", "I", 1.0, series)
    }

    #[test]
    fn one_series_one_polyline() {
        let svg = emit_svg(&spec(vec![Series::new("a", vec![(0.0, 1.0), (1.0, 0.0)])])).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("href"));
    }

    #[test]
    fn legend_lists_every_series() {
        let svg = emit_svg(&spec(vec![
            Series::new("N=1", vec![(0.0, 1.0), (1.0, 0.0)]),
            Series::new("N=2", vec![(0.0, 1.0), (1.0, 0.25)]),
        ]))
        .unwrap();
        let legend = svg.split(r#"<g class="legend">"#).nth(1).unwrap();
        assert_eq!(legend.matches("<text").count(), 2);
        assert!(legend.contains(">N=1<") && legend.contains(">N=2<"));
    }

    #[test]
    fn output_is_deterministic() {
        let s = spec(vec![Series::new("a & b", vec![(0.0, 0.3), (0.5, 0.9), (1.0, 0.1)])]);
        assert_eq!(emit_svg(&s).unwrap(), emit_svg(&s).unwrap());
        assert!(emit_svg(&s).unwrap().contains("a &amp; b"));
    }

    #[test]
    fn invalid_specs() {
        assert!(emit_svg(&spec(vec![])).is_err());
        assert!(emit_svg(&spec(vec![Series::new("e", vec![])])).is_err());
        assert!(emit_svg(&spec(vec![Series::new("nan", vec![(0.0, f64::NAN)])])).is_err());
        let mut log = spec(vec![Series::new("zero", vec![(0.0, 1.0), (2.0, 1.0)])]);
        log.log_x = true;
        assert!(emit_svg(&log).is_err());
    }

    #[test]
    fn log_axis_ticks_at_decades() {
        let mut s = spec(vec![Series::new("r", vec![(1.0, 0.0), (1024.0, 1.0)])]);
        s.log_x = true;
        let svg = emit_svg(&s).unwrap();
        for label in [">1<", ">10<", ">100<", ">1000<"] {
            assert!(svg.contains(label), "{label}");
        }
    }

    #[test]
    fn nice_ticks() {
        assert_eq!(
            linear_ticks(0.0, 1.05, 8),
            vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]
        );
        assert_eq!(tick_label(0.6000000000000001), "0.6");
    }
}

//! Closed-form intensity laws for the rotator stack, with and without a
//! polarizer after every medium.
//!
//! A y-polarized beam of intensity `I0` crosses `N` identical Faraday media
//! of total length `L` that together rotate the polarization by
//! `total_angle` (a quarter turn by default). Without measurement the
//! y-intensity follows `I0·cos²(total_angle·z/L)`. With a y-polarizer after
//! every medium, each stage transmits `cos²(total_angle/N)` and inside the
//! `i`-th medium
//!
//! ```text
//! I(z) = I0 · [cos²(total_angle/N)]^(i−1) · cos²((total_angle/L)·(z − (i−1)·L/N))
//! ```
//!
//! so the output is `I0·[cos²(total_angle/N)]^N`, which tends to `I0` as `N`
//! grows: `N·(1 − I_out/I0) → total_angle²`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elements::SegmentIndex;
use crate::error::{ensure_finite, ensure_in_range, Error, Result};
use crate::trig;

/// Powers above this go through `exp(k·ln cos²)`; `powi` accumulates about
/// `k` ulps of the rounding in `cos²`.
const LOG_DOMAIN_THRESHOLD: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoConfig {
    /// Number of Faraday media, each followed by a measurement.
    pub n: usize,
    pub i0: f64,
    /// Total length of the Faraday media, meters.
    pub length: f64,
    /// Net rotation across all media, radians.
    pub total_angle: f64,
}

impl Default for ZenoConfig {
    fn default() -> Self {
        Self {
            n: 1,
            i0: 1.0,
            length: 1.0,
            total_angle: FRAC_PI_2,
        }
    }
}

impl ZenoConfig {
    /// Quarter-turn setup with unit intensity and unit length.
    pub fn with_n(n: usize) -> Self {
        Self { n, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "at least one stage is required"));
        }
        ensure_in_range("i0", self.i0, 0.0, f64::MAX)?;
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::invalid(
                "length",
                format!("must be positive and finite, got {}", self.length),
            ));
        }
        ensure_finite("total_angle", self.total_angle)?;
        Ok(())
    }

    pub fn segment_length(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn angle_per_stage(&self) -> f64 {
        self.total_angle / self.n as f64
    }

    /// Malus transmission of one rotator/polarizer stage, `cos²(total_angle/N)`.
    pub fn stage_transmission(&self) -> f64 {
        let c = trig::cos(self.angle_per_stage());
        c * c
    }

    /// `[cos²(total_angle/N)]^k`.
    fn stage_power(&self, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        if k > LOG_DOMAIN_THRESHOLD {
            if let Some(log) = self.log_stage_transmission() {
                return (k as f64 * log).exp();
            }
        }
        match i32::try_from(k) {
            Ok(k) => self.stage_transmission().powi(k),
            Err(_) => self.stage_transmission().powf(k as f64),
        }
    }

    /// `ln cos²(θ)` as `2·ln_1p(−2·sin²(θ/2))`, accurate for small `θ`.
    /// `None` once `|θ| ≥ π/2`, where the stage blocks everything or the
    /// cosine changes sign.
    fn log_stage_transmission(&self) -> Option<f64> {
        let theta = self.angle_per_stage();
        if theta.abs() >= FRAC_PI_2 {
            return None;
        }
        let half = (0.5 * theta).sin();
        Some(2.0 * (-2.0 * half * half).ln_1p())
    }

    /// Start of medium `i` (1-based); exactly `L` for `i = N + 1`.
    fn segment_start(&self, i: usize) -> f64 {
        if i > self.n {
            self.length
        } else {
            self.length * (i - 1) as f64 / self.n as f64
        }
    }

    fn check_z(&self, z: f64) -> Result<()> {
        self.validate()?;
        ensure_in_range("z", z, 0.0, self.length).map(|_| ())
    }
}

/// Free rotation: `I0·cos²(total_angle·z/L)`.
pub fn continuous_intensity(cfg: &ZenoConfig, z: f64) -> Result<f64> {
    cfg.check_z(z)?;
    let c = trig::cos(cfg.total_angle * z / cfg.length);
    Ok(cfg.i0 * c * c)
}

/// Medium containing `z`. Interior boundaries belong to the downstream
/// medium; `z = L` belongs to the last one.
pub fn segment_of(cfg: &ZenoConfig, z: f64) -> Result<SegmentIndex> {
    cfg.check_z(z)?;
    let i = ((z * cfg.n as f64 / cfg.length).floor() as usize + 1).min(cfg.n);
    SegmentIndex::new(i)
}

/// Measured-chain intensity at `z` evaluated with the formula of medium
/// `segment`, whether or not `z` lies inside it. Evaluating the end of
/// medium `k` with `segment = k` gives the limit from the upstream side.
pub fn segment_intensity(cfg: &ZenoConfig, segment: SegmentIndex, z: f64) -> Result<f64> {
    cfg.check_z(z)?;
    let i = segment.get();
    if i > cfg.n {
        return Err(Error::invalid(
            "segment",
            format!("medium {i} does not exist for N = {}", cfg.n),
        ));
    }
    let local = z - cfg.segment_start(i);
    let c = trig::cos(cfg.total_angle * local / cfg.length);
    Ok(cfg.i0 * cfg.stage_power(i - 1) * c * c)
}

/// Intensity along the bench with a measurement after every medium.
pub fn measured_intensity(cfg: &ZenoConfig, z: f64) -> Result<f64> {
    segment_intensity(cfg, segment_of(cfg, z)?, z)
}

/// Output intensity of the measured chain, `I0·[cos²(total_angle/N)]^N`.
pub fn zeno_output(cfg: &ZenoConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.i0 * cfg.stage_power(cfg.n))
}

/// `N·(1 − I_out/I0)`. Tends to [`asymptotic_deficit_limit`] as `N` grows,
/// with a leading correction of `−total_angle⁴/(2N)`.
pub fn asymptotic_deficit(cfg: &ZenoConfig) -> Result<f64> {
    cfg.validate()?;
    let n = cfg.n as f64;
    // 1 − r = −expm1(ln r) avoids cancelling against 1 when r ≈ 1.
    Ok(match cfg.log_stage_transmission() {
        Some(log) => -n * (n * log).exp_m1(),
        None => n * (1.0 - cfg.stage_power(cfg.n)),
    })
}

/// `total_angle²`; `π²/4` for a quarter turn.
pub fn asymptotic_deficit_limit(total_angle: f64) -> f64 {
    total_angle * total_angle
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Continuous,
    Measured,
}

impl TraceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceKind::Continuous => "continuous",
            TraceKind::Measured => "measured",
        }
    }
}

/// Sampled intensity along the bench.
///
/// Continuous traces have strictly increasing `z`. Measured traces sample
/// each medium including both of its endpoints, so every interior boundary
/// appears twice: first as the limit from the upstream medium, then as the
/// start of the downstream one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityTrace {
    pub kind: TraceKind,
    pub config: ZenoConfig,
    /// `(z, intensity)` pairs.
    pub points: Vec<(f64, f64)>,
}

impl IntensityTrace {
    pub fn last(&self) -> (f64, f64) {
        *self.points.last().expect("traces are never empty")
    }
}

pub fn sample_trace(cfg: &ZenoConfig, kind: TraceKind, samples_per_segment: usize) -> Result<IntensityTrace> {
    cfg.validate()?;
    if samples_per_segment < 2 {
        return Err(Error::invalid(
            "samples_per_segment",
            format!("need at least 2 samples per medium, got {samples_per_segment}"),
        ));
    }
    let points = match kind {
        TraceKind::Continuous => {
            let steps = cfg.n * samples_per_segment;
            (0..=steps)
                .map(|j| {
                    let z = if j == steps {
                        cfg.length
                    } else {
                        cfg.length * j as f64 / steps as f64
                    };
                    continuous_intensity(cfg, z).map(|i| (z, i))
                })
                .collect::<Result<Vec<_>>>()?
        }
        TraceKind::Measured => {
            let mut points = Vec::with_capacity(cfg.n * samples_per_segment);
            let last = (samples_per_segment - 1) as f64;
            for i in 1..=cfg.n {
                let segment = SegmentIndex::new(i)?;
                let (start, end) = (cfg.segment_start(i), cfg.segment_start(i + 1));
                for m in 0..samples_per_segment {
                    let z = if m + 1 == samples_per_segment {
                        end
                    } else {
                        start + (end - start) * m as f64 / last
                    };
                    points.push((z, segment_intensity(cfg, segment, z)?));
                }
            }
            points
        }
    };
    Ok(IntensityTrace {
        kind,
        config: *cfg,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    /// `I_out / I0`.
    pub ratio: f64,
    /// `N·(1 − ratio)`, see [`asymptotic_deficit`].
    pub deficit_times_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZenoSweepResult {
    pub rows: Vec<SweepRow>,
}

/// Output ratio for every stage count in `ns`, in input order. `template`
/// supplies everything except `n`; the ratio does not depend on `i0`.
pub fn zeno_sweep(ns: &[usize], template: &ZenoConfig) -> Result<ZenoSweepResult> {
    if ns.is_empty() {
        return Err(Error::invalid("ns", "sweep needs at least one stage count"));
    }
    let rows = ns
        .par_iter()
        .map(|&n| {
            let cfg = ZenoConfig {
                n,
                i0: 1.0,
                ..*template
            };
            Ok(SweepRow {
                n,
                ratio: zeno_output(&cfg)?,
                deficit_times_n: asymptotic_deficit(&cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZenoSweepResult { rows })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // reference values keep their full computed digits
mod tests {
    use super::*;
    use crate::elements::{build_measured_chain, build_unmeasured_chain, propagate};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_3, PI};

    // [cos²(π/2N)]^N to 25 digits, arbitrary-precision evaluation.
    const RATIO_4: f64 = 0.530_790_042_944_955_321_650_316_6;
    const RATIO_10: f64 = 0.780_546_069_781_140_169_905_007;
    const RATIO_32: f64 = 0.925_762_765_604_024_088_451_618_2;
    const RATIO_1000: f64 = 0.997_535_639_419_570_211_22;
    // N·(1 − ratio), same evaluation.
    const DEFICIT_100: f64 = 2.437_308_585_609_971_908_3;
    const DEFICIT_1E6: f64 = 2.467_398_056_241_763_133_8;

    fn cfg(n: usize) -> ZenoConfig {
        ZenoConfig::with_n(n)
    }

    #[test]
    fn continuous_examples() {
        let c = ZenoConfig { i0: 2.0, ..cfg(1) };
        assert_eq!(continuous_intensity(&c, 0.0).unwrap(), 2.0);
        assert_eq!(continuous_intensity(&c, 1.0).unwrap(), 0.0);
        assert_relative_eq!(continuous_intensity(&c, 1.0 / 3.0).unwrap(), 1.5, max_relative = 1e-15);
        assert!(continuous_intensity(&c, -1e-9).is_err());
        assert!(continuous_intensity(&c, 1.0 + 1e-9).is_err());
    }

    #[test]
    fn segment_examples() {
        let c8 = cfg(8);
        assert_eq!(segment_of(&c8, 0.0).unwrap().get(), 1);
        assert_eq!(segment_of(&c8, 1.0).unwrap().get(), 8);
        assert_eq!(segment_of(&cfg(4), 0.25).unwrap().get(), 2);
        assert_eq!(segment_of(&cfg(4), 0.2499).unwrap().get(), 1);
        assert!(segment_of(&c8, 1.5).is_err());
        let long = ZenoConfig { length: 3.0, ..cfg(3) };
        for k in 1..3 {
            assert_eq!(segment_of(&long, k as f64).unwrap().get(), k + 1);
        }
    }

    #[test]
    fn measured_examples() {
        let c2 = cfg(2);
        assert_eq!(measured_intensity(&c2, 0.0).unwrap(), 1.0);
        assert_relative_eq!(measured_intensity(&c2, 1.0).unwrap(), 0.25, max_relative = 1e-15);
        // Both medium formulas at the boundary give cos²(π/4).
        let upstream = segment_intensity(&c2, SegmentIndex::new(1).unwrap(), 0.5).unwrap();
        let downstream = segment_intensity(&c2, SegmentIndex::new(2).unwrap(), 0.5).unwrap();
        assert_relative_eq!(upstream, 0.5, max_relative = 1e-15);
        assert_relative_eq!(downstream, 0.5, max_relative = 1e-15);
        assert_eq!(measured_intensity(&c2, 0.5).unwrap(), downstream);
        assert!(segment_intensity(&c2, SegmentIndex::new(3).unwrap(), 0.5).is_err());
    }

    #[test]
    fn zeno_output_examples() {
        assert_eq!(zeno_output(&cfg(1)).unwrap(), 0.0);
        assert_relative_eq!(zeno_output(&cfg(2)).unwrap(), 0.25, max_relative = 1e-15);
        assert_relative_eq!(zeno_output(&cfg(4)).unwrap(), RATIO_4, max_relative = 1e-14);
        assert_relative_eq!(zeno_output(&cfg(10)).unwrap(), RATIO_10, max_relative = 1e-14);
        assert!(zeno_output(&cfg(0)).is_err());
        let scaled = ZenoConfig { i0: 3.5, ..cfg(10) };
        assert_relative_eq!(zeno_output(&scaled).unwrap(), 3.5 * RATIO_10, max_relative = 1e-14);
    }

    #[test]
    fn non_quarter_turn_has_nonzero_single_stage_output() {
        let c = ZenoConfig {
            total_angle: FRAC_PI_3,
            ..cfg(1)
        };
        assert_relative_eq!(zeno_output(&c).unwrap(), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn log_domain_branch_is_continuous_with_powi() {
        let below = ZenoConfig::with_n(LOG_DOMAIN_THRESHOLD);
        let above = ZenoConfig::with_n(LOG_DOMAIN_THRESHOLD + 1);
        let exact = [0.856_876_968_413_839_278_439_470_2, 0.864_721_108_601_727_544];
        assert_relative_eq!(zeno_output(&below).unwrap(), exact[0], max_relative = 1e-14);
        assert_relative_eq!(zeno_output(&above).unwrap(), exact[1], max_relative = 1e-14);
    }

    #[test]
    fn huge_stage_counts_stay_monotone() {
        let below = ZenoConfig::with_n(1_000_000);
        let above = ZenoConfig::with_n(1_000_001);
        let d_below = asymptotic_deficit(&below).unwrap();
        let d_above = asymptotic_deficit(&above).unwrap();
        assert!((d_below - d_above).abs() < 1e-9, "{d_below} vs {d_above}");
        let r_below = zeno_output(&below).unwrap();
        let r_above = zeno_output(&above).unwrap();
        assert!(r_above > r_below && r_above - r_below < 1e-11);
    }

    #[test]
    fn deficit_examples() {
        assert_eq!(asymptotic_deficit(&cfg(1)).unwrap(), 1.0);
        let limit = asymptotic_deficit_limit(FRAC_PI_2);
        assert_relative_eq!(limit, PI * PI / 4.0);

        // The leading correction is −(π/2)⁴/(2N) ≈ −3.04/N, so N = 100 sits 1.2 % below the limit.
        let d100 = asymptotic_deficit(&cfg(100)).unwrap();
        assert_relative_eq!(d100, DEFICIT_100, max_relative = 1e-10);
        let corrected = limit - FRAC_PI_2.powi(4) / 2.0 / 100.0;
        assert!((d100 - corrected).abs() / limit < 1e-3);

        let d = asymptotic_deficit(&cfg(1_000_000)).unwrap();
        assert!((d - limit).abs() / limit < 1e-4);
        assert_relative_eq!(d, DEFICIT_1E6, max_relative = 1e-9);
    }

    #[test]
    fn sweep_examples() {
        let r = zeno_sweep(&[1, 2], &ZenoConfig::default()).unwrap();
        assert_eq!(
            r.rows[0],
            SweepRow {
                n: 1,
                ratio: 0.0,
                deficit_times_n: 1.0
            }
        );
        assert_eq!(r.rows[1].n, 2);
        assert_relative_eq!(r.rows[1].ratio, 0.25, max_relative = 1e-15);

        let r = zeno_sweep(
            &[4],
            &ZenoConfig {
                i0: 9.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(r.rows[0].ratio, RATIO_4, max_relative = 1e-14);

        let r = zeno_sweep(&[1000], &ZenoConfig::default()).unwrap();
        let ratio = r.rows[0].ratio;
        assert!((1.0 - 2.47 / 1000.0 - 1e-4..=1.0 - 2.46 / 1000.0 + 1e-4).contains(&ratio));
        assert_relative_eq!(ratio, RATIO_1000, max_relative = 1e-12);

        assert!(zeno_sweep(&[], &ZenoConfig::default()).is_err());
        assert!(zeno_sweep(&[3, 0], &ZenoConfig::default()).is_err());
    }

    #[test]
    fn sweep_preserves_input_order() {
        let ns = [64, 3, 1024, 1, 7];
        let r = zeno_sweep(&ns, &ZenoConfig::default()).unwrap();
        assert_eq!(r.rows.iter().map(|row| row.n).collect::<Vec<_>>(), ns);
    }

    #[test]
    fn ratio_is_non_decreasing_up_to_1024() {
        let ns: Vec<usize> = (1..=1024).collect();
        let rows = zeno_sweep(&ns, &ZenoConfig::default()).unwrap().rows;
        for w in rows.windows(2) {
            assert!(w[1].ratio >= w[0].ratio, "N={} -> {}", w[0].n, w[1].n);
        }
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.ratio)));
    }

    #[test]
    fn trace_examples() {
        let c1 = cfg(1);
        let t = sample_trace(&c1, TraceKind::Continuous, 10).unwrap();
        assert_eq!(t.points.len(), 11);
        assert_eq!(t.points[0], (0.0, 1.0));
        assert_eq!(t.last(), (1.0, 0.0));
        assert!(sample_trace(&c1, TraceKind::Measured, 1).is_err());

        let c4 = cfg(4);
        let t = sample_trace(&c4, TraceKind::Measured, 50).unwrap();
        assert_eq!(t.points.len(), 200);
        for k in 1..4 {
            let (za, ia) = t.points[k * 50 - 1];
            let (zb, ib) = t.points[k * 50];
            assert_eq!(za, zb);
            assert!((ia - ib).abs() < 1e-12, "boundary {k}");
        }

        let c32 = cfg(32);
        let t = sample_trace(&c32, TraceKind::Measured, 5).unwrap();
        assert_relative_eq!(t.last().1, RATIO_32, max_relative = 1e-12);
        assert_eq!(t.last().0, 1.0);
    }

    #[test]
    fn traces_respect_their_invariants() {
        for n in [1, 2, 3, 8, 33] {
            let c = ZenoConfig {
                i0: 2.5,
                length: 0.7,
                ..cfg(n)
            };
            let cont = sample_trace(&c, TraceKind::Continuous, 7).unwrap();
            assert!(cont.points.windows(2).all(|w| w[1].0 > w[0].0));
            let meas = sample_trace(&c, TraceKind::Measured, 7).unwrap();
            for (k, w) in meas.points.windows(2).enumerate() {
                if (k + 1) % 7 == 0 {
                    assert_eq!(w[1].0, w[0].0);
                } else {
                    assert!(w[1].0 > w[0].0);
                }
            }
            for t in [&cont, &meas] {
                assert_eq!(t.points[0].0, 0.0);
                assert_eq!(t.last().0, 0.7);
                assert!(t.points.iter().all(|&(_, i)| (0.0..=2.5 * (1.0 + 1e-12)).contains(&i)));
            }
        }
    }

    #[test]
    fn closed_forms_match_chain_propagation() {
        for n in 1..=256 {
            let chain = build_measured_chain(n, FRAC_PI_2, 1.0, 1.0, FRAC_PI_2).unwrap();
            let via_chain = propagate(&chain).unwrap().output.intensity();
            let closed = measured_intensity(&cfg(n), 1.0).unwrap();
            assert!(
                (via_chain - closed).abs() <= 1e-12 * closed.max(f64::MIN_POSITIVE),
                "N={n}"
            );
        }

        // Truncating a fine unmeasured chain after k media samples Eq. 1 at z = k·L/N.
        let n = 200;
        let chain = build_unmeasured_chain(n, FRAC_PI_2, 1.0, 1.0).unwrap();
        let states = propagate(&chain).unwrap().states;
        let c = cfg(1);
        for (k, s) in states.iter().enumerate() {
            let z = (k + 1) as f64 / n as f64;
            let closed = continuous_intensity(&c, z.min(1.0)).unwrap();
            assert!((s.intensity_along(FRAC_PI_2) - closed).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn boundaries_are_continuous_but_kinked() {
        for n in [2, 4, 8, 16, 32] {
            let c = cfg(n);
            let h = 1e-6 * c.length;
            for k in 1..n {
                let zb = c.length * k as f64 / n as f64;
                let up = segment_intensity(&c, SegmentIndex::new(k).unwrap(), zb).unwrap();
                let down = segment_intensity(&c, SegmentIndex::new(k + 1).unwrap(), zb).unwrap();
                assert!((up - down).abs() < 1e-13, "N={n} k={k}");

                let left = (measured_intensity(&c, zb).unwrap() - measured_intensity(&c, zb - h).unwrap()) / h;
                let right = (measured_intensity(&c, zb + h).unwrap() - measured_intensity(&c, zb).unwrap()) / h;
                // Upstream the beam is still turning away from y; a fresh projection restarts at zero slope.
                assert!(left < 0.0);
                assert!(
                    (left - right).abs() > 1e-3 * left.abs(),
                    "N={n} k={k}: {left} vs {right}"
                );
            }
        }
    }

    #[test]
    fn measurement_slows_the_decay() {
        for n in [2, 4, 8, 16, 32] {
            let c = cfg(n);
            for j in 1..10_000 {
                let z = j as f64 / 10_000.0;
                let m = measured_intensity(&c, z).unwrap();
                let f = continuous_intensity(&c, z).unwrap();
                assert!(m >= f - 1e-12, "N={n} z={z}");
            }
        }
    }

    #[test]
    fn intensities_scale_linearly_in_i0() {
        for n in [1, 3, 9] {
            let unit = cfg(n);
            let scaled = ZenoConfig { i0: 4.0, ..unit };
            for z in [0.0, 0.13, 0.5, 0.91, 1.0] {
                assert_eq!(
                    4.0 * measured_intensity(&unit, z).unwrap(),
                    measured_intensity(&scaled, z).unwrap()
                );
                assert_eq!(
                    4.0 * continuous_intensity(&unit, z).unwrap(),
                    continuous_intensity(&scaled, z).unwrap()
                );
            }
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(ZenoConfig { length: 0.0, ..cfg(2) }.validate().is_err());
        assert!(ZenoConfig { i0: -1.0, ..cfg(2) }.validate().is_err());
        assert!(ZenoConfig {
            total_angle: f64::NAN,
            ..cfg(2)
        }
        .validate()
        .is_err());
        assert!(cfg(0).validate().is_err());
    }
}

//! Stochastic readings of the measured chain.
//!
//! The photon-ensemble model is an addition on top of the classical
//! intensity law: each photon meets `N` polarizers and survives each one
//! independently with the Malus probability `cos²(total_angle/N)`, so the
//! survival probability equals the intensity ratio of the measured chain.
//!
//! All randomness comes from ChaCha8 keyed by the user seed and addressed by
//! position: the stage-`k` draw of photon `i` is 64-bit word
//! `i·N + k` of stream 0, and jitter trial `t` owns stream `t + 1`. Results
//! therefore do not depend on chunk size or thread count.

use std::f64::consts::FRAC_PI_2;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elements::{propagate, ElementChain, OpticalElement};
use crate::error::{Error, Result};
use crate::polarization::JonesVector;
use crate::zeno::{zeno_output, ZenoConfig};

pub const DEFAULT_CHUNK_SIZE: usize = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub photons: u64,
    pub seed: u64,
    /// Photons per parallel work item; has no effect on the result.
    pub chunk_size: usize,
    /// Worker threads; `None` uses the ambient rayon pool.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl MonteCarloConfig {
    pub fn new(photons: u64, seed: u64) -> Self {
        Self {
            photons,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalEstimate {
    /// Fraction of photons that passed every stage.
    pub mean: f64,
    /// Bernoulli standard error, `sqrt(mean·(1 − mean)/photons)`.
    pub std_error: f64,
    pub photons: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub estimate: SurvivalEstimate,
    /// Closed-form survival probability `[cos²(total_angle/N)]^N`.
    pub exact: f64,
    /// `(mean − exact)/std_error`. With a zero standard error this is 0 when
    /// the estimate is exact and ±∞ otherwise.
    pub z_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterConfig {
    /// Standard deviation of each rotator's angle error, radians.
    pub sigma: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterSummary {
    pub mean_ratio: f64,
    /// Sample standard deviation across trials.
    pub std_dev: f64,
    pub trials: usize,
}

impl JitterSummary {
    pub fn std_error(&self) -> f64 {
        self.std_dev / (self.trials as f64).sqrt()
    }
}

fn in_pool<T: Send>(threads: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(work()),
        Some(0) => Err(Error::invalid("threads", "must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid("threads", e.to_string()))?;
            Ok(pool.install(work))
        }
    }
}

/// Uniform in `[0, 1)` from the top 53 bits.
fn unit_interval(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Counts photons in `[start, end)` that survive all `stages` draws.
fn count_survivors(seed_rng: &ChaCha8Rng, start: u64, end: u64, stages: usize, p: f64) -> u64 {
    let mut rng = seed_rng.clone();
    // two 32-bit words per draw
    rng.set_word_pos(2 * start as u128 * stages as u128);
    let mut survivors = 0;
    for _ in start..end {
        let mut alive = true;
        for _ in 0..stages {
            alive &= unit_interval(rng.next_u64()) < p;
        }
        survivors += u64::from(alive);
    }
    survivors
}

/// Photon-by-photon estimate of the probability of passing all `N` stages.
pub fn mc_survival(cfg: &ZenoConfig, mc: &MonteCarloConfig) -> Result<SurvivalEstimate> {
    cfg.validate()?;
    if mc.photons == 0 {
        return Err(Error::invalid("photons", "at least one photon is required"));
    }
    if mc.chunk_size == 0 {
        return Err(Error::invalid("chunk_size", "must be at least 1"));
    }
    let p = cfg.stage_transmission();
    let stages = cfg.n;
    let base = ChaCha8Rng::seed_from_u64(mc.seed);
    let chunk = mc.chunk_size as u64;
    let chunks = mc.photons.div_ceil(chunk);

    let survivors: u64 = in_pool(mc.threads, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * chunk;
                let end = (start + chunk).min(mc.photons);
                count_survivors(&base, start, end, stages, p)
            })
            .sum()
    })?;

    let photons = mc.photons as f64;
    let mean = survivors as f64 / photons;
    Ok(SurvivalEstimate {
        mean,
        std_error: (mean * (1.0 - mean) / photons).sqrt(),
        photons: mc.photons,
    })
}

/// Runs [`mc_survival`] and scores it against the closed form.
pub fn mc_survival_exact_check(cfg: &ZenoConfig, mc: &MonteCarloConfig) -> Result<ExactCheck> {
    let estimate = mc_survival(cfg, mc)?;
    let exact = zeno_output(&ZenoConfig { i0: 1.0, ..*cfg })?;
    let diff = estimate.mean - exact;
    let z_score = if estimate.std_error > 0.0 {
        diff / estimate.std_error
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    };
    Ok(ExactCheck {
        estimate,
        exact,
        z_score,
    })
}

/// `E[∏ cos²(θ + εᵢ)]` for independent `εᵢ ~ N(0, σ²)` and `θ = total_angle/N`:
/// `[½(1 + e^{−2σ²}·cos 2θ)]^N`.
pub fn jitter_expectation(cfg: &ZenoConfig, sigma: f64) -> f64 {
    let factor = 0.5 * (1.0 + (-2.0 * sigma * sigma).exp() * (2.0 * cfg.angle_per_stage()).cos());
    factor.powi(cfg.n as i32)
}

fn jittered_ratio(cfg: &ZenoConfig, noise: &Normal<f64>, seed: u64, trial: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    let nominal = cfg.angle_per_stage();
    let length = cfg.segment_length();
    let elements = (0..cfg.n)
        .flat_map(|_| {
            [
                OpticalElement::faraday(nominal + noise.sample(&mut rng), length),
                OpticalElement::ideal_polarizer(FRAC_PI_2),
            ]
        })
        .collect();
    let input = JonesVector::linear_polarized(1.0, FRAC_PI_2)?;
    let chain = ElementChain::new(input, elements, "jittered");
    Ok(propagate(&chain)?.output.intensity())
}

/// Output ratio of the measured chain when every rotator's angle carries an
/// independent Gaussian error.
pub fn jittered_output(cfg: &ZenoConfig, jitter: &JitterConfig) -> Result<JitterSummary> {
    cfg.validate()?;
    if jitter.trials == 0 {
        return Err(Error::invalid("trials", "at least one trial is required"));
    }
    if !(jitter.sigma.is_finite() && jitter.sigma >= 0.0) {
        return Err(Error::invalid(
            "sigma",
            format!("must be finite and non-negative, got {}", jitter.sigma),
        ));
    }
    if jitter.sigma == 0.0 {
        return Ok(JitterSummary {
            mean_ratio: zeno_output(&ZenoConfig { i0: 1.0, ..*cfg })?,
            std_dev: 0.0,
            trials: jitter.trials,
        });
    }

    let noise = Normal::new(0.0, jitter.sigma).map_err(|e| Error::invalid("sigma", e.to_string()))?;
    let ratios = in_pool(jitter.threads, || {
        (0..jitter.trials)
            .into_par_iter()
            .map(|t| jittered_ratio(cfg, &noise, jitter.seed, t))
            .collect::<Result<Vec<f64>>>()
    })??;

    let n = ratios.len() as f64;
    let mean_ratio = ratios.iter().sum::<f64>() / n;
    let std_dev = if ratios.len() > 1 {
        (ratios.iter().map(|r| (r - mean_ratio).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(JitterSummary {
        mean_ratio,
        std_dev,
        trials: jitter.trials,
    })
}

//! Seeded synthetic datasets and reference predictors.
//!
//! Every video draws from its own RNG, derived from the master seed and the
//! video id, so output does not depend on generation order.

use std::ops::RangeInclusive;

use rand::Rng;
use rand_distr::{Distribution, Normal};

pub use crate::annotations::mean_anomaly_interval;
use crate::annotations::{DatasetManifest, HorizonConfig, VideoAnnotation};
use crate::error::{Error, Result};
use crate::scores::{score_set, ScoreMatrix, ScoreSet};
use crate::seed::rng_for;

/// Parameters of a synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_accident_videos: usize,
    pub n_safe_videos: usize,
    pub fps: f64,
    pub video_len_frames: RangeInclusive<usize>,
    /// Range for `accident - anomaly`, in seconds.
    pub anomaly_interval_seconds: (f64, f64),
    /// The accident never happens before this frame.
    pub accident_margin_frames: usize,
    pub horizon_len: usize,
    pub snippet_len: usize,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n_accident_videos: 10,
            n_safe_videos: 10,
            fps: HorizonConfig::DEFAULT_FPS,
            video_len_frames: 100..=200,
            anomaly_interval_seconds: (0.5, 3.0),
            accident_margin_frames: 40,
            horizon_len: HorizonConfig::DEFAULT_HORIZON_LEN,
            snippet_len: HorizonConfig::DEFAULT_SNIPPET_LEN,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    /// Interval bounds in whole frames.
    fn interval_frames(&self) -> Result<RangeInclusive<usize>> {
        let (lo, hi) = self.anomaly_interval_seconds;
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
            return Err(Error::InfeasibleScenario(format!(
                "anomaly interval range [{lo}, {hi}] s is empty or negative"
            )));
        }
        // Tolerate float noise such as 0.3 * 10 = 3.0000000000000004.
        let lo_frames = (lo * self.fps - 1e-9).ceil() as usize;
        let hi_frames = (hi * self.fps + 1e-9).floor() as usize;
        if lo_frames > hi_frames {
            return Err(Error::InfeasibleScenario(format!(
                "anomaly interval range [{lo}, {hi}] s contains no whole frame count at {} fps",
                self.fps
            )));
        }
        Ok(lo_frames..=hi_frames)
    }

    fn validate(&self) -> Result<RangeInclusive<usize>> {
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(Error::InfeasibleScenario("fps must be positive".into()));
        }
        let (len_lo, len_hi) = (*self.video_len_frames.start(), *self.video_len_frames.end());
        if len_lo == 0 || len_lo > len_hi {
            return Err(Error::InfeasibleScenario(format!(
                "video length range {len_lo}..={len_hi} is empty"
            )));
        }
        let interval = self.interval_frames()?;
        if self.n_accident_videos > 0 {
            let earliest_accident = self.accident_margin_frames.max(*interval.end());
            if earliest_accident >= len_lo {
                return Err(Error::InfeasibleScenario(format!(
                    "accident must fall at or after frame {earliest_accident} \
                     (interval up to {} frames, margin {}) but videos may have only {len_lo} frames",
                    interval.end(),
                    self.accident_margin_frames
                )));
            }
        }
        Ok(interval)
    }
}

/// Id of the `index`-th accident video.
pub fn accident_video_id(index: usize) -> String {
    format!("acc_{index:04}")
}

/// Id of the `index`-th accident-free video.
pub fn safe_video_id(index: usize) -> String {
    format!("safe_{index:04}")
}

/// Draws a manifest: accident videos first, then accident-free ones.
pub fn generate_dataset(cfg: &ScenarioConfig) -> Result<DatasetManifest> {
    let interval = cfg.validate()?;
    let horizon = HorizonConfig::new(cfg.horizon_len, cfg.snippet_len, cfg.fps)?;
    let mut videos = Vec::with_capacity(cfg.n_accident_videos + cfg.n_safe_videos);

    for i in 0..cfg.n_accident_videos {
        let id = accident_video_id(i);
        let mut rng = rng_for(cfg.seed, &id);
        let len = rng.random_range(cfg.video_len_frames.clone());
        let gap = rng.random_range(interval.clone());
        let accident = rng.random_range(cfg.accident_margin_frames.max(gap)..=len - 1);
        let end = (accident + cfg.fps.round() as usize).min(len - 1);
        videos.push(VideoAnnotation::new(
            id,
            cfg.fps,
            len,
            Some(accident - gap),
            Some(accident),
            Some(end),
        )?);
    }
    for i in 0..cfg.n_safe_videos {
        let id = safe_video_id(i);
        let mut rng = rng_for(cfg.seed, &id);
        let len = rng.random_range(cfg.video_len_frames.clone());
        videos.push(VideoAnnotation::safe(id, cfg.fps, len)?);
    }
    DatasetManifest::new(horizon, videos)
}

/// Shape of a reference predictor's scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredictorKind {
    /// Exactly 1 at the step where the accident happens, 0 elsewhere.
    /// Silent before the anomaly onset, when the accident is not yet
    /// foreseeable.
    Oracle,
    /// Every entry equals the given value.
    Constant(f64),
    /// Independent uniform scores.
    Random,
    /// Oracle plus a saturated spike of `spike_len` frames starting
    /// `lead_seconds` before the anomaly onset.
    EarlyFalseAlarm { lead_seconds: f64, spike_len: usize },
    /// Linear ramp reaching 1 at the accident step over `lead_seconds`,
    /// plus Gaussian noise.
    NoisyDecay { lead_seconds: f64, noise_sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorSpec {
    pub kind: PredictorKind,
    pub seed: u64,
}

impl PredictorSpec {
    pub fn new(kind: PredictorKind, seed: u64) -> Result<Self> {
        let bad = |why: String| Err(Error::InvalidArgument(why));
        match kind {
            PredictorKind::Constant(c) if !(0.0..=1.0).contains(&c) => {
                return bad(format!("constant score {c} outside [0, 1]"));
            }
            PredictorKind::EarlyFalseAlarm { lead_seconds, .. }
                if !(lead_seconds.is_finite() && lead_seconds >= 0.0) =>
            {
                return bad(format!("lead must be >= 0 s, got {lead_seconds}"));
            }
            PredictorKind::NoisyDecay {
                lead_seconds,
                noise_sigma,
            } => {
                if !(lead_seconds.is_finite() && lead_seconds > 0.0) {
                    return bad(format!("ramp lead must be > 0 s, got {lead_seconds}"));
                }
                if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
                    return bad(format!("noise sigma must be >= 0, got {noise_sigma}"));
                }
            }
            _ => {}
        }
        Ok(PredictorSpec { kind, seed })
    }
}

/// Scores every frame of `video`. Rows after the accident frame are zero.
pub fn predict(
    spec: &PredictorSpec,
    video: &VideoAnnotation,
    horizon: &HorizonConfig,
) -> Result<ScoreMatrix> {
    let t = horizon.horizon_len();
    let accident = video.accident_frame();
    let mut rng = rng_for(spec.seed, video.video_id());
    let noise = match spec.kind {
        PredictorKind::NoisyDecay { noise_sigma, .. } => {
            Some(Normal::new(0.0, noise_sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?)
        }
        _ => None,
    };
    let spike = match (spec.kind, video.anomaly_frame(), accident) {
        (
            PredictorKind::EarlyFalseAlarm {
                lead_seconds,
                spike_len,
            },
            Some(anomaly),
            Some(accident),
        ) if spike_len > 0 => {
            let start = anomaly.saturating_sub((lead_seconds * video.fps()).round() as usize);
            Some(start..=(start + spike_len - 1).min(accident))
        }
        _ => None,
    };

    let mut matrix = ScoreMatrix::new(video.video_id(), t)?;
    for t0 in 0..video.num_frames() {
        if accident.is_some_and(|a| t0 > a) {
            matrix.insert(t0, vec![0.0; t])?;
            continue;
        }
        let oracle = |step: usize| match (video.anomaly_frame(), accident) {
            (Some(anomaly), Some(a)) if t0 >= anomaly && t0 + step == a => 1.0,
            _ => 0.0,
        };
        let row: Vec<f64> = match spec.kind {
            PredictorKind::Oracle => (1..=t).map(oracle).collect(),
            PredictorKind::Constant(c) => vec![c; t],
            PredictorKind::Random => (0..t).map(|_| rng.random::<f64>()).collect(),
            PredictorKind::EarlyFalseAlarm { .. } => {
                if spike.as_ref().is_some_and(|s| s.contains(&t0)) {
                    vec![1.0; t]
                } else {
                    (1..=t).map(oracle).collect()
                }
            }
            PredictorKind::NoisyDecay { lead_seconds, .. } => {
                let ramp = lead_seconds * video.fps();
                let normal = noise.as_ref().expect("noise distribution for noisy decay");
                (1..=t)
                    .map(|step| {
                        let base = match accident {
                            Some(a) => {
                                let distance = a as f64 - (t0 + step) as f64;
                                (1.0 - distance / ramp).max(0.0)
                            }
                            None => 0.0,
                        };
                        (base + normal.sample(&mut rng)).clamp(0.0, 1.0)
                    })
                    .collect()
            }
        };
        matrix.insert(t0, row)?;
    }
    Ok(matrix)
}

/// Scores every video in the manifest.
pub fn predict_dataset(spec: &PredictorSpec, manifest: &DatasetManifest) -> Result<ScoreSet> {
    score_set(
        manifest
            .videos()
            .iter()
            .map(|v| predict(spec, v, manifest.horizon()))
            .collect::<Result<Vec<_>>>()?,
    )
}

use std::fmt;
use std::str::FromStr;

use crate::annotations::{DatasetManifest, VideoAnnotation};
use crate::error::{Error, Result};
use crate::scores::{ScoreMatrix, ScoreSet};

use super::roc::check_lambda;
use super::samples::{main_samples, scores_for, ScoredSamples};

/// Which alarms count towards time-to-accident.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TtaMode {
    /// Only alarms at or after the annotated anomaly onset.
    Revised,
    /// Any alarm from the first frame, as in older protocols.
    Legacy,
}

impl fmt::Display for TtaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TtaMode::Revised => "revised",
            TtaMode::Legacy => "legacy",
        })
    }
}

impl FromStr for TtaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "revised" => Ok(TtaMode::Revised),
            "legacy" => Ok(TtaMode::Legacy),
            other => Err(Error::InvalidArgument(format!(
                "unknown TTA mode `{other}`"
            ))),
        }
    }
}

/// Seconds from the first qualifying alarm to the accident; 0 on a miss.
pub fn tta(matrix: &ScoreMatrix, video: &VideoAnnotation, tau: f64, mode: TtaMode) -> Result<f64> {
    let (anomaly, accident) = video.events()?;
    let first = match mode {
        TtaMode::Revised => anomaly,
        TtaMode::Legacy => 0,
    };
    Ok(matrix
        .first_alarm(first..=accident, tau)
        .map_or(0.0, |alarm| video.frames_to_seconds(accident - alarm)))
}

/// Fraction of `negatives` at or above `tau`.
pub fn false_alarm_rate(negatives: &[f64], tau: f64) -> Result<f64> {
    if negatives.is_empty() {
        return Err(Error::EmptySamples("no negative samples".into()));
    }
    let hits = negatives.iter().filter(|&&n| n >= tau).count();
    Ok(hits as f64 / negatives.len() as f64)
}

/// Most sensitive threshold whose false alarm rate stays within `lambda`.
///
/// Candidates are the unique sample scores plus `+inf`, which never alarms
/// and therefore always qualifies.
pub fn operating_threshold(samples: &ScoredSamples, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let negatives = &samples.negatives;
    if negatives.is_empty() {
        return Err(Error::EmptySamples("no negative samples".into()));
    }
    let mut sorted_neg = negatives.clone();
    sorted_neg.sort_by(f64::total_cmp);
    let mut candidates: Vec<f64> = samples.positives.iter().chain(negatives).copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    candidates.push(f64::INFINITY);

    let n = sorted_neg.len() as f64;
    for tau in candidates {
        let below = sorted_neg.partition_point(|&v| v < tau);
        let far = (sorted_neg.len() - below) as f64 / n;
        if far <= lambda {
            return Ok(tau);
        }
    }
    unreachable!("the +inf candidate has zero false alarms")
}

/// Mean TTA over accident videos at the operating threshold for `lambda`.
pub fn mtta(
    manifest: &DatasetManifest,
    scores: &ScoreSet,
    lambda: f64,
    mode: TtaMode,
) -> Result<f64> {
    let samples = main_samples(manifest, scores)?;
    let tau = operating_threshold(&samples, lambda)?;
    mean_tta_at(manifest, scores, tau, mode)
}

/// Mean TTA over accident videos at a fixed threshold.
pub fn mean_tta_at(
    manifest: &DatasetManifest,
    scores: &ScoreSet,
    tau: f64,
    mode: TtaMode,
) -> Result<f64> {
    let per_video = per_video_tta(manifest, scores, tau)?;
    if per_video.is_empty() {
        return Err(Error::EmptySamples(
            "manifest has no accident videos".into(),
        ));
    }
    let total: f64 = per_video
        .iter()
        .map(|r| match mode {
            TtaMode::Revised => r.revised,
            TtaMode::Legacy => r.legacy,
        })
        .sum();
    Ok(total / per_video.len() as f64)
}

/// TTA of one accident video under both modes.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoTta {
    pub video_id: String,
    pub interval_seconds: f64,
    pub legacy: f64,
    pub revised: f64,
}

/// Both TTA variants for every accident video, ordered by video id.
pub fn per_video_tta(
    manifest: &DatasetManifest,
    scores: &ScoreSet,
    tau: f64,
) -> Result<Vec<VideoTta>> {
    manifest
        .videos_by_id()
        .into_iter()
        .filter(|v| v.has_accident())
        .map(|video| {
            let matrix = scores_for(manifest, scores, video)?;
            Ok(VideoTta {
                video_id: video.video_id().to_string(),
                interval_seconds: video.anomaly_interval_seconds()?,
                legacy: tta(matrix, video, tau, TtaMode::Legacy)?,
                revised: tta(matrix, video, tau, TtaMode::Revised)?,
            })
        })
        .collect()
}

/// Alarm events per minute of negative footage.
///
/// Negative footage is every pre-anomaly region plus every accident-free
/// video. An event is a maximal run of consecutive alarming frames; a frame
/// without a score row breaks the run.
pub fn false_alarms_per_minute(
    manifest: &DatasetManifest,
    scores: &ScoreSet,
    tau: f64,
) -> Result<f64> {
    let mut events = 0usize;
    let mut negative_frames = 0usize;
    for video in manifest.videos_by_id() {
        let end = match video.anomaly_frame() {
            Some(0) => continue,
            Some(anomaly) => anomaly - 1,
            None => video.num_frames() - 1,
        };
        let matrix = scores_for(manifest, scores, video)?;
        negative_frames += end + 1;
        let mut previous_alarm: Option<usize> = None;
        for (t0, m) in matrix.row_maxima(0..=end) {
            if m >= tau {
                if previous_alarm.is_none_or(|p| p + 1 != t0) {
                    events += 1;
                }
                previous_alarm = Some(t0);
            }
        }
    }
    if negative_frames == 0 {
        return Err(Error::EmptySamples(
            "dataset has no negative footage".into(),
        ));
    }
    let minutes = negative_frames as f64 / manifest.fps() / 60.0;
    Ok(events as f64 / minutes)
}

//! FAR-constrained evaluation of accident anticipation scores.
//!
//! The main AUC compares anomaly-to-accident segments against pre-anomaly
//! and accident-free footage. Per-horizon AUCs use 0.5 s clips ending 0.5 s,
//! 1.0 s, and 1.5 s before the accident. All AUCs are averages of recall over
//! false alarm rates in `[0, lambda]`. Mean time-to-accident is measured at
//! the most sensitive threshold whose false alarm rate stays within `lambda`.

mod roc;
mod samples;
mod tta;

pub use roc::{build_roc, truncated_auc, RocCurve, RocPoint};
pub use samples::{
    interval_samples, main_samples, segment_score, IntervalClip, ScoredSamples,
    INTERVAL_CLIP_SECONDS, INTERVAL_OFFSETS,
};
pub use tta::{
    false_alarm_rate, false_alarms_per_minute, mean_tta_at, mtta, operating_threshold,
    per_video_tta, tta, TtaMode, VideoTta,
};

use serde::Serialize;

use crate::annotations::DatasetManifest;
use crate::error::Result;
use crate::scores::ScoreSet;

/// FAR bound used when none is given.
pub const DEFAULT_LAMBDA: f64 = 0.1;

/// Mean of the three per-horizon AUCs.
pub fn mauc(auc_0_5s: f64, auc_1_0s: f64, auc_1_5s: f64) -> f64 {
    (auc_0_5s + auc_1_0s + auc_1_5s) / 3.0
}

/// Every metric for one FAR bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub lambda: f64,
    pub auc: f64,
    pub auc_0_5s: f64,
    pub auc_1_0s: f64,
    pub auc_1_5s: f64,
    pub mauc: f64,
    /// `None` when no finite threshold satisfies the bound.
    pub operating_threshold: Option<f64>,
    pub far_at_threshold: f64,
    pub mtta_revised: f64,
    pub mtta_legacy: f64,
    pub false_alarms_per_minute: f64,
    pub positive_count: usize,
    pub negative_count: usize,
}

impl MetricsReport {
    /// The operating threshold with the never-alarming sentinel as `+inf`.
    pub fn threshold(&self) -> f64 {
        self.operating_threshold.unwrap_or(f64::INFINITY)
    }

    /// Copy with every real-valued field rounded to 6 decimal places.
    pub fn rounded(&self) -> Self {
        let r = |x: f64| (x * 1e6).round() / 1e6;
        MetricsReport {
            lambda: r(self.lambda),
            auc: r(self.auc),
            auc_0_5s: r(self.auc_0_5s),
            auc_1_0s: r(self.auc_1_0s),
            auc_1_5s: r(self.auc_1_5s),
            mauc: r(self.mauc),
            operating_threshold: self.operating_threshold.map(r),
            far_at_threshold: r(self.far_at_threshold),
            mtta_revised: r(self.mtta_revised),
            mtta_legacy: r(self.mtta_legacy),
            false_alarms_per_minute: r(self.false_alarms_per_minute),
            positive_count: self.positive_count,
            negative_count: self.negative_count,
        }
    }
}

/// A report together with the curves it was computed from.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub report: MetricsReport,
    pub main_roc: RocCurve,
    /// Curves for the 0.5 s, 1.0 s, and 1.5 s intervals, in that order.
    pub interval_rocs: [RocCurve; 3],
}

/// Runs the full protocol.
pub fn evaluate(
    manifest: &DatasetManifest,
    scores: &ScoreSet,
    lambda: f64,
    seed: u64,
) -> Result<MetricsReport> {
    evaluate_detailed(manifest, scores, lambda, seed).map(|e| e.report)
}

/// Runs the full protocol and keeps the ROC curves.
pub fn evaluate_detailed(
    manifest: &DatasetManifest,
    scores: &ScoreSet,
    lambda: f64,
    seed: u64,
) -> Result<Evaluation> {
    let main = main_samples(manifest, scores)?;
    let main_roc = build_roc(&main.positives, &main.negatives)?;
    let auc = truncated_auc(&main_roc, lambda)?;

    let mut interval_aucs = [0.0; 3];
    let mut interval_rocs = Vec::with_capacity(3);
    for (slot, &offset) in interval_aucs.iter_mut().zip(INTERVAL_OFFSETS.iter()) {
        let s = interval_samples(manifest, scores, offset, seed)?;
        let roc = build_roc(&s.positives, &s.negatives)?;
        *slot = truncated_auc(&roc, lambda)?;
        interval_rocs.push(roc);
    }
    let [auc_0_5s, auc_1_0s, auc_1_5s] = interval_aucs;

    let tau = operating_threshold(&main, lambda)?;
    let per_video = per_video_tta(manifest, scores, tau)?;
    let n = per_video.len() as f64;
    let mtta_revised = per_video.iter().map(|v| v.revised).sum::<f64>() / n;
    let mtta_legacy = per_video.iter().map(|v| v.legacy).sum::<f64>() / n;

    let report = MetricsReport {
        lambda,
        auc,
        auc_0_5s,
        auc_1_0s,
        auc_1_5s,
        mauc: mauc(auc_0_5s, auc_1_0s, auc_1_5s),
        operating_threshold: tau.is_finite().then_some(tau),
        far_at_threshold: false_alarm_rate(&main.negatives, tau)?,
        mtta_revised,
        mtta_legacy,
        false_alarms_per_minute: false_alarms_per_minute(manifest, scores, tau)?,
        positive_count: main.positives.len(),
        negative_count: main.negatives.len(),
    };
    let interval_rocs: [RocCurve; 3] = interval_rocs
        .try_into()
        .expect("one curve per interval offset");
    Ok(Evaluation {
        report,
        main_roc,
        interval_rocs,
    })
}

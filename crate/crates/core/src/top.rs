//! Temporal occurrence labels, snippet sampling, and the weighted BCE loss.
//!
//! A score vector `a_1..a_T` predicted at frame `t0` says how likely the
//! accident is to occur exactly `i` frames later. Training targets put a
//! single 1 at the accident offset `A = accident_frame - t0` when it falls in
//! `1..=T`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annotations::{HorizonConfig, VideoAnnotation};
use crate::error::{Error, Result};

/// Scores are clamped to `[EPS, 1 - EPS]` before taking logarithms.
pub const LOG_EPS: f64 = 1e-7;

/// Positive-class weight used by the reference training setup.
pub const DEFAULT_POSITIVE_WEIGHT: f64 = 10.0;

/// Binary target over `T` future steps with at most one positive entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelVector {
    horizon_len: usize,
    accident_offset: Option<usize>,
}

impl LabelVector {
    pub fn zeros(horizon_len: usize) -> Self {
        LabelVector {
            horizon_len,
            accident_offset: None,
        }
    }

    /// Unit vector at 1-based step `offset`.
    pub fn unit(horizon_len: usize, offset: usize) -> Result<Self> {
        if offset == 0 || offset > horizon_len {
            return Err(Error::InvalidArgument(format!(
                "accident offset {offset} outside 1..={horizon_len}"
            )));
        }
        Ok(LabelVector {
            horizon_len,
            accident_offset: Some(offset),
        })
    }

    pub fn horizon_len(&self) -> usize {
        self.horizon_len
    }

    /// 1-based step holding the positive label, if any.
    pub fn accident_offset(&self) -> Option<usize> {
        self.accident_offset
    }

    /// Label at 1-based step `step`.
    pub fn get(&self, step: usize) -> u8 {
        u8::from(self.accident_offset == Some(step))
    }

    /// `y_1..y_T` as 0/1 values.
    pub fn values(&self) -> Vec<u8> {
        (1..=self.horizon_len).map(|step| self.get(step)).collect()
    }

    /// Target as floats; useful for feeding a perfect prediction back into the loss.
    pub fn as_scores(&self) -> Vec<f64> {
        self.values().into_iter().map(f64::from).collect()
    }
}

/// `S` consecutive frames ending at the current frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SnippetWindow {
    pub start_frame: usize,
    pub end_frame: usize,
}

impl SnippetWindow {
    fn ending_at(end_frame: usize, snippet_len: usize) -> Self {
        SnippetWindow {
            start_frame: end_frame + 1 - snippet_len,
            end_frame,
        }
    }

    /// The current frame `t0`.
    pub fn current_frame(&self) -> usize {
        self.end_frame
    }

    pub fn frame_count(&self) -> usize {
        self.end_frame - self.start_frame + 1
    }
}

/// Training target for a snippet ending at `t0`.
///
/// Accident-free videos, accidents beyond the horizon, and `t0` at or after
/// the accident all give the all-zero label.
pub fn make_label_vector(
    t0: usize,
    video: &VideoAnnotation,
    horizon: &HorizonConfig,
) -> Result<LabelVector> {
    if t0 >= video.num_frames() {
        return Err(Error::FrameOutOfRange {
            video_id: video.video_id().to_string(),
            frame: t0,
            num_frames: video.num_frames(),
        });
    }
    let t = horizon.horizon_len();
    let label = match video.accident_frame() {
        Some(accident) if accident > t0 && accident - t0 <= t => {
            LabelVector::unit(t, accident - t0)?
        }
        _ => LabelVector::zeros(t),
    };
    Ok(label)
}

/// Draws `count` training snippets uniformly, with replacement, among all
/// windows that end at or before the accident frame.
pub fn sample_training_snippets(
    video: &VideoAnnotation,
    horizon: &HorizonConfig,
    count: usize,
    seed: u64,
) -> Result<Vec<SnippetWindow>> {
    let (_, accident) = video.events()?;
    let s = horizon.snippet_len();
    if accident + 1 < s {
        return Err(Error::VideoTooShort {
            video_id: video.video_id().to_string(),
            reason: format!("accident at frame {accident} leaves no {s}-frame snippet"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| SnippetWindow::ending_at(rng.random_range(s - 1..=accident), s))
        .collect())
}

/// Test-time windows sliding over the whole video with the given stride.
pub fn sliding_windows(
    video: &VideoAnnotation,
    horizon: &HorizonConfig,
    stride: usize,
) -> Result<Vec<SnippetWindow>> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let s = horizon.snippet_len();
    if video.num_frames() < s {
        return Err(Error::VideoTooShort {
            video_id: video.video_id().to_string(),
            reason: format!("{} frames < snippet length {s}", video.num_frames()),
        });
    }
    Ok((s - 1..video.num_frames())
        .step_by(stride)
        .map(|end| SnippetWindow::ending_at(end, s))
        .collect())
}

/// Weighted binary cross-entropy over one score vector.
///
/// `L = -(1/T) [w+ log a_A + sum_{t != A} log(1 - a_t)]`; with an all-zero
/// label only the negative sum remains.
pub fn weighted_bce_loss(scores: &[f64], labels: &LabelVector, w_plus: f64) -> Result<f64> {
    if scores.len() != labels.horizon_len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores for a label of length {}",
            scores.len(),
            labels.horizon_len()
        )));
    }
    if !(w_plus.is_finite() && w_plus > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "positive weight must be > 0, got {w_plus}"
        )));
    }
    if let Some(bad) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::InvalidArgument(format!(
            "score {bad} outside [0, 1]"
        )));
    }
    let positive = labels.accident_offset();
    let sum: f64 = scores
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            let a = a.clamp(LOG_EPS, 1.0 - LOG_EPS);
            if positive == Some(idx + 1) {
                w_plus * a.ln()
            } else {
                (1.0 - a).ln()
            }
        })
        .sum();
    Ok((-sum / scores.len() as f64).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn video() -> VideoAnnotation {
        VideoAnnotation::accident("v", 10.0, 100, 50, 80).unwrap()
    }

    #[test]
    fn label_inside_horizon() {
        let h = HorizonConfig::default();
        let label = make_label_vector(73, &video(), &h).unwrap();
        assert_eq!(label.accident_offset(), Some(7));
        let values = label.values();
        assert_eq!(values.len(), 20);
        assert_eq!(values[6], 1);
        assert_eq!(values.iter().map(|&v| v as u32).sum::<u32>(), 1);
    }

    #[test]
    fn label_outside_horizon_or_at_accident() {
        let h = HorizonConfig::default();
        assert_eq!(
            make_label_vector(55, &video(), &h).unwrap(),
            LabelVector::zeros(20)
        );
        assert_eq!(
            make_label_vector(80, &video(), &h).unwrap(),
            LabelVector::zeros(20)
        );
        assert_eq!(
            make_label_vector(60, &video(), &h)
                .unwrap()
                .accident_offset(),
            Some(20)
        );
        assert_eq!(
            make_label_vector(59, &video(), &h)
                .unwrap()
                .accident_offset(),
            None
        );
        assert!(make_label_vector(100, &video(), &h).is_err());

        let safe = VideoAnnotation::safe("s", 10.0, 30).unwrap();
        assert_eq!(
            make_label_vector(10, &safe, &h).unwrap(),
            LabelVector::zeros(20)
        );
    }

    #[test]
    fn training_snippets_end_at_or_before_accident() {
        let h = HorizonConfig::default();
        let windows = sample_training_snippets(&video(), &h, 500, 3).unwrap();
        assert_eq!(windows.len(), 500);
        for w in &windows {
            assert!((4..=80).contains(&w.end_frame));
            assert_eq!(w.frame_count(), 5);
        }
        assert_eq!(
            windows,
            sample_training_snippets(&video(), &h, 500, 3).unwrap()
        );
    }

    #[test]
    fn single_admissible_snippet() {
        let h = HorizonConfig::default();
        let v = VideoAnnotation::accident("v", 10.0, 10, 2, 4).unwrap();
        let windows = sample_training_snippets(&v, &h, 20, 0).unwrap();
        assert!(windows
            .iter()
            .all(|w| w.start_frame == 0 && w.end_frame == 4));

        let short = VideoAnnotation::accident("v", 10.0, 10, 2, 3).unwrap();
        assert!(matches!(
            sample_training_snippets(&short, &h, 1, 0),
            Err(Error::VideoTooShort { .. })
        ));
        let safe = VideoAnnotation::safe("s", 10.0, 10).unwrap();
        assert!(matches!(
            sample_training_snippets(&safe, &h, 1, 0),
            Err(Error::NoAccident(_))
        ));
    }

    #[test]
    fn sliding_window_counts() {
        let h = HorizonConfig::default();
        let v = VideoAnnotation::safe("s", 10.0, 100).unwrap();
        let w = sliding_windows(&v, &h, 1).unwrap();
        assert_eq!(w.len(), 96);
        assert_eq!(w.first().unwrap().end_frame, 4);
        assert_eq!(w.last().unwrap().end_frame, 99);

        let w = sliding_windows(&v, &h, 10).unwrap();
        let ends: Vec<_> = w.iter().map(|w| w.end_frame).collect();
        assert_eq!(ends, (0..10).map(|k| 4 + 10 * k).collect::<Vec<_>>());

        let v5 = VideoAnnotation::safe("s", 10.0, 5).unwrap();
        assert_eq!(
            sliding_windows(&v5, &h, 1).unwrap(),
            vec![SnippetWindow {
                start_frame: 0,
                end_frame: 4
            }]
        );
        let v4 = VideoAnnotation::safe("s", 10.0, 4).unwrap();
        assert!(sliding_windows(&v4, &h, 1).is_err());
        assert!(sliding_windows(&v, &h, 0).is_err());
    }

    #[test]
    fn loss_reference_value() {
        // -(1/2)(10 ln 0.9 + ln(1 - 0.1))
        let oracle = -(10.0 * 0.9f64.ln() + 0.9f64.ln()) / 2.0;
        let label = LabelVector::unit(2, 1).unwrap();
        let loss = weighted_bce_loss(&[0.9, 0.1], &label, 10.0).unwrap();
        assert!((loss - oracle).abs() < 1e-12);
        assert!((loss - 0.579483).abs() < 1e-6);
    }

    #[test]
    fn loss_limits() {
        let label = LabelVector::unit(20, 7).unwrap();
        let loss = weighted_bce_loss(&label.as_scores(), &label, 10.0).unwrap();
        assert!(loss <= 10.0 * LOG_EPS * 10.0, "{loss}");

        let zeros = LabelVector::zeros(20);
        assert!(weighted_bce_loss(&[0.0; 20], &zeros, 10.0).unwrap() <= 10.0 * LOG_EPS * 10.0);
    }

    #[test]
    fn loss_errors() {
        let label = LabelVector::unit(2, 1).unwrap();
        assert!(weighted_bce_loss(&[0.5], &label, 10.0).is_err());
        assert!(weighted_bce_loss(&[0.5, 0.5], &label, 0.0).is_err());
        assert!(weighted_bce_loss(&[0.5, 0.5], &label, -1.0).is_err());
        assert!(weighted_bce_loss(&[0.5, 1.5], &label, 1.0).is_err());
    }

    #[test]
    fn unit_label_bounds() {
        assert!(LabelVector::unit(20, 0).is_err());
        assert!(LabelVector::unit(20, 21).is_err());
        assert_eq!(LabelVector::unit(20, 20).unwrap().get(20), 1);
    }
}

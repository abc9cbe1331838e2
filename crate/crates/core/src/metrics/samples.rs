use rand::Rng;

use crate::annotations::{DatasetManifest, VideoAnnotation};
use crate::error::{Error, Result};
use crate::scores::{ScoreMatrix, ScoreSet};
use crate::seed::rng_for;

/// Length of the pre-accident interval clips and their negative counterparts.
pub const INTERVAL_CLIP_SECONDS: f64 = 0.5;

/// Pre-accident offsets of the per-horizon positives, in seconds.
pub const INTERVAL_OFFSETS: [f64; 3] = [0.5, 1.0, 1.5];

/// Scalar classifier outputs split by ground truth.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoredSamples {
    pub positives: Vec<f64>,
    pub negatives: Vec<f64>,
}

/// Clip score: max over frames in `[first, last]` of the row maximum.
/// Frames without a score row contribute nothing; an all-absent range scores 0.
pub fn segment_score(matrix: &ScoreMatrix, first: usize, last: usize) -> Result<f64> {
    if first > last {
        return Err(Error::InvalidArgument(format!(
            "empty segment [{first}, {last}] in `{}`",
            matrix.video_id()
        )));
    }
    Ok(matrix
        .row_maxima(first..=last)
        .map(|(_, m)| m)
        .fold(0.0, f64::max))
}

/// Looks up and checks the score matrix for `video`.
pub(crate) fn scores_for<'a>(
    manifest: &DatasetManifest,
    scores: &'a ScoreSet,
    video: &VideoAnnotation,
) -> Result<&'a ScoreMatrix> {
    let matrix = scores
        .get(video.video_id())
        .ok_or_else(|| Error::MissingScores(video.video_id().to_string()))?;
    matrix.check_against(video, manifest.horizon().horizon_len())?;
    Ok(matrix)
}

/// Samples for the main AUC and the FAR used by the TTA operating point.
///
/// Each accident video gives one positive (anomaly onset through accident)
/// and, when the anomaly does not start at frame 0, one negative for the
/// frames before it. Each accident-free video gives one whole-video negative.
pub fn main_samples(manifest: &DatasetManifest, scores: &ScoreSet) -> Result<ScoredSamples> {
    let mut samples = ScoredSamples::default();
    for video in manifest.videos_by_id() {
        let matrix = scores_for(manifest, scores, video)?;
        match (video.anomaly_frame(), video.accident_frame()) {
            (Some(anomaly), Some(accident)) => {
                samples
                    .positives
                    .push(segment_score(matrix, anomaly, accident)?);
                if anomaly > 0 {
                    samples
                        .negatives
                        .push(segment_score(matrix, 0, anomaly - 1)?);
                }
            }
            _ => samples
                .negatives
                .push(segment_score(matrix, 0, video.num_frames() - 1)?),
        }
    }
    Ok(samples)
}

/// Frame geometry of the interval clips for one offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalClip {
    /// Frames between the clip's end (exclusive) and the accident.
    pub offset_frames: usize,
    pub clip_frames: usize,
}

impl IntervalClip {
    pub fn new(offset_seconds: f64, fps: f64) -> Result<Self> {
        if !(offset_seconds.is_finite() && offset_seconds >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "interval offset must be >= 0 s, got {offset_seconds}"
            )));
        }
        let clip_frames = (INTERVAL_CLIP_SECONDS * fps).round() as usize;
        if clip_frames == 0 {
            return Err(Error::InvalidArgument(format!(
                "{fps} fps is too low for {INTERVAL_CLIP_SECONDS} s clips"
            )));
        }
        Ok(IntervalClip {
            offset_frames: (offset_seconds * fps).round() as usize,
            clip_frames,
        })
    }

    /// Positive clip `[accident - offset - clip, accident - offset - 1]`, or
    /// `None` when it would start before frame 0.
    pub fn positive_range(&self, accident_frame: usize) -> Option<(usize, usize)> {
        let start = accident_frame.checked_sub(self.offset_frames + self.clip_frames)?;
        Some((start, start + self.clip_frames - 1))
    }
}

/// Samples for the AUC at one pre-accident offset.
///
/// Positives are the `[offset + 0.5 s, offset)` clips before each accident.
/// The same number of 0.5 s negative clips are drawn uniformly over all clip
/// positions in accident-free videos, or in pre-anomaly regions when the
/// dataset has no usable accident-free video.
pub fn interval_samples(
    manifest: &DatasetManifest,
    scores: &ScoreSet,
    offset_seconds: f64,
    seed: u64,
) -> Result<ScoredSamples> {
    let clip = IntervalClip::new(offset_seconds, manifest.fps())?;
    let videos = manifest.videos_by_id();

    let mut positives = Vec::new();
    for video in videos.iter().filter(|v| v.has_accident()) {
        let (_, accident) = video.events()?;
        let matrix = scores_for(manifest, scores, video)?;
        if let Some((first, last)) = clip.positive_range(accident) {
            positives.push(segment_score(matrix, first, last)?);
        }
    }
    if positives.is_empty() {
        return Err(Error::EmptySamples(format!(
            "no accident video is long enough for the {offset_seconds} s interval"
        )));
    }

    // Candidate regions `(video, last admissible frame)`; a region of N frames
    // holds N - clip + 1 clip positions.
    let safe_regions: Vec<(&VideoAnnotation, usize)> = videos
        .iter()
        .filter(|v| !v.has_accident() && v.num_frames() >= clip.clip_frames)
        .map(|v| (*v, v.num_frames()))
        .collect();
    let regions = if safe_regions.is_empty() {
        videos
            .iter()
            .filter_map(|v| v.anomaly_frame().map(|anomaly| (*v, anomaly)))
            .filter(|&(_, len)| len >= clip.clip_frames)
            .collect()
    } else {
        safe_regions
    };
    if regions.is_empty() {
        return Err(Error::EmptySamples(
            "no accident-free video or pre-anomaly region can hold a negative clip".into(),
        ));
    }
    let positions: Vec<usize> = regions
        .iter()
        .map(|&(_, len)| len - clip.clip_frames + 1)
        .collect();
    let total: usize = positions.iter().sum();

    let mut rng = rng_for(seed, &format!("interval-negatives/{}", clip.offset_frames));
    let mut negatives = Vec::with_capacity(positives.len());
    for _ in 0..positives.len() {
        let mut pick = rng.random_range(0..total);
        let mut region = 0;
        while pick >= positions[region] {
            pick -= positions[region];
            region += 1;
        }
        let video = regions[region].0;
        let matrix = scores_for(manifest, scores, video)?;
        negatives.push(segment_score(matrix, pick, pick + clip.clip_frames - 1)?);
    }

    Ok(ScoredSamples {
        positives,
        negatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotations::HorizonConfig;
    use crate::scores::score_set;

    fn constant_matrix(video: &VideoAnnotation, t: usize, value: f64) -> ScoreMatrix {
        let mut m = ScoreMatrix::new(video.video_id(), t).unwrap();
        for t0 in 0..video.num_frames() {
            m.insert(t0, vec![value; t]).unwrap();
        }
        m
    }

    #[test]
    fn segment_max_of_max() {
        let mut m = ScoreMatrix::new("v", 2).unwrap();
        m.insert(10, vec![0.2, 0.3]).unwrap();
        m.insert(11, vec![0.9, 0.1]).unwrap();
        assert_eq!(segment_score(&m, 10, 11).unwrap(), 0.9);
        assert_eq!(segment_score(&m, 0, 9).unwrap(), 0.0);
        assert_eq!(segment_score(&m, 10, 10).unwrap(), 0.3);
        assert!(segment_score(&m, 11, 10).is_err());

        let mut single = ScoreMatrix::new("v", 1).unwrap();
        single.insert(4, vec![0.5]).unwrap();
        assert_eq!(segment_score(&single, 4, 4).unwrap(), 0.5);
    }

    fn manifest(videos: Vec<VideoAnnotation>) -> DatasetManifest {
        DatasetManifest::new(HorizonConfig::default(), videos).unwrap()
    }

    #[test]
    fn main_sample_counts() {
        let acc = VideoAnnotation::accident("a", 10.0, 100, 50, 80).unwrap();
        let safe = VideoAnnotation::safe("s", 10.0, 60).unwrap();
        let scores = score_set([
            constant_matrix(&acc, 20, 0.3),
            constant_matrix(&safe, 20, 0.1),
        ])
        .unwrap();
        let m = manifest(vec![acc, safe]);
        let s = main_samples(&m, &scores).unwrap();
        assert_eq!(s.positives, vec![0.3]);
        // sorted by id: "a" pre-anomaly, then "s"
        assert_eq!(s.negatives, vec![0.3, 0.1]);
    }

    #[test]
    fn anomaly_at_first_frame_has_no_negative() {
        let acc = VideoAnnotation::accident("a", 10.0, 100, 0, 80).unwrap();
        let scores = score_set([constant_matrix(&acc, 20, 0.3)]).unwrap();
        let s = main_samples(&manifest(vec![acc]), &scores).unwrap();
        assert_eq!(s.positives.len(), 1);
        assert!(s.negatives.is_empty());
    }

    #[test]
    fn missing_and_mismatched_scores() {
        let acc = VideoAnnotation::accident("a", 10.0, 100, 50, 80).unwrap();
        let m = manifest(vec![acc.clone()]);
        assert!(matches!(
            main_samples(&m, &ScoreSet::new()),
            Err(Error::MissingScores(id)) if id == "a"
        ));
        let wrong_t = score_set([constant_matrix(&acc, 3, 0.3)]).unwrap();
        assert!(matches!(
            main_samples(&m, &wrong_t),
            Err(Error::InvalidScores { .. })
        ));
    }

    #[test]
    fn interval_clip_geometry() {
        let c = IntervalClip::new(0.5, 10.0).unwrap();
        assert_eq!(c.positive_range(80), Some((70, 74)));
        let c = IntervalClip::new(1.5, 10.0).unwrap();
        assert_eq!(c.positive_range(80), Some((60, 64)));
        assert_eq!(c.positive_range(7), None);
        assert_eq!(c.positive_range(20), Some((0, 4)));
        assert!(IntervalClip::new(-0.5, 10.0).is_err());
        assert!(IntervalClip::new(0.5, 0.5).is_err());
    }

    #[test]
    fn interval_negatives_prefer_safe_videos() {
        let acc = VideoAnnotation::accident("a", 10.0, 100, 50, 80).unwrap();
        let short = VideoAnnotation::accident("b", 10.0, 100, 2, 7).unwrap();
        let safe = VideoAnnotation::safe("s", 10.0, 60).unwrap();
        let scores = score_set([
            constant_matrix(&acc, 20, 0.7),
            constant_matrix(&short, 20, 0.7),
            constant_matrix(&safe, 20, 0.2),
        ])
        .unwrap();
        let m = manifest(vec![acc, short, safe]);
        let s = interval_samples(&m, &scores, 1.5, 9).unwrap();
        assert_eq!(s.positives, vec![0.7]);
        assert_eq!(s.negatives, vec![0.2]);
        assert_eq!(s, interval_samples(&m, &scores, 1.5, 9).unwrap());
    }

    #[test]
    fn interval_negatives_fall_back_to_pre_anomaly() {
        let acc = VideoAnnotation::accident("a", 10.0, 100, 50, 80).unwrap();
        let mut matrix = ScoreMatrix::new("a", 20).unwrap();
        for t0 in 0..100 {
            let v = if t0 < 50 { 0.1 } else { 0.9 };
            matrix.insert(t0, vec![v; 20]).unwrap();
        }
        let scores = score_set([matrix]).unwrap();
        let m = manifest(vec![acc]);
        let s = interval_samples(&m, &scores, 0.5, 1).unwrap();
        assert_eq!(s.positives, vec![0.9]);
        assert_eq!(s.negatives, vec![0.1]);
    }

    #[test]
    fn interval_errors() {
        let short = VideoAnnotation::accident("b", 10.0, 100, 2, 7).unwrap();
        let safe = VideoAnnotation::safe("s", 10.0, 60).unwrap();
        let scores = score_set([
            constant_matrix(&short, 20, 0.5),
            constant_matrix(&safe, 20, 0.5),
        ])
        .unwrap();
        let m = manifest(vec![short, safe]);
        assert!(matches!(
            interval_samples(&m, &scores, 1.5, 0),
            Err(Error::EmptySamples(_))
        ));

        let acc = VideoAnnotation::accident("a", 10.0, 100, 3, 80).unwrap();
        let scores = score_set([constant_matrix(&acc, 20, 0.5)]).unwrap();
        assert!(matches!(
            interval_samples(&manifest(vec![acc]), &scores, 0.5, 0),
            Err(Error::EmptySamples(_))
        ));
    }
}

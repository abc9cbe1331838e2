//! Dataset manifests and per-video temporal annotations.
//!
//! Frame indices are 0-based and inclusive. Every second-valued quantity is
//! derived from frame indices through the dataset fps.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Temporal ground truth for one video.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoAnnotation {
    video_id: String,
    fps: f64,
    num_frames: usize,
    anomaly_frame: Option<usize>,
    accident_frame: Option<usize>,
    accident_end_frame: Option<usize>,
}

impl VideoAnnotation {
    /// Builds an accident-free video.
    pub fn safe(video_id: impl Into<String>, fps: f64, num_frames: usize) -> Result<Self> {
        Self::new(video_id, fps, num_frames, None, None, None)
    }

    /// Builds an accident video with the given anomaly onset and accident frame.
    pub fn accident(
        video_id: impl Into<String>,
        fps: f64,
        num_frames: usize,
        anomaly_frame: usize,
        accident_frame: usize,
    ) -> Result<Self> {
        Self::new(
            video_id,
            fps,
            num_frames,
            Some(anomaly_frame),
            Some(accident_frame),
            None,
        )
    }

    pub fn new(
        video_id: impl Into<String>,
        fps: f64,
        num_frames: usize,
        anomaly_frame: Option<usize>,
        accident_frame: Option<usize>,
        accident_end_frame: Option<usize>,
    ) -> Result<Self> {
        let annotation = VideoAnnotation {
            video_id: video_id.into(),
            fps,
            num_frames,
            anomaly_frame,
            accident_frame,
            accident_end_frame,
        };
        annotation.validate()?;
        Ok(annotation)
    }

    fn validate(&self) -> Result<()> {
        let id = self.video_id.as_str();
        if id.is_empty() {
            return Err(Error::video(id, "video id is empty"));
        }
        // Ids double as score file names.
        if id.contains(['/', '\\']) || id == "." || id == ".." {
            return Err(Error::video(id, "video id is not a valid file name"));
        }
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(Error::video(id, "fps must be positive"));
        }
        if self.num_frames == 0 {
            return Err(Error::video(id, "num_frames must be at least 1"));
        }
        match (self.anomaly_frame, self.accident_frame) {
            (None, None) => {
                if self.accident_end_frame.is_some() {
                    return Err(Error::video(
                        id,
                        "accident_end_frame set on an accident-free video",
                    ));
                }
            }
            (Some(_), None) => {
                return Err(Error::video(id, "anomaly_frame set without accident_frame"));
            }
            (None, Some(_)) => {
                return Err(Error::video(id, "accident_frame set without anomaly_frame"));
            }
            (Some(anomaly), Some(accident)) => {
                if anomaly > accident {
                    return Err(Error::video(id, "anomaly_frame > accident_frame"));
                }
                if accident >= self.num_frames {
                    return Err(Error::video(id, "accident_frame >= num_frames"));
                }
                if let Some(end) = self.accident_end_frame {
                    if accident > end {
                        return Err(Error::video(id, "accident_frame > accident_end_frame"));
                    }
                    if end >= self.num_frames {
                        return Err(Error::video(id, "accident_end_frame >= num_frames"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn video_id(&self) -> &str {
        &self.video_id
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn num_frames(&self) -> usize {
        self.num_frames
    }

    pub fn anomaly_frame(&self) -> Option<usize> {
        self.anomaly_frame
    }

    pub fn accident_frame(&self) -> Option<usize> {
        self.accident_frame
    }

    pub fn accident_end_frame(&self) -> Option<usize> {
        self.accident_end_frame
    }

    pub fn has_accident(&self) -> bool {
        self.accident_frame.is_some()
    }

    /// `(anomaly_frame, accident_frame)` or an error for accident-free videos.
    pub fn events(&self) -> Result<(usize, usize)> {
        match (self.anomaly_frame, self.accident_frame) {
            (Some(anomaly), Some(accident)) => Ok((anomaly, accident)),
            _ => Err(Error::NoAccident(self.video_id.clone())),
        }
    }

    /// Converts a frame count into seconds.
    pub fn frames_to_seconds(&self, frames: usize) -> f64 {
        frames as f64 / self.fps
    }

    /// Seconds between anomaly onset and accident occurrence.
    pub fn anomaly_interval_seconds(&self) -> Result<f64> {
        let (anomaly, accident) = self.events()?;
        Ok(self.frames_to_seconds(accident - anomaly))
    }

    /// Total video duration in seconds.
    pub fn duration_seconds(&self) -> f64 {
        self.frames_to_seconds(self.num_frames)
    }
}

/// Prediction horizon and snippet geometry. One horizon step spans one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonConfig {
    horizon_len: usize,
    snippet_len: usize,
    fps: f64,
}

impl HorizonConfig {
    /// Horizon length used by the reference model: 20 steps of 0.1 s.
    pub const DEFAULT_HORIZON_LEN: usize = 20;
    /// Snippet length used by the reference model.
    pub const DEFAULT_SNIPPET_LEN: usize = 5;
    pub const DEFAULT_FPS: f64 = 10.0;

    pub fn new(horizon_len: usize, snippet_len: usize, fps: f64) -> Result<Self> {
        if horizon_len == 0 {
            return Err(Error::InvalidHorizon("T must be at least 1".into()));
        }
        if snippet_len == 0 {
            return Err(Error::InvalidHorizon(
                "snippet_len must be at least 1".into(),
            ));
        }
        if !(fps.is_finite() && fps > 0.0) {
            return Err(Error::InvalidHorizon("fps must be positive".into()));
        }
        Ok(HorizonConfig {
            horizon_len,
            snippet_len,
            fps,
        })
    }

    /// Number of future steps `T` covered by one score vector.
    pub fn horizon_len(&self) -> usize {
        self.horizon_len
    }

    /// Snippet length `S` in frames.
    pub fn snippet_len(&self) -> usize {
        self.snippet_len
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn step_seconds(&self) -> f64 {
        1.0 / self.fps
    }

    /// Span of the full horizon in seconds.
    pub fn horizon_seconds(&self) -> f64 {
        self.horizon_len as f64 / self.fps
    }
}

impl Default for HorizonConfig {
    fn default() -> Self {
        HorizonConfig {
            horizon_len: Self::DEFAULT_HORIZON_LEN,
            snippet_len: Self::DEFAULT_SNIPPET_LEN,
            fps: Self::DEFAULT_FPS,
        }
    }
}

/// A validated set of annotated videos sharing one fps and horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    horizon: HorizonConfig,
    videos: Vec<VideoAnnotation>,
}

impl DatasetManifest {
    pub fn new(horizon: HorizonConfig, videos: Vec<VideoAnnotation>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(videos.len());
        for video in &videos {
            if video.fps != horizon.fps {
                return Err(Error::MixedFps {
                    video_id: video.video_id.clone(),
                    expected: horizon.fps,
                    found: video.fps,
                });
            }
            if !seen.insert(video.video_id.as_str()) {
                return Err(Error::DuplicateVideo(video.video_id.clone()));
            }
        }
        Ok(DatasetManifest { horizon, videos })
    }

    pub fn horizon(&self) -> &HorizonConfig {
        &self.horizon
    }

    pub fn fps(&self) -> f64 {
        self.horizon.fps
    }

    /// Videos in manifest order.
    pub fn videos(&self) -> &[VideoAnnotation] {
        &self.videos
    }

    /// Videos sorted by id; all reductions iterate in this order.
    pub fn videos_by_id(&self) -> Vec<&VideoAnnotation> {
        let mut sorted: Vec<_> = self.videos.iter().collect();
        sorted.sort_by(|a, b| a.video_id.cmp(&b.video_id));
        sorted
    }

    pub fn get(&self, video_id: &str) -> Option<&VideoAnnotation> {
        self.videos.iter().find(|v| v.video_id == video_id)
    }

    pub fn accident_videos(&self) -> impl Iterator<Item = &VideoAnnotation> {
        self.videos.iter().filter(|v| v.has_accident())
    }

    pub fn safe_videos(&self) -> impl Iterator<Item = &VideoAnnotation> {
        self.videos.iter().filter(|v| !v.has_accident())
    }

    /// Parses and validates a manifest JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawManifest =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        raw.into_manifest()
    }

    pub fn to_json(&self) -> String {
        let raw = RawManifest::from(self);
        let mut text = serde_json::to_string_pretty(&raw).expect("manifest serializes");
        text.push('\n');
        text
    }

    /// Returns a copy with videos in a different order.
    pub fn with_video_order(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.videos.len() {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let mut videos = Vec::with_capacity(order.len());
        for &idx in order {
            let video = self
                .videos
                .get(idx)
                .ok_or_else(|| Error::InvalidArgument(format!("index {idx} out of range")))?;
            videos.push(video.clone());
        }
        DatasetManifest::new(self.horizon, videos)
    }
}

/// Parses a manifest document.
pub fn parse_manifest(text: &str) -> Result<DatasetManifest> {
    DatasetManifest::from_json(text)
}

/// Mean anomaly-to-accident interval over accident videos, in seconds.
pub fn mean_anomaly_interval(manifest: &DatasetManifest) -> Result<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for video in manifest.videos_by_id() {
        if video.has_accident() {
            total += video.anomaly_interval_seconds()?;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptySamples(
            "manifest has no accident videos".into(),
        ));
    }
    Ok(total / count as f64)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    fps: f64,
    horizon: RawHorizon,
    videos: Vec<RawVideo>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHorizon {
    #[serde(rename = "T")]
    horizon_len: usize,
    snippet_len: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVideo {
    id: String,
    num_frames: usize,
    anomaly_frame: Option<usize>,
    accident_frame: Option<usize>,
    accident_end_frame: Option<usize>,
}

impl RawManifest {
    fn into_manifest(self) -> Result<DatasetManifest> {
        let horizon =
            HorizonConfig::new(self.horizon.horizon_len, self.horizon.snippet_len, self.fps)?;
        let videos = self
            .videos
            .into_iter()
            .map(|v| {
                VideoAnnotation::new(
                    v.id,
                    self.fps,
                    v.num_frames,
                    v.anomaly_frame,
                    v.accident_frame,
                    v.accident_end_frame,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        DatasetManifest::new(horizon, videos)
    }
}

impl From<&DatasetManifest> for RawManifest {
    fn from(m: &DatasetManifest) -> Self {
        RawManifest {
            fps: m.horizon.fps,
            horizon: RawHorizon {
                horizon_len: m.horizon.horizon_len,
                snippet_len: m.horizon.snippet_len,
            },
            videos: m
                .videos
                .iter()
                .map(|v| RawVideo {
                    id: v.video_id.clone(),
                    num_frames: v.num_frames,
                    anomaly_frame: v.anomaly_frame,
                    accident_frame: v.accident_frame,
                    accident_end_frame: v.accident_end_frame,
                })
                .collect(),
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced while validating inputs or computing metrics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("manifest schema error: {0}")]
    Schema(String),

    #[error("video `{video_id}`: {rule}")]
    InvalidVideo { video_id: String, rule: String },

    #[error("duplicate video id `{0}`")]
    DuplicateVideo(String),

    #[error("invalid horizon: {0}")]
    InvalidHorizon(String),

    #[error("mixed fps: video `{video_id}` has {found} fps, dataset uses {expected}")]
    MixedFps {
        video_id: String,
        expected: f64,
        found: f64,
    },

    #[error("video `{0}` has no accident")]
    NoAccident(String),

    #[error("frame {frame} is outside video `{video_id}` ({num_frames} frames)")]
    FrameOutOfRange {
        video_id: String,
        frame: usize,
        num_frames: usize,
    },

    #[error("video `{video_id}` is too short: {reason}")]
    VideoTooShort { video_id: String, reason: String },

    #[error("scores for `{video_id}`: {reason}")]
    InvalidScores { video_id: String, reason: String },

    #[error("no score matrix for video `{0}`")]
    MissingScores(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty sample set: {0}")]
    EmptySamples(String),

    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),

    #[error("{path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn video(video_id: &str, rule: impl Into<String>) -> Self {
        Error::InvalidVideo {
            video_id: video_id.to_string(),
            rule: rule.into(),
        }
    }

    pub(crate) fn scores(video_id: &str, reason: impl Into<String>) -> Self {
        Error::InvalidScores {
            video_id: video_id.to_string(),
            reason: reason.into(),
        }
    }

    /// True for failures of the filesystem rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

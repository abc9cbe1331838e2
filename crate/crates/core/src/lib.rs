//! Evaluation toolkit for online accident anticipation with multi-step
//! future accident scores.
//!
//! - [`annotations`]: dataset manifests and temporal ground truth.
//! - [`top`]: training labels, snippet sampling, and the weighted BCE loss.
//! - [`scores`]: score matrices, their CSV format, and the alert trigger.
//! - [`metrics`]: FAR-truncated AUCs, per-horizon AUCs, and time-to-accident.
//! - [`synthetic`]: seeded datasets and reference predictors.

pub mod annotations;
pub mod error;
pub mod metrics;
pub mod scores;
pub mod seed;
pub mod synthetic;
pub mod top;

pub use annotations::{parse_manifest, DatasetManifest, HorizonConfig, VideoAnnotation};
pub use error::{Error, Result};
pub use metrics::{evaluate, MetricsReport, RocCurve, TtaMode};
pub use scores::{frame_alarm_series, ScoreMatrix, ScoreSet};
pub use top::{LabelVector, SnippetWindow};

//! Per-video future accident score matrices and the alert trigger.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use crate::annotations::VideoAnnotation;
use crate::error::{Error, Result};

/// Future accident scores `a_1..a_T` keyed by the current frame `t0`.
///
/// A horizon length of 1 represents a conventional per-frame risk score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    video_id: String,
    horizon_len: usize,
    rows: BTreeMap<usize, Vec<f64>>,
}

impl ScoreMatrix {
    pub fn new(video_id: impl Into<String>, horizon_len: usize) -> Result<Self> {
        let video_id = video_id.into();
        if horizon_len == 0 {
            return Err(Error::scores(
                &video_id,
                "horizon length must be at least 1",
            ));
        }
        Ok(ScoreMatrix {
            video_id,
            horizon_len,
            rows: BTreeMap::new(),
        })
    }

    /// Inserts or replaces the row for frame `t0`.
    pub fn insert(&mut self, t0: usize, row: Vec<f64>) -> Result<()> {
        if row.len() != self.horizon_len {
            return Err(Error::scores(
                &self.video_id,
                format!(
                    "row for frame {t0} has {} scores, expected {}",
                    row.len(),
                    self.horizon_len
                ),
            ));
        }
        if let Some(bad) = row.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::scores(
                &self.video_id,
                format!("score {bad} at frame {t0} is outside [0, 1]"),
            ));
        }
        self.rows.insert(t0, row);
        Ok(())
    }

    pub fn video_id(&self) -> &str {
        &self.video_id
    }

    pub fn horizon_len(&self) -> usize {
        self.horizon_len
    }

    pub fn row(&self, t0: usize) -> Option<&[f64]> {
        self.rows.get(&t0).map(Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &[f64])> {
        self.rows.iter().map(|(&t0, row)| (t0, row.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest score in the row for `t0`, if the row exists.
    pub fn row_max(&self, t0: usize) -> Option<f64> {
        self.rows.get(&t0).map(|row| row_max(row))
    }

    /// Row maxima for every present frame within `frames`.
    pub fn row_maxima(
        &self,
        frames: RangeInclusive<usize>,
    ) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.rows.range(frames).map(|(&t0, row)| (t0, row_max(row)))
    }

    /// True when the trigger fires at `t0`: some score reaches `tau`.
    pub fn fires(&self, t0: usize, tau: f64) -> bool {
        self.row_max(t0).is_some_and(|m| m >= tau)
    }

    /// First frame within `frames` at which the trigger fires.
    pub fn first_alarm(&self, frames: RangeInclusive<usize>, tau: f64) -> Option<usize> {
        self.row_maxima(frames)
            .find(|&(_, m)| m >= tau)
            .map(|(t0, _)| t0)
    }

    /// Keeps only the rows whose frame satisfies `keep`.
    pub fn retain_frames(&mut self, mut keep: impl FnMut(usize) -> bool) {
        self.rows.retain(|&t0, _| keep(t0));
    }

    /// Checks the matrix against its video: matching id, horizon, and frame range.
    pub fn check_against(&self, video: &VideoAnnotation, horizon_len: usize) -> Result<()> {
        if self.video_id != video.video_id() {
            return Err(Error::scores(
                &self.video_id,
                format!("matrix belongs to `{}`", video.video_id()),
            ));
        }
        if self.horizon_len != horizon_len {
            return Err(Error::scores(
                &self.video_id,
                format!(
                    "horizon length {} does not match manifest T = {horizon_len}",
                    self.horizon_len
                ),
            ));
        }
        if let Some((&last, _)) = self.rows.last_key_value() {
            if last >= video.num_frames() {
                return Err(Error::FrameOutOfRange {
                    video_id: self.video_id.clone(),
                    frame: last,
                    num_frames: video.num_frames(),
                });
            }
        }
        Ok(())
    }

    /// Renders the score CSV: header `frame,a1,...,aT`, ascending frames.
    ///
    /// Floats are printed in shortest round-trip form, so parsing the output
    /// reproduces the matrix exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame");
        for i in 1..=self.horizon_len {
            write!(out, ",a{i}").unwrap();
        }
        out.push('\n');
        for (t0, row) in &self.rows {
            write!(out, "{t0}").unwrap();
            for s in row {
                write!(out, ",{s}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses a score CSV. The horizon length is taken from the header.
    pub fn from_csv(video_id: &str, text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::scores(video_id, e.to_string()))?
            .clone();
        let horizon_len = headers.len().saturating_sub(1);
        let expected: Vec<String> = std::iter::once("frame".to_string())
            .chain((1..=horizon_len).map(|i| format!("a{i}")))
            .collect();
        if horizon_len == 0 || !headers.iter().eq(expected.iter().map(String::as_str)) {
            return Err(Error::scores(
                video_id,
                "header must be `frame,a1,...,aT` with T >= 1",
            ));
        }
        let mut matrix = ScoreMatrix::new(video_id, horizon_len)?;
        let mut previous: Option<usize> = None;
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::scores(video_id, e.to_string()))?;
            let line = line + 2;
            let t0: usize = record[0]
                .parse()
                .map_err(|_| Error::scores(video_id, format!("line {line}: bad frame index")))?;
            if previous.is_some_and(|p| t0 <= p) {
                return Err(Error::scores(
                    video_id,
                    format!("line {line}: frames must be strictly ascending"),
                ));
            }
            previous = Some(t0);
            let row = record
                .iter()
                .skip(1)
                .map(|field| {
                    field.parse::<f64>().map_err(|_| {
                        Error::scores(video_id, format!("line {line}: bad score `{field}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            matrix.insert(t0, row)?;
        }
        Ok(matrix)
    }

    pub fn read_csv(video_id: &str, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv(video_id, &text)
    }
}

fn row_max(row: &[f64]) -> f64 {
    row.iter().copied().fold(0.0, f64::max)
}

/// Per-frame alarm decisions for one video at threshold `tau`.
///
/// Only frames with a score row appear; absent frames never alarm.
pub fn frame_alarm_series(matrix: &ScoreMatrix, tau: f64) -> BTreeMap<usize, bool> {
    matrix
        .rows()
        .map(|(t0, row)| (t0, row_max(row) >= tau))
        .collect()
}

/// Score matrices for a dataset, keyed by video id.
pub type ScoreSet = BTreeMap<String, ScoreMatrix>;

/// Builds a [`ScoreSet`] from matrices, rejecting duplicate ids.
pub fn score_set(matrices: impl IntoIterator<Item = ScoreMatrix>) -> Result<ScoreSet> {
    let mut set = ScoreSet::new();
    for m in matrices {
        let id = m.video_id().to_string();
        if set.insert(id.clone(), m).is_some() {
            return Err(Error::DuplicateVideo(id));
        }
    }
    Ok(set)
}

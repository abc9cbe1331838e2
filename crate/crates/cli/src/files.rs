//! Input loading and all-or-nothing output.

use std::fs;
use std::path::{Path, PathBuf};

use anticipate_core::{DatasetManifest, ScoreMatrix, ScoreSet};

use crate::error::{CliError, CliResult};

pub fn load_manifest(path: &Path) -> CliResult<DatasetManifest> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    DatasetManifest::from_json(&text).map_err(|e| CliError::in_file(path, e))
}

/// Reads `<dir>/<video_id>.csv` for every video in the manifest.
///
/// With `stride > 1` only rows at `t0 = S - 1 + k * stride` are kept.
pub fn load_scores(manifest: &DatasetManifest, dir: &Path, stride: usize) -> CliResult<ScoreSet> {
    if stride == 0 {
        return Err(CliError::invalid("--stride must be at least 1"));
    }
    let phase = (manifest.horizon().snippet_len() - 1) % stride;
    let mut set = ScoreSet::new();
    for video in manifest.videos_by_id() {
        let id = video.video_id();
        let path = score_path(dir, id);
        if !path.is_file() {
            return Err(CliError::invalid(format!(
                "{}: missing score file for video `{id}`",
                path.display()
            )));
        }
        let mut matrix =
            ScoreMatrix::read_csv(id, &path).map_err(|e| CliError::in_file(&path, e))?;
        matrix
            .check_against(video, manifest.horizon().horizon_len())
            .map_err(|e| CliError::in_file(&path, e))?;
        if stride > 1 {
            matrix.retain_frames(|t0| t0 % stride == phase);
        }
        set.insert(id.to_string(), matrix);
    }
    Ok(set)
}

pub fn score_path(dir: &Path, video_id: &str) -> PathBuf {
    dir.join(format!("{video_id}.csv"))
}

/// Files staged in memory and written together.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: PathBuf, contents: impl Into<Vec<u8>>) {
        self.files.push((path, contents.into()));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    /// Writes every file to a temporary sibling first and renames only once
    /// all writes succeeded, so a failure leaves no half-written results.
    pub fn commit(self) -> CliResult<()> {
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(self.files.len());
        let result = (|| {
            for (path, contents) in &self.files {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
                }
                let tmp = partial_path(path);
                fs::write(&tmp, contents).map_err(|e| CliError::io(path, e))?;
                staged.push((tmp, path.clone()));
            }
            for (tmp, path) in &staged {
                fs::rename(tmp, path).map_err(|e| CliError::io(path, e))?;
            }
            Ok(())
        })();
        if result.is_err() {
            for (tmp, _) in &staged {
                let _ = fs::remove_file(tmp);
            }
        }
        result
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy())
        .unwrap_or_default();
    path.with_file_name(format!(".{name}.partial"))
}

use std::path::PathBuf;

use anticipate_core::metrics::DEFAULT_LAMBDA;
use anticipate_core::top::DEFAULT_POSITIVE_WEIGHT;
use clap::{Args, Parser, Subcommand, ValueEnum};

const DEFAULT_OUTPUT: &str = "anticipate-out";

#[derive(Debug, Parser)]
#[command(
    name = "anticipate",
    version,
    about = "Evaluate and simulate online accident anticipation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute AUC, per-horizon AUC, mAUC and mTTA for one or more FAR bounds.
    Evaluate(EvaluateArgs),
    /// Generate a synthetic dataset and reference predictor scores.
    Simulate(SimulateArgs),
    /// Compare legacy and revised time-to-accident per video.
    CompareTta(CompareTtaArgs),
    /// Sample training windows and print their label vectors.
    Labels(LabelsArgs),
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Dataset manifest (JSON).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory holding one `<video_id>.csv` score matrix per video.
    #[arg(long)]
    pub scores_dir: PathBuf,
    /// Keep only windows ending at `S - 1 + k * stride`.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// FAR bound in (0, 1]. Repeat for several reports.
    #[arg(long = "lambda", value_parser = parse_lambda, default_values_t = [DEFAULT_LAMBDA])]
    pub lambdas: Vec<f64>,
    /// Which mTTA variants to report.
    #[arg(long, value_enum, default_value_t = TtaSelection::Both)]
    pub tta_mode: TtaSelection,
    /// Seed for sampling per-horizon negatives.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the main and per-horizon ROC curves as CSV.
    #[arg(long)]
    pub roc: bool,
    /// Output directory.
    #[arg(long, env = "ANTICIPATE_OUTPUT_DIR", default_value = DEFAULT_OUTPUT)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TtaSelection {
    Revised,
    Legacy,
    Both,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 10)]
    pub accident_videos: usize,
    #[arg(long, default_value_t = 10)]
    pub safe_videos: usize,
    #[arg(long, default_value_t = 10.0)]
    pub fps: f64,
    /// Shortest video, in frames.
    #[arg(long, default_value_t = 100)]
    pub min_frames: usize,
    /// Longest video, in frames.
    #[arg(long, default_value_t = 200)]
    pub max_frames: usize,
    /// Shortest anomaly-to-accident interval, in seconds.
    #[arg(long, default_value_t = 0.5)]
    pub min_interval: f64,
    /// Longest anomaly-to-accident interval, in seconds.
    #[arg(long, default_value_t = 3.0)]
    pub max_interval: f64,
    /// Earliest allowed accident frame.
    #[arg(long, default_value_t = 40)]
    pub accident_margin: usize,
    /// Number of future steps T per score row.
    #[arg(long, default_value_t = 20)]
    pub horizon_len: usize,
    /// Frames per input snippet.
    #[arg(long, default_value_t = 5)]
    pub snippet_len: usize,
    #[arg(long, value_enum, default_value_t = PredictorChoice::Oracle)]
    pub predictor: PredictorChoice,
    /// Score used by the constant predictor.
    #[arg(long, default_value_t = 0.5)]
    pub constant_score: f64,
    /// Spike lead (early-false-alarm, default 3) or ramp length (noisy-decay, default 2), in seconds.
    #[arg(long)]
    pub lead_seconds: Option<f64>,
    /// Spike length in frames for early-false-alarm.
    #[arg(long, default_value_t = 5)]
    pub spike_len: usize,
    /// Gaussian noise for noisy-decay.
    #[arg(long, default_value_t = 0.1)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; receives `manifest.json` and `scores/`.
    #[arg(long, env = "ANTICIPATE_OUTPUT_DIR", default_value = DEFAULT_OUTPUT)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredictorChoice {
    Oracle,
    Constant,
    Random,
    EarlyFalseAlarm,
    NoisyDecay,
}

#[derive(Debug, Args)]
pub struct CompareTtaArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// FAR bound that selects the operating threshold.
    #[arg(long, value_parser = parse_lambda, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long, env = "ANTICIPATE_OUTPUT_DIR", default_value = DEFAULT_OUTPUT)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct LabelsArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Windows drawn per accident video.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Score matrices; when given, each row also gets its loss.
    #[arg(long)]
    pub scores_dir: Option<PathBuf>,
    /// Weight of the positive term in the loss.
    #[arg(long, default_value_t = DEFAULT_POSITIVE_WEIGHT)]
    pub w_plus: f64,
    #[arg(long, env = "ANTICIPATE_OUTPUT_DIR", default_value = DEFAULT_OUTPUT)]
    pub output: PathBuf,
}

fn parse_lambda(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x > 0.0 && x <= 1.0 {
        Ok(x)
    } else {
        Err(format!("FAR bound must lie in (0, 1], got {s}"))
    }
}

use std::fmt::Write as _;

use anticipate_core::metrics::{
    evaluate_detailed, main_samples, operating_threshold, per_video_tta, INTERVAL_OFFSETS,
};
use anticipate_core::seed::sub_seed;
use anticipate_core::synthetic::{
    generate_dataset, predict_dataset, PredictorKind, PredictorSpec, ScenarioConfig,
};
use anticipate_core::top::{make_label_vector, sample_training_snippets, weighted_bce_loss};
use anticipate_core::Error;
use serde_json::Value;

use crate::args::{
    CompareTtaArgs, EvaluateArgs, LabelsArgs, PredictorChoice, SimulateArgs, TtaSelection,
};
use crate::error::{CliError, CliResult};
use crate::files::{load_manifest, load_scores, score_path, Outputs};

pub fn evaluate(args: &EvaluateArgs) -> CliResult<Outputs> {
    let manifest = load_manifest(&args.inputs.manifest)?;
    let scores = load_scores(&manifest, &args.inputs.scores_dir, args.inputs.stride)?;

    let mut lambdas: Vec<f64> = Vec::new();
    for &l in &args.lambdas {
        if !lambdas.contains(&l) {
            lambdas.push(l);
        }
    }

    let mut out = Outputs::default();
    for (i, &lambda) in lambdas.iter().enumerate() {
        let eval = evaluate_detailed(&manifest, &scores, lambda, args.seed)?;
        let mut json = serde_json::to_value(eval.report.rounded()).expect("report serializes");
        if let Value::Object(map) = &mut json {
            match args.tta_mode {
                TtaSelection::Revised => drop(map.remove("mtta_legacy")),
                TtaSelection::Legacy => drop(map.remove("mtta_revised")),
                TtaSelection::Both => {}
            }
        }
        let mut text = serde_json::to_string_pretty(&json).expect("report serializes");
        text.push('\n');
        out.add(
            args.output.join(format!("report_lambda_{lambda}.json")),
            text,
        );

        // The curves do not depend on lambda.
        if args.roc && i == 0 {
            out.add(args.output.join("roc_main.csv"), eval.main_roc.to_csv());
            for (offset, roc) in INTERVAL_OFFSETS.iter().zip(&eval.interval_rocs) {
                out.add(
                    args.output.join(format!("roc_{offset:.1}s.csv")),
                    roc.to_csv(),
                );
            }
        }
    }
    Ok(out)
}

fn predictor_kind(args: &SimulateArgs) -> PredictorKind {
    match args.predictor {
        PredictorChoice::Oracle => PredictorKind::Oracle,
        PredictorChoice::Constant => PredictorKind::Constant(args.constant_score),
        PredictorChoice::Random => PredictorKind::Random,
        PredictorChoice::EarlyFalseAlarm => PredictorKind::EarlyFalseAlarm {
            lead_seconds: args.lead_seconds.unwrap_or(3.0),
            spike_len: args.spike_len,
        },
        PredictorChoice::NoisyDecay => PredictorKind::NoisyDecay {
            lead_seconds: args.lead_seconds.unwrap_or(2.0),
            noise_sigma: args.noise_sigma,
        },
    }
}

pub fn simulate(args: &SimulateArgs) -> CliResult<Outputs> {
    let cfg = ScenarioConfig {
        n_accident_videos: args.accident_videos,
        n_safe_videos: args.safe_videos,
        fps: args.fps,
        video_len_frames: args.min_frames..=args.max_frames,
        anomaly_interval_seconds: (args.min_interval, args.max_interval),
        accident_margin_frames: args.accident_margin,
        horizon_len: args.horizon_len,
        snippet_len: args.snippet_len,
        seed: args.seed,
    };
    let manifest = generate_dataset(&cfg)?;
    // Keep predictor noise independent of the dataset draws.
    let spec = PredictorSpec::new(predictor_kind(args), sub_seed(args.seed, "predictor"))?;
    let scores = predict_dataset(&spec, &manifest)?;

    let mut out = Outputs::default();
    out.add(args.output.join("manifest.json"), manifest.to_json());
    let dir = args.output.join("scores");
    for (id, matrix) in &scores {
        out.add(score_path(&dir, id), matrix.to_csv());
    }
    Ok(out)
}

pub fn compare_tta(args: &CompareTtaArgs) -> CliResult<(Outputs, String)> {
    let manifest = load_manifest(&args.inputs.manifest)?;
    let scores = load_scores(&manifest, &args.inputs.scores_dir, args.inputs.stride)?;
    let tau = operating_threshold(&main_samples(&manifest, &scores)?, args.lambda)?;
    let rows = per_video_tta(&manifest, &scores, tau)?;
    if rows.is_empty() {
        return Err(Error::EmptySamples("manifest has no accident videos".into()).into());
    }

    let mut csv = String::from("video_id,interval_s,tta_legacy_s,tta_revised_s\n");
    let mut sums = [0.0; 3];
    for r in &rows {
        writeln!(
            csv,
            "{},{:.6},{:.6},{:.6}",
            r.video_id, r.interval_seconds, r.legacy, r.revised
        )
        .unwrap();
        sums[0] += r.interval_seconds;
        sums[1] += r.legacy;
        sums[2] += r.revised;
    }
    let n = rows.len() as f64;
    let means = sums.map(|s| s / n);
    writeln!(csv, "mean,{:.6},{:.6},{:.6}", means[0], means[1], means[2]).unwrap();

    let summary = format!(
        "threshold {tau} at lambda {}: mean interval {:.6} s, legacy {:.6} s, revised {:.6} s",
        args.lambda, means[0], means[1], means[2]
    );
    let mut out = Outputs::default();
    out.add(args.output.join("tta_comparison.csv"), csv);
    Ok((out, summary))
}

pub fn labels(args: &LabelsArgs) -> CliResult<(Outputs, Option<String>)> {
    let manifest = load_manifest(&args.manifest)?;
    let scores = match &args.scores_dir {
        Some(dir) => Some(load_scores(&manifest, dir, 1)?),
        None => None,
    };
    let horizon = manifest.horizon();
    let t = horizon.horizon_len();

    let mut csv = String::from("video_id,t0,A");
    for k in 1..=t {
        write!(csv, ",y{k}").unwrap();
    }
    csv.push_str(if scores.is_some() { ",loss\n" } else { "\n" });

    let mut losses = Vec::new();
    for video in manifest
        .videos_by_id()
        .into_iter()
        .filter(|v| v.has_accident())
    {
        let id = video.video_id();
        let (_, accident) = video.events()?;
        let windows =
            sample_training_snippets(video, horizon, args.count, sub_seed(args.seed, id))?;
        for w in windows {
            let t0 = w.current_frame();
            let label = make_label_vector(t0, video, horizon)?;
            write!(csv, "{id},{t0},{}", accident as i64 - t0 as i64).unwrap();
            for y in label.values() {
                write!(csv, ",{y}").unwrap();
            }
            if let Some(set) = &scores {
                let row = set[id].row(t0).ok_or_else(|| {
                    CliError::invalid(format!(
                        "{}: no score row for frame {t0}",
                        score_path(args.scores_dir.as_deref().unwrap(), id).display()
                    ))
                })?;
                let loss = weighted_bce_loss(row, &label, args.w_plus)?;
                write!(csv, ",{loss:.6}").unwrap();
                losses.push(loss);
            }
            csv.push('\n');
        }
    }

    let summary = (!losses.is_empty()).then(|| {
        let mean = losses.iter().sum::<f64>() / losses.len() as f64;
        format!("mean loss {mean:.6} over {} windows", losses.len())
    });
    let mut out = Outputs::default();
    out.add(args.output.join("labels.csv"), csv);
    Ok((out, summary))
}

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One ROC vertex: the rates obtained by alarming on scores `>= threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// ROC curve ordered by descending threshold, from `(0, 0)` to `(1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    points: Vec<RocPoint>,
}

impl RocCurve {
    /// Validates an externally built curve.
    pub fn from_points(points: Vec<RocPoint>) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidArgument(format!("invalid ROC curve: {why}")));
        let (Some(first), Some(last)) = (points.first(), points.last()) else {
            return bad("no points");
        };
        if first.fpr != 0.0 || first.tpr != 0.0 {
            return bad("must start at (0, 0)");
        }
        if last.fpr != 1.0 || last.tpr != 1.0 {
            return bad("must end at (1, 1)");
        }
        for p in &points {
            if !(0.0..=1.0).contains(&p.fpr) || !(0.0..=1.0).contains(&p.tpr) {
                return bad("rates must lie in [0, 1]");
            }
            if p.threshold.is_nan() {
                return bad("NaN threshold");
            }
        }
        for w in points.windows(2) {
            if w[1].fpr < w[0].fpr || w[1].tpr < w[0].tpr {
                return bad("rates must be non-decreasing");
            }
            if w[1].threshold > w[0].threshold {
                return bad("thresholds must be non-increasing");
            }
        }
        Ok(RocCurve { points })
    }

    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }

    /// Renders `threshold,fpr,tpr` rows without rounding.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,fpr,tpr\n");
        for p in &self.points {
            writeln!(out, "{},{},{}", p.threshold, p.fpr, p.tpr).unwrap();
        }
        out
    }
}

/// Sweeps every unique sample score as a threshold, highest first.
///
/// Tied scores share a single vertex, so a positive and a negative with the
/// same score move the curve diagonally.
pub fn build_roc(positives: &[f64], negatives: &[f64]) -> Result<RocCurve> {
    if positives.is_empty() {
        return Err(Error::EmptySamples("no positive samples".into()));
    }
    if negatives.is_empty() {
        return Err(Error::EmptySamples("no negative samples".into()));
    }
    if positives.iter().chain(negatives).any(|s| s.is_nan()) {
        return Err(Error::InvalidArgument("NaN sample score".into()));
    }

    let mut labelled: Vec<(f64, bool)> = positives
        .iter()
        .map(|&s| (s, true))
        .chain(negatives.iter().map(|&s| (s, false)))
        .collect();
    labelled.sort_by(|a, b| b.0.total_cmp(&a.0));

    let n_pos = positives.len() as f64;
    let n_neg = negatives.len() as f64;
    let mut points = Vec::with_capacity(labelled.len() + 1);
    points.push(RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    });
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < labelled.len() {
        let threshold = labelled[i].0;
        while i < labelled.len() && labelled[i].0 == threshold {
            if labelled[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold,
            fpr: fp as f64 / n_neg,
            tpr: tp as f64 / n_pos,
        });
    }
    Ok(RocCurve { points })
}

/// Average recall over false alarm rates in `[0, lambda]`.
///
/// The trapezoidal area under the curve is cut at exactly `fpr = lambda`
/// (interpolating inside the crossing segment) and divided by `lambda`, so
/// `lambda = 1` gives the ordinary ROC AUC.
pub fn truncated_auc(curve: &RocCurve, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    // Accumulate the area above the curve so a perfect curve yields exactly 1.
    let mut missed = 0.0;
    for w in curve.points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.fpr >= lambda {
            break;
        }
        if b.fpr <= lambda {
            missed += (b.fpr - a.fpr) * ((1.0 - a.tpr) + (1.0 - b.tpr)) / 2.0;
        } else {
            let tpr_at = a.tpr + (b.tpr - a.tpr) * (lambda - a.fpr) / (b.fpr - a.fpr);
            missed += (lambda - a.fpr) * ((1.0 - a.tpr) + (1.0 - tpr_at)) / 2.0;
            break;
        }
    }
    Ok((1.0 - missed / lambda).clamp(0.0, 1.0))
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "FAR bound must lie in (0, 1], got {lambda}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rates(curve: &RocCurve) -> Vec<(f64, f64)> {
        curve.points().iter().map(|p| (p.fpr, p.tpr)).collect()
    }

    fn curve(rates: &[(f64, f64)]) -> RocCurve {
        let n = rates.len();
        RocCurve::from_points(
            rates
                .iter()
                .enumerate()
                .map(|(i, &(fpr, tpr))| RocPoint {
                    threshold: (n - i) as f64,
                    fpr,
                    tpr,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn separable_pair() {
        let roc = build_roc(&[0.9], &[0.1]).unwrap();
        assert_eq!(rates(&roc), vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(roc.points()[0].threshold, f64::INFINITY);
    }

    #[test]
    fn full_tie_moves_both_rates() {
        let roc = build_roc(&[0.5], &[0.5]).unwrap();
        assert_eq!(rates(&roc), vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn interleaved_scores() {
        // Brute-force sweep over thresholds {inf, 0.8, 0.6, 0.4, 0.2}:
        // tpr = #{p >= t}/2, fpr = #{n >= t}/2.
        let pos = [0.8, 0.4];
        let neg = [0.6, 0.2];
        let mut expected = vec![(0.0, 0.0)];
        for t in [0.8, 0.6, 0.4, 0.2] {
            let tpr = pos.iter().filter(|&&p| p >= t).count() as f64 / 2.0;
            let fpr = neg.iter().filter(|&&n| n >= t).count() as f64 / 2.0;
            expected.push((fpr, tpr));
        }
        assert_eq!(
            expected,
            vec![(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]
        );
        let roc = build_roc(&pos, &neg).unwrap();
        assert_eq!(rates(&roc), expected);
        assert!((truncated_auc(&roc, 1.0).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn perfect_curve_has_unit_auc_everywhere() {
        let roc = build_roc(&[0.9], &[0.1]).unwrap();
        for lambda in [0.001, 0.01, 0.1, 0.5, 1.0] {
            assert_eq!(truncated_auc(&roc, lambda).unwrap(), 1.0);
        }
    }

    #[test]
    fn truncation_interpolates_at_bound() {
        let c = curve(&[(0.0, 0.0), (0.05, 0.6), (0.1, 0.8), (1.0, 1.0)]);
        // (0.05 * 0.3 + 0.05 * 0.7) / 0.1
        assert!((truncated_auc(&c, 0.1).unwrap() - 0.5).abs() < 1e-12);
        // Cut inside the first segment: tpr(0.025) = 0.3, area = 0.025 * 0.15
        assert!((truncated_auc(&c, 0.025).unwrap() - 0.15).abs() < 1e-12);
    }

    #[test]
    fn diagonal_curve() {
        let roc = build_roc(&[0.0; 3], &[0.0; 4]).unwrap();
        assert!((truncated_auc(&roc, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((truncated_auc(&roc, 0.1).unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn lambda_bounds() {
        let roc = build_roc(&[0.9], &[0.1]).unwrap();
        assert!(truncated_auc(&roc, 0.0).is_err());
        assert!(truncated_auc(&roc, -0.1).is_err());
        assert!(truncated_auc(&roc, 1.01).is_err());
        assert!(truncated_auc(&roc, f64::NAN).is_err());
    }

    #[test]
    fn rejects_empty_and_malformed() {
        assert!(build_roc(&[], &[0.1]).is_err());
        assert!(build_roc(&[0.1], &[]).is_err());
        assert!(build_roc(&[f64::NAN], &[0.1]).is_err());
        let p = |threshold, fpr, tpr| RocPoint {
            threshold,
            fpr,
            tpr,
        };
        assert!(RocCurve::from_points(vec![]).is_err());
        assert!(RocCurve::from_points(vec![p(1.0, 0.1, 0.0), p(0.0, 1.0, 1.0)]).is_err());
        assert!(RocCurve::from_points(vec![p(1.0, 0.0, 0.0), p(0.0, 0.9, 1.0)]).is_err());
        assert!(RocCurve::from_points(vec![
            p(2.0, 0.0, 0.0),
            p(1.0, 0.5, 0.6),
            p(0.5, 0.4, 0.7),
            p(0.0, 1.0, 1.0)
        ])
        .is_err());
    }

    #[test]
    fn csv_layout() {
        let roc = build_roc(&[0.9], &[0.1]).unwrap();
        assert_eq!(
            roc.to_csv(),
            "threshold,fpr,tpr\ninf,0,0\n0.9,0,1\n0.1,1,1\n"
        );
    }
}

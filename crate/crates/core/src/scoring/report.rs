//! Loss samples, curves, and the assembled prediction-score report.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dataset::FoldScheme;
use crate::error::{Error, Result};
use crate::scalar::{mean, Real};
use crate::scoring::losses::Granularity;

/// Which half of the pipeline a sample or curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    CrossValidation,
    Validation,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Side::CrossValidation => "cross_validation",
            Side::Validation => "validation",
        };
        write!(f, "{name}")
    }
}

/// An empirical distribution of loss values: one per fold for AUC losses,
/// one per scored observation for proper scoring rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossSample<F> {
    pub loss_name: String,
    pub side: Side,
    pub granularity: Granularity,
    pub values: Vec<F>,
}

impl<F: Real> LossSample<F> {
    pub fn mean(&self) -> F {
        mean(&self.values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Roc,
    PrecisionRecall,
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CurveKind::Roc => "roc",
            CurveKind::PrecisionRecall => "precision_recall",
        };
        write!(f, "{name}")
    }
}

/// One per-fold diagnostic curve (ROC or precision-recall).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve<F> {
    pub kind: CurveKind,
    pub side: Side,
    pub fold: usize,
    pub points: Vec<(F, F)>,
}

/// Convergence bookkeeping for one fold model, surfaced so non-converged
/// fits are never silent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldDiagnostic {
    pub fold: usize,
    pub converged: bool,
    pub separated: bool,
    pub iterations: usize,
    pub train_rows: usize,
}

/// Which scalar summary of the CV/validation contrast the caller asked for.
/// The report always carries both; this only selects [`PredictionScoreReport::score_value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreFn {
    Ks,
    MeanDiff,
    Both,
}

impl std::fmt::Display for ScoreFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ScoreFn::Ks => "ks",
            ScoreFn::MeanDiff => "mean_diff",
            ScoreFn::Both => "both",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for ScoreFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ks" => Ok(ScoreFn::Ks),
            "mean_diff" => Ok(ScoreFn::MeanDiff),
            "both" => Ok(ScoreFn::Both),
            other => Err(Error::invalid(format!(
                "unknown score function {other:?}; expected ks, mean_diff, or both"
            ))),
        }
    }
}

/// Everything one prediction-scoring run produces: the two loss samples,
/// their scalar comparisons, per-fold curves, and fit diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionScoreReport<F> {
    pub model_name: String,
    pub loss_name: String,
    pub score_fn: ScoreFn,
    pub k: usize,
    pub scheme: FoldScheme,
    pub subset_size: Option<usize>,
    pub stratified: bool,
    pub seed: u64,
    /// Positive-label share of the first dataset (the CV side).
    pub tau_rate: f64,
    /// Positive-label share of the second dataset (the validation side).
    pub tau_prime_rate: f64,
    /// Two-sample KS statistic between the CV and validation loss values.
    pub ks: F,
    /// mean(validation losses) - mean(CV losses).
    pub mean_difference: F,
    pub cv: LossSample<F>,
    pub val: LossSample<F>,
    pub curves: Vec<Curve<F>>,
    pub fold_diagnostics: Vec<FoldDiagnostic>,
    /// Probabilities clamped away from exact 0/1 while scoring.
    pub clamped: usize,
}

impl<F: Real> PredictionScoreReport<F> {
    /// The scalar the caller asked for; `both` reports the KS statistic here
    /// and leaves `mean_difference` alongside it.
    pub fn score_value(&self) -> F {
        match self.score_fn {
            ScoreFn::Ks | ScoreFn::Both => self.ks,
            ScoreFn::MeanDiff => self.mean_difference,
        }
    }
}

impl<F: Real + Serialize> PredictionScoreReport<F> {
    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, self)?;
        writer.write_all(b"\n")?;
        Ok(())
    }

    /// Long-format curve export: `kind, side, fold, x, y`.
    pub fn write_curves_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["kind", "side", "fold", "x", "y"])?;
        for curve in &self.curves {
            for &(x, y) in &curve.points {
                out.write_record([
                    curve.kind.to_string(),
                    curve.side.to_string(),
                    curve.fold.to_string(),
                    format!("{x}"),
                    format!("{y}"),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Loss-value export: `side, fold_or_row, value`, CV rows first.
    pub fn write_loss_samples_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["side", "fold_or_row", "value"])?;
        for sample in [&self.cv, &self.val] {
            for (i, v) in sample.values.iter().enumerate() {
                out.write_record([
                    sample.side.to_string(),
                    i.to_string(),
                    format!("{v}"),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

impl<F: Real + DeserializeOwned> PredictionScoreReport<F> {
    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn toy_report() -> PredictionScoreReport<f64> {
        let cv = LossSample {
            loss_name: "roc_auc".to_string(),
            side: Side::CrossValidation,
            granularity: Granularity::PerFold,
            values: vec![0.6, 0.7, 0.65],
        };
        let val = LossSample {
            loss_name: "roc_auc".to_string(),
            side: Side::Validation,
            granularity: Granularity::PerFold,
            values: vec![0.5, 0.55, 0.6],
        };
        PredictionScoreReport {
            model_name: "Model 1".to_string(),
            loss_name: "roc_auc".to_string(),
            score_fn: ScoreFn::Both,
            k: 3,
            scheme: FoldScheme::Partition,
            subset_size: None,
            stratified: true,
            seed: 11,
            tau_rate: 0.4,
            tau_prime_rate: 0.42,
            ks: 2.0 / 3.0,
            mean_difference: val.mean() - cv.mean(),
            cv,
            val,
            curves: vec![Curve {
                kind: CurveKind::Roc,
                side: Side::CrossValidation,
                fold: 0,
                points: vec![(0.0, 0.0), (0.5, 1.0), (1.0, 1.0)],
            }],
            fold_diagnostics: vec![FoldDiagnostic {
                fold: 0,
                converged: true,
                separated: false,
                iterations: 4,
                train_rows: 100,
            }],
            clamped: 0,
        }
    }

    #[test]
    fn json_round_trips() {
        let report = toy_report();
        let mut buf = Vec::new();
        report.write_json(&mut buf).unwrap();
        let back = PredictionScoreReport::<f64>::read_json(buf.as_slice()).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn mean_difference_matches_the_samples() {
        let report = toy_report();
        assert_relative_eq!(
            report.mean_difference,
            report.val.mean() - report.cv.mean()
        );
    }

    #[test]
    fn score_value_follows_the_requested_function() {
        let mut report = toy_report();
        report.score_fn = ScoreFn::Ks;
        assert_relative_eq!(report.score_value(), report.ks);
        report.score_fn = ScoreFn::MeanDiff;
        assert_relative_eq!(report.score_value(), report.mean_difference);
        report.score_fn = ScoreFn::Both;
        assert_relative_eq!(report.score_value(), report.ks);
    }

    #[test]
    fn csv_exports_have_documented_shapes() {
        let report = toy_report();
        let mut curves = Vec::new();
        report.write_curves_csv(&mut curves).unwrap();
        let curves = String::from_utf8(curves).unwrap();
        let lines: Vec<&str> = curves.trim_end().lines().collect();
        assert_eq!(lines[0], "kind,side,fold,x,y");
        assert_eq!(lines.len(), 1 + 3);

        let mut losses = Vec::new();
        report.write_loss_samples_csv(&mut losses).unwrap();
        let losses = String::from_utf8(losses).unwrap();
        let lines: Vec<&str> = losses.trim_end().lines().collect();
        assert_eq!(lines[0], "side,fold_or_row,value");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("cross_validation,0,"));
        assert!(lines[4].starts_with("validation,0,"));
    }
}

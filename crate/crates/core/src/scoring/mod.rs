//! Prediction scoring: how far apart are the mechanisms behind two
//! datasets, as seen by a fixed model class?
//!
//! The pipeline fits one model per cross-validation fold of the first
//! dataset, scores the held-out folds (the CV losses), then scores the
//! second dataset's folds with those same models (the validation losses).
//! If both datasets come from the same mechanism the two loss samples are
//! draws from the same distribution; the Kolmogorov-Smirnov statistic
//! between them, or the difference of their means, is the score.

mod ks;
mod losses;
mod pipeline;
mod report;

pub use ks::ks_statistic;
pub use losses::{
    pointwise_losses, pr_auc, pr_curve, roc_auc, roc_curve, Granularity, Loss, Pointwise,
};
pub use pipeline::{
    cross_validate, prediction_score, symmetrized_score, validate, Combine, CrossValidation,
    ScoreOptions, ScoreOutcome, Validation,
};
pub use report::{
    Curve, CurveKind, FoldDiagnostic, LossSample, PredictionScoreReport, ScoreFn, Side,
};

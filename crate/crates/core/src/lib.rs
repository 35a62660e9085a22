//! Prediction scoring for comparing data generating mechanisms.
//!
//! The central question this crate answers: given a dataset `tau` and a second
//! dataset `tau_prime`, how differently do models trained on `tau` predict the
//! two? The pipeline fits one model per cross-validation fold of `tau`, scores
//! the held-out folds of `tau` (cross-validation losses) and the folds of
//! `tau_prime` (validation losses) **with those same fold models**, and then
//! summarises the distance between the two loss distributions. When both
//! datasets come from the same mechanism the distributions agree; the further
//! apart the mechanisms, the larger the distance.
//!
//! Modules:
//!
//! * [`dataset`]: binary-outcome datasets, CSV ingestion, fold assignment,
//!   class rebalancing, and lag-feature construction from game panels.
//! * [`models`]: logistic regression via iteratively reweighted least squares,
//!   bootstrap forecast distributions, and Wald tests.
//! * [`scoring`]: loss functions (ROC-AUC, PR-AUC, log score, Brier score),
//!   the cross-validation/validation pipeline, and the prediction score
//!   report.
//! * [`simulation`]: a public-goods game simulator with human and bot
//!   participants, used to exercise the scoring pipeline end to end.
//! * [`evaluation`]: distance covariance/correlation between score matrices
//!   and true mechanism distances, plus the replication harness.
//!
//! The numeric core is generic over the scalar type through [`Real`]; the
//! aliases below fix `f64`, which is what the command line tool and the test
//! suites use.

pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod linalg;
pub mod models;
pub mod scalar;
pub mod scoring;
pub mod seeds;
pub mod simulation;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` dataset. See [`dataset::Dataset`].
pub type Dataset = dataset::Dataset<f64>;
/// `f64` dense matrix. See [`linalg::Matrix`].
pub type Matrix = linalg::Matrix<f64>;
/// `f64` fitted logistic model. See [`models::FittedModel`].
pub type FittedModel = models::FittedModel<f64>;
/// `f64` fit options. See [`models::FitOptions`].
pub type FitOptions = models::FitOptions<f64>;
/// `f64` bootstrap forecast distribution. See [`models::ForecastDistribution`].
pub type ForecastDistribution = models::ForecastDistribution<f64>;
/// `f64` Wald test result. See [`models::TestResult`].
pub type TestResult = models::TestResult<f64>;
/// `f64` loss sample. See [`scoring::LossSample`].
pub type LossSample = scoring::LossSample<f64>;
/// `f64` operating-point curve. See [`scoring::Curve`].
pub type Curve = scoring::Curve<f64>;
/// `f64` prediction score report. See [`scoring::PredictionScoreReport`].
pub type PredictionScoreReport = scoring::PredictionScoreReport<f64>;
/// `f64` scoring options. See [`scoring::ScoreOptions`].
pub type ScoreOptions = scoring::ScoreOptions<f64>;
/// `f64` scoring outcome. See [`scoring::ScoreOutcome`].
pub type ScoreOutcome = scoring::ScoreOutcome<f64>;

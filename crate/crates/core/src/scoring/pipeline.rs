//! The end-to-end scoring pipeline: cross-validate on the first dataset,
//! validate the second against the very same fold models, and compare the
//! two loss distributions.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{assign_folds, Dataset, FoldAssignment, FoldScheme};
use crate::error::{Error, Result};
use crate::models::{fit_logistic, FitOptions, FittedModel, ModelSpec};
use crate::scalar::Real;
use crate::scoring::ks::ks_statistic;
use crate::scoring::losses::{
    pointwise_losses, pr_auc, pr_curve, roc_auc, roc_curve, Granularity, Loss,
};
use crate::scoring::report::{
    Curve, CurveKind, FoldDiagnostic, LossSample, PredictionScoreReport, ScoreFn, Side,
};
use crate::seeds;

/// Fold construction and fitting parameters shared by a scoring run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreOptions<F> {
    pub k: usize,
    pub scheme: FoldScheme,
    /// Rows per fold under the subsample scheme; must be `None` otherwise.
    pub subset_size: Option<usize>,
    pub stratified: bool,
    pub seed: u64,
    pub fit: FitOptions<F>,
}

impl<F: Real> Default for ScoreOptions<F> {
    fn default() -> Self {
        ScoreOptions {
            k: 10,
            scheme: FoldScheme::Subsample,
            subset_size: Some(500),
            stratified: true,
            seed: 0,
            fit: FitOptions::default(),
        }
    }
}

/// Output of [`cross_validate`]: the loss distribution, the fold models (to
/// be reused verbatim by [`validate`]), curves, and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation<F> {
    pub sample: LossSample<F>,
    pub models: Vec<FittedModel<F>>,
    pub curves: Vec<Curve<F>>,
    pub diagnostics: Vec<FoldDiagnostic>,
    pub clamped: usize,
}

/// Output of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validation<F> {
    pub sample: LossSample<F>,
    pub curves: Vec<Curve<F>>,
    pub clamped: usize,
}

fn fold_context(fold: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidArgument(m) => Error::InvalidArgument(format!("fold {fold}: {m}")),
        Error::Contract(m) => Error::Contract(format!("fold {fold}: {m}")),
        Error::Numerical(m) => Error::Numerical(format!("fold {fold}: {m}")),
        other => other,
    }
}

/// Rows a fold's model trains on. Partition folds train on the whole
/// complement. Subsampled folds train on an independent (stratified, when
/// the folds are) subsample of the complement sized `(K-1) * subset_size`,
/// capped at everything outside the fold, so training and test rows never
/// overlap and folds stay comparable.
fn training_rows<F: Real>(
    tau: &Dataset<F>,
    folds: &FoldAssignment,
    fold: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let complement = folds.complement(fold);
    match folds.scheme() {
        FoldScheme::Partition => Ok(complement),
        FoldScheme::Subsample => {
            let s = folds.subset_size().expect("subsample folds carry a subset_size");
            let size = ((folds.k() - 1) * s).min(tau.n_rows() - s);
            if size == 0 {
                return Err(Error::contract(format!(
                    "fold {fold}: no rows left to train on"
                )));
            }
            if size >= complement.len() {
                return Ok(complement);
            }
            let mut rng = seeds::rng(seeds::mix(seed, "train", fold as u64));
            let mut picked: Vec<usize> = if folds.stratified() {
                let labels = tau.labels();
                let ones: Vec<usize> = complement
                    .iter()
                    .copied()
                    .filter(|&i| labels[i] == 1)
                    .collect();
                let zeros: Vec<usize> = complement
                    .iter()
                    .copied()
                    .filter(|&i| labels[i] == 0)
                    .collect();
                let rate = ones.len() as f64 / complement.len() as f64;
                let mut target_ones = (size as f64 * rate).round() as usize;
                target_ones = target_ones
                    .min(ones.len())
                    .max(size.saturating_sub(zeros.len()));
                if target_ones == 0 || target_ones == size {
                    return Err(Error::contract(format!(
                        "fold {fold}: stratified training subsample would be single-class"
                    )));
                }
                let mut picked: Vec<usize> = index::sample(&mut rng, ones.len(), target_ones)
                    .into_iter()
                    .map(|i| ones[i])
                    .collect();
                picked.extend(
                    index::sample(&mut rng, zeros.len(), size - target_ones)
                        .into_iter()
                        .map(|i| zeros[i]),
                );
                picked
            } else {
                index::sample(&mut rng, complement.len(), size)
                    .into_iter()
                    .map(|i| complement[i])
                    .collect()
            };
            picked.sort_unstable();
            Ok(picked)
        }
    }
}

/// Scores one already-fitted model on one fold of data. Returns the loss
/// values (one for AUC losses, one per row otherwise), any curves, and the
/// clamp count.
fn score_with_model<F: Real>(
    model: &FittedModel<F>,
    fold_data: &Dataset<F>,
    loss: Loss,
    side: Side,
    fold: usize,
) -> Result<(Vec<F>, Vec<Curve<F>>, usize)> {
    let probs = model.predict_dataset(fold_data).map_err(fold_context(fold))?;
    let labels = fold_data.labels();
    match loss.granularity() {
        Granularity::PerFold => {
            let value = match loss {
                Loss::RocAuc => roc_auc(&probs, labels),
                Loss::PrAuc => pr_auc(&probs, labels),
                _ => unreachable!("per-fold losses are the AUCs"),
            }
            .map_err(fold_context(fold))?;
            let mut curves = vec![Curve {
                kind: CurveKind::Roc,
                side,
                fold,
                points: roc_curve(&probs, labels).map_err(fold_context(fold))?,
            }];
            if loss == Loss::PrAuc {
                curves.push(Curve {
                    kind: CurveKind::PrecisionRecall,
                    side,
                    fold,
                    points: pr_curve(&probs, labels).map_err(fold_context(fold))?,
                });
            }
            Ok((vec![value], curves, 0))
        }
        Granularity::PerObservation => {
            let pointwise =
                pointwise_losses(&probs, labels, loss).map_err(fold_context(fold))?;
            // Pointwise losses tolerate one-class folds; emit the ROC curve
            // only when it exists.
            let curves = if fold_data.has_both_classes() {
                vec![Curve {
                    kind: CurveKind::Roc,
                    side,
                    fold,
                    points: roc_curve(&probs, labels).map_err(fold_context(fold))?,
                }]
            } else {
                Vec::new()
            };
            Ok((pointwise.values, curves, pointwise.clamped))
        }
    }
}

fn check_folds_match<F: Real>(data: &Dataset<F>, folds: &FoldAssignment) -> Result<()> {
    if folds.n_rows() != data.n_rows() {
        return Err(Error::invalid(format!(
            "fold assignment covers {} rows but the dataset has {}",
            folds.n_rows(),
            data.n_rows()
        )));
    }
    Ok(())
}

/// Fits one model per fold of `tau` and scores each on its held-out fold.
///
/// `seed` drives only the training-subsample draws of the subsample scheme;
/// partition folds ignore it. The fold models come back for reuse by
/// [`validate`], which is what makes CV and validation losses comparable.
pub fn cross_validate<F: Real>(
    tau: &Dataset<F>,
    spec: &ModelSpec,
    folds: &FoldAssignment,
    loss: Loss,
    seed: u64,
    fit: &FitOptions<F>,
) -> Result<CrossValidation<F>> {
    check_folds_match(tau, folds)?;
    let per_fold: Vec<(Vec<F>, FittedModel<F>, Vec<Curve<F>>, FoldDiagnostic, usize)> = (0
        ..folds.k())
        .into_par_iter()
        .map(|k| {
            let train_rows = training_rows(tau, folds, k, seed)?;
            let train = tau.select_rows(&train_rows)?;
            if !train.has_both_classes() {
                return Err(Error::contract(format!(
                    "fold {k}: training rows hold a single class"
                )));
            }
            let model = fit_logistic(&train, spec, fit).map_err(fold_context(k))?;
            let held_out = tau.select_rows(folds.fold(k))?;
            let (values, curves, clamped) =
                score_with_model(&model, &held_out, loss, Side::CrossValidation, k)?;
            let diagnostic = FoldDiagnostic {
                fold: k,
                converged: model.converged(),
                separated: model.separated(),
                iterations: model.iterations(),
                train_rows: model.train_rows(),
            };
            Ok((values, model, curves, diagnostic, clamped))
        })
        .collect::<Result<_>>()?;

    let mut values = Vec::new();
    let mut models = Vec::with_capacity(folds.k());
    let mut curves = Vec::new();
    let mut diagnostics = Vec::with_capacity(folds.k());
    let mut clamped = 0;
    for (fold_values, model, fold_curves, diagnostic, fold_clamped) in per_fold {
        values.extend(fold_values);
        models.push(model);
        curves.extend(fold_curves);
        diagnostics.push(diagnostic);
        clamped += fold_clamped;
    }
    Ok(CrossValidation {
        sample: LossSample {
            loss_name: loss.to_string(),
            side: Side::CrossValidation,
            granularity: loss.granularity(),
            values,
        },
        models,
        curves,
        diagnostics,
        clamped,
    })
}

/// Scores each fold of `tau_prime` with the corresponding fold model from
/// cross-validation. No fitting happens here: the models were trained on
/// subsets of the first dataset only, which is the whole point.
pub fn validate<F: Real>(
    tau_prime: &Dataset<F>,
    fold_models: &[FittedModel<F>],
    folds_prime: &FoldAssignment,
    loss: Loss,
) -> Result<Validation<F>> {
    check_folds_match(tau_prime, folds_prime)?;
    if folds_prime.k() != fold_models.len() {
        return Err(Error::invalid(format!(
            "{} fold models against {} validation folds",
            fold_models.len(),
            folds_prime.k()
        )));
    }
    for (k, model) in fold_models.iter().enumerate() {
        if !model.usable() {
            return Err(Error::contract(format!(
                "fold {k} model has non-finite coefficients and cannot predict"
            )));
        }
    }
    let per_fold: Vec<(Vec<F>, Vec<Curve<F>>, usize)> = fold_models
        .par_iter()
        .enumerate()
        .map(|(k, model)| {
            let held_out = tau_prime.select_rows(folds_prime.fold(k))?;
            score_with_model(model, &held_out, loss, Side::Validation, k)
        })
        .collect::<Result<_>>()?;

    let mut values = Vec::new();
    let mut curves = Vec::new();
    let mut clamped = 0;
    for (fold_values, fold_curves, fold_clamped) in per_fold {
        values.extend(fold_values);
        curves.extend(fold_curves);
        clamped += fold_clamped;
    }
    Ok(Validation {
        sample: LossSample {
            loss_name: loss.to_string(),
            side: Side::Validation,
            granularity: loss.granularity(),
            values,
        },
        curves,
        clamped,
    })
}

/// A scoring run's full result: the report plus the fold models behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreOutcome<F> {
    pub report: PredictionScoreReport<F>,
    pub models: Vec<FittedModel<F>>,
}

/// Runs the whole pipeline: fold both datasets, cross-validate on `tau`,
/// validate `tau_prime` with the shared fold models, and compare the loss
/// distributions with the KS statistic and the mean difference.
///
/// Both datasets are folded with the same derived seed, so passing the same
/// dataset twice yields identical folds and a score of exactly zero.
///
/// `pr_auc` is refused when the baseline label rates differ by more than
/// 0.02, because precision comparisons confound mechanism differences with
/// rate differences; rebalance the second dataset to the first one's rate
/// before scoring.
pub fn prediction_score<F: Real>(
    tau: &Dataset<F>,
    tau_prime: &Dataset<F>,
    spec: &ModelSpec,
    loss: Loss,
    score_fn: ScoreFn,
    options: &ScoreOptions<F>,
) -> Result<ScoreOutcome<F>> {
    if loss == Loss::PrAuc {
        let gap = (tau.label_rate() - tau_prime.label_rate()).abs();
        if gap > 0.02 {
            return Err(Error::contract(format!(
                "pr_auc compares precision at matched baseline label rates, but these \
                 datasets differ by {gap:.4} ({:.4} vs {:.4}); resample the second dataset \
                 to the first one's rate before scoring (the CLI --rebalance flag does this)",
                tau.label_rate(),
                tau_prime.label_rate()
            )));
        }
    }
    let fold_seed = seeds::mix(options.seed, "folds", 0);
    let folds_tau = assign_folds(
        tau,
        options.k,
        options.scheme,
        options.subset_size,
        options.stratified,
        fold_seed,
    )?;
    let folds_prime = assign_folds(
        tau_prime,
        options.k,
        options.scheme,
        options.subset_size,
        options.stratified,
        fold_seed,
    )?;
    let cv = cross_validate(
        tau,
        spec,
        &folds_tau,
        loss,
        seeds::mix(options.seed, "cv-train", 0),
        &options.fit,
    )?;
    let val = validate(tau_prime, &cv.models, &folds_prime, loss)?;

    let ks = ks_statistic(&cv.sample.values, &val.sample.values)?;
    let mean_difference = val.sample.mean() - cv.sample.mean();
    let mut curves = cv.curves;
    curves.extend(val.curves);

    Ok(ScoreOutcome {
        report: PredictionScoreReport {
            model_name: spec.name().to_string(),
            loss_name: loss.to_string(),
            score_fn,
            k: options.k,
            scheme: options.scheme,
            subset_size: options.subset_size,
            stratified: options.stratified,
            seed: options.seed,
            tau_rate: tau.label_rate(),
            tau_prime_rate: tau_prime.label_rate(),
            ks,
            mean_difference,
            cv: cv.sample,
            val: val.sample,
            curves,
            fold_diagnostics: cv.diagnostics,
            clamped: cv.clamped + val.clamped,
        },
        models: cv.models,
    })
}

/// How to fold a forward and a reverse score into one symmetric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combine {
    Mean,
    Max,
}

impl std::str::FromStr for Combine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Combine::Mean),
            "max" => Ok(Combine::Max),
            other => Err(Error::invalid(format!(
                "unknown combiner {other:?}; expected mean or max"
            ))),
        }
    }
}

/// Combines the KS scores of a forward run and a role-swapped reverse run
/// into one symmetric distance.
pub fn symmetrized_score<F: Real>(
    forward: &PredictionScoreReport<F>,
    reverse: &PredictionScoreReport<F>,
    combine: Combine,
) -> Result<F> {
    if forward.loss_name != reverse.loss_name || forward.model_name != reverse.model_name {
        return Err(Error::invalid(format!(
            "cannot symmetrize ({}, {}) against ({}, {})",
            forward.model_name, forward.loss_name, reverse.model_name, reverse.loss_name
        )));
    }
    Ok(match combine {
        Combine::Mean => (forward.ks + reverse.ks) / crate::scalar::real(2.0),
        Combine::Max => forward.ks.max(reverse.ks),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    /// Labels follow a logistic signal in one feature.
    fn signal_data(n: usize, seed: u64) -> Dataset<f64> {
        let mut rng = seeds::rng(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let x: f64 = rng.random_range(-2.0..2.0);
            let p = crate::models::inv_logit(0.2 + 1.4 * x);
            rows.push(vec![x]);
            labels.push(u8::from(rng.random_bool(p)));
        }
        Dataset::from_rows(&["x"], &rows, &labels).unwrap()
    }

    fn noise_data(n: usize, seed: u64) -> Dataset<f64> {
        let mut rng = seeds::rng(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            rows.push(vec![rng.random_range(-2.0..2.0_f64)]);
            labels.push(u8::from(rng.random_bool(0.5)));
        }
        Dataset::from_rows(&["x"], &rows, &labels).unwrap()
    }

    fn partition_options(k: usize, seed: u64) -> ScoreOptions<f64> {
        ScoreOptions {
            k,
            scheme: FoldScheme::Partition,
            subset_size: None,
            stratified: true,
            seed,
            fit: FitOptions::default(),
        }
    }

    #[test]
    fn same_dataset_scores_exactly_zero() {
        let tau = signal_data(120, 1);
        let spec = ModelSpec::new("m", &["x"]);
        let outcome = prediction_score(
            &tau,
            &tau,
            &spec,
            Loss::RocAuc,
            ScoreFn::Both,
            &partition_options(4, 7),
        )
        .unwrap();
        assert_relative_eq!(outcome.report.ks, 0.0);
        assert_relative_eq!(outcome.report.mean_difference, 0.0);
        assert_eq!(outcome.report.cv.values, outcome.report.val.values);
    }

    #[test]
    fn per_fold_loss_yields_k_values_and_2k_curves() {
        let tau = signal_data(150, 2);
        let prime = signal_data(150, 3);
        let spec = ModelSpec::new("m", &["x"]);
        let outcome = prediction_score(
            &tau,
            &prime,
            &spec,
            Loss::RocAuc,
            ScoreFn::Ks,
            &partition_options(5, 7),
        )
        .unwrap();
        assert_eq!(outcome.report.cv.len(), 5);
        assert_eq!(outcome.report.val.len(), 5);
        assert_eq!(outcome.report.curves.len(), 10);
        assert_eq!(outcome.models.len(), 5);
        assert_eq!(outcome.report.fold_diagnostics.len(), 5);
    }

    #[test]
    fn pointwise_loss_yields_one_value_per_row() {
        let tau = signal_data(90, 4);
        let prime = signal_data(60, 5);
        let spec = ModelSpec::new("m", &["x"]);
        let outcome = prediction_score(
            &tau,
            &prime,
            &spec,
            Loss::Brier,
            ScoreFn::Ks,
            &partition_options(3, 7),
        )
        .unwrap();
        assert_eq!(outcome.report.cv.len(), 90);
        assert_eq!(outcome.report.val.len(), 60);
    }

    #[test]
    fn injected_flat_model_gives_constant_brier() {
        let data = signal_data(40, 6);
        let folds = assign_folds(&data, 2, FoldScheme::Partition, None, true, 3).unwrap();
        let spec = ModelSpec::new("flat", &["x"]);
        let flat = FittedModel::from_coefficients(spec, vec![0.0, 0.0]).unwrap();
        let validation = validate(&data, &[flat.clone(), flat], &folds, Loss::Brier).unwrap();
        for v in &validation.sample.values {
            assert_relative_eq!(*v, 0.25);
        }
    }

    #[test]
    fn no_signal_folds_center_on_one_half() {
        let tau = noise_data(400, 8);
        let folds = assign_folds(&tau, 8, FoldScheme::Partition, None, true, 9).unwrap();
        let cv = cross_validate(
            &tau,
            &ModelSpec::new("m", &["x"]),
            &folds,
            Loss::RocAuc,
            1,
            &FitOptions::default(),
        )
        .unwrap();
        let mean = cv.sample.mean();
        assert!((mean - 0.5).abs() < 0.15, "mean fold AUC {mean}");
    }

    #[test]
    fn flipped_validation_labels_sink_below_one_half() {
        let tau = signal_data(300, 10);
        let prime = signal_data(300, 11);
        let flipped_labels: Vec<u8> = prime.labels().iter().map(|&y| 1 - y).collect();
        let rows: Vec<Vec<f64>> = (0..prime.n_rows()).map(|i| prime.row(i).to_vec()).collect();
        let flipped = Dataset::from_rows(&["x"], &rows, &flipped_labels).unwrap();
        let outcome = prediction_score(
            &tau,
            &flipped,
            &ModelSpec::new("m", &["x"]),
            Loss::RocAuc,
            ScoreFn::Ks,
            &partition_options(5, 12),
        )
        .unwrap();
        assert!(outcome.report.val.mean() < 0.5);
        assert!(outcome.report.cv.mean() > 0.5);
    }

    #[test]
    fn validation_never_refits_the_models() {
        let tau = signal_data(200, 13);
        let prime_a = signal_data(200, 14);
        let prime_b = noise_data(200, 15);
        let spec = ModelSpec::new("m", &["x"]);
        let options = partition_options(4, 16);
        let a = prediction_score(&tau, &prime_a, &spec, Loss::RocAuc, ScoreFn::Ks, &options)
            .unwrap();
        let b = prediction_score(&tau, &prime_b, &spec, Loss::RocAuc, ScoreFn::Ks, &options)
            .unwrap();
        // Same tau, same seed, different tau_prime: bit-identical models.
        assert_eq!(a.models, b.models);
        assert_eq!(a.report.cv, b.report.cv);
    }

    #[test]
    fn mismatched_fold_count_is_rejected() {
        let tau = signal_data(100, 17);
        let folds = assign_folds(&tau, 4, FoldScheme::Partition, None, true, 1).unwrap();
        let spec = ModelSpec::new("m", &["x"]);
        let cv = cross_validate(&tau, &spec, &folds, Loss::RocAuc, 1, &FitOptions::default())
            .unwrap();
        let other_folds = assign_folds(&tau, 5, FoldScheme::Partition, None, true, 1).unwrap();
        let err = validate(&tau, &cv.models, &other_folds, Loss::RocAuc).unwrap_err();
        assert!(err.to_string().contains("4 fold models against 5"));
    }

    #[test]
    fn pr_auc_guard_fires_on_rate_mismatch() {
        // ~86% positives vs ~50% positives.
        let mut rng = seeds::rng(18);
        let build = |rate: f64, rng: &mut rand_chacha::ChaCha8Rng| {
            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for _ in 0..200 {
                rows.push(vec![rng.random_range(-1.0..1.0_f64)]);
                labels.push(u8::from(rng.random_bool(rate)));
            }
            Dataset::from_rows(&["x"], &rows, &labels).unwrap()
        };
        let tau = build(0.86, &mut rng);
        let prime = build(0.50, &mut rng);
        let err = prediction_score(
            &tau,
            &prime,
            &ModelSpec::new("m", &["x"]),
            Loss::PrAuc,
            ScoreFn::Ks,
            &partition_options(4, 19),
        )
        .unwrap_err();
        let message = err.to_string();
        assert!(message.contains("baseline label rates"), "{message}");
        assert!(message.contains("rebalance"), "{message}");
    }

    #[test]
    fn subsample_scheme_trains_disjointly_from_each_fold() {
        let tau = signal_data(300, 20);
        let folds = assign_folds(&tau, 4, FoldScheme::Subsample, Some(60), true, 21).unwrap();
        for k in 0..4 {
            let train = training_rows(&tau, &folds, k, 22).unwrap();
            // (K-1)*s = 180 < 300 - 60 = 240.
            assert_eq!(train.len(), 180);
            let fold = folds.fold(k);
            assert!(train.iter().all(|i| !fold.contains(i)));
        }
    }

    #[test]
    fn symmetrized_score_combines_ks_values() {
        let mut fwd = {
            let tau = signal_data(80, 23);
            prediction_score(
                &tau,
                &tau,
                &ModelSpec::new("m", &["x"]),
                Loss::RocAuc,
                ScoreFn::Ks,
                &partition_options(4, 24),
            )
            .unwrap()
            .report
        };
        let mut rev = fwd.clone();
        fwd.ks = 0.4;
        rev.ks = 0.2;
        assert_relative_eq!(
            symmetrized_score(&fwd, &rev, Combine::Mean).unwrap(),
            0.3
        );
        assert_relative_eq!(symmetrized_score(&fwd, &rev, Combine::Max).unwrap(), 0.4);
        rev.model_name = "other".to_string();
        assert!(symmetrized_score(&fwd, &rev, Combine::Mean).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let tau = signal_data(150, 25);
        let prime = signal_data(150, 26);
        let spec = ModelSpec::new("m", &["x"]);
        let options = ScoreOptions {
            k: 5,
            scheme: FoldScheme::Subsample,
            subset_size: Some(40),
            stratified: true,
            seed: 27,
            fit: FitOptions::default(),
        };
        let a = prediction_score(&tau, &prime, &spec, Loss::RocAuc, ScoreFn::Both, &options)
            .unwrap();
        let b = prediction_score(&tau, &prime, &spec, Loss::RocAuc, ScoreFn::Both, &options)
            .unwrap();
        assert_eq!(a, b);
    }
}

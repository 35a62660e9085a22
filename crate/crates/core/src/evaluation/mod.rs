//! How well does the prediction score track the truth? On simulated panels
//! the generating mechanisms are known, so the score matrix over all ordered
//! pairs of settings can be compared, via distance covariance and distance
//! correlation, with the true distance between the settings (the difference
//! of their bot fractions). The replication harness repeats the whole study
//! under fresh seeds.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dataset::{
    lagged_features, matched_target_size, rebalance, Dataset, LagFeatureSet, RebalanceSpec,
};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::scalar::{real, Real};
use crate::scoring::{prediction_score, Loss, ScoreFn, ScoreOptions};
use crate::seeds;
use crate::simulation::{simulate_grid, GamePanel, SimConfig};

mod dcov;

pub use dcov::{
    distance_correlation, distance_covariance, distance_covariance_sq, DistanceCorrelation,
};

/// Prediction scores over every ordered pair of grid settings. Row `i`
/// supplies the training dataset, column `j` the validation dataset, so the
/// matrix is not expected to be symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseScoreMatrix<F> {
    pub grid: Vec<f64>,
    /// Row-major, side `grid.len()`.
    pub scores: Vec<F>,
    pub model_name: String,
    pub loss_name: String,
}

impl<F: Real> PairwiseScoreMatrix<F> {
    pub fn side(&self) -> usize {
        self.grid.len()
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.scores[i * self.side() + j]
    }

    pub fn flat(&self) -> &[F] {
        &self.scores
    }

    /// True mechanism distances |pi_i - pi_j| over the same ordered pairs,
    /// aligned with [`flat`](Self::flat).
    pub fn true_distances(&self) -> Vec<F> {
        let mut out = Vec::with_capacity(self.grid.len() * self.grid.len());
        for &a in &self.grid {
            for &b in &self.grid {
                out.push(real((a - b).abs()));
            }
        }
        out
    }

    /// Largest |s_ij - s_ji| over the pairs; the score is directional, so
    /// this is information, not error.
    pub fn max_asymmetry(&self) -> F {
        let n = self.side();
        let mut worst = F::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `pi_row, pi_col, score` in row-major order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["pi_row", "pi_col", "score"])?;
        for (i, &pi_row) in self.grid.iter().enumerate() {
            for (j, &pi_col) in self.grid.iter().enumerate() {
                out.write_record([
                    format!("{pi_row}"),
                    format!("{pi_col}"),
                    format!("{}", self.get(i, j)),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn pair_context(pi_row: f64, pi_col: f64) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidArgument(m) => {
            Error::InvalidArgument(format!("pair ({pi_row}, {pi_col}): {m}"))
        }
        Error::Contract(m) => Error::Contract(format!("pair ({pi_row}, {pi_col}): {m}")),
        Error::Numerical(m) => Error::Numerical(format!("pair ({pi_row}, {pi_col}): {m}")),
        other => other,
    }
}

fn panel_datasets<F: Real>(panels: &[(f64, GamePanel)]) -> Result<Vec<(f64, Dataset<F>)>> {
    panels
        .iter()
        .map(|(pi, panel)| Ok((*pi, lagged_features(panel, LagFeatureSet::all())?)))
        .collect()
}

/// Scores every ordered pair of settings: the training dataset comes from
/// `panels`, the validation dataset from `independent`, which must cover the
/// same grid. Diagonal cells therefore compare two independent draws of the
/// same mechanism and estimate the matched null rather than sitting at zero.
///
/// For `pr_auc`, a validation dataset whose label rate drifts more than 0.02
/// from the training rate is resampled to match it first.
pub fn pairwise_scores<F: Real>(
    panels: &[(f64, GamePanel)],
    independent: &[(f64, GamePanel)],
    spec: &ModelSpec,
    loss: Loss,
    options: &ScoreOptions<F>,
) -> Result<PairwiseScoreMatrix<F>> {
    if panels.len() < 2 {
        return Err(Error::invalid(
            "pairwise scoring needs at least two grid settings".to_string(),
        ));
    }
    if panels.len() != independent.len()
        || panels
            .iter()
            .zip(independent)
            .any(|((a, _), (b, _))| a != b)
    {
        return Err(Error::invalid(
            "the independent panels must cover the same grid in the same order".to_string(),
        ));
    }
    let taus: Vec<(f64, Dataset<F>)> = panel_datasets(panels)?;
    let primes: Vec<(f64, Dataset<F>)> = panel_datasets(independent)?;
    let n = taus.len();

    let scores: Vec<F> = (0..n * n)
        .into_par_iter()
        .map(|cell| {
            let (i, j) = (cell / n, cell % n);
            let (pi_row, tau) = &taus[i];
            let (pi_col, prime) = &primes[j];
            let context = pair_context(*pi_row, *pi_col);
            let pair_seed = seeds::mix(options.seed, "pair", cell as u64);
            let pair_options = ScoreOptions {
                seed: pair_seed,
                ..*options
            };
            let rebalanced;
            let mut tau_prime = prime;
            if loss == Loss::PrAuc && (tau.label_rate() - prime.label_rate()).abs() > 0.02 {
                let rate = tau.label_rate();
                let size = matched_target_size(prime, rate).map_err(&context)?;
                rebalanced = rebalance(
                    prime,
                    &RebalanceSpec {
                        target_rate: rate,
                        target_size: size,
                        seed: seeds::mix(pair_seed, "rebalance", 0),
                    },
                )
                .map_err(&context)?;
                tau_prime = &rebalanced;
            }
            let outcome =
                prediction_score(tau, tau_prime, spec, loss, ScoreFn::Ks, &pair_options)
                    .map_err(&context)?;
            Ok(outcome.report.ks)
        })
        .collect::<Result<_>>()?;

    Ok(PairwiseScoreMatrix {
        grid: taus.iter().map(|(pi, _)| *pi).collect(),
        scores,
        model_name: spec.name().to_string(),
        loss_name: loss.to_string(),
    })
}

/// Distance covariance/correlation between score matrices and true distances
/// across independent repetitions of the simulation study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationReport<F> {
    pub reps: usize,
    /// Model name -> one distance covariance per rep.
    pub per_model_dcov: BTreeMap<String, Vec<F>>,
    /// Model name -> one distance correlation per rep, each in [0, 1].
    pub per_model_dcor: BTreeMap<String, Vec<F>>,
    /// The derived seed of each rep, in order.
    pub seeds: Vec<u64>,
}

impl<F: Real + Serialize> ReplicationReport<F> {
    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, self)?;
        writer.write_all(b"\n")?;
        Ok(())
    }

    /// Long-format export: `rep, model, dcov, dcor`, rep-major with models
    /// in name order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["rep", "model", "dcov", "dcor"])?;
        for rep in 0..self.reps {
            for (model, dcovs) in &self.per_model_dcov {
                let dcor = self.per_model_dcor[model][rep];
                out.write_record([
                    rep.to_string(),
                    model.clone(),
                    format!("{}", dcovs[rep]),
                    format!("{dcor}"),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

impl<F: Real + DeserializeOwned> ReplicationReport<F> {
    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }
}

/// Runs the simulation study `reps` times. Each rep simulates two
/// independent grids under its own derived seed, scores every ordered pair
/// of settings per model, and records the distance covariance and distance
/// correlation between the flattened score matrix and the true distances.
pub fn replicate<F: Real>(
    config: &SimConfig,
    specs: &[ModelSpec],
    reps: usize,
    loss: Loss,
    options: &ScoreOptions<F>,
    master_seed: u64,
) -> Result<ReplicationReport<F>> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1".to_string()));
    }
    if specs.is_empty() {
        return Err(Error::invalid("replicate needs at least one model".to_string()));
    }
    let per_rep: Vec<(u64, Vec<(String, F, F)>)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let run = || -> Result<(u64, Vec<(String, F, F)>)> {
                let rep_seed = seeds::mix(master_seed, "rep", rep as u64);
                let mut cfg = config.clone();
                cfg.seed = seeds::mix(rep_seed, "grid", 0);
                let primary = simulate_grid(&cfg)?;
                cfg.seed = seeds::mix(rep_seed, "grid", 1);
                let independent = simulate_grid(&cfg)?;
                let mut rows = Vec::with_capacity(specs.len());
                for (idx, spec) in specs.iter().enumerate() {
                    let model_options = ScoreOptions {
                        seed: seeds::mix(rep_seed, "model", idx as u64),
                        ..*options
                    };
                    let matrix =
                        pairwise_scores(&primary, &independent, spec, loss, &model_options)?;
                    let truth = matrix.true_distances();
                    let dcov = distance_covariance(matrix.flat(), &truth)?;
                    let dcor = distance_correlation(matrix.flat(), &truth)?.value;
                    rows.push((spec.name().to_string(), dcov, dcor));
                }
                Ok((rep_seed, rows))
            };
            run().map_err(|e| match e {
                Error::InvalidArgument(m) => {
                    Error::InvalidArgument(format!("rep {rep}: {m}"))
                }
                Error::Contract(m) => Error::Contract(format!("rep {rep}: {m}")),
                Error::Numerical(m) => Error::Numerical(format!("rep {rep}: {m}")),
                other => other,
            })
        })
        .collect::<Result<_>>()?;

    let mut per_model_dcov: BTreeMap<String, Vec<F>> = BTreeMap::new();
    let mut per_model_dcor: BTreeMap<String, Vec<F>> = BTreeMap::new();
    let mut rep_seeds = Vec::with_capacity(reps);
    for (rep_seed, rows) in per_rep {
        rep_seeds.push(rep_seed);
        for (model, dcov, dcor) in rows {
            per_model_dcov.entry(model.clone()).or_default().push(dcov);
            per_model_dcor.entry(model).or_default().push(dcor);
        }
    }
    Ok(ReplicationReport {
        reps,
        per_model_dcov,
        per_model_dcor,
        seeds: rep_seeds,
    })
}

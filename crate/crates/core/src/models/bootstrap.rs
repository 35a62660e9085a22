//! Nonparametric-bootstrap forecast distributions: resample the training
//! data, refit, and predict, once per draw.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::models::{fit_logistic, FitOptions, ModelSpec};
use crate::scalar::{mean, Real};
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForecastOptions<F> {
    /// Bootstrap draws (S).
    pub draws: usize,
    /// How many times a non-converged draw is redrawn before it is either
    /// used under a flag (if still usable) or reported as an error.
    pub retry_cap: usize,
    pub seed: u64,
    pub fit: FitOptions<F>,
}

impl<F: Real> Default for ForecastOptions<F> {
    fn default() -> Self {
        ForecastOptions {
            draws: 200,
            retry_cap: 10,
            seed: 0,
            fit: FitOptions::default(),
        }
    }
}

/// Predicted-probability draws: one row per target observation, one column
/// per bootstrap draw, collapsed to per-row means in `point`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastDistribution<F> {
    draws: Vec<Vec<F>>,
    point: Vec<F>,
    flagged: Vec<usize>,
}

impl<F: Real> ForecastDistribution<F> {
    pub fn draws(&self) -> &[Vec<F>] {
        &self.draws
    }

    pub fn n_draws(&self) -> usize {
        self.draws.first().map_or(0, Vec::len)
    }

    /// Mean predicted probability per target observation.
    pub fn point(&self) -> &[F] {
        &self.point
    }

    /// Indices of draws whose fits never converged within the retry cap but
    /// were still usable (capped separation, typically).
    pub fn flagged(&self) -> &[usize] {
        &self.flagged
    }

    /// Standard deviation of the draws for one target observation.
    pub fn row_sd(&self, i: usize) -> F {
        let row = &self.draws[i];
        let m = mean(row);
        let n = real_len::<F>(row.len());
        let var = row
            .iter()
            .map(|&v| (v - m) * (v - m))
            .fold(F::zero(), |a, b| a + b)
            / n;
        var.sqrt()
    }
}

fn real_len<F: Real>(n: usize) -> F {
    crate::scalar::real_usize(n)
}

fn draw_column<F: Real>(
    train: &Dataset<F>,
    spec: &ModelSpec,
    targets: &Matrix<F>,
    options: &ForecastOptions<F>,
    draw: usize,
) -> Result<(Vec<F>, bool)> {
    let mut rng = seeds::rng(seeds::mix(options.seed, "draw", draw as u64));
    let n = train.n_rows();
    let mut last_error = None;
    for attempt in 0..=options.retry_cap {
        let picks: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let resample = train.select_rows(&picks)?;
        match fit_logistic(&resample, spec, &options.fit) {
            Ok(fit) if fit.converged() => return Ok((fit.predict_prob(targets)?, false)),
            Ok(fit) => {
                if attempt == options.retry_cap && fit.usable() {
                    return Ok((fit.predict_prob(targets)?, true));
                }
            }
            Err(e) => last_error = Some(e),
        }
    }
    let detail = last_error.map_or(String::new(), |e| format!("; last failure: {e}"));
    Err(Error::numerical(format!(
        "bootstrap draw {draw} produced no usable fit after {} redraws{detail}",
        options.retry_cap
    )))
}

/// Builds a forecast distribution for `targets` (a covariate matrix matching
/// `spec`) by refitting `spec` on bootstrap resamples of `train`.
///
/// Each draw owns an RNG stream derived from `(seed, draw index)`, so the
/// result is bit-identical for a given input no matter how many threads run
/// the draws.
pub fn forecast_distribution<F: Real>(
    train: &Dataset<F>,
    spec: &ModelSpec,
    targets: &Matrix<F>,
    options: &ForecastOptions<F>,
) -> Result<ForecastDistribution<F>> {
    if options.draws == 0 {
        return Err(Error::invalid("forecast distributions need at least 1 draw"));
    }
    let columns: Vec<(Vec<F>, bool)> = (0..options.draws)
        .into_par_iter()
        .map(|s| draw_column(train, spec, targets, options, s))
        .collect::<Result<_>>()?;

    let n_targets = targets.n_rows();
    let mut draws = vec![Vec::with_capacity(options.draws); n_targets];
    let mut flagged = Vec::new();
    for (s, (column, was_flagged)) in columns.iter().enumerate() {
        for (i, &p) in column.iter().enumerate() {
            draws[i].push(p);
        }
        if *was_flagged {
            flagged.push(s);
        }
    }
    let point = draws.iter().map(|row| mean(row)).collect();
    Ok(ForecastDistribution {
        draws,
        point,
        flagged,
    })
}

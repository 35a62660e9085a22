//! Predictive models: declared covariate specs, maximum-likelihood logistic
//! regression, bootstrap forecast distributions, and Wald tests.

mod bootstrap;
mod logistic;
mod wald;

pub use bootstrap::{forecast_distribution, ForecastDistribution, ForecastOptions};
pub use logistic::{
    fit_logistic, inv_logit, log_likelihood, log_likelihood_gradient, logit, FitOptions,
    FittedModel,
};
pub use wald::{wald_from_parts, wald_test, Alternative, TestResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named logistic model given by its covariate list. The intercept is
/// always included implicitly and is not named here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    name: String,
    covariates: Vec<String>,
}

impl ModelSpec {
    /// Builds a spec from static covariate names.
    ///
    /// Panics on duplicate names; use [`ModelSpec::try_new`] for runtime
    /// input.
    pub fn new(name: impl Into<String>, covariates: &[&str]) -> Self {
        Self::try_new(name, covariates.iter().map(|s| s.to_string()).collect())
            .expect("static covariate list")
    }

    pub fn try_new(name: impl Into<String>, covariates: Vec<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::invalid("model name must be nonempty"));
        }
        for (i, c) in covariates.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::invalid("covariate names must be nonempty"));
            }
            if c == "intercept" {
                return Err(Error::invalid(
                    "the intercept is implicit; do not list it as a covariate",
                ));
            }
            if covariates[..i].contains(c) {
                return Err(Error::invalid(format!("duplicate covariate {c:?}")));
            }
        }
        Ok(ModelSpec { name, covariates })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn covariates(&self) -> &[String] {
        &self.covariates
    }

    /// Design-matrix width: intercept plus one column per covariate.
    pub fn width(&self) -> usize {
        1 + self.covariates.len()
    }
}

/// The three intentionally non-nested single-covariate models a researcher
/// might bring to the panel data: round number, own previous decision, and
/// leave-one-out cohort mean of the previous round.
pub fn researcher_model_specs() -> Vec<ModelSpec> {
    vec![
        ModelSpec::new("Model 1", &["round"]),
        ModelSpec::new("Model 2", &["own_lag"]),
        ModelSpec::new("Model 3", &["cohort_mean_lag"]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn researcher_specs_are_non_nested() {
        let specs = researcher_model_specs();
        assert_eq!(specs.len(), 3);
        assert_eq!(specs[0].covariates(), ["round"]);
        assert_eq!(specs[1].covariates(), ["own_lag"]);
        assert_eq!(specs[2].covariates(), ["cohort_mean_lag"]);
        for a in 0..3 {
            for b in a + 1..3 {
                let shared = specs[a]
                    .covariates()
                    .iter()
                    .filter(|c| specs[b].covariates().contains(c))
                    .count();
                assert_eq!(shared, 0, "specs {a} and {b} share covariates");
            }
        }
    }

    #[test]
    fn duplicate_covariates_are_rejected() {
        assert!(ModelSpec::try_new("m", vec!["x".into(), "x".into()]).is_err());
        assert!(ModelSpec::try_new("m", vec!["intercept".into()]).is_err());
        assert!(ModelSpec::try_new("m", vec![]).is_ok(), "intercept-only model");
    }
}

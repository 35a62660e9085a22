//! Resolving CLI inputs: simulation configs, seeds, model specs, datasets.

use std::fs;
use std::path::Path;

use predscore::dataset::{load_csv, load_panel_csv, is_panel_export_header};
use predscore::models::{researcher_model_specs, ModelSpec};
use predscore::simulation::{interaction_model_spec, SimConfig};
use predscore::{Dataset, Error, Result};
use rand::Rng;

use crate::SimOverrides;

/// Config file, overridden by flags, overriding the study defaults. The
/// returned flag says whether the file pinned a seed itself, which only
/// matters when no `--seed` flag is around to beat it.
pub fn resolve_sim_config(overrides: &SimOverrides) -> Result<(SimConfig, bool)> {
    let mut file_had_seed = false;
    let mut config = match &overrides.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
            let value: toml::Value = toml::from_str(&text)
                .map_err(|e| Error::invalid(format!("bad config {}: {e}", path.display())))?;
            file_had_seed = value.get("seed").is_some();
            toml::from_str::<SimConfig>(&text)
                .map_err(|e| Error::invalid(format!("bad config {}: {e}", path.display())))?
        }
        None => SimConfig::default(),
    };
    if let Some(pi) = &overrides.pi {
        config.pi_grid = pi.clone();
    }
    if let Some(cohorts) = overrides.cohorts {
        config.cohorts = cohorts;
    }
    if let Some(rounds) = overrides.rounds {
        config.rounds = rounds;
    }
    if let Some(pool_size) = overrides.pool_size {
        config.pool_size = pool_size;
    }
    if let Some(p) = overrides.p_participate {
        config.p_participate = p;
    }
    if let Some(coefs) = &overrides.human_coefs {
        let [intercept, round, own_lag, cohort_mean_lag] = coefs.as_slice() else {
            return Err(Error::invalid(format!(
                "--human_coefs takes 4 comma-separated values, got {}",
                coefs.len()
            )));
        };
        config.human_coefs = predscore::simulation::HumanCoefs {
            intercept: *intercept,
            round: *round,
            own_lag: *own_lag,
            cohort_mean_lag: *cohort_mean_lag,
        };
    }
    if let Some(coefs) = &overrides.bot_coefs {
        let [intercept, own_lag] = coefs.as_slice() else {
            return Err(Error::invalid(format!(
                "--bot_coefs takes 2 comma-separated values, got {}",
                coefs.len()
            )));
        };
        config.bot_coefs = predscore::simulation::BotCoefs {
            intercept: *intercept,
            own_lag: *own_lag,
        };
    }
    config.validate()?;
    Ok((config, file_had_seed))
}

/// The given seed, or a fresh one announced on standard error. Kept within
/// i64 so the value survives every config format a user might paste it into.
pub fn materialize_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s = rand::rng().random_range(0..=i64::MAX as u64);
            eprintln!("seed not given; using --seed {s}");
            s
        }
    }
}

/// `--model 1|2|3|interaction` (or a study model's full name), or
/// `--covariates a,b,c` for an ad hoc logistic model. Default: Model 1.
pub fn resolve_model(
    model: Option<&str>,
    covariates: Option<&[String]>,
) -> Result<(ModelSpec, Vec<String>)> {
    if let Some(names) = covariates {
        let spec = ModelSpec::try_new("custom", names.to_vec())?;
        return Ok((spec, names.to_vec()));
    }
    let name = model.unwrap_or("1");
    let study = researcher_model_specs();
    let spec = match name {
        "1" | "Model 1" => study[0].clone(),
        "2" | "Model 2" => study[1].clone(),
        "3" | "Model 3" => study[2].clone(),
        "interaction" => interaction_model_spec(),
        other => {
            return Err(Error::invalid(format!(
                "unknown model {other:?}; expected 1, 2, 3, or interaction \
                 (or --covariates for a custom model)"
            )))
        }
    };
    Ok((spec, Vec::new()))
}

/// Canonical `--model` value for the manifest argv.
pub fn model_argv_name(spec: &ModelSpec) -> &str {
    match spec.name() {
        "Model 1" => "1",
        "Model 2" => "2",
        "Model 3" => "3",
        other => other,
    }
}

/// Loads a scoring input, recognizing this tool's own panel exports by
/// their header; anything else is a plain CSV with a label column and the
/// model's covariates.
pub fn load_dataset(path: &Path, label: &str, spec: &ModelSpec) -> Result<Dataset> {
    let origin = path.display().to_string();
    let file = fs::File::open(path)
        .map_err(|e| Error::contract(format!("cannot open {origin}: {e}")))?;
    let mut reader = csv::Reader::from_reader(file);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::contract(format!("cannot read header of {origin}: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    drop(reader);
    if is_panel_export_header(&header) {
        load_panel_csv(path)
    } else {
        let features: Vec<String> = spec.covariates().to_vec();
        load_csv(path, label, &features, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_shorthand_resolves_to_study_specs() {
        let (spec, _) = resolve_model(Some("2"), None).unwrap();
        assert_eq!(spec.name(), "Model 2");
        assert_eq!(spec.covariates(), ["own_lag"]);
        let (default_spec, _) = resolve_model(None, None).unwrap();
        assert_eq!(default_spec.name(), "Model 1");
        assert!(resolve_model(Some("4"), None).is_err());
    }

    #[test]
    fn covariate_list_builds_a_custom_model() {
        let names = vec!["age".to_string(), "dose".to_string()];
        let (spec, echoed) = resolve_model(None, Some(&names)).unwrap();
        assert_eq!(spec.name(), "custom");
        assert_eq!(spec.covariates(), ["age", "dose"]);
        assert_eq!(echoed, names);
    }
}

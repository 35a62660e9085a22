//! Behavioral checks on the game simulator that only show up at scale.

use predscore::dataset::{lagged_features, LagFeatureSet};
use predscore::models::{fit_logistic, ModelSpec};
use predscore::simulation::{simulate_setting, SimConfig};
use predscore::FitOptions;

/// Bots decide from their own previous move alone, so on an all-bot panel the
/// cohort-mean coefficient must vanish (within sampling noise) once own_lag
/// is in the model.
#[test]
fn bots_ignore_the_cohort_mean() {
    let config = SimConfig {
        cohorts: 60,
        rounds: 15,
        pool_size: 10_000,
        ..SimConfig::default()
    };
    let panel = simulate_setting(&config, 1.0, 4242).unwrap();
    let data = lagged_features::<f64>(&panel, LagFeatureSet::all()).unwrap();
    assert!(data.n_rows() > 10_000, "want a large panel, got {}", data.n_rows());

    let spec = ModelSpec::new("bot probe", &["own_lag", "cohort_mean_lag"]);
    let fit = fit_logistic(&data, &spec, &FitOptions::default()).unwrap();
    assert!(fit.converged());

    let coef = fit.coefficient("cohort_mean_lag").unwrap();
    let se = fit.std_error("cohort_mean_lag").unwrap();
    assert!(
        coef.abs() <= 3.0 * se,
        "cohort_mean_lag coefficient {coef:.4} exceeds 3 se ({se:.4}) on bot-only data"
    );

    let own = fit.coefficient("own_lag").unwrap();
    let own_se = fit.std_error("own_lag").unwrap();
    assert!(
        (own - 2.68).abs() <= 3.0 * own_se,
        "own_lag coefficient {own:.4} not within 3 se ({own_se:.4}) of 2.68"
    );
}

/// The human side conditions on the cohort: the same probe fit on an all-human
/// panel must find a clearly positive cohort-mean coefficient.
#[test]
fn humans_respond_to_the_cohort_mean() {
    let config = SimConfig {
        cohorts: 60,
        rounds: 15,
        pool_size: 10_000,
        ..SimConfig::default()
    };
    let panel = simulate_setting(&config, 0.0, 4242).unwrap();
    let data = lagged_features::<f64>(&panel, LagFeatureSet::all()).unwrap();

    let spec = ModelSpec::new("human probe", &["round", "own_lag", "cohort_mean_lag"]);
    let fit = fit_logistic(&data, &spec, &FitOptions::default()).unwrap();
    assert!(fit.converged());

    let coef = fit.coefficient("cohort_mean_lag").unwrap();
    let se = fit.std_error("cohort_mean_lag").unwrap();
    assert!(
        coef - 3.0 * se > 0.0,
        "cohort_mean_lag coefficient {coef:.4} (se {se:.4}) should be clearly positive"
    );
}

//! Same seed, same bytes: results must not depend on how many rayon workers
//! happen to run, and serialized reports must be stable across reruns.

use predscore::dataset::lagged_features;
use predscore::dataset::LagFeatureSet;
use predscore::evaluation::replicate;
use predscore::models::ModelSpec;
use predscore::scoring::{prediction_score, Loss, ScoreFn};
use predscore::simulation::{simulate_setting, SimConfig};
use predscore::{Dataset, ScoreOptions, ScoreOutcome};

fn sim_config() -> SimConfig {
    SimConfig {
        pi_grid: vec![0.0, 0.5, 1.0],
        cohorts: 4,
        rounds: 8,
        pool_size: 4_000,
        ..SimConfig::default()
    }
}

fn panels() -> (Dataset, Dataset) {
    let config = sim_config();
    let tau = simulate_setting(&config, 0.0, 11).unwrap();
    let tau_prime = simulate_setting(&config, 0.5, 12).unwrap();
    (
        lagged_features(&tau, LagFeatureSet::all()).unwrap(),
        lagged_features(&tau_prime, LagFeatureSet::all()).unwrap(),
    )
}

fn score_once() -> ScoreOutcome {
    let (tau, tau_prime) = panels();
    let spec = ModelSpec::new("Model 1", &["round"]);
    let options = ScoreOptions {
        k: 5,
        subset_size: Some(40),
        seed: 33,
        ..ScoreOptions::default()
    };
    prediction_score(&tau, &tau_prime, &spec, Loss::RocAuc, ScoreFn::Both, &options).unwrap()
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(job)
}

#[test]
fn prediction_score_is_thread_count_invariant() {
    let single = in_pool(1, score_once);
    let wide = in_pool(4, score_once);
    assert_eq!(single.report, wide.report);
    assert_eq!(single.models.len(), wide.models.len());
    for (a, b) in single.models.iter().zip(&wide.models) {
        assert_eq!(a.coefficients(), b.coefficients());
    }
}

#[test]
fn replicate_is_thread_count_invariant_and_serializes_stably() {
    let run = || {
        let specs = vec![
            ModelSpec::new("Model 1", &["round"]),
            ModelSpec::new("Model 2", &["own_lag"]),
        ];
        let options = ScoreOptions {
            k: 3,
            subset_size: Some(30),
            ..ScoreOptions::default()
        };
        replicate(&sim_config(), &specs, 2, Loss::RocAuc, &options, 99).unwrap()
    };
    let single = in_pool(1, run);
    let wide = in_pool(4, run);
    assert_eq!(single.seeds, wide.seeds);
    assert_eq!(single.per_model_dcov, wide.per_model_dcov);
    assert_eq!(single.per_model_dcor, wide.per_model_dcor);

    let mut a = Vec::new();
    let mut b = Vec::new();
    single.write_json(&mut a).unwrap();
    wide.write_json(&mut b).unwrap();
    assert_eq!(a, b, "serialized replication reports differ");
}

//! Exported panels must reload into exactly the dataset the in-memory panel
//! produces: same features, same rows, same labels, same keys.

use predscore::dataset::{lagged_features, load_panel_csv, save_panel_csv, LagFeatureSet};
use predscore::simulation::{simulate_setting, SimConfig};

#[test]
fn export_then_reload_matches_the_in_memory_dataset() {
    let config = SimConfig {
        cohorts: 4,
        rounds: 9,
        pool_size: 5_000,
        ..SimConfig::default()
    };
    let panel = simulate_setting(&config, 0.35, 2024).unwrap();
    let in_memory = lagged_features::<f64>(&panel, LagFeatureSet::all()).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("panel.csv");
    save_panel_csv(&panel, &path).unwrap();
    let reloaded = load_panel_csv::<f64>(&path).unwrap();

    assert_eq!(reloaded.feature_names(), in_memory.feature_names());
    assert_eq!(reloaded.n_rows(), in_memory.n_rows());
    assert_eq!(reloaded.labels(), in_memory.labels());
    assert_eq!(reloaded.panel_keys(), in_memory.panel_keys());
    for i in 0..in_memory.n_rows() {
        assert_eq!(reloaded.row(i), in_memory.row(i), "row {i} differs");
    }
}

#[test]
fn lag_row_count_is_participants_times_recorded_rounds() {
    let config = SimConfig {
        cohorts: 5,
        rounds: 15,
        pool_size: 8_000,
        ..SimConfig::default()
    };
    let panel = simulate_setting(&config, 0.0, 7).unwrap();
    let data = lagged_features::<f64>(&panel, LagFeatureSet::all()).unwrap();
    assert_eq!(data.n_rows(), panel.n_participants() * 15);
}

//! Binary-outcome datasets and their wire formats.
//!
//! A [`Dataset`] is a feature matrix with a 0/1 label per row and, for data
//! that came from a game panel, an optional (cohort, participant, round) key
//! per row. Submodules add fold assignment ([`folds`]), class rebalancing
//! ([`rebalance`]), and lag-feature construction from panels ([`lag`]).

mod csv_io;
pub mod folds;
pub mod lag;
pub mod rebalance;

pub use csv_io::{
    is_panel_export_header, load_csv, load_panel_csv, read_panel_csv, save_panel_csv,
    write_panel_csv, PanelColumns, PANEL_EXPORT_HEADER,
};
pub use folds::{assign_folds, FoldAssignment, FoldScheme};
pub use lag::{lagged_features, LagFeatureSet};
pub use rebalance::{matched_target_size, rebalance, RebalanceSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Identity of a panel row: which cohort, participant, and round produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanelKey {
    pub cohort: u32,
    pub participant: u32,
    pub round: u32,
}

/// Feature matrix with binary labels.
///
/// Row-major storage; every feature value is finite by construction. Panel
/// keys, when present, cover every row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<F> {
    feature_names: Vec<String>,
    features: Vec<F>,
    labels: Vec<u8>,
    panel_keys: Option<Vec<PanelKey>>,
}

impl<F: Real> Dataset<F> {
    /// Builds a dataset from row-major feature storage.
    pub fn new(
        feature_names: Vec<String>,
        features: Vec<F>,
        labels: Vec<u8>,
        panel_keys: Option<Vec<PanelKey>>,
    ) -> Result<Self> {
        let width = feature_names.len();
        let n = labels.len();
        if n == 0 {
            return Err(Error::contract("dataset has no rows"));
        }
        if features.len() != n * width {
            return Err(Error::invalid(format!(
                "feature storage holds {} values, expected {} rows x {} features",
                features.len(),
                n,
                width
            )));
        }
        for (i, name) in feature_names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::invalid("empty feature name"));
            }
            if feature_names[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate feature name {name:?}")));
            }
        }
        for (i, &label) in labels.iter().enumerate() {
            if label > 1 {
                return Err(Error::contract(format!(
                    "label at row {i} is {label}, expected 0 or 1"
                )));
            }
        }
        for (idx, value) in features.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::contract(format!(
                    "non-finite feature value at row {}, column {:?}",
                    idx / width.max(1),
                    feature_names[idx % width.max(1)]
                )));
            }
        }
        if let Some(keys) = &panel_keys {
            if keys.len() != n {
                return Err(Error::invalid(format!(
                    "{} panel keys for {} rows",
                    keys.len(),
                    n
                )));
            }
        }
        Ok(Dataset {
            feature_names,
            features,
            labels,
            panel_keys,
        })
    }

    /// Builds a dataset from one `Vec` per row. Convenient for tests and the
    /// simulator; rows must share the width of `feature_names`.
    pub fn from_rows(
        feature_names: &[&str],
        rows: &[Vec<F>],
        labels: &[u8],
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} feature rows for {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let width = feature_names.len();
        let mut flat = Vec::with_capacity(rows.len() * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::invalid(format!(
                    "row of width {} in a dataset of width {width}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Dataset::new(
            feature_names.iter().map(|s| s.to_string()).collect(),
            flat,
            labels.to_vec(),
            None,
        )
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn width(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn panel_keys(&self) -> Option<&[PanelKey]> {
        self.panel_keys.as_deref()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[F] {
        let w = self.width();
        &self.features[i * w..(i + 1) * w]
    }

    /// Index of a named feature column.
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| {
                Error::contract(format!(
                    "feature {name:?} not present; available: {:?}",
                    self.feature_names
                ))
            })
    }

    pub fn ones(&self) -> usize {
        self.labels.iter().filter(|&&y| y == 1).count()
    }

    pub fn zeros(&self) -> usize {
        self.n_rows() - self.ones()
    }

    /// Fraction of rows labelled 1.
    pub fn label_rate(&self) -> f64 {
        self.ones() as f64 / self.n_rows() as f64
    }

    pub fn has_both_classes(&self) -> bool {
        let ones = self.ones();
        ones > 0 && ones < self.n_rows()
    }

    /// New dataset holding the given rows, in the given order. Duplicate
    /// indices are allowed (rebalancing relies on that).
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::contract("row selection is empty"));
        }
        let w = self.width();
        let mut features = Vec::with_capacity(rows.len() * w);
        let mut labels = Vec::with_capacity(rows.len());
        let mut keys = self.panel_keys.as_ref().map(|_| Vec::with_capacity(rows.len()));
        for &r in rows {
            if r >= self.n_rows() {
                return Err(Error::invalid(format!(
                    "row index {r} out of range for {} rows",
                    self.n_rows()
                )));
            }
            features.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
            if let (Some(out), Some(src)) = (keys.as_mut(), self.panel_keys.as_ref()) {
                out.push(src[r]);
            }
        }
        Dataset::new(self.feature_names.clone(), features, labels, keys)
    }
}

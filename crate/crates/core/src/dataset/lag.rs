//! Lag-feature construction from game panels.

use std::collections::BTreeMap;

use crate::dataset::{Dataset, PanelKey};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simulation::GamePanel;

/// Which lag features to materialise, in the fixed order
/// `round`, `own_lag`, `cohort_mean_lag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LagFeatureSet {
    /// Round index `t`.
    pub round: bool,
    /// The participant's own decision in round `t - 1`.
    pub own_lag: bool,
    /// Mean previous-round decision of the other cohort members.
    pub cohort_mean_lag: bool,
}

impl LagFeatureSet {
    pub fn all() -> Self {
        LagFeatureSet {
            round: true,
            own_lag: true,
            cohort_mean_lag: true,
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut names = Vec::new();
        if self.round {
            names.push("round");
        }
        if self.own_lag {
            names.push("own_lag");
        }
        if self.cohort_mean_lag {
            names.push("cohort_mean_lag");
        }
        names
    }
}

impl Default for LagFeatureSet {
    fn default() -> Self {
        LagFeatureSet::all()
    }
}

/// One analysable panel row: a decision together with its lag context.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LagRow {
    pub cohort: u32,
    pub participant: u32,
    pub round: u32,
    pub is_human: bool,
    pub y: u8,
    pub y_lag: u8,
    mean_num: u32,
    mean_den: u32,
}

impl LagRow {
    /// Leave-one-out cohort mean of the previous round, in [0, 1].
    pub fn cohort_mean_lag(&self) -> f64 {
        f64::from(self.mean_num) / f64::from(self.mean_den)
    }
}

/// Lag rows for every round after the panel's first, in
/// (cohort, participant, round) order. The first round only supplies lags.
pub(crate) fn lag_rows(panel: &GamePanel) -> Result<Vec<LagRow>> {
    if panel.last_round() < panel.first_round() + 1 {
        return Err(Error::contract(
            "panel has a single round, so lag features are undefined; simulate with a warm-up round",
        ));
    }
    let mut cohort_sums: BTreeMap<(u32, u32), (u32, u32)> = BTreeMap::new();
    for record in panel.records() {
        let entry = cohort_sums.entry((record.cohort, record.round)).or_insert((0, 0));
        entry.0 += u32::from(record.y);
        entry.1 += 1;
    }

    let records = panel.records();
    let mut rows = Vec::with_capacity(records.len());
    for (i, record) in records.iter().enumerate() {
        if record.round == panel.first_round() {
            continue;
        }
        // Canonical record order puts the participant's previous round
        // immediately before this one.
        let prev = &records[i - 1];
        debug_assert_eq!(prev.cohort, record.cohort);
        debug_assert_eq!(prev.participant, record.participant);
        debug_assert_eq!(prev.round + 1, record.round);
        let (sum, count) = cohort_sums[&(record.cohort, prev.round)];
        if count < 2 {
            return Err(Error::contract(format!(
                "cohort {} has fewer than two participants, so the leave-one-out mean is undefined",
                record.cohort
            )));
        }
        rows.push(LagRow {
            cohort: record.cohort,
            participant: record.participant,
            round: record.round,
            is_human: record.is_human,
            y: record.y,
            y_lag: prev.y,
            mean_num: sum - u32::from(prev.y),
            mean_den: count - 1,
        });
    }
    Ok(rows)
}

/// Builds the analysis dataset for a panel: one row per participant and round
/// after the first, labelled with the decision and carrying the requested lag
/// features. The warm-up round is consumed as lag context, never emitted.
pub fn lagged_features<F: Real>(panel: &GamePanel, include: LagFeatureSet) -> Result<Dataset<F>> {
    let names = include.names();
    if names.is_empty() {
        return Err(Error::invalid("no lag features requested"));
    }
    let rows = lag_rows(panel)?;
    let mut flat = Vec::with_capacity(rows.len() * names.len());
    let mut labels = Vec::with_capacity(rows.len());
    let mut keys = Vec::with_capacity(rows.len());
    for row in &rows {
        if include.round {
            flat.push(F::from_f64(f64::from(row.round)).expect("round fits any Real"));
        }
        if include.own_lag {
            flat.push(F::from_f64(f64::from(row.y_lag)).expect("lag fits any Real"));
        }
        if include.cohort_mean_lag {
            flat.push(F::from_f64(row.cohort_mean_lag()).expect("mean lag fits any Real"));
        }
        labels.push(row.y);
        keys.push(PanelKey {
            cohort: row.cohort,
            participant: row.participant,
            round: row.round,
        });
    }
    Dataset::new(
        names.into_iter().map(str::to_string).collect(),
        flat,
        labels,
        Some(keys),
    )
}

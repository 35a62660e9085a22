//! Label-rate rebalancing by per-class resampling.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::seeds;

/// Target composition for [`rebalance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RebalanceSpec {
    /// Fraction of rows that carry label 1 after resampling.
    pub target_rate: f64,
    /// Total number of rows after resampling.
    pub target_size: usize,
    pub seed: u64,
}

impl RebalanceSpec {
    /// Number of label-1 rows the resampled dataset will hold.
    pub fn ones_target(&self) -> usize {
        (self.target_rate * self.target_size as f64).round() as usize
    }

    pub fn zeros_target(&self) -> usize {
        self.target_size - self.ones_target()
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_rate > 0.0 && self.target_rate < 1.0) {
            return Err(Error::invalid(format!(
                "target_rate {} must lie strictly between 0 and 1",
                self.target_rate
            )));
        }
        if self.target_size == 0 {
            return Err(Error::invalid("target_size must be positive"));
        }
        if self.ones_target() == 0 || self.zeros_target() == 0 {
            return Err(Error::invalid(format!(
                "target_rate {} at size {} leaves one class empty",
                self.target_rate, self.target_size
            )));
        }
        Ok(())
    }
}

/// Resamples `data` with replacement, per class, to hit the spec's label rate
/// exactly (up to rounding the class counts to integers).
///
/// Label-1 rows are drawn first, then label-0 rows, from one seeded stream,
/// so the output ordering is ones-block then zeros-block. Each class is drawn
/// only from rows of that class; a class with a single row is simply repeated.
pub fn rebalance<F: Real>(data: &Dataset<F>, spec: &RebalanceSpec) -> Result<Dataset<F>> {
    spec.validate()?;
    if !data.has_both_classes() {
        return Err(Error::contract(
            "rebalancing requires at least one row of each class",
        ));
    }
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for (i, &y) in data.labels().iter().enumerate() {
        if y == 1 {
            ones.push(i);
        } else {
            zeros.push(i);
        }
    }
    let mut rng = seeds::rng(seeds::mix(spec.seed, "rebalance", 0));
    let mut picks = Vec::with_capacity(spec.target_size);
    for _ in 0..spec.ones_target() {
        picks.push(ones[rng.random_range(0..ones.len())]);
    }
    for _ in 0..spec.zeros_target() {
        picks.push(zeros[rng.random_range(0..zeros.len())]);
    }
    data.select_rows(&picks)
}

/// Picks a resample size so that holding the scarcer class at its observed
/// count while padding the other class hits `target_rate`; the result is the
/// natural `target_size` when aligning a second dataset to this one's rate.
///
/// If the observed rate exceeds the target, ones are the scarce class and the
/// size is `round(ones / target_rate)`; otherwise zeros are scarce and the
/// size is `round(zeros / (1 - target_rate))`.
pub fn matched_target_size<F: Real>(data: &Dataset<F>, target_rate: f64) -> Result<usize> {
    if !(target_rate > 0.0 && target_rate < 1.0) {
        return Err(Error::invalid(format!(
            "target_rate {target_rate} must lie strictly between 0 and 1"
        )));
    }
    if !data.has_both_classes() {
        return Err(Error::contract(
            "matched_target_size requires both classes present",
        ));
    }
    let ones = data.ones() as f64;
    let zeros = data.zeros() as f64;
    let size = if data.label_rate() > target_rate {
        ones / target_rate
    } else {
        zeros / (1.0 - target_rate)
    };
    Ok(size.round() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn toy(ones: usize, zeros: usize) -> Dataset<f64> {
        let n = ones + zeros;
        let labels: Vec<u8> = (0..n).map(|i| u8::from(i < ones)).collect();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        Dataset::from_rows(&["x"], &rows, &labels).unwrap()
    }

    #[test]
    fn hits_exact_class_counts() {
        let data = toy(1025, 167);
        let spec = RebalanceSpec {
            target_rate: 0.53,
            target_size: 1915,
            seed: 4,
        };
        assert_eq!(spec.ones_target(), 1015);
        assert_eq!(spec.zeros_target(), 900);
        let out = rebalance(&data, &spec).unwrap();
        assert_eq!(out.n_rows(), 1915);
        assert_eq!(out.ones(), 1015);
        assert_eq!(out.zeros(), 900);
    }

    #[test]
    fn even_rate_splits_exactly() {
        let data = toy(30, 70);
        let spec = RebalanceSpec {
            target_rate: 0.5,
            target_size: 200,
            seed: 1,
        };
        let out = rebalance(&data, &spec).unwrap();
        assert_eq!(out.ones(), 100);
        assert_eq!(out.zeros(), 100);
        assert_relative_eq!(out.label_rate(), 0.5);
    }

    #[test]
    fn single_row_class_is_repeated() {
        let data = toy(1, 9);
        let spec = RebalanceSpec {
            target_rate: 0.4,
            target_size: 10,
            seed: 2,
        };
        let out = rebalance(&data, &spec).unwrap();
        assert_eq!(out.ones(), 4);
        for (i, &y) in out.labels().iter().enumerate() {
            if y == 1 {
                // The sole one-row has feature value 0.
                assert_relative_eq!(out.row(i)[0], 0.0);
            }
        }
    }

    #[test]
    fn matched_size_pads_the_plentiful_class() {
        let data = toy(1025, 167);
        // Observed rate 0.8599 is above the target, so ones are held fixed.
        let size = matched_target_size(&data, 1025.0 / 1915.0).unwrap();
        assert_eq!(size, 1915);

        let data = toy(100, 900);
        // Observed rate 0.1 is below the target, so zeros are held fixed.
        let size = matched_target_size(&data, 0.4).unwrap();
        assert_eq!(size, 1500);
    }

    #[test]
    fn rejects_degenerate_targets() {
        let data = toy(5, 5);
        for rate in [0.0, 1.0, -0.2, 1.7] {
            let spec = RebalanceSpec {
                target_rate: rate,
                target_size: 10,
                seed: 0,
            };
            assert!(rebalance(&data, &spec).is_err(), "rate {rate}");
        }
        let tiny = RebalanceSpec {
            target_rate: 0.01,
            target_size: 10,
            seed: 0,
        };
        assert!(rebalance(&data, &tiny).is_err(), "ones_target rounds to 0");
    }

    #[test]
    fn same_seed_reproduces_rows() {
        let data = toy(40, 60);
        let spec = RebalanceSpec {
            target_rate: 0.3,
            target_size: 50,
            seed: 77,
        };
        let a = rebalance(&data, &spec).unwrap();
        let b = rebalance(&data, &spec).unwrap();
        for i in 0..a.n_rows() {
            assert_eq!(a.row(i), b.row(i));
            assert_eq!(a.labels()[i], b.labels()[i]);
        }
    }
}

//! Fold assignment for cross-validation.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::seeds;

/// How folds are drawn from a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldScheme {
    /// Folds partition the rows; sizes differ by at most one.
    Partition,
    /// Each fold is an independent sample of `subset_size` rows drawn without
    /// replacement. Folds may overlap each other.
    Subsample,
}

impl std::fmt::Display for FoldScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FoldScheme::Partition => write!(f, "partition"),
            FoldScheme::Subsample => write!(f, "subsample"),
        }
    }
}

impl std::str::FromStr for FoldScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partition" => Ok(FoldScheme::Partition),
            "subsample" => Ok(FoldScheme::Subsample),
            other => Err(Error::invalid(format!(
                "unknown fold scheme {other:?}; expected partition or subsample"
            ))),
        }
    }
}

/// A reproducible set of folds over one dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    k: usize,
    scheme: FoldScheme,
    subset_size: Option<usize>,
    stratified: bool,
    seed: u64,
    n_rows: usize,
    folds: Vec<Vec<usize>>,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn scheme(&self) -> FoldScheme {
        self.scheme
    }

    pub fn subset_size(&self) -> Option<usize> {
        self.subset_size
    }

    pub fn stratified(&self) -> bool {
        self.stratified
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }

    /// Row indices of fold `f`, sorted ascending.
    pub fn fold(&self, f: usize) -> &[usize] {
        &self.folds[f]
    }

    /// Rows not in fold `f`, sorted ascending.
    pub fn complement(&self, f: usize) -> Vec<usize> {
        let mut in_fold = vec![false; self.n_rows];
        for &row in &self.folds[f] {
            in_fold[row] = true;
        }
        (0..self.n_rows).filter(|&row| !in_fold[row]).collect()
    }
}

/// Assigns `k` folds over `data`.
///
/// Under [`FoldScheme::Partition`] the folds cover every row exactly once
/// with sizes differing by at most one; `subset_size` must be `None`. Under
/// [`FoldScheme::Subsample`] each fold holds exactly `subset_size` distinct
/// rows, and separate folds are drawn independently, so they may overlap.
///
/// With `stratified` set, each class is spread over folds independently, so
/// every fold's label rate tracks the dataset rate as closely as counting
/// allows.
///
/// The result is a pure function of `(data, k, scheme, subset_size,
/// stratified, seed)`; thread counts and call order play no part.
pub fn assign_folds<F: Real>(
    data: &Dataset<F>,
    k: usize,
    scheme: FoldScheme,
    subset_size: Option<usize>,
    stratified: bool,
    seed: u64,
) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::invalid(format!("k = {k}, need at least 2 folds")));
    }
    let n = data.n_rows();
    let folds = match scheme {
        FoldScheme::Partition => {
            if subset_size.is_some() {
                return Err(Error::invalid(
                    "subset_size applies to the subsample scheme only",
                ));
            }
            if n < k {
                return Err(Error::contract(format!(
                    "cannot partition {n} rows into {k} folds"
                )));
            }
            if stratified {
                partition_stratified(data, k, seed)?
            } else {
                partition_plain(n, k, seed)
            }
        }
        FoldScheme::Subsample => {
            let s = subset_size.ok_or_else(|| {
                Error::invalid("the subsample scheme requires a subset_size")
            })?;
            if s == 0 || s > n {
                return Err(Error::contract(format!(
                    "subset_size {s} is outside 1..={n}"
                )));
            }
            if stratified {
                subsample_stratified(data, k, s, seed)?
            } else {
                subsample_plain(n, k, s, seed)
            }
        }
    };
    Ok(FoldAssignment {
        k,
        scheme,
        subset_size,
        stratified,
        seed,
        n_rows: n,
        folds,
    })
}

fn shuffled(mut indices: Vec<usize>, seed: u64) -> Vec<usize> {
    let mut rng = seeds::rng(seed);
    indices.shuffle(&mut rng);
    indices
}

/// Deals `pool` into `k` chunks whose sizes differ by at most one, with the
/// oversized chunks starting at fold `offset` (wrapping). Staggering the
/// offsets across classes keeps the combined fold sizes within one of each
/// other.
fn deal(pool: &[usize], k: usize, offset: usize, folds: &mut [Vec<usize>]) {
    let base = pool.len() / k;
    let remainder = pool.len() % k;
    let mut cursor = 0;
    for f in 0..k {
        let extra = usize::from((f + k - offset % k) % k < remainder);
        let take = base + extra;
        folds[f].extend_from_slice(&pool[cursor..cursor + take]);
        cursor += take;
    }
    debug_assert_eq!(cursor, pool.len());
}

fn partition_plain(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let order = shuffled((0..n).collect(), seeds::mix(seed, "partition", 0));
    let mut folds = vec![Vec::new(); k];
    deal(&order, k, 0, &mut folds);
    for fold in &mut folds {
        fold.sort_unstable();
    }
    folds
}

fn class_indices<F: Real>(data: &Dataset<F>) -> (Vec<usize>, Vec<usize>) {
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for (i, &y) in data.labels().iter().enumerate() {
        if y == 1 {
            ones.push(i);
        } else {
            zeros.push(i);
        }
    }
    (ones, zeros)
}

fn partition_stratified<F: Real>(
    data: &Dataset<F>,
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let (ones, zeros) = class_indices(data);
    for (class, members) in [("1", ones.len()), ("0", zeros.len())] {
        if members < k {
            return Err(Error::contract(format!(
                "stratified partition needs at least {k} rows of class {class}, found {members}"
            )));
        }
    }
    let ones = shuffled(ones, seeds::mix(seed, "partition-ones", 0));
    let zeros = shuffled(zeros, seeds::mix(seed, "partition-zeros", 0));
    let mut folds = vec![Vec::new(); k];
    deal(&ones, k, 0, &mut folds);
    deal(&zeros, k, ones.len() % k, &mut folds);
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

fn sample_without_replacement(
    pool: &[usize],
    amount: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<usize> {
    debug_assert!(amount <= pool.len());
    let picks = rand::seq::index::sample(rng, pool.len(), amount);
    picks.into_iter().map(|i| pool[i]).collect()
}

fn subsample_plain(n: usize, k: usize, s: usize, seed: u64) -> Vec<Vec<usize>> {
    let pool: Vec<usize> = (0..n).collect();
    (0..k)
        .map(|f| {
            let mut rng = seeds::rng(seeds::mix(seed, "subsample-fold", f as u64));
            let mut fold = sample_without_replacement(&pool, s, &mut rng);
            fold.sort_unstable();
            fold
        })
        .collect()
}

fn subsample_stratified<F: Real>(
    data: &Dataset<F>,
    k: usize,
    s: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let (ones, zeros) = class_indices(data);
    let rate = data.label_rate();
    let target_ones = (s as f64 * rate).round() as usize;
    if target_ones == 0 || target_ones == s {
        return Err(Error::contract(format!(
            "stratified subsample of size {s} at label rate {rate:.4} would be single-class"
        )));
    }
    if target_ones > ones.len() || s - target_ones > zeros.len() {
        return Err(Error::contract(format!(
            "stratified subsample needs {target_ones} ones and {} zeros, dataset has {} and {}",
            s - target_ones,
            ones.len(),
            zeros.len()
        )));
    }
    Ok((0..k)
        .map(|f| {
            let mut rng = seeds::rng(seeds::mix(seed, "subsample-fold", f as u64));
            let mut fold = sample_without_replacement(&ones, target_ones, &mut rng);
            fold.extend(sample_without_replacement(&zeros, s - target_ones, &mut rng));
            fold.sort_unstable();
            fold
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(n: usize, ones: usize) -> Dataset<f64> {
        let labels: Vec<u8> = (0..n).map(|i| u8::from(i < ones)).collect();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        Dataset::from_rows(&["x"], &rows, &labels).unwrap()
    }

    #[test]
    fn partition_of_ten_into_five_gives_pairs() {
        let data = toy(10, 4);
        let folds = assign_folds(&data, 5, FoldScheme::Partition, None, false, 7).unwrap();
        for f in 0..5 {
            assert_eq!(folds.fold(f).len(), 2);
        }
        let mut all: Vec<usize> = folds.folds().iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn stratified_partition_balances_each_fold() {
        let data = toy(10, 5);
        let folds = assign_folds(&data, 5, FoldScheme::Partition, None, true, 7).unwrap();
        for f in 0..5 {
            let fold = folds.fold(f);
            assert_eq!(fold.len(), 2);
            let ones = fold.iter().filter(|&&i| data.labels()[i] == 1).count();
            assert_eq!(ones, 1, "fold {f} should hold one row of each class");
        }
    }

    #[test]
    fn partition_sizes_differ_by_at_most_one_with_uneven_remainders() {
        // 7 ones and 6 zeros across 4 folds: both class remainders are
        // nonzero, which is exactly where naive dealing overfills fold 0.
        let data = toy(13, 7);
        let folds = assign_folds(&data, 4, FoldScheme::Partition, None, true, 3).unwrap();
        let sizes: Vec<usize> = folds.folds().iter().map(Vec::len).collect();
        let min = *sizes.iter().min().unwrap();
        let max = *sizes.iter().max().unwrap();
        assert!(max - min <= 1, "sizes {sizes:?}");
    }

    #[test]
    fn stratified_subsample_tracks_the_global_rate() {
        let data = toy(2520, 1280);
        let folds =
            assign_folds(&data, 5, FoldScheme::Subsample, Some(500), true, 11).unwrap();
        let global = data.label_rate();
        for f in 0..5 {
            let fold = folds.fold(f);
            assert_eq!(fold.len(), 500);
            let ones = fold.iter().filter(|&&i| data.labels()[i] == 1).count();
            let rate = ones as f64 / 500.0;
            assert!((rate - global).abs() <= 0.002, "fold {f} rate {rate}");
            let mut dedup = fold.to_vec();
            dedup.dedup();
            assert_eq!(dedup.len(), 500, "rows drawn without replacement");
        }
    }

    #[test]
    fn same_inputs_give_identical_assignments() {
        let data = toy(200, 80);
        let a = assign_folds(&data, 5, FoldScheme::Subsample, Some(50), true, 99).unwrap();
        let b = assign_folds(&data, 5, FoldScheme::Subsample, Some(50), true, 99).unwrap();
        assert_eq!(a, b);
        let c = assign_folds(&data, 5, FoldScheme::Subsample, Some(50), true, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn k_below_two_is_rejected() {
        let data = toy(10, 5);
        assert!(assign_folds(&data, 1, FoldScheme::Partition, None, false, 0).is_err());
    }

    #[test]
    fn oversized_subset_is_rejected() {
        let data = toy(10, 5);
        let err =
            assign_folds(&data, 2, FoldScheme::Subsample, Some(11), false, 0).unwrap_err();
        assert!(err.to_string().contains("subset_size"));
    }

    #[test]
    fn stratified_partition_rejects_scarce_classes() {
        let data = toy(10, 2);
        let err = assign_folds(&data, 5, FoldScheme::Partition, None, true, 0).unwrap_err();
        assert!(err.to_string().contains("class 1"));
    }

    #[test]
    fn complement_excludes_exactly_the_fold() {
        let data = toy(20, 10);
        let folds = assign_folds(&data, 4, FoldScheme::Partition, None, false, 5).unwrap();
        for f in 0..4 {
            let fold = folds.fold(f);
            let complement = folds.complement(f);
            assert_eq!(fold.len() + complement.len(), 20);
            assert!(fold.iter().all(|i| !complement.contains(i)));
        }
    }
}

//! Distance covariance and distance correlation between two univariate
//! samples, computed from pairwise absolute differences.

use crate::error::{Error, Result};
use crate::scalar::{real_usize, Real};

fn check_paired<F: Real>(x: &[F], y: &[F]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "paired samples differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::invalid(
            "distance covariance needs at least two observations".to_string(),
        ));
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid(
            "distance covariance requires finite values".to_string(),
        ));
    }
    Ok(x.len())
}

/// Sums over the n x n matrix of |a_i - a_j| against |b_i - b_j| needed by
/// the uncentered-sum form of squared distance covariance.
fn distance_sums<F: Real>(a: &[F], b: &[F]) -> (F, F, F, F) {
    let n = a.len();
    let mut s1 = F::zero(); // sum_ij A_ij * B_ij
    let mut row_a = vec![F::zero(); n];
    let mut row_b = vec![F::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let aij = (a[i] - a[j]).abs();
            let bij = (b[i] - b[j]).abs();
            s1 = s1 + aij * bij;
            row_a[i] = row_a[i] + aij;
            row_b[i] = row_b[i] + bij;
        }
    }
    let tot_a = row_a.iter().fold(F::zero(), |acc, v| acc + *v);
    let tot_b = row_b.iter().fold(F::zero(), |acc, v| acc + *v);
    let s3 = (0..n).fold(F::zero(), |acc, i| acc + row_a[i] * row_b[i]);
    (s1, tot_a * tot_b, s3, real_usize(n))
}

/// Squared sample distance covariance of two paired univariate samples.
///
/// Equals the mean of the elementwise product of the double-centered
/// distance matrices, computed here via uncentered sums:
/// `S1/n^2 + S2/n^4 - 2*S3/n^3`. Tiny negative values from rounding are
/// floored at zero.
///
/// Two observations are a degenerate case: any two points fit an affine
/// relation exactly, so the statistic would report perfect dependence no
/// matter the data. It is defined as 0 instead.
pub fn distance_covariance_sq<F: Real>(x: &[F], y: &[F]) -> Result<F> {
    let n = check_paired(x, y)?;
    if n == 2 {
        return Ok(F::zero());
    }
    let (s1, s2, s3, n) = distance_sums(x, y);
    let n2 = n * n;
    let v = s1 / n2 + s2 / (n2 * n2) - (s3 + s3) / (n2 * n);
    Ok(v.max(F::zero()))
}

/// Sample distance covariance: the square root of [`distance_covariance_sq`].
pub fn distance_covariance<F: Real>(x: &[F], y: &[F]) -> Result<F> {
    Ok(distance_covariance_sq(x, y)?.sqrt())
}

/// Distance correlation plus a flag for the degenerate case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceCorrelation<F> {
    pub value: F,
    /// True when either marginal distance variance is (numerically) zero,
    /// i.e. one sample is constant; `value` is 0 by convention then.
    pub degenerate: bool,
}

/// Sample distance correlation `dCov(x, y) / sqrt(dCov(x, x) dCov(y, y))`,
/// in [0, 1]. A constant sample has zero distance variance; the ratio is
/// undefined there, reported as 0 with `degenerate` set.
pub fn distance_correlation<F: Real>(x: &[F], y: &[F]) -> Result<DistanceCorrelation<F>> {
    check_paired(x, y)?;
    let vxy = distance_covariance_sq(x, y)?;
    let vxx = distance_covariance_sq(x, x)?;
    let vyy = distance_covariance_sq(y, y)?;
    let denom_sq = vxx * vyy;
    if denom_sq <= F::zero() {
        return Ok(DistanceCorrelation {
            value: F::zero(),
            degenerate: true,
        });
    }
    let r = (vxy / denom_sq.sqrt()).sqrt().min(F::one());
    Ok(DistanceCorrelation {
        value: r,
        degenerate: false,
    })
}

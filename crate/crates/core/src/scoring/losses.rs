//! Loss statistics over predicted probabilities: rank-based AUCs, proper
//! scoring rules, and the curves behind the AUCs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{real, real_usize, Real};

/// Whether a loss yields one value per fold or one per scored observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    PerFold,
    PerObservation,
}

/// The loss statistics the pipeline can compare across folds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    RocAuc,
    PrAuc,
    LogScore,
    Brier,
}

impl Loss {
    /// AUC statistics summarize a whole fold; proper scoring rules stay
    /// per-observation.
    pub fn granularity(self) -> Granularity {
        match self {
            Loss::RocAuc | Loss::PrAuc => Granularity::PerFold,
            Loss::LogScore | Loss::Brier => Granularity::PerObservation,
        }
    }
}

impl std::fmt::Display for Loss {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Loss::RocAuc => "roc_auc",
            Loss::PrAuc => "pr_auc",
            Loss::LogScore => "log_score",
            Loss::Brier => "brier",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roc_auc" => Ok(Loss::RocAuc),
            "pr_auc" => Ok(Loss::PrAuc),
            "log_score" => Ok(Loss::LogScore),
            // For binary outcomes the quadratic score is the Brier score.
            "brier" | "quadratic" => Ok(Loss::Brier),
            other => Err(Error::invalid(format!(
                "unknown loss {other:?}; expected roc_auc, pr_auc, log_score, brier, or quadratic"
            ))),
        }
    }
}

fn check_scored_input<F: Real>(scores: &[F], labels: &[u8]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} scores against {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("scores must be finite"));
    }
    let mut positives = 0;
    for &y in labels {
        if y > 1 {
            return Err(Error::invalid(format!("label {y} is not binary")));
        }
        positives += usize::from(y);
    }
    Ok((positives, labels.len() - positives))
}

/// Indices sorted by descending score, then grouped into tie blocks.
fn descending_blocks<F: Real>(scores: &[F]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match blocks.last_mut() {
            Some(block) if scores[block[0]] == scores[i] => block.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    blocks
}

/// Area under the ROC curve in the Mann-Whitney rank form: ties get average
/// ranks, so the result is the probability that a random positive outscores
/// a random negative, counting ties as one half.
pub fn roc_auc<F: Real>(scores: &[F], labels: &[u8]) -> Result<F> {
    let (positives, negatives) = check_scored_input(scores, labels)?;
    if scores.len() < 2 {
        return Err(Error::contract("roc_auc needs at least two observations"));
    }
    if positives == 0 || negatives == 0 {
        return Err(Error::contract(
            "roc_auc is undefined when only one class is present",
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    // Average 1-based ranks over tie runs, accumulated for positives.
    let mut rank_sum = 0.0_f64;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            if labels[i] == 1 {
                rank_sum += avg_rank;
            }
        }
        start = end;
    }
    let p = positives as f64;
    let auc = (rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64);
    Ok(real(auc))
}

/// Area under the precision-recall step curve: descending-score sweep with
/// right-continuous steps and tie blocks processed whole, no interpolation.
pub fn pr_auc<F: Real>(scores: &[F], labels: &[u8]) -> Result<F> {
    let (positives, _) = check_scored_input(scores, labels)?;
    if positives == 0 {
        return Err(Error::contract(
            "pr_auc is undefined without a positive observation",
        ));
    }
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut area = 0.0_f64;
    let mut prev_recall = 0.0_f64;
    for block in descending_blocks(scores) {
        for &i in &block {
            if labels[i] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        let recall = tp as f64 / positives as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    Ok(real(area))
}

/// ROC curve points (false positive rate, true positive rate) from (0,0) to
/// (1,1), one step per tie block.
pub fn roc_curve<F: Real>(scores: &[F], labels: &[u8]) -> Result<Vec<(F, F)>> {
    let (positives, negatives) = check_scored_input(scores, labels)?;
    if positives == 0 || negatives == 0 {
        return Err(Error::contract(
            "an ROC curve needs both classes present",
        ));
    }
    let mut points = vec![(F::zero(), F::zero())];
    let mut tp = 0usize;
    let mut fp = 0usize;
    for block in descending_blocks(scores) {
        for &i in &block {
            if labels[i] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        points.push((
            real_usize::<F>(fp) / real_usize(negatives),
            real_usize::<F>(tp) / real_usize(positives),
        ));
    }
    Ok(points)
}

/// Precision-recall curve points (recall, precision), one per tie block,
/// starting at the first block that captures a positive (recall stays in
/// (0, 1]).
pub fn pr_curve<F: Real>(scores: &[F], labels: &[u8]) -> Result<Vec<(F, F)>> {
    let (positives, _) = check_scored_input(scores, labels)?;
    if positives == 0 {
        return Err(Error::contract(
            "a precision-recall curve needs a positive observation",
        ));
    }
    let mut points = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    for block in descending_blocks(scores) {
        for &i in &block {
            if labels[i] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        if tp == 0 {
            continue;
        }
        points.push((
            real_usize::<F>(tp) / real_usize(positives),
            real_usize::<F>(tp) / real_usize(tp + fp),
        ));
    }
    Ok(points)
}

/// Per-observation proper-scoring losses with their clamp count.
#[derive(Debug, Clone, PartialEq)]
pub struct Pointwise<F> {
    pub values: Vec<F>,
    /// How many probabilities sat exactly at 0 or 1 and were clamped into
    /// the open interval before taking logs.
    pub clamped: usize,
}

/// Evaluates a per-observation loss (`Loss::LogScore` or `Loss::Brier`) of
/// predicted probabilities against labels.
pub fn pointwise_losses<F: Real>(
    point_probs: &[F],
    labels: &[u8],
    kind: Loss,
) -> Result<Pointwise<F>> {
    if kind.granularity() != Granularity::PerObservation {
        return Err(Error::invalid(format!(
            "{kind} is a per-fold statistic, not a pointwise loss"
        )));
    }
    if point_probs.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} probabilities against {} labels",
            point_probs.len(),
            labels.len()
        )));
    }
    let lo = real::<F>(1e-12).max(F::epsilon());
    let hi = F::one() - lo;
    let mut clamped = 0;
    let mut values = Vec::with_capacity(labels.len());
    for (&p, &y) in point_probs.iter().zip(labels) {
        if !(p >= F::zero() && p <= F::one()) {
            return Err(Error::invalid(format!(
                "predicted probability {p} is outside [0, 1]"
            )));
        }
        if y > 1 {
            return Err(Error::invalid(format!("label {y} is not binary")));
        }
        let p = if p <= F::zero() || p >= F::one() {
            clamped += 1;
            p.max(lo).min(hi)
        } else {
            p
        };
        let y_real = real::<F>(f64::from(y));
        let value = match kind {
            Loss::LogScore => {
                let p_of_y = if y == 1 { p } else { F::one() - p };
                -p_of_y.ln()
            }
            Loss::Brier => (y_real - p) * (y_real - p),
            _ => unreachable!("granularity checked above"),
        };
        values.push(value);
    }
    Ok(Pointwise { values, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn roc_auc_frozen_cases() {
        assert_relative_eq!(roc_auc(&[0.9, 0.1], &[1, 0]).unwrap(), 1.0);
        // 2 concordant of the 4 positive-negative pairs.
        assert_relative_eq!(
            roc_auc(&[0.8, 0.3, 0.6, 0.2], &[1, 0, 0, 1]).unwrap(),
            0.5
        );
        // All ties: every pair counts one half.
        assert_relative_eq!(roc_auc(&[0.4, 0.4, 0.4, 0.4], &[1, 0, 1, 0]).unwrap(), 0.5);
    }

    #[test]
    fn roc_auc_rejects_degenerate_input() {
        assert!(roc_auc(&[0.5], &[1]).is_err());
        assert!(roc_auc(&[0.5, 0.6], &[1, 1]).is_err());
        assert!(roc_auc(&[0.5, 0.6], &[1]).is_err());
        assert!(roc_auc(&[f64::NAN, 0.6], &[1, 0]).is_err());
        assert!(roc_auc(&[0.5, 0.6], &[1, 2]).is_err());
    }

    #[test]
    fn roc_auc_is_rank_invariant() {
        let scores = [0.1_f64, 0.7, 0.3, 0.9, 0.5, 0.2];
        let labels = [0, 1, 0, 1, 1, 0];
        let base = roc_auc(&scores, &labels).unwrap();
        let warped: Vec<f64> = scores.iter().map(|s| (s * 7.0).exp()).collect();
        assert_relative_eq!(roc_auc(&warped, &labels).unwrap(), base);
    }

    #[test]
    fn roc_auc_complementarity() {
        let scores = [0.1, 0.7, 0.3, 0.9, 0.5, 0.2, 0.5];
        let labels = [0, 1, 0, 1, 1, 0, 0];
        let flipped: Vec<u8> = labels.iter().map(|&y| 1 - y).collect();
        let a = roc_auc(&scores, &labels).unwrap();
        let b = roc_auc(&scores, &flipped).unwrap();
        assert_relative_eq!(a + b, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn pr_auc_frozen_cases() {
        // Sweep: (recall 1/2, precision 1) then (recall 1, precision 2/3).
        assert_relative_eq!(
            pr_auc(&[0.9, 0.8, 0.7], &[1, 0, 1]).unwrap(),
            5.0 / 6.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(pr_auc(&[0.9, 0.8, 0.2, 0.1], &[1, 1, 0, 0]).unwrap(), 1.0);
        assert_relative_eq!(pr_auc(&[0.3, 0.9, 0.5], &[1, 1, 1]).unwrap(), 1.0);
        assert!(pr_auc(&[0.3, 0.9], &[0, 0]).is_err());
    }

    #[test]
    fn pr_auc_handles_tie_blocks_whole() {
        // One block of four ties holding 2 positives: single sweep point at
        // recall 1, precision 1/2.
        assert_relative_eq!(pr_auc(&[0.4; 4], &[1, 0, 1, 0]).unwrap(), 0.5);
    }

    #[test]
    fn roc_curve_runs_corner_to_corner() {
        let scores = [0.9, 0.8, 0.7, 0.6];
        let labels = [1, 0, 1, 0];
        let curve = roc_curve(&scores, &labels).unwrap();
        assert_eq!(curve.first().unwrap(), &(0.0, 0.0));
        assert_eq!(curve.last().unwrap(), &(1.0, 1.0));
        for w in curve.windows(2) {
            assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1, "monotone steps");
        }
    }

    #[test]
    fn pr_curve_recall_stays_positive() {
        // Top-scored block is a negative; the curve starts at the first
        // positive instead of recall zero.
        let scores = [0.99, 0.8, 0.7];
        let labels = [0, 1, 1];
        let curve = pr_curve(&scores, &labels).unwrap();
        assert!(curve.iter().all(|&(recall, _)| recall > 0.0));
        assert_relative_eq!(curve.last().unwrap().0, 1.0);
    }

    #[test]
    fn pointwise_frozen_cases() {
        let brier = pointwise_losses(&[0.5], &[1], Loss::Brier).unwrap();
        assert_relative_eq!(brier.values[0], 0.25);
        let log = pointwise_losses(&[0.5], &[0], Loss::LogScore).unwrap();
        assert_relative_eq!(log.values[0], std::f64::consts::LN_2, max_relative = 1e-12);
        let confident = pointwise_losses(&[0.9], &[1], Loss::LogScore).unwrap();
        assert_relative_eq!(confident.values[0], 0.10536051565782628, max_relative = 1e-12);
    }

    #[test]
    fn exact_zero_or_one_probabilities_are_clamped_and_counted() {
        let out = pointwise_losses(&[0.0_f64, 1.0, 0.5], &[0, 1, 1], Loss::LogScore).unwrap();
        assert_eq!(out.clamped, 2);
        assert!(out.values.iter().all(|v| v.is_finite()));
        assert!(pointwise_losses(&[1.2], &[1], Loss::LogScore).is_err());
        assert!(pointwise_losses(&[0.5], &[1], Loss::RocAuc).is_err());
    }

    #[test]
    fn quadratic_parses_as_brier() {
        assert_eq!("quadratic".parse::<Loss>().unwrap(), Loss::Brier);
        assert_eq!("roc_auc".parse::<Loss>().unwrap(), Loss::RocAuc);
        assert_eq!(Loss::PrAuc.to_string(), "pr_auc");
        assert!("hinge".parse::<Loss>().is_err());
    }
}

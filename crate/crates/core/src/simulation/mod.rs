//! Public-goods-game simulator: cohorts of humans and bots playing repeated
//! cooperate/defect rounds under lagged-behavior logistic dynamics.
//!
//! Each participant is a bot with probability `pi`. Humans respond to the
//! round number, their own previous decision, and the leave-one-out cohort
//! mean of the previous round; bots respond only to their own previous
//! decision. An unrecorded warm-up round (round 0), drawn from intercept-only
//! probabilities, supplies the lag features for the first recorded round.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{inv_logit, ModelSpec};
use crate::seeds;

/// Row, own-lag, and cohort-mean-lag coefficients for human participants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HumanCoefs {
    pub intercept: f64,
    pub round: f64,
    pub own_lag: f64,
    pub cohort_mean_lag: f64,
}

impl Default for HumanCoefs {
    fn default() -> Self {
        HumanCoefs {
            intercept: -1.31,
            round: -0.10,
            own_lag: 1.97,
            cohort_mean_lag: 1.25,
        }
    }
}

/// Bots react only to their own previous decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BotCoefs {
    pub intercept: f64,
    pub own_lag: f64,
}

impl Default for BotCoefs {
    fn default() -> Self {
        BotCoefs {
            intercept: -0.78,
            own_lag: 2.68,
        }
    }
}

/// Full simulator configuration. The defaults are the study design this
/// simulator reproduces: 5 bot fractions, 10 cohorts of roughly 18 recruits
/// each, 15 recorded rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    /// Bot fractions to simulate, each in [0, 1].
    pub pi_grid: Vec<f64>,
    /// Cohorts per setting (J).
    pub cohorts: usize,
    /// Recorded rounds per cohort (T); the warm-up round is extra.
    pub rounds: u32,
    /// Recruitment pool size (M).
    pub pool_size: u64,
    /// Per-recruit participation probability (p).
    pub p_participate: f64,
    pub human_coefs: HumanCoefs,
    pub bot_coefs: BotCoefs,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            pi_grid: vec![0.0, 0.25, 0.50, 0.75, 1.0],
            cohorts: 10,
            rounds: 15,
            pool_size: 10_000,
            p_participate: 0.0018,
            human_coefs: HumanCoefs::default(),
            bot_coefs: BotCoefs::default(),
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pi_grid.is_empty() {
            return Err(Error::invalid("pi_grid must name at least one setting"));
        }
        for &pi in &self.pi_grid {
            if !(0.0..=1.0).contains(&pi) {
                return Err(Error::invalid(format!("pi {pi} is outside [0, 1]")));
            }
        }
        if self.cohorts == 0 || self.rounds == 0 || self.pool_size == 0 {
            return Err(Error::invalid(
                "cohorts, rounds, and pool_size must all be at least 1",
            ));
        }
        if !(0.0..=1.0).contains(&self.p_participate) {
            return Err(Error::invalid(format!(
                "p_participate {} is outside [0, 1]",
                self.p_participate
            )));
        }
        Ok(())
    }

    /// Cooperation probability for a human at `round` given lag features.
    pub fn human_prob(&self, round: u32, own_lag: f64, cohort_mean_lag: f64) -> f64 {
        let c = &self.human_coefs;
        inv_logit(
            c.intercept
                + c.round * f64::from(round)
                + c.own_lag * own_lag
                + c.cohort_mean_lag * cohort_mean_lag,
        )
    }

    /// Cooperation probability for a bot given its own previous decision.
    pub fn bot_prob(&self, own_lag: f64) -> f64 {
        let c = &self.bot_coefs;
        inv_logit(c.intercept + c.own_lag * own_lag)
    }
}

/// One participant-round observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanelRecord {
    pub cohort: u32,
    pub participant: u32,
    pub round: u32,
    pub is_human: bool,
    /// 1 = cooperate, 0 = defect.
    pub y: u8,
}

/// A complete simulated panel for one bot-fraction setting.
///
/// Records are kept in canonical (cohort, participant, round) order, every
/// participant has exactly one record per round from the first (warm-up)
/// round through the last, and every cohort holds at least two participants
/// so the leave-one-out mean is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct GamePanel {
    pi: f64,
    records: Vec<PanelRecord>,
    cohort_sizes: Vec<usize>,
    first_round: u32,
    last_round: u32,
    redraws: u64,
}

impl GamePanel {
    pub fn new(pi: f64, mut records: Vec<PanelRecord>) -> Result<Self> {
        if !(0.0..=1.0).contains(&pi) {
            return Err(Error::invalid(format!("pi {pi} is outside [0, 1]")));
        }
        if records.is_empty() {
            return Err(Error::contract("a panel needs at least one record"));
        }
        for r in &records {
            if r.y > 1 {
                return Err(Error::contract(format!(
                    "decision {} for cohort {} participant {} round {} is not binary",
                    r.y, r.cohort, r.participant, r.round
                )));
            }
        }
        records.sort_unstable_by_key(|r| (r.cohort, r.participant, r.round));
        let first_round = records.iter().map(|r| r.round).min().unwrap();
        let last_round = records.iter().map(|r| r.round).max().unwrap();
        let rounds = (last_round - first_round + 1) as usize;

        let mut cohort_sizes = Vec::new();
        let mut cursor = 0;
        while cursor < records.len() {
            let cohort = records[cursor].cohort;
            let mut members = 0;
            while cursor < records.len() && records[cursor].cohort == cohort {
                let participant = records[cursor].participant;
                let human = records[cursor].is_human;
                for offset in 0..rounds {
                    let expect = first_round + offset as u32;
                    let r = records.get(cursor + offset).ok_or_else(|| {
                        Error::contract(format!(
                            "cohort {cohort} participant {participant} is missing round {expect}"
                        ))
                    })?;
                    if (r.cohort, r.participant, r.round) != (cohort, participant, expect) {
                        return Err(Error::contract(format!(
                            "cohort {cohort} participant {participant} lacks exactly one \
                             record per round {first_round}..={last_round}"
                        )));
                    }
                    if r.is_human != human {
                        return Err(Error::contract(format!(
                            "cohort {cohort} participant {participant} changes kind mid-game"
                        )));
                    }
                }
                cursor += rounds;
                members += 1;
            }
            if members < 2 {
                return Err(Error::contract(format!(
                    "cohort {cohort} has {members} participant(s); need at least 2 \
                     for the leave-one-out mean"
                )));
            }
            cohort_sizes.push(members);
        }

        Ok(GamePanel {
            pi,
            records,
            cohort_sizes,
            first_round,
            last_round,
            redraws: 0,
        })
    }

    pub(crate) fn with_redraws(mut self, redraws: u64) -> Self {
        self.redraws = redraws;
        self
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    pub fn records(&self) -> &[PanelRecord] {
        &self.records
    }

    pub fn cohort_sizes(&self) -> &[usize] {
        &self.cohort_sizes
    }

    pub fn n_participants(&self) -> usize {
        self.cohort_sizes.iter().sum()
    }

    pub fn first_round(&self) -> u32 {
        self.first_round
    }

    pub fn last_round(&self) -> u32 {
        self.last_round
    }

    /// Cohorts whose first recruitment draw came up too small to play.
    pub fn redraws(&self) -> u64 {
        self.redraws
    }

    /// Share of cooperate decisions over recorded rounds, excluding the
    /// warm-up (first) round. A single-round panel falls back to all records.
    pub fn cooperation_rate(&self) -> f64 {
        let recorded: Vec<&PanelRecord> = if self.last_round > self.first_round {
            self.records
                .iter()
                .filter(|r| r.round > self.first_round)
                .collect()
        } else {
            self.records.iter().collect()
        };
        let coop: usize = recorded.iter().map(|r| usize::from(r.y)).sum();
        coop as f64 / recorded.len() as f64
    }
}

fn simulate_cohort(
    config: &SimConfig,
    pi: f64,
    cohort: u32,
    seed: u64,
) -> Result<(Vec<PanelRecord>, u64)> {
    let mut rng = seeds::rng(seed);
    let binomial = Binomial::new(config.pool_size, config.p_participate)
        .map_err(|e| Error::invalid(format!("recruitment distribution: {e}")))?;

    // A cohort of 0 or 1 cannot play (the leave-one-out mean needs n >= 2),
    // so undersized recruitment draws are redrawn and counted.
    let mut redraws = 0;
    let n = loop {
        let n = binomial.sample(&mut rng) as usize;
        if n >= 2 {
            break n;
        }
        redraws += 1;
    };

    let is_human: Vec<bool> = (0..n).map(|_| !rng.random_bool(pi)).collect();

    let mut records = Vec::with_capacity(n * (config.rounds as usize + 1));
    let mut prev: Vec<u8> = Vec::with_capacity(n);
    for (i, &human) in is_human.iter().enumerate() {
        let p = if human {
            inv_logit(config.human_coefs.intercept)
        } else {
            inv_logit(config.bot_coefs.intercept)
        };
        let y = u8::from(rng.random_bool(p));
        prev.push(y);
        records.push(PanelRecord {
            cohort,
            participant: i as u32,
            round: 0,
            is_human: human,
            y,
        });
    }

    for t in 1..=config.rounds {
        let prev_sum: u32 = prev.iter().map(|&y| u32::from(y)).sum();
        let mut next = Vec::with_capacity(n);
        for (i, &human) in is_human.iter().enumerate() {
            let own_lag = f64::from(prev[i]);
            let p = if human {
                let loo = f64::from(prev_sum - u32::from(prev[i])) / (n as f64 - 1.0);
                config.human_prob(t, own_lag, loo)
            } else {
                config.bot_prob(own_lag)
            };
            let y = u8::from(rng.random_bool(p));
            next.push(y);
            records.push(PanelRecord {
                cohort,
                participant: i as u32,
                round: t,
                is_human: human,
                y,
            });
        }
        prev = next;
    }

    Ok((records, redraws))
}

/// Simulates one bot-fraction setting: `config.cohorts` cohorts, each with a
/// warm-up round plus `config.rounds` recorded rounds.
///
/// Every cohort draws from its own RNG stream derived from `setting_seed`,
/// so the output is a pure function of `(config, pi, setting_seed)` no matter
/// how the work is scheduled.
pub fn simulate_setting(config: &SimConfig, pi: f64, setting_seed: u64) -> Result<GamePanel> {
    config.validate()?;
    if !(0.0..=1.0).contains(&pi) {
        return Err(Error::invalid(format!("pi {pi} is outside [0, 1]")));
    }
    let cohorts: Vec<(Vec<PanelRecord>, u64)> = (0..config.cohorts)
        .into_par_iter()
        .map(|j| {
            simulate_cohort(config, pi, j as u32, seeds::mix(setting_seed, "cohort", j as u64))
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut redraws = 0;
    for (cohort_records, cohort_redraws) in cohorts {
        records.extend(cohort_records);
        redraws += cohort_redraws;
    }
    Ok(GamePanel::new(pi, records)?.with_redraws(redraws))
}

/// Simulates every setting in `config.pi_grid`, pairing each grid value with
/// its panel. Settings use mutually independent derived seeds.
pub fn simulate_grid(config: &SimConfig) -> Result<Vec<(f64, GamePanel)>> {
    config.validate()?;
    config
        .pi_grid
        .par_iter()
        .enumerate()
        .map(|(idx, &pi)| {
            let panel = simulate_setting(config, pi, seeds::mix(config.seed, "setting", idx as u64))?;
            Ok((pi, panel))
        })
        .collect()
}

/// The condition-effect model used by the traditional analysis of an
/// experiment with a treated condition: round, condition indicator, and
/// their interaction (plus the implicit intercept).
pub fn interaction_model_spec() -> ModelSpec {
    ModelSpec::new(
        "interaction",
        &["round", "condition", "round_x_condition"],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny_config() -> SimConfig {
        SimConfig {
            cohorts: 3,
            rounds: 4,
            pool_size: 40,
            p_participate: 0.2,
            ..SimConfig::default()
        }
    }

    #[test]
    fn bot_probabilities_match_the_coefficients() {
        let config = SimConfig::default(); // logit^-1(-0.78 + 2.68) and logit^-1(-0.78)
        assert_relative_eq!(config.bot_prob(1.0), 0.8698915256370021, max_relative = 1e-9);
        assert_relative_eq!(config.bot_prob(0.0), 0.31431988606174616, max_relative = 1e-9);
    }

    #[test]
    fn human_probability_declines_in_round() {
        let config = SimConfig::default();
        let mut last = 1.0;
        for t in 1..=15 {
            let p = config.human_prob(t, 1.0, 0.5);
            assert!(p < last, "round {t} should cooperate less than round {}", t - 1);
            last = p;
        }
    }

    #[test]
    fn pi_one_recruits_only_bots_and_pi_zero_only_humans() {
        let config = tiny_config();
        let bots = simulate_setting(&config, 1.0, 5).unwrap();
        assert!(bots.records().iter().all(|r| !r.is_human));
        let humans = simulate_setting(&config, 0.0, 5).unwrap();
        assert!(humans.records().iter().all(|r| r.is_human));
    }

    #[test]
    fn panel_is_complete() {
        let config = tiny_config();
        let panel = simulate_setting(&config, 0.5, 11).unwrap();
        let participants = panel.n_participants();
        assert_eq!(
            panel.records().len(),
            participants * (config.rounds as usize + 1)
        );
        assert_eq!(panel.first_round(), 0);
        assert_eq!(panel.last_round(), config.rounds);
        assert_eq!(panel.cohort_sizes().len(), config.cohorts);
        assert!(panel.cohort_sizes().iter().all(|&n| n >= 2));
    }

    #[test]
    fn same_seed_reproduces_the_panel() {
        let config = tiny_config();
        let a = simulate_setting(&config, 0.25, 8).unwrap();
        let b = simulate_setting(&config, 0.25, 8).unwrap();
        assert_eq!(a, b);
        let c = simulate_setting(&config, 0.25, 9).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn undersized_cohorts_are_redrawn() {
        // Binomial(2, 0.5) lands at 0 or 1 three times out of four, so some
        // cohort almost surely needs a redraw, yet all end up playable.
        let config = SimConfig {
            cohorts: 10,
            rounds: 2,
            pool_size: 2,
            p_participate: 0.5,
            ..SimConfig::default()
        };
        let panel = simulate_setting(&config, 0.0, 3).unwrap();
        assert!(panel.redraws() > 0);
        assert!(panel.cohort_sizes().iter().all(|&n| n >= 2));
    }

    #[test]
    fn grid_covers_every_setting_independently() {
        let config = SimConfig {
            pi_grid: vec![0.0, 0.5, 1.0],
            ..tiny_config()
        };
        let grid = simulate_grid(&config).unwrap();
        assert_eq!(grid.len(), 3);
        for ((pi, panel), want) in grid.iter().zip([0.0, 0.5, 1.0]) {
            assert_relative_eq!(*pi, want);
            assert_relative_eq!(panel.pi(), want);
        }
        let again = simulate_grid(&config).unwrap();
        assert_eq!(grid, again);
    }

    #[test]
    fn default_config_matches_the_study_design() {
        let config = SimConfig::default();
        assert_eq!(config.pi_grid, vec![0.0, 0.25, 0.50, 0.75, 1.0]);
        assert_eq!(config.cohorts, 10);
        assert_eq!(config.rounds, 15);
        assert_eq!(config.pool_size, 10_000);
        assert_relative_eq!(config.p_participate, 0.0018);
        // Expected cohort size M * p = 18.
        assert_relative_eq!(config.pool_size as f64 * config.p_participate, 18.0);
    }

    #[test]
    fn panel_validation_rejects_broken_inputs() {
        let good = |cohort: u32, participant: u32, round: u32, y: u8| PanelRecord {
            cohort,
            participant,
            round,
            is_human: true,
            y,
        };
        // Missing round 1 for participant 1.
        let records = vec![
            good(0, 0, 0, 1),
            good(0, 0, 1, 0),
            good(0, 1, 0, 1),
        ];
        assert!(GamePanel::new(0.0, records).is_err());
        // Non-binary decision.
        let records = vec![good(0, 0, 0, 2), good(0, 1, 0, 1)];
        assert!(GamePanel::new(0.0, records).is_err());
        // Single-member cohort.
        let records = vec![good(0, 0, 0, 1)];
        assert!(GamePanel::new(0.0, records).is_err());
    }

    #[test]
    fn interaction_spec_names_three_covariates() {
        let spec = interaction_model_spec();
        assert_eq!(spec.covariates().len(), 3);
        assert_eq!(spec.covariates()[0], "round");
    }
}

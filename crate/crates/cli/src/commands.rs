//! The four subcommands. Each resolves its inputs, runs the library, writes
//! its outputs plus a manifest, and prints a short summary to stdout.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use predscore::dataset::{matched_target_size, rebalance, save_panel_csv, RebalanceSpec};
use predscore::evaluation::replicate as run_replicate;
use predscore::models::ModelSpec;
use predscore::scoring::{prediction_score, Loss, ScoreFn};
use predscore::simulation::{simulate_grid, SimConfig};
use predscore::{Error, FitOptions, PredictionScoreReport, Result, ScoreOptions};

use crate::inputs::{
    load_dataset, materialize_seed, model_argv_name, resolve_model, resolve_sim_config,
};
use crate::manifest::{ArgvBuilder, Manifest};
use crate::{CurvesArgs, ReplicateArgs, ScoreArgs, SimulateArgs};

fn create_out_file(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Flag beats config file beats fresh entropy.
fn resolve_seed(flag: Option<u64>, file_seed: Option<u64>) -> u64 {
    match (flag, file_seed) {
        (Some(s), _) => s,
        (None, Some(s)) => s,
        (None, None) => materialize_seed(None),
    }
}

fn sim_argv(command: &str, config: &SimConfig) -> ArgvBuilder {
    let human = [
        config.human_coefs.intercept,
        config.human_coefs.round,
        config.human_coefs.own_lag,
        config.human_coefs.cohort_mean_lag,
    ];
    let bot = [config.bot_coefs.intercept, config.bot_coefs.own_lag];
    ArgvBuilder::new(command)
        .flag_list("pi", &config.pi_grid)
        .flag("cohorts", config.cohorts)
        .flag("rounds", config.rounds)
        .flag("pool_size", config.pool_size)
        .flag("p_participate", config.p_participate)
        .flag_list("human_coefs", &human)
        .flag_list("bot_coefs", &bot)
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let (mut config, file_had_seed) = resolve_sim_config(&args.sim)?;
    config.seed = resolve_seed(args.seed, file_had_seed.then_some(config.seed));
    fs::create_dir_all(&args.out)?;

    let grid = simulate_grid(&config)?;
    for (pi, panel) in &grid {
        let name = format!("panel_pi_{pi}.csv");
        save_panel_csv(panel, args.out.join(&name))?;
        eprintln!(
            "simulate: pi={pi} participants={} records={} redraws={} -> {name}",
            panel.n_participants(),
            panel.records().len(),
            panel.redraws(),
        );
    }

    let argv = sim_argv("simulate", &config).flag("seed", config.seed).build();
    Manifest::new("simulate", Some(config.seed), argv).save(&args.out)?;
    println!(
        "wrote {} panel files and manifest.json to {}",
        grid.len(),
        args.out.display()
    );
    Ok(())
}

pub fn score(args: &ScoreArgs) -> Result<()> {
    let seed = materialize_seed(args.seed);
    let (spec, custom_covariates) =
        resolve_model(args.model.as_deref(), args.covariates.as_deref())?;
    let loss: Loss = args.loss.parse()?;
    let score_fn: ScoreFn = args.h.parse()?;
    let scheme = args.scheme.parse()?;

    let tau = load_dataset(&args.tau, &args.label, &spec)?;
    let mut tau_prime = load_dataset(&args.tau_prime, &args.label, &spec)?;

    let rebalance_size = if args.rebalance {
        let target_rate = tau.label_rate();
        let target_size = match args.rebalance_size {
            Some(size) => size,
            None => matched_target_size(&tau_prime, target_rate)?,
        };
        tau_prime = rebalance(
            &tau_prime,
            &RebalanceSpec {
                target_rate,
                target_size,
                seed,
            },
        )?;
        Some(target_size)
    } else {
        None
    };

    use predscore::dataset::FoldScheme;
    let (k, subset_size) = match scheme {
        FoldScheme::Partition => {
            let derived = (tau.n_rows() as f64 / args.holdout_size as f64).round() as usize;
            (args.k.unwrap_or(derived.max(2)), args.subset_size)
        }
        FoldScheme::Subsample => (
            args.k.unwrap_or(10),
            Some(args.subset_size.unwrap_or(500)),
        ),
    };
    let options = ScoreOptions {
        k,
        scheme,
        subset_size,
        stratified: !args.no_stratify,
        seed,
        fit: FitOptions::default(),
    };

    let outcome = prediction_score(&tau, &tau_prime, &spec, loss, score_fn, &options)?;

    fs::create_dir_all(&args.out)?;
    outcome.report.write_json(create_out_file(&args.out, "report.json")?)?;
    outcome.report.write_curves_csv(create_out_file(&args.out, "curves.csv")?)?;
    outcome
        .report
        .write_loss_samples_csv(create_out_file(&args.out, "loss_samples.csv")?)?;
    {
        let mut models_out = create_out_file(&args.out, "fold_models.json")?;
        serde_json::to_writer_pretty(&mut models_out, &outcome.models)?;
        models_out.write_all(b"\n")?;
    }

    let mut argv = ArgvBuilder::new("score")
        .flag("tau", args.tau.display())
        .flag("tau_prime", args.tau_prime.display());
    argv = if custom_covariates.is_empty() {
        argv.flag("model", model_argv_name(&spec))
    } else {
        argv.flag_list("covariates", &custom_covariates)
    };
    argv = argv
        .flag("label", &args.label)
        .flag("loss", loss)
        .flag("h", score_fn)
        .flag("scheme", scheme)
        .flag("k", k);
    if let Some(s) = subset_size {
        argv = argv.flag("subset_size", s);
    }
    argv = argv
        .switch("no_stratify", args.no_stratify)
        .switch("rebalance", args.rebalance);
    if let Some(size) = rebalance_size {
        argv = argv.flag("rebalance_size", size);
    }
    let argv = argv.flag("seed", seed).build();
    Manifest::new("score", Some(seed), argv).save(&args.out)?;

    let report = &outcome.report;
    println!(
        "model={} loss={} scheme={} k={} seed={}",
        report.model_name, report.loss_name, report.scheme, report.k, seed
    );
    println!(
        "tau n={} rate={:.4}; tau_prime n={} rate={:.4}",
        tau.n_rows(),
        report.tau_rate,
        tau_prime.n_rows(),
        report.tau_prime_rate
    );
    println!(
        "cv mean={:.6} val mean={:.6}",
        report.cv.mean(),
        report.val.mean()
    );
    match score_fn {
        ScoreFn::Ks => println!("ks={}", report.ks),
        ScoreFn::MeanDiff => println!("mean_difference={}", report.mean_difference),
        ScoreFn::Both => println!(
            "ks={} mean_difference={}",
            report.ks, report.mean_difference
        ),
    }
    Ok(())
}

pub fn replicate(args: &ReplicateArgs) -> Result<()> {
    let (config, file_had_seed) = resolve_sim_config(&args.sim)?;
    let master_seed = resolve_seed(args.seed, file_had_seed.then_some(config.seed));
    let loss: Loss = args.loss.parse()?;
    let mut specs: Vec<ModelSpec> = Vec::with_capacity(args.models.len());
    for name in &args.models {
        let (spec, _) = resolve_model(Some(name), None)?;
        if specs.iter().any(|s| s.name() == spec.name()) {
            return Err(Error::invalid(format!("model {name:?} listed twice")));
        }
        specs.push(spec);
    }
    let options = ScoreOptions {
        k: args.k,
        subset_size: Some(args.subset_size),
        stratified: !args.no_stratify,
        seed: master_seed,
        ..ScoreOptions::default()
    };

    eprintln!(
        "replicate: {} reps x {} models, grid {:?}, loss {loss}, seed {master_seed}",
        args.reps, specs.len(), config.pi_grid
    );
    let started = Instant::now();
    let report = run_replicate(&config, &specs, args.reps, loss, &options, master_seed)?;
    eprintln!(
        "replicate: finished in {:.1}s",
        started.elapsed().as_secs_f64()
    );

    fs::create_dir_all(&args.out)?;
    report.write_json(create_out_file(&args.out, "replication.json")?)?;
    report.write_csv(create_out_file(&args.out, "dcor.csv")?)?;

    let argv = sim_argv("replicate", &config)
        .flag("reps", args.reps)
        .flag_list(
            "models",
            &specs.iter().map(model_argv_name).collect::<Vec<_>>(),
        )
        .flag("loss", loss)
        .flag("k", args.k)
        .flag("subset_size", args.subset_size)
        .switch("no_stratify", args.no_stratify)
        .flag("seed", master_seed)
        .build();
    Manifest::new("replicate", Some(master_seed), argv).save(&args.out)?;

    for (model, dcors) in &report.per_model_dcor {
        println!(
            "{model}: median dcor={:.4} median dcov={:.4} over {} reps",
            median(dcors),
            median(&report.per_model_dcov[model]),
            report.reps
        );
    }
    Ok(())
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

pub fn curves(args: &CurvesArgs) -> Result<()> {
    let report = PredictionScoreReport::read_json(File::open(&args.report)?)?;
    fs::create_dir_all(&args.out)?;
    report.write_curves_csv(create_out_file(&args.out, "curves.csv")?)?;
    report.write_loss_samples_csv(create_out_file(&args.out, "loss_samples.csv")?)?;

    let argv = ArgvBuilder::new("curves")
        .flag("report", args.report.display())
        .build();
    Manifest::new("curves", None, argv).save(&args.out)?;
    println!(
        "wrote curves.csv and loss_samples.csv (model={}, loss={}, {} curves)",
        report.model_name,
        report.loss_name,
        report.curves.len()
    );
    Ok(())
}

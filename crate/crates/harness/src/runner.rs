//! Runs every optimizer of a config on every scenario and repeat.
//!
//! Jobs are (scenario, repeat) pairs spread over a rayon pool. A job builds
//! the model once for its seed and runs the optimizers in config order; the
//! super-charged variants start from the survivors of that job's SWAY4 run.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use swaylab_core::models::Scenario;
use swaylab_core::moea::{nsga2, spea2, MoeaConfig};
use swaylab_core::sway::sample_subset;
use swaylab_core::{
    non_dominated, sway_sampled, Candidate, EvaluationBudget, Model, Problem, SwayConfig,
    SwayOutcome, SWAY2_POPULATION, SWAY4_POPULATION,
};

use crate::config::{ExperimentConfig, Optimizer};
use crate::error::Result;
use crate::records::{Point, RunRecord};

/// One record per scenario x optimizer x repeat, grouped by scenario and
/// repeat in config order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let scenarios = config
        .scenarios
        .iter()
        .map(|s| Scenario::by_name(s))
        .collect::<swaylab_core::Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..scenarios.len())
        .flat_map(|s| (0..config.repeats).map(move |r| (s, r)))
        .collect();
    let done: Vec<Vec<RunRecord>> = jobs
        .par_iter()
        .map(|&(s, r)| run_job(config, &scenarios[s], r))
        .collect::<Result<_>>()?;
    Ok(done.into_iter().flatten().collect())
}

struct SwayRun {
    outcome: SwayOutcome,
    secs: f64,
}

fn run_sway(
    model: &Arc<dyn Model>,
    scenario: &Scenario,
    population: usize,
    seed: u64,
) -> Result<SwayRun> {
    let problem = Problem::new(model.clone());
    let start = Instant::now();
    let outcome = sway_sampled(
        &problem,
        population,
        &SwayConfig::new(scenario.split_strategy(), seed),
    )?;
    Ok(SwayRun {
        outcome,
        secs: start.elapsed().as_secs_f64(),
    })
}

fn to_points(cands: &[Candidate], model: &dyn Model) -> Vec<Point> {
    cands
        .iter()
        .filter_map(|c| {
            c.raw_objectives(model.senses()).map(|objectives| Point {
                objectives,
                violation: c.violation(),
            })
        })
        .collect()
}

pub fn run_job(
    config: &ExperimentConfig,
    scenario: &Scenario,
    repeat: usize,
) -> Result<Vec<RunRecord>> {
    let seed = config.seed_of(repeat);
    let model = scenario.build(seed)?;
    let record = |optimizer, evaluations, front, survivors, wall_secs| RunRecord {
        scenario: scenario.name(),
        optimizer,
        repeat,
        seed,
        evaluations,
        front,
        survivors,
        wall_secs,
    };
    log::info!("{} repeat {repeat} (seed {seed})", scenario.name());

    let mut sway4: Option<SwayRun> = None;
    let mut out = Vec::with_capacity(config.optimizers.len());
    for &opt in &config.optimizers {
        match opt {
            Optimizer::Sway2 | Optimizer::Sway4 => {
                let run = match opt {
                    Optimizer::Sway2 => run_sway(&model, scenario, SWAY2_POPULATION, seed)?,
                    _ => match sway4.take() {
                        Some(run) => run,
                        None => run_sway(&model, scenario, SWAY4_POPULATION, seed)?,
                    },
                };
                // Scoring the survivors is reporting, not optimization, so
                // it is not charged to SWAY.
                let meter = Problem::new(model.clone());
                let mut scored = run.outcome.survivors.clone();
                for c in &mut scored {
                    meter.measure(c)?;
                }
                let front = to_points(&non_dominated(&scored)?, model.as_ref());
                let survivors = if config.persist_survivors {
                    to_points(&scored, model.as_ref())
                } else {
                    Vec::new()
                };
                out.push(record(
                    opt,
                    run.outcome.stats.evaluations,
                    front,
                    survivors,
                    run.secs,
                ));
                if opt == Optimizer::Sway4 {
                    sway4 = Some(run);
                }
            }
            Optimizer::Nsga2 | Optimizer::Spea2 | Optimizer::Nsga2Sc | Optimizer::Spea2Sc => {
                let initial_pop = if opt.is_supercharged() {
                    if sway4.is_none() {
                        sway4 = Some(run_sway(&model, scenario, SWAY4_POPULATION, seed)?);
                    }
                    let survivors = &sway4.as_ref().expect("ran above").outcome.survivors;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    Some(sample_subset(survivors, config.pop_size, &mut rng))
                } else {
                    None
                };
                let problem =
                    Problem::with_budget(model.clone(), EvaluationBudget::new(config.budget)?);
                let moea = MoeaConfig {
                    pop_size: config.pop_size,
                    max_evals: config.budget,
                    seed,
                    initial_pop,
                    ..MoeaConfig::default()
                };
                let start = Instant::now();
                let front = match opt {
                    Optimizer::Nsga2 | Optimizer::Nsga2Sc => nsga2(&problem, &moea)?,
                    _ => spea2(&problem, &moea)?,
                };
                let secs = start.elapsed().as_secs_f64();
                out.push(record(
                    opt,
                    problem.evaluations(),
                    to_points(&front, model.as_ref()),
                    Vec::new(),
                    secs,
                ));
            }
        }
    }
    Ok(out)
}

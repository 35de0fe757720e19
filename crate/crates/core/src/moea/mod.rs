//! Baseline evolutionary optimizers: NSGA-II and SPEA2.
//!
//! Both run under the shared evaluation budget: generation zero is charged
//! for every candidate it has to evaluate, then
//! `floor((max_evals - used) / pop_size)` full generations follow. Partial
//! generations are never run. Either optimizer can be seeded with an initial
//! population, e.g. SWAY survivors; seeds that arrive evaluated are free.

mod nsga2;
mod sort;
mod spea2;
mod variation;

pub use nsga2::nsga2;
pub use sort::{crowding_distance, fast_nondominated_sort, FrontBands};
pub use spea2::{spea2, spea2_environmental_selection, spea2_fitness};
pub use variation::{crossover_and_mutate, variation};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{contract, Result};
use crate::problem::{Candidate, Problem};

#[derive(Debug, Clone)]
pub struct MoeaConfig {
    pub pop_size: usize,
    pub max_evals: usize,
    pub crossover_prob: f64,
    /// SBX distribution index.
    pub crossover_eta: f64,
    /// Polynomial mutation distribution index.
    pub mutation_eta: f64,
    /// Per-dim mutation probability; `None` means `1 / dims`.
    pub mutation_rate: Option<f64>,
    pub seed: u64,
    pub initial_pop: Option<Vec<Candidate>>,
}

impl Default for MoeaConfig {
    fn default() -> Self {
        Self {
            pop_size: 100,
            max_evals: 2000,
            crossover_prob: 0.9,
            crossover_eta: 30.0,
            mutation_eta: 20.0,
            mutation_rate: None,
            seed: 0,
            initial_pop: None,
        }
    }
}

impl MoeaConfig {
    pub fn mutation_prob(&self, dims: usize) -> f64 {
        self.mutation_rate
            .unwrap_or(1.0 / dims.max(1) as f64)
            .clamp(0.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return contract("population size must be at least 2");
        }
        if self.max_evals < self.pop_size {
            return contract("evaluation budget smaller than one population");
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return contract("crossover probability outside [0, 1]");
        }
        Ok(())
    }
}

/// Generation zero plus the number of further generations the budget allows.
pub(crate) fn initial_generation(
    problem: &Problem,
    config: &MoeaConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Candidate>, usize)> {
    config.validate()?;
    let start = problem.evaluations();
    let mut pop: Vec<Candidate> = config
        .initial_pop
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .take(config.pop_size)
        .cloned()
        .collect();
    while pop.len() < config.pop_size {
        pop.push(Candidate::new(problem.schema().sample(rng)));
    }
    for c in &mut pop {
        problem.evaluate(c)?;
    }
    let used = problem.evaluations() - start;
    let generations = config.max_evals.saturating_sub(used) / config.pop_size;
    Ok((pop, generations))
}

pub(crate) fn rng_for(config: &MoeaConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

pub(crate) fn evaluate_all(problem: &Problem, pop: &mut [Candidate]) -> Result<()> {
    for c in pop {
        problem.evaluate(c)?;
    }
    Ok(())
}

pub(crate) fn binary_tournament<R, F>(n: usize, rng: &mut R, better: F) -> usize
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> bool,
{
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    if better(b, a) {
        b
    } else {
        a
    }
}

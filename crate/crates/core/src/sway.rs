//! SWAY: optimization by sampling instead of evolution.
//!
//! A large random population is recursively bi-clustered in decision space.
//! Only the two pivots of each split are evaluated; when one pivot dominates
//! the other, the half around the loser is discarded without ever being
//! scored. Recursion stops once a cluster is smaller than the cutoff (by
//! default the square root of the initial population size), so a run costs
//! O(log N) evaluations when every comparison is decisive.
//!
//! Two split strategies are provided: [`split_continuous`] projects
//! candidates on the line between two far-apart pivots (FASTMAP), and the
//! next-release strategy first groups release plans by how much work they
//! schedule early ([`workload`]) and then applies the continuous split inside
//! each group.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};
use crate::problem::{
    constrained_dominates, random_population, Candidate, DecisionSchema, Problem,
};

/// Initial population of SWAY2.
pub const SWAY2_POPULATION: usize = 100;
/// Initial population of SWAY4.
pub const SWAY4_POPULATION: usize = 10_000;

/// Recursion stops below this many candidates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutoff {
    /// `sqrt(N)` of the initial population, fixed at the root.
    SqrtN,
    Fixed(usize),
}

impl Cutoff {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Cutoff::SqrtN => ((n as f64).sqrt().round() as usize).max(1),
            Cutoff::Fixed(k) => k.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitStrategy {
    Continuous,
    /// Group next-release plans by early workload before splitting.
    MonrpWorkload {
        releases: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwayConfig {
    pub cutoff: Cutoff,
    pub strategy: SplitStrategy,
    pub seed: u64,
}

impl SwayConfig {
    pub fn new(strategy: SplitStrategy, seed: u64) -> Self {
        Self {
            cutoff: Cutoff::SqrtN,
            strategy,
            seed,
        }
    }
}

/// One FASTMAP bi-partition. The pivots live inside their own halves.
#[derive(Debug, Clone)]
pub struct SplitResult {
    pub west_items: Vec<Candidate>,
    pub east_items: Vec<Candidate>,
    west: usize,
    east: usize,
}

impl SplitResult {
    pub fn west(&self) -> &Candidate {
        &self.west_items[self.west]
    }

    pub fn east(&self) -> &Candidate {
        &self.east_items[self.east]
    }

    fn pivots_mut(&mut self) -> (&mut Candidate, &mut Candidate) {
        (
            &mut self.west_items[self.west],
            &mut self.east_items[self.east],
        )
    }
}

#[derive(Debug, Clone)]
pub enum SplitOutcome {
    Split(SplitResult),
    /// Zero diameter: every candidate has the same decisions.
    Degenerate(Vec<Candidate>),
}

fn scaled_distance(schema: &DecisionSchema, a: &[f64], b: &[f64]) -> f64 {
    schema
        .dims()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(d, (x, y))| {
            let span = d.span();
            if span > 0.0 {
                let t = (x - y) / span;
                t * t
            } else {
                0.0
            }
        })
        .sum::<f64>()
        .sqrt()
}

/// Index of the candidate furthest from `from`; ties go to the lowest index.
fn furthest(schema: &DecisionSchema, candidates: &[Candidate], from: &[f64]) -> (usize, f64) {
    let mut best = (0, -1.0);
    for (i, c) in candidates.iter().enumerate() {
        let d = scaled_distance(schema, from, &c.decisions);
        if d > best.1 {
            best = (i, d);
        }
    }
    best
}

/// FASTMAP split on bounds-normalized Euclidean distance.
pub fn split_continuous<R: Rng + ?Sized>(
    candidates: Vec<Candidate>,
    schema: &DecisionSchema,
    rng: &mut R,
) -> Result<SplitOutcome> {
    if candidates.len() < 2 {
        return contract("split needs at least two candidates");
    }
    let start = rng.random_range(0..candidates.len());
    let (e, _) = furthest(schema, &candidates, &candidates[start].decisions);
    let (w, diameter) = furthest(schema, &candidates, &candidates[e].decisions);
    if diameter <= 0.0 {
        return Ok(SplitOutcome::Degenerate(candidates));
    }

    let west_point = schema.normalize(&candidates[w].decisions);
    let axis: Vec<f64> = schema
        .normalize(&candidates[e].decisions)
        .iter()
        .zip(&west_point)
        .map(|(e, w)| e - w)
        .collect();
    let half = diameter / 2.0;

    let mut west_items = Vec::new();
    let mut east_items = Vec::new();
    let (mut west, mut east) = (0, 0);
    for (i, c) in candidates.into_iter().enumerate() {
        let x = schema.normalize(&c.decisions);
        let projection: f64 = axis
            .iter()
            .zip(x.iter().zip(&west_point))
            .map(|(a, (x, w))| a * (x - w))
            .sum::<f64>()
            / diameter;
        if projection < half {
            if i == w {
                west = west_items.len();
            }
            west_items.push(c);
        } else {
            if i == e {
                east = east_items.len();
            }
            east_items.push(c);
        }
    }
    Ok(SplitOutcome::Split(SplitResult {
        west_items,
        east_items,
        west,
        east,
    }))
}

/// Number of requirements scheduled in the first half of the releases.
///
/// Aborted requirements (`y_i = 0`) are not released and do not count; the
/// first half is releases `1..=ceil(P/2)`.
pub fn workload(plan: &[f64], releases: u32) -> usize {
    let first_half = releases.div_ceil(2) as f64;
    plan.iter().filter(|&&y| y > 0.0 && y <= first_half).count()
}

/// Bucket release plans into quantile bands of [`workload`].
///
/// Uses `ceil(sqrt(distinct workloads))` bands; equal workloads always share
/// a band and empty bands are dropped. Input order is kept inside bands.
pub fn workload_groups(candidates: Vec<Candidate>, releases: u32) -> Vec<Vec<Candidate>> {
    let n = candidates.len();
    if n == 0 {
        return Vec::new();
    }
    let loads: Vec<usize> = candidates
        .iter()
        .map(|c| workload(&c.decisions, releases))
        .collect();
    let mut sorted = loads.clone();
    sorted.sort_unstable();
    let mut distinct = sorted.clone();
    distinct.dedup();
    let bands = (distinct.len() as f64).sqrt().ceil() as usize;

    let mut groups: Vec<Vec<Candidate>> = (0..bands).map(|_| Vec::new()).collect();
    for (c, load) in candidates.into_iter().zip(loads) {
        let below = sorted.partition_point(|&l| l < load);
        let band = (bands * below / n).min(bands - 1);
        groups[band].push(c);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// Workload grouping followed by a FASTMAP split inside every group.
pub fn split_discrete_monrp<R: Rng + ?Sized>(
    candidates: Vec<Candidate>,
    schema: &DecisionSchema,
    releases: u32,
    rng: &mut R,
) -> Result<Vec<SplitOutcome>> {
    workload_groups(candidates, releases)
        .into_iter()
        .map(|g| {
            if g.len() < 2 {
                Ok(SplitOutcome::Degenerate(g))
            } else {
                split_continuous(g, schema, rng)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WestWins,
    EastWins,
    Tie,
}

/// Evaluate both pivots (cached results are free) and compare them.
pub fn compare_representatives(
    west: &mut Candidate,
    east: &mut Candidate,
    problem: &Problem,
) -> Result<Verdict> {
    problem.evaluate(west)?;
    problem.evaluate(east)?;
    Ok(if constrained_dominates(west, east)? {
        Verdict::WestWins
    } else if constrained_dominates(east, west)? {
        Verdict::EastWins
    } else {
        Verdict::Tie
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwayStats {
    pub splits: usize,
    pub ties: usize,
    pub degenerate: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct SwayOutcome {
    pub survivors: Vec<Candidate>,
    pub stats: SwayStats,
}

struct Recursion<'a> {
    problem: &'a Problem,
    cutoff: usize,
    rng: ChaCha8Rng,
    stats: SwayStats,
}

impl Recursion<'_> {
    fn cluster(&mut self, items: Vec<Candidate>, out: &mut Vec<Candidate>) -> Result<()> {
        if items.len() < self.cutoff || items.len() < 2 {
            out.extend(items);
            return Ok(());
        }
        let mut split = match split_continuous(items, self.problem.schema(), &mut self.rng)? {
            SplitOutcome::Split(s) => s,
            SplitOutcome::Degenerate(items) => {
                self.stats.degenerate += 1;
                out.extend(items);
                return Ok(());
            }
        };
        self.stats.splits += 1;
        let (west, east) = split.pivots_mut();
        match compare_representatives(west, east, self.problem)? {
            Verdict::WestWins => self.cluster(split.west_items, out),
            Verdict::EastWins => self.cluster(split.east_items, out),
            Verdict::Tie => {
                self.stats.ties += 1;
                self.cluster(split.west_items, out)?;
                self.cluster(split.east_items, out)
            }
        }
    }
}

/// Cull `candidates` down to the survivors of recursive pivot comparison.
pub fn sway(
    problem: &Problem,
    candidates: Vec<Candidate>,
    config: &SwayConfig,
) -> Result<SwayOutcome> {
    if candidates.is_empty() {
        return contract("sway needs at least one candidate");
    }
    let before = problem.evaluations();
    let mut run = Recursion {
        problem,
        cutoff: config.cutoff.resolve(candidates.len()),
        rng: ChaCha8Rng::seed_from_u64(config.seed ^ 0x5A5A_0F0F_1234_8765),
        stats: SwayStats::default(),
    };
    let mut survivors = Vec::new();
    match config.strategy {
        SplitStrategy::Continuous => run.cluster(candidates, &mut survivors)?,
        SplitStrategy::MonrpWorkload { releases } => {
            for group in workload_groups(candidates, releases) {
                run.cluster(group, &mut survivors)?;
            }
        }
    }
    let mut stats = run.stats;
    stats.evaluations = problem.evaluations() - before;
    Ok(SwayOutcome { survivors, stats })
}

/// Sample `population` random candidates with `config.seed`, then run [`sway`].
pub fn sway_sampled(
    problem: &Problem,
    population: usize,
    config: &SwayConfig,
) -> Result<SwayOutcome> {
    let candidates = random_population(problem.schema(), population, config.seed)?;
    sway(problem, candidates, config)
}

/// A random subset of `k` candidates (all of them when `k >= len`).
pub fn sample_subset<R: Rng + ?Sized>(
    cands: &[Candidate],
    k: usize,
    rng: &mut R,
) -> Vec<Candidate> {
    if k >= cands.len() {
        return cands.to_vec();
    }
    cands.choose_multiple(rng, k).cloned().collect()
}

//! POM3: agile teams burning down a partially visible requirements backlog.
//!
//! Each base requirement roots a small tree; a requirement is workable once
//! its children and cross-tree dependencies are done. Teams own whole trees
//! and plan every sprint by one of five priority orders. Requirements surface
//! over time, their cost and value drift, new ones arrive, and the project
//! may be cancelled early. Objectives: completion rate (maximize), idle rate
//! (minimize), cost (minimize); see [`Pom3Outcome`].
//!
//! The simulation uses common random numbers: every random draw depends on
//! the model seed and the project size only, never on the other decisions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::problem::{DecisionSchema, Dim, Model, Sense};

/// Requirement prioritization used when planning a sprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plan {
    CostAscending,
    CostDescending,
    ValueAscending,
    ValueDescending,
    CostValueAscending,
}

impl Plan {
    pub fn from_index(i: u32) -> Option<Plan> {
        [
            Plan::CostAscending,
            Plan::CostDescending,
            Plan::ValueAscending,
            Plan::ValueDescending,
            Plan::CostValueAscending,
        ]
        .get(i as usize)
        .copied()
    }

    /// Sort key: lower is worked on first.
    pub fn key(self, cost: f64, value: f64) -> f64 {
        match self {
            Plan::CostAscending => cost,
            Plan::CostDescending => -cost,
            Plan::ValueAscending => value,
            Plan::ValueDescending => -value,
            Plan::CostValueAscending => cost / value,
        }
    }
}

/// Simulation constants not fixed by the model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pom3Params {
    /// Children per requirement are drawn from `0..=max_children`.
    pub max_children: u32,
    /// Depth of a requirement tree below its root.
    pub tree_depth: u32,
    /// Requirement cost and value are integers in `1..=max_cost`.
    pub max_cost: u32,
    /// Base requirements (trees) handled by one team.
    pub trees_per_team: usize,
    /// Work hours one person delivers per sprint.
    pub hours_per_sprint: f64,
    pub min_sprints: u32,
    pub max_sprints: u32,
    /// Chance of cancellation after sprint `s` is `cancel_rate * s`.
    pub cancel_rate: f64,
    /// Hourly rate per team, drawn uniformly from these tiers.
    pub salary_tiers: Vec<f64>,
    /// Dynamism at which a changeable requirement is sure to change.
    pub dynamism_max: f64,
    /// Cost and value drift by a factor within `1 ± change_magnitude`.
    pub change_magnitude: f64,
}

impl Default for Pom3Params {
    fn default() -> Self {
        Self {
            max_children: 3,
            tree_depth: 2,
            max_cost: 100,
            trees_per_team: 5,
            hours_per_sprint: 20.0,
            min_sprints: 2,
            max_sprints: 6,
            cancel_rate: 0.02,
            salary_tiers: vec![50.0, 75.0, 100.0],
            dynamism_max: 50.0,
            change_magnitude: 0.5,
        }
    }
}

/// Concrete settings for one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pom3Decisions {
    /// Fraction of requirements that may change.
    pub culture: f64,
    /// Cost multiplier on safety critical teams.
    pub criticality: f64,
    /// Fraction of teams affected by criticality.
    pub criticality_modifier: f64,
    /// Fraction of requirements visible at the start.
    pub initial_known: f64,
    /// Percentage of requirements depending on another tree.
    pub inter_dependency: f64,
    pub dynamism: f64,
    /// Number of base requirements.
    pub size: u32,
    pub plan: Plan,
    pub team_size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pom3Outcome {
    /// Finished requirements over every requirement of the project,
    /// including those that never surfaced.
    pub completion: f64,
    /// Paid hours with nothing workable, over all paid hours.
    pub idle: f64,
    /// Salary spent per finished requirement.
    pub cost: f64,
}

#[derive(Debug, Clone)]
struct Req {
    cost: f64,
    value: f64,
    remaining: f64,
    done: bool,
    children: Vec<usize>,
    deps: Vec<usize>,
    team: usize,
    surface: f64,
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const STRUCTURE_STREAM: u64 = 1;
const SCHEDULE_STREAM: u64 = 2;
const SPRINT_STREAM: u64 = 16;

struct Project {
    reqs: Vec<Req>,
    teams: usize,
    critical: Vec<bool>,
    salary: Vec<f64>,
}

fn build(d: &Pom3Decisions, p: &Pom3Params, seed: u64) -> Project {
    let mut rng = stream(seed ^ (d.size as u64).rotate_left(32), STRUCTURE_STREAM);
    let size = d.size.max(1) as usize;
    let teams = size.div_ceil(p.trees_per_team.max(1));
    let mut reqs: Vec<Req> = Vec::new();
    let mut roots = Vec::with_capacity(size);
    let mut tree_of = Vec::new();
    // (dependency draw, target draw) per requirement
    let mut draws = Vec::new();

    for tree in 0..size {
        let team = tree % teams;
        let root = reqs.len();
        roots.push(root);
        let mut frontier = vec![(root, 0u32)];
        reqs.push(new_req(&mut rng, p, team));
        tree_of.push(tree);
        draws.push((rng.random::<f64>(), rng.random::<f64>()));
        while let Some((node, depth)) = frontier.pop() {
            let kids = rng.random_range(0..=p.max_children);
            if depth >= p.tree_depth {
                continue;
            }
            for _ in 0..kids {
                let child = reqs.len();
                reqs.push(new_req(&mut rng, p, team));
                tree_of.push(tree);
                draws.push((rng.random::<f64>(), rng.random::<f64>()));
                reqs[node].children.push(child);
                frontier.push((child, depth + 1));
            }
        }
    }

    let share = d.inter_dependency / 100.0;
    for i in 0..reqs.len() {
        let (dep, target) = draws[i];
        let tree = tree_of[i];
        // depending only on earlier trees keeps the graph acyclic
        if tree > 0 && dep < share {
            let other = ((target * tree as f64) as usize).min(tree - 1);
            reqs[i].deps.push(roots[other]);
        }
    }

    let critical = (0..teams)
        .map(|_| rng.random::<f64>() < d.criticality_modifier)
        .collect();
    let salary = (0..teams)
        .map(|_| p.salary_tiers[rng.random_range(0..p.salary_tiers.len())])
        .collect();
    Project {
        reqs,
        teams,
        critical,
        salary,
    }
}

fn new_req<R: Rng>(rng: &mut R, p: &Pom3Params, team: usize) -> Req {
    let cost = rng.random_range(1..=p.max_cost) as f64;
    let value = rng.random_range(1..=p.max_cost) as f64;
    Req {
        cost,
        value,
        remaining: cost,
        done: false,
        children: Vec::new(),
        deps: Vec::new(),
        team,
        surface: rng.random(),
    }
}

/// Run one project to completion, cancellation, or the last sprint.
pub fn pom3_simulate(d: &Pom3Decisions, p: &Pom3Params, seed: u64) -> Pom3Outcome {
    let Project {
        mut reqs,
        teams,
        critical,
        salary,
    } = build(d, p, seed);
    for r in reqs.iter_mut() {
        if critical[r.team] {
            r.cost *= d.criticality;
            r.remaining = r.cost;
        }
    }

    let mut schedule = stream(seed, SCHEDULE_STREAM);
    let sprints = schedule.random_range(p.min_sprints..=p.max_sprints.max(p.min_sprints));
    let capacity = d.team_size * p.hours_per_sprint;
    let change_chance = d.culture * (d.dynamism / p.dynamism_max).min(1.0);
    let arrival_chance = (d.dynamism / 100.0).clamp(0.0, 1.0);

    let mut paid = 0.0;
    let mut cost = 0.0;
    let mut idle = 0.0;
    let mut by_team: Vec<Vec<usize>> = vec![Vec::new(); teams];
    for (i, r) in reqs.iter().enumerate() {
        by_team[r.team].push(i);
    }

    for s in 0..sprints {
        let threshold = d.initial_known + (1.0 - d.initial_known) * s as f64 / sprints as f64;
        let mut rng = stream(seed, SPRINT_STREAM + s as u64);
        if s > 0 {
            for r in reqs.iter_mut() {
                let (roll, fc, fv): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
                if !r.done && roll < change_chance {
                    let m = p.change_magnitude;
                    let scale = 1.0 + m * (2.0 * fc - 1.0);
                    r.cost *= scale;
                    r.remaining *= scale;
                    r.value *= 1.0 + m * (2.0 * fv - 1.0);
                }
            }
            for team in 0..teams {
                for _ in 0..p.trees_per_team {
                    let roll: f64 = rng.random();
                    let mut fresh = new_req(&mut rng, p, team);
                    if roll < arrival_chance {
                        if critical[team] {
                            fresh.cost *= d.criticality;
                            fresh.remaining = fresh.cost;
                        }
                        fresh.surface = 0.0;
                        by_team[team].push(reqs.len());
                        reqs.push(fresh);
                    }
                }
            }
        }

        let mut open = vec![false; teams];
        for r in &reqs {
            open[r.team] |= !r.done;
        }
        let mut left: Vec<f64> = open
            .iter()
            .map(|&o| if o { capacity } else { 0.0 })
            .collect();
        for team in 0..teams {
            if !open[team] {
                continue;
            }
            paid += capacity;
            let crit = if critical[team] { d.criticality } else { 1.0 };
            cost += salary[team] * capacity * crit;
        }

        for (team, hours) in left.iter_mut().enumerate() {
            while *hours > 0.0 {
                let next = by_team[team]
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let r = &reqs[i];
                        !r.done
                            && r.surface < threshold
                            && r.children.iter().all(|&c| reqs[c].done)
                            && r.deps.iter().all(|&c| reqs[c].done)
                    })
                    .min_by(|&a, &b| {
                        let ka = d.plan.key(reqs[a].cost, reqs[a].value);
                        let kb = d.plan.key(reqs[b].cost, reqs[b].value);
                        ka.total_cmp(&kb).then(a.cmp(&b))
                    });
                let Some(i) = next else { break };
                let work = hours.min(reqs[i].remaining);
                *hours -= work;
                reqs[i].remaining -= work;
                if reqs[i].remaining <= 1e-9 {
                    reqs[i].remaining = 0.0;
                    reqs[i].done = true;
                }
            }
            idle += *hours;
        }

        if schedule.random::<f64>() < p.cancel_rate * (s + 1) as f64 {
            break;
        }
    }

    // hidden requirements still belong to the project
    let done = reqs.iter().filter(|r| r.done).count();
    Pom3Outcome {
        completion: done as f64 / reqs.len().max(1) as f64,
        idle: if paid > 0.0 { idle / paid } else { 0.0 },
        cost: cost / done.max(1) as f64,
    }
}

/// Decision ranges of one POM3 scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pom3Scenario {
    pub name: String,
    pub culture: (f64, f64),
    pub criticality: (f64, f64),
    pub criticality_modifier: (f64, f64),
    pub initial_known: (f64, f64),
    pub inter_dependency: (f64, f64),
    pub dynamism: (f64, f64),
    pub sizes: Vec<u32>,
    pub team_size: (f64, f64),
}

impl Pom3Scenario {
    /// A broad space of projects.
    pub fn pom3a() -> Self {
        Self {
            name: "pom3a".into(),
            culture: (0.1, 0.9),
            criticality: (0.82, 1.26),
            criticality_modifier: (0.02, 0.10),
            initial_known: (0.4, 0.7),
            inter_dependency: (0.0, 1.0),
            dynamism: (1.0, 50.0),
            sizes: vec![3, 10, 30, 100, 300],
            team_size: (1.0, 44.0),
        }
    }

    /// Highly critical small projects.
    pub fn pom3b() -> Self {
        Self {
            name: "pom3b".into(),
            criticality_modifier: (0.80, 0.95),
            sizes: vec![3, 10, 30],
            ..Self::pom3a()
        }
    }

    /// Highly dynamic large projects.
    pub fn pom3c() -> Self {
        Self {
            name: "pom3c".into(),
            culture: (0.5, 0.9),
            criticality_modifier: (0.02, 0.08),
            initial_known: (0.2, 0.5),
            inter_dependency: (0.0, 50.0),
            dynamism: (40.0, 50.0),
            sizes: vec![30, 100, 300],
            team_size: (20.0, 44.0),
            ..Self::pom3a()
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "pom3a" => Some(Self::pom3a()),
            "pom3b" => Some(Self::pom3b()),
            "pom3c" => Some(Self::pom3c()),
            _ => None,
        }
    }

    /// Decision layout: the six ratios, size index, plan, team size.
    pub fn schema(&self) -> Result<DecisionSchema> {
        if self.sizes.is_empty() {
            return Err(CoreError::Config(
                "POM3 scenario needs at least one size".into(),
            ));
        }
        let c = |name: &str, (lo, hi): (f64, f64)| Dim::continuous(name, lo, hi);
        DecisionSchema::new(vec![
            c("culture", self.culture),
            c("criticality", self.criticality),
            c("criticality_modifier", self.criticality_modifier),
            c("initial_known", self.initial_known),
            c("inter_dependency", self.inter_dependency),
            c("dynamism", self.dynamism),
            Dim::integer("size", 0, self.sizes.len() as i64 - 1),
            Dim::integer("plan", 0, 4),
            c("team_size", self.team_size),
        ])
    }

    /// Interpret an in-range decision vector.
    pub fn decode(&self, x: &[f64]) -> Pom3Decisions {
        let size_idx = (x[6].round().max(0.0) as usize).min(self.sizes.len() - 1);
        Pom3Decisions {
            culture: x[0],
            criticality: x[1],
            criticality_modifier: x[2],
            initial_known: x[3],
            inter_dependency: x[4],
            dynamism: x[5],
            size: self.sizes[size_idx],
            plan: Plan::from_index(x[7].round().clamp(0.0, 4.0) as u32).expect("clamped to 0..=4"),
            team_size: x[8],
        }
    }
}

pub const POM3_SENSES: [Sense; 3] = [Sense::Maximize, Sense::Minimize, Sense::Minimize];

#[derive(Debug, Clone)]
pub struct Pom3Model {
    scenario: Pom3Scenario,
    schema: DecisionSchema,
    params: Pom3Params,
    seed: u64,
}

impl Pom3Model {
    pub fn new(scenario: Pom3Scenario, params: Pom3Params, seed: u64) -> Result<Self> {
        Ok(Self {
            schema: scenario.schema()?,
            scenario,
            params,
            seed,
        })
    }

    pub fn scenario(&self) -> &Pom3Scenario {
        &self.scenario
    }

    pub fn simulate(&self, x: &[f64]) -> Pom3Outcome {
        pom3_simulate(&self.scenario.decode(x), &self.params, self.seed)
    }
}

impl Model for Pom3Model {
    fn name(&self) -> &str {
        &self.scenario.name
    }

    fn schema(&self) -> &DecisionSchema {
        &self.schema
    }

    fn senses(&self) -> &[Sense] {
        &POM3_SENSES
    }

    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        let o = self.simulate(x);
        vec![o.completion, o.idle, o.cost]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::random_population;

    fn mid(size: u32, plan: Plan) -> Pom3Decisions {
        Pom3Decisions {
            culture: 0.5,
            criticality: 1.0,
            criticality_modifier: 0.05,
            initial_known: 0.5,
            inter_dependency: 0.5,
            dynamism: 20.0,
            size,
            plan,
            team_size: 10.0,
        }
    }

    #[test]
    fn outcomes_are_bounded_and_cost_positive() {
        for name in ["pom3a", "pom3b", "pom3c"] {
            let model = Pom3Model::new(
                Pom3Scenario::by_name(name).unwrap(),
                Pom3Params::default(),
                3,
            )
            .unwrap();
            for c in random_population(model.schema(), 50, 11).unwrap() {
                let o = model.simulate(&c.decisions);
                assert!((0.0..=1.0).contains(&o.completion), "{o:?}");
                assert!((0.0..=1.0).contains(&o.idle), "{o:?}");
                assert!(o.cost > 0.0, "{o:?}");
            }
        }
    }

    #[test]
    fn pure_for_fixed_seed() {
        let d = mid(30, Plan::CostValueAscending);
        let p = Pom3Params::default();
        assert_eq!(pom3_simulate(&d, &p, 8), pom3_simulate(&d, &p, 8));
    }

    #[test]
    fn overstaffed_tiny_project_idles() {
        let d = Pom3Decisions {
            team_size: 44.0,
            size: 3,
            ..mid(3, Plan::CostAscending)
        };
        for seed in 0..10 {
            assert!(pom3_simulate(&d, &Pom3Params::default(), seed).idle > 0.0);
        }
    }

    #[test]
    fn knowing_more_up_front_raises_completion() {
        // Requirement drift and greedy planning make single pairs noisy, so
        // the direction is checked over paired runs.
        let p = Pom3Params::default();
        let s = Pom3Scenario::pom3a();
        let (mut pairs, mut held, mut low_sum, mut high_sum) = (0, 0, 0.0, 0.0);
        for seed in 0..40 {
            for &size in &s.sizes {
                let base = mid(size, Plan::ValueDescending);
                let low = Pom3Decisions {
                    initial_known: s.initial_known.0,
                    ..base.clone()
                };
                let high = Pom3Decisions {
                    initial_known: s.initial_known.1,
                    ..base
                };
                let (lo, hi) = (
                    pom3_simulate(&low, &p, seed),
                    pom3_simulate(&high, &p, seed),
                );
                pairs += 1;
                held += usize::from(hi.completion >= lo.completion);
                low_sum += lo.completion;
                high_sum += hi.completion;
            }
        }
        assert!(high_sum > low_sum);
        assert!(held as f64 >= 0.85 * pairs as f64, "{held}/{pairs}");
    }

    #[test]
    fn plan_four_orders_by_cost_over_value() {
        assert_eq!(Plan::from_index(4), Some(Plan::CostValueAscending));
        let k = |c, v| Plan::CostValueAscending.key(c, v);
        assert!(k(10.0, 100.0) < k(10.0, 20.0));
        assert!(k(5.0, 10.0) < k(50.0, 10.0));
        assert_eq!(Plan::from_index(5), None);
    }

    #[test]
    fn decode_rounds_size_and_plan() {
        let s = Pom3Scenario::pom3c();
        let d = s.decode(&[0.6, 1.0, 0.05, 0.3, 10.0, 45.0, 2.0, 4.0, 30.0]);
        assert_eq!(d.size, 300);
        assert_eq!(d.plan, Plan::CostValueAscending);
    }

    #[test]
    fn bigger_teams_finish_more_and_idle_more() {
        let p = Pom3Params::default();
        let small = Pom3Decisions {
            team_size: 2.0,
            ..mid(30, Plan::CostAscending)
        };
        let large = Pom3Decisions {
            team_size: 40.0,
            ..small.clone()
        };
        let (a, b) = (pom3_simulate(&small, &p, 1), pom3_simulate(&large, &p, 1));
        assert!(b.completion >= a.completion);
        assert!(b.idle > a.idle);
    }
}

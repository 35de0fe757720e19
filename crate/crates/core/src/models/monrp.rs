//! Multi-objective next release problem.
//!
//! A plan `y` assigns each requirement to a release `1..=P`, or aborts it
//! (`y_i = 0`). Objectives: maximize weighted value-plus-risk (earlier
//! releases weigh more), minimize total cost, maximize total satisfaction.
//! Constraints: per-release cost within budget, and a requirement is never
//! released before its prerequisites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{contract, CoreError, Result};
use crate::problem::{DecisionSchema, Dim, Model, Sense};

/// One row of the variant table, e.g. `MONRP-50-4-5-4-090`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonrpVariant {
    pub requirements: usize,
    pub releases: u32,
    pub clients: usize,
    pub density_pct: u32,
    pub budget_pct: u32,
}

impl MonrpVariant {
    pub const fn new(density_pct: u32, budget_pct: u32) -> Self {
        Self {
            requirements: 50,
            releases: 4,
            clients: 5,
            density_pct,
            budget_pct,
        }
    }

    /// The four variants studied, least to most constrained.
    pub const ALL: [MonrpVariant; 4] = [
        MonrpVariant::new(0, 110),
        MonrpVariant::new(0, 90),
        MonrpVariant::new(4, 110),
        MonrpVariant::new(4, 90),
    ];

    pub fn name(&self) -> String {
        format!(
            "monrp-{}-{}-{}-{}-{:03}",
            self.requirements, self.releases, self.clients, self.density_pct, self.budget_pct
        )
    }

    /// Parse names like `monrp-50-4-5-4-090` (case-insensitive, budget padding optional).
    pub fn parse(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        let rest = lower.strip_prefix("monrp-")?;
        let parts: Vec<&str> = rest.split('-').collect();
        if parts.len() != 5 {
            return None;
        }
        Some(Self {
            requirements: parts[0].parse().ok()?,
            releases: parts[1].parse().ok()?,
            clients: parts[2].parse().ok()?,
            density_pct: parts[3].parse().ok()?,
            budget_pct: parts[4].parse().ok()?,
        })
    }

    pub fn dependency_count(&self) -> usize {
        (self.requirements * self.density_pct as usize + 50) / 100
    }
}

/// A concrete instance: costs, weights, values, risks, precedence DAG, budgets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonrpInstance {
    pub releases: u32,
    pub cost: Vec<f64>,
    pub client_weight: Vec<f64>,
    /// `value[i][j]`: value of requirement `i` to client `j`.
    pub value: Vec<Vec<f64>>,
    pub risk: Vec<f64>,
    /// `(i, j)`: `i` must be released no later than `j`.
    pub edges: Vec<(usize, usize)>,
    pub budget: Vec<f64>,
    /// Score aborted requirements in the value objective (literal reading).
    #[serde(default)]
    pub score_aborted: bool,
}

/// Share of zero entries in the value matrix.
pub const VALUE_ZERO_SHARE: f64 = 0.3;

impl MonrpInstance {
    pub fn requirements(&self) -> usize {
        self.cost.len()
    }

    pub fn clients(&self) -> usize {
        self.client_weight.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.requirements();
        if n == 0 || self.releases == 0 {
            return contract("instance needs requirements and releases");
        }
        if self.value.len() != n || self.risk.len() != n {
            return contract("value matrix / risks not sized to the requirement count");
        }
        if self.value.iter().any(|row| row.len() != self.clients()) {
            return contract("value matrix rows not sized to the client count");
        }
        if self.budget.len() != self.releases as usize {
            return contract("one budget per release required");
        }
        if self.cost.iter().any(|&c| c <= 0.0) || self.budget.iter().any(|&b| b <= 0.0) {
            return contract("costs and budgets must be positive");
        }
        if self.edges.iter().any(|&(i, j)| i >= n || j >= n || i == j) {
            return contract("dependency edge out of range");
        }
        if !is_acyclic(n, &self.edges) {
            return contract("dependency graph has a cycle");
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| CoreError::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Self =
            serde_json::from_str(text).map_err(|e| CoreError::Config(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    fn check_plan(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.requirements() {
            return contract("plan length differs from requirement count");
        }
        let p = self.releases as f64;
        if y.iter()
            .any(|&v| !(0.0..=p).contains(&v) || v.fract() != 0.0)
        {
            return contract("plan entries must be integers in 0..=P");
        }
        Ok(())
    }

    /// `(f1, f2, f3)`: weighted value-plus-risk, cost, satisfaction.
    pub fn evaluate(&self, y: &[f64]) -> Result<[f64; 3]> {
        self.check_plan(y)?;
        Ok(self.evaluate_unchecked(y))
    }

    fn evaluate_unchecked(&self, y: &[f64]) -> [f64; 3] {
        let p1 = self.releases as f64 + 1.0;
        let mut f1 = 0.0;
        for (j, &t) in self.client_weight.iter().enumerate() {
            let mut inner = 0.0;
            for (i, &yi) in y.iter().enumerate() {
                if yi > 0.0 || self.score_aborted {
                    inner += (p1 - yi) * self.value[i][j] + self.risk[i];
                }
            }
            f1 += t * inner;
        }
        let mut f2 = 0.0;
        let mut f3 = 0.0;
        for (i, &yi) in y.iter().enumerate() {
            if yi > 0.0 {
                f2 += self.cost[i];
                f3 += self.value[i].iter().sum::<f64>();
            }
        }
        [f1, f2, f3]
    }

    /// Relative budget excess summed over releases plus violated precedence edges.
    pub fn violation(&self, y: &[f64]) -> Result<f64> {
        self.check_plan(y)?;
        Ok(self.violation_unchecked(y))
    }

    fn violation_unchecked(&self, y: &[f64]) -> f64 {
        let mut load = vec![0.0; self.releases as usize];
        for (i, &yi) in y.iter().enumerate() {
            if yi > 0.0 {
                load[yi as usize - 1] += self.cost[i];
            }
        }
        let budget: f64 = load
            .iter()
            .zip(&self.budget)
            .map(|(&l, &b)| (l - b).max(0.0) / b)
            .sum();
        let edges = self
            .edges
            .iter()
            .filter(|&&(i, j)| y[j] > 0.0 && (y[i] == 0.0 || y[i] > y[j]))
            .count();
        budget + edges as f64
    }
}

fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; n];
    for &(_, j) in edges {
        indegree[j] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = stack.pop() {
        seen += 1;
        for &(a, b) in edges {
            if a == i {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    stack.push(b);
                }
            }
        }
    }
    seen == n
}

/// Random instance of `variant`.
///
/// Costs are integers in `[1, 20]`, client weights uniform in `[1, 5]`,
/// values integers in `[0, 10]` with a 30% share of zeros, risks uniform in
/// `[0, 5]`. `density_pct`% of requirements receive one prerequisite, chosen
/// earlier in a random topological order. Each release gets an equal budget
/// of `budget_pct`% of the average per-release cost.
pub fn monrp_generate(variant: &MonrpVariant, seed: u64) -> MonrpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = variant.requirements;
    let cost: Vec<f64> = (0..n).map(|_| rng.random_range(1..=20) as f64).collect();
    let client_weight: Vec<f64> = (0..variant.clients)
        .map(|_| rng.random_range(1.0..=5.0))
        .collect();
    let value: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..variant.clients)
                .map(|_| {
                    if rng.random_bool(VALUE_ZERO_SHARE) {
                        0.0
                    } else {
                        rng.random_range(1..=10) as f64
                    }
                })
                .collect()
        })
        .collect();
    let risk: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=5.0)).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut positions: Vec<usize> = (1..n).collect();
    positions.shuffle(&mut rng);
    let edges: Vec<(usize, usize)> = positions
        .into_iter()
        .take(variant.dependency_count().min(n.saturating_sub(1)))
        .map(|pos| {
            let before = rng.random_range(0..pos);
            (order[before], order[pos])
        })
        .collect();

    let per_release = cost.iter().sum::<f64>() / variant.releases as f64;
    let budget = vec![per_release * variant.budget_pct as f64 / 100.0; variant.releases as usize];
    MonrpInstance {
        releases: variant.releases,
        cost,
        client_weight,
        value,
        risk,
        edges,
        budget,
        score_aborted: false,
    }
}

/// [`MonrpInstance`] as an optimization model.
#[derive(Debug, Clone)]
pub struct MonrpModel {
    name: String,
    instance: MonrpInstance,
    schema: DecisionSchema,
}

pub const MONRP_SENSES: [Sense; 3] = [Sense::Maximize, Sense::Minimize, Sense::Maximize];

impl MonrpModel {
    pub fn new(name: impl Into<String>, instance: MonrpInstance) -> Result<Self> {
        instance.validate()?;
        let dims = (0..instance.requirements())
            .map(|i| Dim::integer(format!("r{i}"), 0, instance.releases as i64))
            .collect();
        Ok(Self {
            name: name.into(),
            schema: DecisionSchema::new(dims)?,
            instance,
        })
    }

    pub fn instance(&self) -> &MonrpInstance {
        &self.instance
    }
}

impl Model for MonrpModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn schema(&self) -> &DecisionSchema {
        &self.schema
    }

    fn senses(&self) -> &[Sense] {
        &MONRP_SENSES
    }

    fn objectives(&self, decisions: &[f64]) -> Vec<f64> {
        self.instance.evaluate_unchecked(decisions).to_vec()
    }

    fn violation(&self, decisions: &[f64]) -> f64 {
        self.instance.violation_unchecked(decisions)
    }
}

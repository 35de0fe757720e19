//! Problem abstraction shared by every optimizer.
//!
//! A [`Model`] maps a decision vector to raw objective scores. A [`Problem`]
//! wraps a model with the evaluation counter that optimizers are judged by:
//! every distinct candidate whose objectives get computed costs exactly one
//! evaluation, and cached results are free.
//!
//! Objectives are stored on [`Candidate`]s in minimization form, i.e. scores
//! of maximized objectives are negated, so one domination predicate serves
//! every caller.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{contract, CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    Continuous,
    Integer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dim {
    pub name: String,
    pub kind: DimKind,
    pub low: f64,
    pub high: f64,
}

impl Dim {
    pub fn continuous(name: impl Into<String>, low: f64, high: f64) -> Self {
        Self {
            name: name.into(),
            kind: DimKind::Continuous,
            low,
            high,
        }
    }

    pub fn integer(name: impl Into<String>, low: i64, high: i64) -> Self {
        Self {
            name: name.into(),
            kind: DimKind::Integer,
            low: low as f64,
            high: high as f64,
        }
    }

    pub fn span(&self) -> f64 {
        self.high - self.low
    }

    /// Uniform draw: inclusive of both bounds for integers, `[low, high)` otherwise.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            DimKind::Integer => rng.random_range(self.low as i64..=self.high as i64) as f64,
            DimKind::Continuous => {
                if self.high > self.low {
                    self.low + self.span() * rng.random::<f64>()
                } else {
                    self.low
                }
            }
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.low
            && value <= self.high
            && (self.kind == DimKind::Continuous || value.fract() == 0.0)
    }

    /// Clamp into bounds, rounding integer dims to the nearest integer.
    pub fn repair(&self, value: f64) -> f64 {
        let v = value.clamp(self.low, self.high);
        match self.kind {
            DimKind::Integer => v.round().clamp(self.low, self.high),
            DimKind::Continuous => v,
        }
    }
}

/// Decision-space description: one entry per decision variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionSchema {
    dims: Vec<Dim>,
}

impl DecisionSchema {
    pub fn new(dims: Vec<Dim>) -> Result<Self> {
        if dims.is_empty() {
            return contract("a decision schema needs at least one dimension");
        }
        for d in &dims {
            if d.low.is_nan() || d.high.is_nan() || d.low > d.high {
                return contract(format!("dimension {} has low > high", d.name));
            }
            if d.kind == DimKind::Integer && (d.low.fract() != 0.0 || d.high.fract() != 0.0) {
                return contract(format!(
                    "integer dimension {} has fractional bounds",
                    d.name
                ));
            }
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[Dim] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.dims.iter().map(|d| d.sample(rng)).collect()
    }

    pub fn check(&self, decisions: &[f64]) -> Result<()> {
        if decisions.len() != self.dims.len() {
            return contract(format!(
                "decision vector has {} entries, schema has {}",
                decisions.len(),
                self.dims.len()
            ));
        }
        for (dim, (d, &v)) in self.dims.iter().zip(decisions).enumerate() {
            if !d.contains(v) {
                return Err(CoreError::OutOfBounds {
                    dim,
                    value: v,
                    low: d.low,
                    high: d.high,
                });
            }
        }
        Ok(())
    }

    pub fn repair(&self, decisions: &mut [f64]) {
        for (d, v) in self.dims.iter().zip(decisions.iter_mut()) {
            *v = d.repair(*v);
        }
    }

    /// Min-max normalization against the schema bounds; fixed dims map to 0.
    pub fn normalize(&self, decisions: &[f64]) -> Vec<f64> {
        self.dims
            .iter()
            .zip(decisions)
            .map(|(d, &v)| {
                if d.span() > 0.0 {
                    (v - d.low) / d.span()
                } else {
                    0.0
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Map a raw score into minimization form (and back: the map is an involution).
    pub fn to_min(self, raw: f64) -> f64 {
        match self {
            Sense::Minimize => raw,
            Sense::Maximize => -raw,
        }
    }
}

/// A model scored by optimizers.
pub trait Model: Send + Sync {
    fn name(&self) -> &str;

    fn schema(&self) -> &DecisionSchema;

    fn senses(&self) -> &[Sense];

    /// Raw objective scores in their natural orientation.
    fn objectives(&self, decisions: &[f64]) -> Vec<f64>;

    /// Scalar constraint violation, zero when feasible.
    fn violation(&self, _decisions: &[f64]) -> f64 {
        0.0
    }
}

/// One point of the decision space, possibly evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub decisions: Vec<f64>,
    objectives: Option<Vec<f64>>,
    violation: Option<f64>,
}

impl Candidate {
    pub fn new(decisions: Vec<f64>) -> Self {
        Self {
            decisions,
            objectives: None,
            violation: None,
        }
    }

    /// A candidate whose scores are already known (minimization form).
    pub fn evaluated(decisions: Vec<f64>, objectives: Vec<f64>, violation: f64) -> Self {
        Self {
            decisions,
            objectives: Some(objectives),
            violation: Some(violation),
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.objectives.is_some()
    }

    /// Objectives in minimization form.
    pub fn objectives(&self) -> Option<&[f64]> {
        self.objectives.as_deref()
    }

    pub fn violation(&self) -> f64 {
        self.violation.unwrap_or(0.0)
    }

    pub fn is_feasible(&self) -> bool {
        self.violation() <= 0.0
    }

    /// Objectives mapped back to the model's natural orientation.
    pub fn raw_objectives(&self, senses: &[Sense]) -> Option<Vec<f64>> {
        self.objectives
            .as_ref()
            .map(|o| o.iter().zip(senses).map(|(&v, s)| s.to_min(v)).collect())
    }

    pub(crate) fn expect_objectives(&self) -> Result<&[f64]> {
        match &self.objectives {
            Some(o) => Ok(o),
            None => contract("candidate has not been evaluated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationBudget {
    pub max_evals: usize,
}

impl EvaluationBudget {
    pub fn new(max_evals: usize) -> Result<Self> {
        if max_evals == 0 {
            return contract("evaluation budget must be positive");
        }
        Ok(Self { max_evals })
    }
}

/// A model plus its evaluation counter.
pub struct Problem {
    model: Arc<dyn Model>,
    counter: AtomicUsize,
    budget: Option<EvaluationBudget>,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.model.name())
            .field("evaluations", &self.evaluations())
            .field("budget", &self.budget)
            .finish()
    }
}

impl Problem {
    pub fn new(model: Arc<dyn Model>) -> Self {
        Self {
            model,
            counter: AtomicUsize::new(0),
            budget: None,
        }
    }

    pub fn with_budget(model: Arc<dyn Model>, budget: EvaluationBudget) -> Self {
        Self {
            model,
            counter: AtomicUsize::new(0),
            budget: Some(budget),
        }
    }

    pub fn name(&self) -> &str {
        self.model.name()
    }

    pub fn model(&self) -> &Arc<dyn Model> {
        &self.model
    }

    pub fn schema(&self) -> &DecisionSchema {
        self.model.schema()
    }

    pub fn senses(&self) -> &[Sense] {
        self.model.senses()
    }

    pub fn objective_count(&self) -> usize {
        self.model.senses().len()
    }

    pub fn budget(&self) -> Option<EvaluationBudget> {
        self.budget
    }

    /// Number of distinct candidates evaluated so far.
    pub fn evaluations(&self) -> usize {
        self.counter.load(AtomicOrdering::SeqCst)
    }

    pub fn remaining(&self) -> Option<usize> {
        self.budget
            .map(|b| b.max_evals.saturating_sub(self.evaluations()))
    }

    /// Score `c`, charging one evaluation unless it was already scored.
    pub fn evaluate<'c>(&self, c: &'c mut Candidate) -> Result<&'c [f64]> {
        if c.objectives.is_none() {
            self.schema().check(&c.decisions)?;
            if let Some(b) = self.budget {
                let claimed = self.counter.fetch_update(
                    AtomicOrdering::SeqCst,
                    AtomicOrdering::SeqCst,
                    |n| (n < b.max_evals).then_some(n + 1),
                );
                if claimed.is_err() {
                    return Err(CoreError::BudgetExhausted { max: b.max_evals });
                }
            } else {
                self.counter.fetch_add(1, AtomicOrdering::SeqCst);
            }
            self.score(c);
        }
        Ok(c.objectives.as_deref().expect("scored above"))
    }

    /// Score `c` for reporting purposes without charging the counter.
    ///
    /// Used by the harness to measure the final output of an optimizer; never
    /// call this from inside an optimizer.
    pub fn measure(&self, c: &mut Candidate) -> Result<()> {
        if c.objectives.is_none() {
            self.schema().check(&c.decisions)?;
            self.score(c);
        }
        Ok(())
    }

    fn score(&self, c: &mut Candidate) {
        let raw = self.model.objectives(&c.decisions);
        debug_assert_eq!(raw.len(), self.objective_count());
        let min_form = raw
            .iter()
            .zip(self.senses())
            .map(|(&v, s)| s.to_min(v))
            .collect();
        c.objectives = Some(min_form);
        c.violation = Some(self.model.violation(&c.decisions).max(0.0));
    }
}

/// `n` uniformly sampled candidates; consumes no evaluations.
pub fn random_population(schema: &DecisionSchema, n: usize, seed: u64) -> Result<Vec<Candidate>> {
    if n == 0 {
        return contract("population size must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| Candidate::new(schema.sample(&mut rng)))
        .collect())
}

/// Pareto domination on minimization-form vectors.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return contract(format!(
            "objective vectors differ in length ({} vs {})",
            a.len(),
            b.len()
        ));
    }
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Domination for raw vectors under explicit senses.
pub fn dominates_with_senses(a: &[f64], b: &[f64], senses: &[Sense]) -> Result<bool> {
    if a.len() != senses.len() {
        return contract("sense list does not match objective count");
    }
    let a: Vec<f64> = a.iter().zip(senses).map(|(&v, s)| s.to_min(v)).collect();
    let b: Vec<f64> = b.iter().zip(senses).map(|(&v, s)| s.to_min(v)).collect();
    dominates(&a, &b)
}

/// Feasibility first, then smaller violation, then Pareto domination.
pub fn constrained_dominates(a: &Candidate, b: &Candidate) -> Result<bool> {
    let oa = a.expect_objectives()?;
    let ob = b.expect_objectives()?;
    let (va, vb) = (a.violation(), b.violation());
    match (va > 0.0, vb > 0.0) {
        (false, true) => Ok(true),
        (true, false) => Ok(false),
        (true, true) => Ok(va < vb),
        (false, false) => dominates(oa, ob),
    }
}

pub(crate) fn constrained_dominates_unchecked(a: &Candidate, b: &Candidate) -> bool {
    let (va, vb) = (a.violation(), b.violation());
    match (va > 0.0, vb > 0.0) {
        (false, true) => true,
        (true, false) => false,
        (true, true) => va < vb,
        (false, false) => {
            dominates_unchecked(a.objectives().unwrap_or(&[]), b.objectives().unwrap_or(&[]))
        }
    }
}

/// The constrained non-dominated subset, in input order.
pub fn non_dominated(cands: &[Candidate]) -> Result<Vec<Candidate>> {
    for c in cands {
        c.expect_objectives()?;
    }
    Ok(cands
        .iter()
        .filter(|c| !cands.iter().any(|o| constrained_dominates_unchecked(o, c)))
        .cloned()
        .collect())
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn total_cmp_slices(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

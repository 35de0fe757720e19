//! SWAY sampling optimizer, baseline MOEAs, software engineering models,
//! quality indicators and ranking statistics.

pub mod error;
pub mod intrinsic;
pub mod metrics;
pub mod models;
pub mod moea;
pub mod problem;
pub mod stats;
pub mod sway;

pub use error::{CoreError, Result};
pub use problem::{
    constrained_dominates, dominates, non_dominated, random_population, Candidate, DecisionSchema,
    Dim, DimKind, EvaluationBudget, Model, Problem, Sense,
};
pub use sway::{sway, sway_sampled, SwayConfig, SwayOutcome, SWAY2_POPULATION, SWAY4_POPULATION};

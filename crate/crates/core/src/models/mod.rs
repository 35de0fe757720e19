//! The three problem families and a registry of named scenarios.

mod monrp;
mod pom3;
mod xomo;

pub use monrp::{
    monrp_generate, MonrpInstance, MonrpModel, MonrpVariant, MONRP_SENSES, VALUE_ZERO_SHARE,
};
pub use pom3::{
    pom3_simulate, Plan, Pom3Decisions, Pom3Model, Pom3Outcome, Pom3Params, Pom3Scenario,
    POM3_SENSES,
};
pub use xomo::{
    attribute_index, xomo_estimate, Cmp, Condition, RiskRule, RiskTable, XomoEstimate, XomoModel,
    XomoScenario, COCOMO_A, COCOMO_B, DEFECT_RATES, XOMO_ATTRIBUTES, XOMO_SENSES,
};

use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::problem::{Model, Sense};
use crate::sway::SplitStrategy;

/// Every scenario known to [`Scenario::by_name`].
pub const SCENARIO_NAMES: [&str; 11] = [
    "pom3a",
    "pom3b",
    "pom3c",
    "xomo-flight",
    "xomo-ground",
    "xomo-osp",
    "xomo-osp2",
    "monrp-50-4-5-0-110",
    "monrp-50-4-5-0-090",
    "monrp-50-4-5-4-110",
    "monrp-50-4-5-4-090",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Pom3(Pom3Scenario),
    Xomo(XomoScenario),
    Monrp(MonrpVariant),
}

impl Scenario {
    pub fn by_name(name: &str) -> Result<Self> {
        if let Some(s) = Pom3Scenario::by_name(name) {
            return Ok(Scenario::Pom3(s));
        }
        if let Some(s) = XomoScenario::by_name(name) {
            return Ok(Scenario::Xomo(s));
        }
        if let Some(v) = MonrpVariant::parse(name) {
            return Ok(Scenario::Monrp(v));
        }
        Err(CoreError::Config(format!("unknown scenario `{name}`")))
    }

    pub fn name(&self) -> String {
        match self {
            Scenario::Pom3(s) => s.name.clone(),
            Scenario::Xomo(s) => s.name.clone(),
            Scenario::Monrp(v) => v.name(),
        }
    }

    /// Objective orientations, without building a model.
    pub fn senses(&self) -> &'static [Sense] {
        match self {
            Scenario::Pom3(_) => &POM3_SENSES,
            Scenario::Xomo(_) => &XOMO_SENSES,
            Scenario::Monrp(_) => &MONRP_SENSES,
        }
    }

    pub fn is_constrained(&self) -> bool {
        matches!(self, Scenario::Monrp(_))
    }

    /// Model instance for one repeat. The seed drives POM3's simulation and
    /// MONRP's instance generation; XOMO is deterministic.
    pub fn build(&self, seed: u64) -> Result<Arc<dyn Model>> {
        Ok(match self {
            Scenario::Pom3(s) => Arc::new(Pom3Model::new(s.clone(), Pom3Params::default(), seed)?),
            Scenario::Xomo(s) => Arc::new(XomoModel::new(s.clone(), RiskTable::default())?),
            Scenario::Monrp(v) => Arc::new(MonrpModel::new(v.name(), monrp_generate(v, seed))?),
        })
    }

    pub fn split_strategy(&self) -> SplitStrategy {
        match self {
            Scenario::Monrp(v) => SplitStrategy::MonrpWorkload {
                releases: v.releases,
            },
            _ => SplitStrategy::Continuous,
        }
    }
}

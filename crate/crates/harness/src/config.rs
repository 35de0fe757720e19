//! Experiment configuration, read from TOML or JSON.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use swaylab_core::models::Scenario;

use crate::error::{io_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Optimizer {
    #[serde(rename = "sway2")]
    Sway2,
    #[serde(rename = "sway4")]
    Sway4,
    #[serde(rename = "nsga2")]
    Nsga2,
    #[serde(rename = "spea2")]
    Spea2,
    /// NSGA-II seeded with SWAY4 survivors.
    #[serde(rename = "nsga2-sc")]
    Nsga2Sc,
    #[serde(rename = "spea2-sc")]
    Spea2Sc,
}

impl Optimizer {
    pub const ALL: [Optimizer; 6] = [
        Optimizer::Sway2,
        Optimizer::Sway4,
        Optimizer::Nsga2,
        Optimizer::Spea2,
        Optimizer::Nsga2Sc,
        Optimizer::Spea2Sc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Optimizer::Sway2 => "sway2",
            Optimizer::Sway4 => "sway4",
            Optimizer::Nsga2 => "nsga2",
            Optimizer::Spea2 => "spea2",
            Optimizer::Nsga2Sc => "nsga2-sc",
            Optimizer::Spea2Sc => "spea2-sc",
        }
    }

    pub fn is_sway(self) -> bool {
        matches!(self, Optimizer::Sway2 | Optimizer::Sway4)
    }

    pub fn is_supercharged(self) -> bool {
        matches!(self, Optimizer::Nsga2Sc | Optimizer::Spea2Sc)
    }
}

impl fmt::Display for Optimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Optimizer {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Optimizer::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown optimizer `{s}`")))
    }
}

fn default_repeats() -> usize {
    20
}

fn default_budget() -> usize {
    2000
}

fn default_pop_size() -> usize {
    100
}

fn default_out() -> PathBuf {
    PathBuf::from("runs")
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenarios: Vec<String>,
    pub optimizers: Vec<Optimizer>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    /// Evaluation budget of the evolutionary optimizers.
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Repeat `i` runs with seed `seed + i`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_pop_size")]
    pub pop_size: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Also write every SWAY survivor, not just the reported front.
    #[serde(default = "yes")]
    pub persist_survivors: bool,
}

impl ExperimentConfig {
    pub fn new(scenarios: &[&str], optimizers: &[Optimizer]) -> Self {
        Self {
            scenarios: scenarios.iter().map(|s| s.to_string()).collect(),
            optimizers: optimizers.to_vec(),
            repeats: default_repeats(),
            budget: default_budget(),
            seed: 0,
            pop_size: default_pop_size(),
            out: default_out(),
            persist_survivors: true,
        }
    }

    /// Parse a config file; `.json` files are JSON, anything else TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let config: Self = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if self.pop_size < 2 {
            return bad("pop_size must be at least 2".into());
        }
        if self.budget < self.pop_size {
            return bad(format!(
                "budget {} is smaller than one population of {}",
                self.budget, self.pop_size
            ));
        }
        if self.scenarios.is_empty() || self.optimizers.is_empty() {
            return bad("need at least one scenario and one optimizer".into());
        }
        for (i, s) in self.scenarios.iter().enumerate() {
            Scenario::by_name(s).map_err(|e| HarnessError::Config(e.to_string()))?;
            if self.scenarios[..i].contains(s) {
                return bad(format!("scenario `{s}` listed twice"));
            }
        }
        for (i, o) in self.optimizers.iter().enumerate() {
            if self.optimizers[..i].contains(o) {
                return bad(format!("optimizer `{o}` listed twice"));
            }
        }
        Ok(())
    }

    pub fn seed_of(&self, repeat: usize) -> u64 {
        self.seed.wrapping_add(repeat as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_defaults() {
        let c: ExperimentConfig = toml::from_str(
            r#"
            scenarios = ["pom3a", "monrp-50-4-5-0-110"]
            optimizers = ["sway4", "nsga2-sc"]
            "#,
        )
        .unwrap();
        assert_eq!(c.repeats, 20);
        assert_eq!(c.budget, 2000);
        assert_eq!(c.optimizers, vec![Optimizer::Sway4, Optimizer::Nsga2Sc]);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_unknowns() {
        let mut c = ExperimentConfig::new(&["pom3a"], &[Optimizer::Sway2]);
        c.validate().unwrap();
        c.scenarios.push("zdt1".into());
        assert!(c.validate().is_err());
        assert!(
            toml::from_str::<ExperimentConfig>("scenarios=[\"pom3a\"]\noptimizers=[\"gale\"]")
                .is_err()
        );
        let mut c = ExperimentConfig::new(&["pom3a"], &[Optimizer::Sway2]);
        c.repeats = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn optimizer_names_round_trip() {
        for o in Optimizer::ALL {
            assert_eq!(o.name().parse::<Optimizer>().unwrap(), o);
        }
    }
}

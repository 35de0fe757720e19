//! XOMO: COCOMO-family estimates of risk, effort, defects and schedule.
//!
//! Effort follows the COCOMO-II post-architecture form
//! `PM = A * KSLOC^E * prod(EM)` with `E = B + 0.01 * sum(SF)`, schedule the
//! matching `TDEV` equation, defects a COQUALMO-style introduction and
//! removal product, and risk the fraction of triggered rules from a rule
//! table. Attributes take ordinal ratings 1 (very low) to 6 (extra high);
//! where the published tables leave a rating undefined, the nearest defined
//! rating is used. All four objectives are minimized.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::problem::{DecisionSchema, Dim, Model, Sense};

/// Attribute names in storage order; `ksloc` is last.
pub const XOMO_ATTRIBUTES: [&str; 23] = [
    "prec", "flex", "resl", "team", "pmat", // scale factors
    "rely", "data", "cplx", "ruse", "docu", "time", "stor", "pvol", // product and platform
    "acap", "pcap", "pcon", "apex", "plex", "ltex", // personnel
    "tool", "site", "sced", // project
    "ksloc",
];

const SCALE_FACTORS: usize = 5;
const KSLOC: usize = 22;
const NA: f64 = f64::NAN;

pub const COCOMO_A: f64 = 2.94;
pub const COCOMO_B: f64 = 0.91;
pub const SCHEDULE_C: f64 = 3.67;
pub const SCHEDULE_D: f64 = 0.28;

/// Ratings VL, L, N, H, VH, XH per attribute (storage order, ksloc excluded).
const COST_TABLE: [[f64; 6]; 22] = [
    [6.20, 4.96, 3.72, 2.48, 1.24, 0.00], // prec
    [5.07, 4.05, 3.04, 2.03, 1.01, 0.00], // flex
    [7.07, 5.65, 4.24, 2.83, 1.41, 0.00], // resl
    [5.48, 4.38, 3.29, 2.19, 1.10, 0.00], // team
    [7.80, 6.24, 4.68, 3.12, 1.56, 0.00], // pmat
    [0.82, 0.92, 1.00, 1.10, 1.26, NA],   // rely
    [NA, 0.90, 1.00, 1.14, 1.28, NA],     // data
    [0.73, 0.87, 1.00, 1.17, 1.34, 1.74], // cplx
    [NA, 0.95, 1.00, 1.07, 1.15, 1.24],   // ruse
    [0.81, 0.91, 1.00, 1.11, 1.23, NA],   // docu
    [NA, NA, 1.00, 1.11, 1.29, 1.63],     // time
    [NA, NA, 1.00, 1.05, 1.17, 1.46],     // stor
    [NA, 0.87, 1.00, 1.15, 1.30, NA],     // pvol
    [1.42, 1.19, 1.00, 0.85, 0.71, NA],   // acap
    [1.34, 1.15, 1.00, 0.88, 0.76, NA],   // pcap
    [1.29, 1.12, 1.00, 0.90, 0.81, NA],   // pcon
    [1.22, 1.10, 1.00, 0.88, 0.81, NA],   // apex
    [1.19, 1.09, 1.00, 0.91, 0.85, NA],   // plex
    [1.20, 1.09, 1.00, 0.91, 0.84, NA],   // ltex
    [1.17, 1.09, 1.00, 0.90, 0.78, NA],   // tool
    [1.22, 1.09, 1.00, 0.93, 0.86, 0.80], // site
    [1.43, 1.14, 1.00, 1.00, 1.00, NA],   // sced
];

/// Schedule stretch (percent of nominal) by sced rating.
const SCED_PERCENT: [f64; 6] = [75.0, 85.0, 100.0, 130.0, 160.0, NA];

/// Defects introduced per KSLOC at nominal ratings: requirements, design, code.
pub const DEFECT_RATES: [f64; 3] = [10.0, 20.0, 30.0];

/// Defect-introduction multipliers (attribute, VL..XH).
const DEFECT_DRIVERS: [(usize, [f64; 6]); 10] = [
    (0, [1.32, 1.16, 1.00, 0.86, 0.74, 0.62]), // prec
    (2, [1.25, 1.12, 1.00, 0.89, 0.79, 0.70]), // resl
    (4, [1.43, 1.20, 1.00, 0.83, 0.70, 0.58]), // pmat
    (5, [1.37, 1.17, 1.00, 0.85, 0.73, NA]),   // rely
    (7, [0.74, 0.87, 1.00, 1.15, 1.32, 1.55]), // cplx
    (9, [1.10, 1.05, 1.00, 0.96, 0.92, NA]),   // docu
    (10, [NA, NA, 1.00, 1.08, 1.20, 1.35]),    // time
    (13, [1.32, 1.15, 1.00, 0.87, 0.76, NA]),  // acap
    (14, [1.38, 1.17, 1.00, 0.87, 0.76, NA]),  // pcap
    (21, [1.25, 1.13, 1.00, 1.05, 1.09, NA]),  // sced
];

/// Removal fractions (attribute, VL..XH): automated analysis via tool,
/// peer review via pmat, execution testing via rely.
const DEFECT_REMOVAL: [(usize, [f64; 6]); 3] = [
    (19, [0.00, 0.10, 0.20, 0.30, 0.40, 0.50]),
    (4, [0.00, 0.25, 0.40, 0.50, 0.58, 0.70]),
    (5, [0.00, 0.23, 0.40, 0.50, 0.57, 0.60]),
];

/// Table value at an integer rating, falling back to the nearest defined one.
fn rated(row: &[f64; 6], rating: f64) -> f64 {
    let r = (rating.round() as i64).clamp(1, 6) as usize - 1;
    if !row[r].is_nan() {
        return row[r];
    }
    (1..6)
        .flat_map(|k| [r.checked_sub(k), Some(r + k)])
        .flatten()
        .filter(|&i| i < 6)
        .map(|i| row[i])
        .find(|v| !v.is_nan())
        .expect("every row has a defined rating")
}

pub fn attribute_index(name: &str) -> Option<usize> {
    let lower = name.to_ascii_lowercase();
    XOMO_ATTRIBUTES.iter().position(|&a| a == lower)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    AtLeast,
    AtMost,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub attribute: usize,
    pub cmp: Cmp,
    pub rating: f64,
}

impl Condition {
    /// Parse `"rely >= 4"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || CoreError::Config(format!("bad risk condition `{text}`"));
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [attr, op, value] = parts.as_slice() else {
            return Err(bad());
        };
        let attribute = attribute_index(attr)
            .filter(|&i| i != KSLOC)
            .ok_or_else(bad)?;
        let cmp = match *op {
            ">=" => Cmp::AtLeast,
            "<=" => Cmp::AtMost,
            "==" => Cmp::Equal,
            _ => return Err(bad()),
        };
        Ok(Self {
            attribute,
            cmp,
            rating: value.parse().map_err(|_| bad())?,
        })
    }

    pub fn holds(&self, settings: &[f64]) -> bool {
        let v = settings[self.attribute];
        match self.cmp {
            Cmp::AtLeast => v >= self.rating,
            Cmp::AtMost => v <= self.rating,
            Cmp::Equal => v == self.rating,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskRule {
    pub name: String,
    pub conditions: Vec<Condition>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskTable {
    pub rules: Vec<RiskRule>,
}

#[derive(Deserialize)]
struct RuleFile {
    rule: Vec<RuleEntry>,
}

#[derive(Deserialize)]
struct RuleEntry {
    name: String,
    when: Vec<String>,
}

const DEFAULT_RULES: &str = include_str!("xomo_risk.toml");

impl RiskTable {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: RuleFile = toml::from_str(text).map_err(|e| CoreError::Config(e.to_string()))?;
        if file.rule.is_empty() {
            return Err(CoreError::Config("risk table has no rules".into()));
        }
        let rules = file
            .rule
            .into_iter()
            .map(|r| {
                Ok(RiskRule {
                    name: r.name,
                    conditions: r
                        .when
                        .iter()
                        .map(|c| Condition::parse(c))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { rules })
    }

    /// Fraction of rules whose conditions all hold.
    pub fn risk(&self, settings: &[f64]) -> f64 {
        let hit = self
            .rules
            .iter()
            .filter(|r| r.conditions.iter().all(|c| c.holds(settings)))
            .count();
        hit as f64 / self.rules.len() as f64
    }
}

impl Default for RiskTable {
    fn default() -> Self {
        Self::from_toml(DEFAULT_RULES).expect("bundled risk table parses")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XomoEstimate {
    pub risk: f64,
    /// Person-months.
    pub effort: f64,
    pub defects: f64,
    pub months: f64,
}

/// Estimate a project from a full settings vector (storage order).
pub fn xomo_estimate(settings: &[f64], risk: &RiskTable) -> XomoEstimate {
    let ksloc = settings[KSLOC];
    let sf: f64 = (0..SCALE_FACTORS)
        .map(|i| rated(&COST_TABLE[i], settings[i]))
        .sum();
    let exponent = COCOMO_B + 0.01 * sf;
    let em: f64 = (SCALE_FACTORS..KSLOC)
        .map(|i| rated(&COST_TABLE[i], settings[i]))
        .product();
    let effort = COCOMO_A * ksloc.powf(exponent) * em;

    let sced = rated(&SCED_PERCENT, settings[21]) / 100.0;
    let months = SCHEDULE_C * effort.powf(SCHEDULE_D + 0.2 * (exponent - COCOMO_B)) * sced;

    let introduced: f64 = DEFECT_DRIVERS
        .iter()
        .map(|(i, row)| rated(row, settings[*i]))
        .product();
    let kept: f64 = DEFECT_REMOVAL
        .iter()
        .map(|(i, row)| 1.0 - rated(row, settings[*i]))
        .product();
    let defects = DEFECT_RATES.iter().sum::<f64>() * ksloc * introduced * kept;

    XomoEstimate {
        risk: risk.risk(settings),
        effort,
        defects,
        months,
    }
}

/// Ranged and fixed attributes of one project.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XomoScenario {
    pub name: String,
    /// `(attribute, low, high)`, in decision order.
    pub ranges: Vec<(String, f64, f64)>,
    pub fixed: Vec<(String, f64)>,
}

type Ranges = Vec<(String, f64, f64)>;

fn owned(ranges: &[(&str, f64, f64)], fixed: &[(&str, f64)]) -> (Ranges, Vec<(String, f64)>) {
    (
        ranges
            .iter()
            .map(|&(a, l, h)| (a.to_string(), l, h))
            .collect(),
        fixed.iter().map(|&(a, v)| (a.to_string(), v)).collect(),
    )
}

impl XomoScenario {
    fn build(name: &str, ranges: &[(&str, f64, f64)], fixed: &[(&str, f64)]) -> Self {
        let (ranges, fixed) = owned(ranges, fixed);
        Self {
            name: name.into(),
            ranges,
            fixed,
        }
    }

    /// JPL flight software.
    pub fn flight() -> Self {
        Self::build(
            "xomo-flight",
            &[
                ("rely", 3.0, 5.0),
                ("data", 2.0, 3.0),
                ("cplx", 3.0, 6.0),
                ("time", 3.0, 4.0),
                ("stor", 3.0, 4.0),
                ("acap", 3.0, 5.0),
                ("apex", 2.0, 5.0),
                ("pcap", 3.0, 5.0),
                ("plex", 1.0, 4.0),
                ("ltex", 1.0, 4.0),
                ("pmat", 2.0, 3.0),
                ("ksloc", 7.0, 418.0),
            ],
            &[("tool", 2.0), ("sced", 3.0)],
        )
    }

    /// JPL ground software.
    pub fn ground() -> Self {
        Self::build(
            "xomo-ground",
            &[
                ("rely", 1.0, 4.0),
                ("data", 2.0, 3.0),
                ("cplx", 1.0, 4.0),
                ("time", 3.0, 4.0),
                ("stor", 3.0, 4.0),
                ("acap", 3.0, 5.0),
                ("apex", 2.0, 5.0),
                ("pcap", 3.0, 5.0),
                ("plex", 1.0, 4.0),
                ("ltex", 1.0, 4.0),
                ("pmat", 2.0, 3.0),
                ("ksloc", 11.0, 392.0),
            ],
            &[("tool", 2.0), ("sced", 3.0)],
        )
    }

    /// Orbital space plane navigation and guidance.
    pub fn osp() -> Self {
        Self::build(
            "xomo-osp",
            &[
                ("prec", 1.0, 2.0),
                ("flex", 2.0, 5.0),
                ("resl", 1.0, 3.0),
                ("team", 2.0, 3.0),
                ("pmat", 1.0, 4.0),
                ("stor", 3.0, 5.0),
                ("ruse", 2.0, 4.0),
                ("docu", 2.0, 4.0),
                ("acap", 2.0, 3.0),
                ("pcon", 2.0, 3.0),
                ("apex", 2.0, 3.0),
                ("ltex", 2.0, 4.0),
                ("tool", 2.0, 3.0),
                ("sced", 1.0, 3.0),
                ("cplx", 5.0, 6.0),
                ("ksloc", 75.0, 125.0),
            ],
            &[
                ("data", 3.0),
                ("pvol", 2.0),
                ("rely", 5.0),
                ("pcap", 3.0),
                ("plex", 3.0),
                ("site", 3.0),
            ],
        )
    }

    /// Second version of the orbital space plane software.
    pub fn osp2() -> Self {
        Self::build(
            "xomo-osp2",
            &[
                ("prec", 3.0, 5.0),
                ("pmat", 4.0, 5.0),
                ("docu", 3.0, 4.0),
                ("ltex", 2.0, 5.0),
                ("sced", 2.0, 4.0),
                ("ksloc", 75.0, 125.0),
            ],
            &[
                ("flex", 3.0),
                ("resl", 4.0),
                ("team", 3.0),
                ("time", 3.0),
                ("stor", 3.0),
                ("data", 4.0),
                ("pvol", 3.0),
                ("ruse", 4.0),
                ("rely", 5.0),
                ("acap", 4.0),
                ("pcap", 3.0),
                ("pcon", 3.0),
                ("apex", 4.0),
                ("plex", 4.0),
                ("tool", 5.0),
                ("cplx", 4.0),
                ("site", 6.0),
            ],
        )
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "xomo-flight" | "flight" => Some(Self::flight()),
            "xomo-ground" | "ground" => Some(Self::ground()),
            "xomo-osp" | "osp" => Some(Self::osp()),
            "xomo-osp2" | "osp2" => Some(Self::osp2()),
            _ => None,
        }
    }

    /// Ordinal attributes become integer dims, KSLOC a continuous one.
    pub fn schema(&self) -> Result<DecisionSchema> {
        let dims = self
            .ranges
            .iter()
            .map(|(attr, lo, hi)| match attribute_index(attr) {
                Some(KSLOC) => Ok(Dim::continuous(attr.clone(), *lo, *hi)),
                Some(_) if (1.0..=6.0).contains(lo) && (1.0..=6.0).contains(hi) => {
                    Ok(Dim::integer(attr.clone(), *lo as i64, *hi as i64))
                }
                _ => Err(CoreError::Config(format!("bad XOMO range for `{attr}`"))),
            })
            .collect::<Result<_>>()?;
        DecisionSchema::new(dims)
    }

    /// Settings vector: nominal defaults, then fixed values, then decisions.
    pub fn settings(&self, decisions: &[f64]) -> Result<Vec<f64>> {
        let mut s = vec![3.0; XOMO_ATTRIBUTES.len()];
        for (attr, v) in &self.fixed {
            let i = attribute_index(attr)
                .ok_or_else(|| CoreError::Config(format!("unknown attribute `{attr}`")))?;
            s[i] = *v;
        }
        for ((attr, _, _), &v) in self.ranges.iter().zip(decisions) {
            let i = attribute_index(attr)
                .ok_or_else(|| CoreError::Config(format!("unknown attribute `{attr}`")))?;
            s[i] = if i == KSLOC { v } else { v.round() };
        }
        Ok(s)
    }
}

pub const XOMO_SENSES: [Sense; 4] = [Sense::Minimize; 4];

#[derive(Debug, Clone)]
pub struct XomoModel {
    scenario: XomoScenario,
    schema: DecisionSchema,
    risk: RiskTable,
    /// Decision slot -> attribute index.
    slots: Vec<usize>,
    base: Vec<f64>,
}

impl XomoModel {
    pub fn new(scenario: XomoScenario, risk: RiskTable) -> Result<Self> {
        let schema = scenario.schema()?;
        let base = scenario.settings(&[])?;
        let slots = scenario
            .ranges
            .iter()
            .map(|(a, _, _)| attribute_index(a).expect("validated by schema"))
            .collect();
        Ok(Self {
            scenario,
            schema,
            risk,
            slots,
            base,
        })
    }

    pub fn scenario(&self) -> &XomoScenario {
        &self.scenario
    }

    pub fn estimate(&self, decisions: &[f64]) -> XomoEstimate {
        let mut s = self.base.clone();
        for (&i, &v) in self.slots.iter().zip(decisions) {
            s[i] = if i == KSLOC { v } else { v.round() };
        }
        xomo_estimate(&s, &self.risk)
    }
}

impl Model for XomoModel {
    fn name(&self) -> &str {
        &self.scenario.name
    }

    fn schema(&self) -> &DecisionSchema {
        &self.schema
    }

    fn senses(&self) -> &[Sense] {
        &XOMO_SENSES
    }

    fn objectives(&self, decisions: &[f64]) -> Vec<f64> {
        let e = self.estimate(decisions);
        vec![e.risk, e.effort, e.defects, e.months]
    }
}

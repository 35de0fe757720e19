//! Scott-Knott rank tables from persisted records.
//!
//! Indicators are computed per scenario after one shared min-max
//! normalization of every reported front. Infeasible points are dropped
//! before scoring; a run without feasible points scores zero hypervolume and
//! no spread. Nothing here touches a model.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use swaylab_core::metrics::{extreme_points, hypervolume, spread, Bounds, HV_REFERENCE};
use swaylab_core::models::Scenario;
use swaylab_core::stats::{median, scott_knott, BootstrapConfig, Direction, RankTable, Treatment};

use crate::config::Optimizer;
use crate::error::{csv_err, io_err, Result};
use crate::records::RunRecord;

pub const REPORT_FILE: &str = "report.md";
pub const RANKS_FILE: &str = "ranks.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Indicator {
    Hypervolume,
    Spread,
    Evaluations,
}

impl Indicator {
    pub const ALL: [Indicator; 3] = [
        Indicator::Hypervolume,
        Indicator::Spread,
        Indicator::Evaluations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Indicator::Hypervolume => "hypervolume",
            Indicator::Spread => "spread",
            Indicator::Evaluations => "evaluations",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Indicator::Hypervolume => Direction::HigherBetter,
            _ => Direction::LowerBetter,
        }
    }
}

/// Indicator values of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scores {
    pub optimizer: Optimizer,
    pub repeat: usize,
    pub hypervolume: f64,
    pub spread: Option<f64>,
    pub evaluations: usize,
}

impl Scores {
    pub fn get(&self, indicator: Indicator) -> Option<f64> {
        match indicator {
            Indicator::Hypervolume => Some(self.hypervolume),
            Indicator::Spread => self.spread,
            Indicator::Evaluations => Some(self.evaluations as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub scenario: String,
    pub scores: Vec<Scores>,
    pub tables: BTreeMap<Indicator, RankTable>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenarios: Vec<ScenarioReport>,
    pub warnings: Vec<String>,
}

fn feasible_min_form(r: &RunRecord, scenario: &Scenario) -> Vec<Vec<f64>> {
    let senses = scenario.senses();
    r.front
        .iter()
        .filter(|p| p.violation <= 0.0)
        .map(|p| {
            p.objectives
                .iter()
                .zip(senses)
                .map(|(&v, s)| s.to_min(v))
                .collect()
        })
        .collect()
}

/// Indicator values for every run of one scenario.
pub fn score_scenario(
    records: &[&RunRecord],
    scenario: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<Vec<Scores>> {
    let fronts: Vec<Vec<Vec<f64>>> = records
        .iter()
        .map(|r| feasible_min_form(r, scenario))
        .collect();
    let name = scenario.name();
    if fronts.iter().all(Vec::is_empty) {
        warnings.push(format!("{name}: no feasible points in any run"));
        return Ok(records
            .iter()
            .map(|r| Scores {
                optimizer: r.optimizer,
                repeat: r.repeat,
                hypervolume: 0.0,
                spread: None,
                evaluations: r.evaluations,
            })
            .collect());
    }
    let bounds = Bounds::of(fronts.iter().map(Vec::as_slice))?;
    let normalized: Vec<Vec<Vec<f64>>> = fronts
        .iter()
        .map(|f| f.iter().map(|p| bounds.apply(p)).collect())
        .collect();
    let all: Vec<&[Vec<f64>]> = normalized.iter().map(Vec::as_slice).collect();
    let extremes = extreme_points(&all);
    let reference = vec![HV_REFERENCE; bounds.low.len()];

    let mut out = Vec::with_capacity(records.len());
    for (r, front) in records.iter().zip(&normalized) {
        let spread = match spread(front, Some(&extremes)) {
            Ok(s) => Some(s),
            Err(e) => {
                warnings.push(format!(
                    "{name}/{}/{}: spread skipped ({e})",
                    r.optimizer, r.repeat
                ));
                None
            }
        };
        out.push(Scores {
            optimizer: r.optimizer,
            repeat: r.repeat,
            hypervolume: hypervolume(front, &reference)?,
            spread,
            evaluations: r.evaluations,
        });
    }
    Ok(out)
}

pub fn report(records: &[RunRecord], bootstrap: &BootstrapConfig) -> Result<Report> {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        if !names.contains(&r.scenario.as_str()) {
            names.push(&r.scenario);
        }
    }
    let mut warnings = Vec::new();
    let mut scenarios = Vec::new();
    for name in names {
        let scenario = Scenario::by_name(name)?;
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.scenario == name).collect();
        let scores = score_scenario(&runs, &scenario, &mut warnings)?;
        let mut optimizers: Vec<Optimizer> = Vec::new();
        for s in &scores {
            if !optimizers.contains(&s.optimizer) {
                optimizers.push(s.optimizer);
            }
        }
        let mut tables = BTreeMap::new();
        for indicator in Indicator::ALL {
            let mut treatments = Vec::new();
            for &opt in &optimizers {
                let samples: Vec<f64> = scores
                    .iter()
                    .filter(|s| s.optimizer == opt)
                    .filter_map(|s| s.get(indicator))
                    .collect();
                if samples.is_empty() {
                    warnings.push(format!(
                        "{name}/{}: no {} values, omitted",
                        opt,
                        indicator.name()
                    ));
                    continue;
                }
                treatments.push(Treatment::new(opt.name(), samples));
            }
            if !treatments.is_empty() {
                tables.insert(
                    indicator,
                    scott_knott(&treatments, indicator.direction(), bootstrap)?,
                );
            }
        }
        scenarios.push(ScenarioReport {
            scenario: name.to_string(),
            scores,
            tables,
        });
    }
    if !warnings.is_empty() {
        log::warn!(
            "{} report warnings, listed at the end of the report",
            warnings.len()
        );
    }
    Ok(Report {
        scenarios,
        warnings,
    })
}

#[derive(Serialize)]
struct RankRow<'a> {
    scenario: &'a str,
    indicator: Indicator,
    rank: usize,
    optimizer: &'a str,
    median: f64,
    iqr: f64,
    close: bool,
}

impl Report {
    pub fn scenario(&self, name: &str) -> Option<&ScenarioReport> {
        self.scenarios.iter().find(|s| s.scenario == name)
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::from("# Optimizer ranks\n\n");
        md.push_str("Scott-Knott ranks per scenario and indicator (1 is best). ");
        md.push_str(
            "`~` marks a treatment outside rank 1 whose median is within 5% of the best.\n",
        );
        for s in &self.scenarios {
            let _ = write!(md, "\n## {}\n", s.scenario);
            for (indicator, table) in &s.tables {
                let better = match table.direction {
                    Direction::HigherBetter => "higher is better",
                    Direction::LowerBetter => "lower is better",
                };
                let _ = write!(md, "\n### {} ({better})\n\n", indicator.name());
                md.push_str("| rank | optimizer | median | IQR |\n|---:|:---|---:|---:|\n");
                for e in &table.entries {
                    let mark = if e.close { " ~" } else { "" };
                    let _ = writeln!(
                        md,
                        "| {}{mark} | {} | {:.4} | {:.4} |",
                        e.rank, e.name, e.median, e.iqr
                    );
                }
            }
        }

        let mut optimizers: Vec<Optimizer> = Vec::new();
        for s in &self.scenarios {
            for sc in &s.scores {
                if !optimizers.contains(&sc.optimizer) {
                    optimizers.push(sc.optimizer);
                }
            }
        }
        md.push_str("\n## Median evaluations\n\n| scenario |");
        for o in &optimizers {
            let _ = write!(md, " {o} |");
        }
        md.push_str("\n|:---|");
        md.push_str(&"---:|".repeat(optimizers.len()));
        md.push('\n');
        for s in &self.scenarios {
            let _ = write!(md, "| {} |", s.scenario);
            for &o in &optimizers {
                let evals: Vec<f64> = s
                    .scores
                    .iter()
                    .filter(|x| x.optimizer == o)
                    .map(|x| x.evaluations as f64)
                    .collect();
                if evals.is_empty() {
                    md.push_str(" - |");
                } else {
                    let _ = write!(md, " {} |", median(&evals));
                }
            }
            md.push('\n');
        }
        if !self.warnings.is_empty() {
            md.push_str("\n## Warnings\n\n");
            for w in &self.warnings {
                let _ = writeln!(md, "- {w}");
            }
        }
        md
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join(REPORT_FILE);
        std::fs::write(&path, self.to_markdown()).map_err(io_err(&path))?;
        let path = dir.join(RANKS_FILE);
        let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
        for s in &self.scenarios {
            for (&indicator, table) in &s.tables {
                for e in &table.entries {
                    let row = RankRow {
                        scenario: &s.scenario,
                        indicator,
                        rank: e.rank,
                        optimizer: &e.name,
                        median: e.median,
                        iqr: e.iqr,
                        close: e.close,
                    };
                    w.serialize(row).map_err(csv_err(&path))?;
                }
            }
        }
        w.flush().map_err(io_err(&path))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::Point;

    fn run(
        optimizer: Optimizer,
        repeat: usize,
        front: Vec<Vec<f64>>,
        evaluations: usize,
    ) -> RunRecord {
        RunRecord {
            scenario: "xomo-osp".into(),
            optimizer,
            repeat,
            seed: repeat as u64,
            evaluations,
            front: front
                .into_iter()
                .map(|objectives| Point {
                    objectives,
                    violation: 0.0,
                })
                .collect(),
            survivors: Vec::new(),
            wall_secs: 0.0,
        }
    }

    fn good(i: usize) -> Vec<Vec<f64>> {
        let e = i as f64 * 1e-3;
        vec![
            vec![0.0 + e, 1.0, 1.0, 1.0],
            vec![1.0, 0.0 + e, 1.0, 1.0],
            vec![1.0, 1.0, e, e],
        ]
    }

    fn bad(i: usize) -> Vec<Vec<f64>> {
        let e = i as f64 * 1e-3;
        vec![vec![5.0 + e, 5.0, 5.0, 5.0], vec![5.5, 5.0 + e, 5.0, 5.0]]
    }

    #[test]
    fn single_optimizer_is_rank_one() {
        let records: Vec<RunRecord> = (0..5)
            .map(|i| run(Optimizer::Nsga2, i, good(i), 2000))
            .collect();
        let rep = report(&records, &BootstrapConfig::default()).unwrap();
        for table in rep.scenarios[0].tables.values() {
            assert!(table.entries.iter().all(|e| e.rank == 1));
        }
    }

    #[test]
    fn disjoint_hypervolumes_rank_apart() {
        let mut records: Vec<RunRecord> = (0..10)
            .map(|i| run(Optimizer::Nsga2, i, good(i), 2000))
            .collect();
        records.extend((0..10).map(|i| run(Optimizer::Sway4, i, bad(i), 60 + i)));
        let rep = report(&records, &BootstrapConfig::default()).unwrap();
        let s = rep.scenario("xomo-osp").unwrap();
        let hv = &s.tables[&Indicator::Hypervolume];
        assert_eq!(hv.rank_of("nsga2"), Some(1));
        assert_eq!(hv.rank_of("sway4"), Some(2));
        let ev = &s.tables[&Indicator::Evaluations];
        assert_eq!(ev.rank_of("sway4"), Some(1));
        assert_eq!(ev.rank_of("nsga2"), Some(2));
        assert!(rep.to_markdown().contains("## xomo-osp"));
    }

    #[test]
    fn infeasible_runs_score_zero() {
        let mut r = run(Optimizer::Sway2, 0, good(0), 10);
        r.front.iter_mut().for_each(|p| p.violation = 1.0);
        let mut warnings = Vec::new();
        let scenario = Scenario::by_name("xomo-osp").unwrap();
        let scores = score_scenario(&[&r], &scenario, &mut warnings).unwrap();
        assert_eq!(scores[0].hypervolume, 0.0);
        assert_eq!(scores[0].spread, None);
        assert!(!warnings.is_empty());
    }
}

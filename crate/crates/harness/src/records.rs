//! Run records and their CSV form.
//!
//! `records.csv` holds one summary row per run followed by one row per front
//! point and, optionally, one per SWAY survivor. Objectives are written in
//! their natural orientation with full float precision. Wall-clock times go
//! to a separate `timings.csv` so the records file is reproducible byte for
//! byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Optimizer;
use crate::error::{csv_err, io_err, HarnessError, Result};

pub const RECORDS_FILE: &str = "records.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const MAX_OBJECTIVES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub objectives: Vec<f64>,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario: String,
    pub optimizer: Optimizer,
    pub repeat: usize,
    pub seed: u64,
    pub evaluations: usize,
    /// Reported front, raw objectives.
    pub front: Vec<Point>,
    /// Every SWAY survivor (empty for the other optimizers or when not kept).
    pub survivors: Vec<Point>,
    pub wall_secs: f64,
}

impl RunRecord {
    pub fn key(&self) -> (&str, Optimizer, usize) {
        (&self.scenario, self.optimizer, self.repeat)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Summary,
    Front,
    Survivor,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    kind: Kind,
    scenario: String,
    optimizer: Optimizer,
    repeat: usize,
    seed: u64,
    evaluations: usize,
    point: Option<usize>,
    violation: Option<f64>,
    o1: Option<f64>,
    o2: Option<f64>,
    o3: Option<f64>,
    o4: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TimingRow {
    scenario: String,
    optimizer: Optimizer,
    repeat: usize,
    wall_secs: f64,
}

fn point_row(r: &RunRecord, kind: Kind, i: usize, p: &Point) -> Result<Row> {
    if p.objectives.len() > MAX_OBJECTIVES {
        return Err(HarnessError::Records(format!(
            "{} objectives, at most {MAX_OBJECTIVES} supported",
            p.objectives.len()
        )));
    }
    let o = |m: usize| p.objectives.get(m).copied();
    Ok(Row {
        kind,
        scenario: r.scenario.clone(),
        optimizer: r.optimizer,
        repeat: r.repeat,
        seed: r.seed,
        evaluations: r.evaluations,
        point: Some(i),
        violation: Some(p.violation),
        o1: o(0),
        o2: o(1),
        o3: o(2),
        o4: o(3),
    })
}

pub fn write_records(dir: &Path, records: &[RunRecord]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(RECORDS_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    for r in records {
        let summary = Row {
            kind: Kind::Summary,
            scenario: r.scenario.clone(),
            optimizer: r.optimizer,
            repeat: r.repeat,
            seed: r.seed,
            evaluations: r.evaluations,
            point: None,
            violation: None,
            o1: None,
            o2: None,
            o3: None,
            o4: None,
        };
        w.serialize(summary).map_err(csv_err(&path))?;
        for (kind, points) in [(Kind::Front, &r.front), (Kind::Survivor, &r.survivors)] {
            for (i, p) in points.iter().enumerate() {
                w.serialize(point_row(r, kind, i, p)?)
                    .map_err(csv_err(&path))?;
            }
        }
    }
    w.flush().map_err(io_err(&path))?;

    let path = dir.join(TIMINGS_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    for r in records {
        let row = TimingRow {
            scenario: r.scenario.clone(),
            optimizer: r.optimizer,
            repeat: r.repeat,
            wall_secs: r.wall_secs,
        };
        w.serialize(row).map_err(csv_err(&path))?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(())
}

/// Read `records.csv` (and `timings.csv` when present) back.
pub fn read_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let path = dir.join(RECORDS_FILE);
    let mut rdr = csv::Reader::from_path(&path).map_err(csv_err(&path))?;
    let mut records: Vec<RunRecord> = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(csv_err(&path))?;
        if row.kind == Kind::Summary {
            records.push(RunRecord {
                scenario: row.scenario,
                optimizer: row.optimizer,
                repeat: row.repeat,
                seed: row.seed,
                evaluations: row.evaluations,
                front: Vec::new(),
                survivors: Vec::new(),
                wall_secs: 0.0,
            });
            continue;
        }
        let Some(r) = records
            .last_mut()
            .filter(|r| r.key() == (row.scenario.as_str(), row.optimizer, row.repeat))
        else {
            return Err(HarnessError::Records(format!(
                "point row for {}/{}/{} without a summary row",
                row.scenario, row.optimizer, row.repeat
            )));
        };
        let objectives: Vec<f64> = [row.o1, row.o2, row.o3, row.o4]
            .into_iter()
            .map_while(|o| o)
            .collect();
        let p = Point {
            objectives,
            violation: row.violation.unwrap_or(0.0),
        };
        match row.kind {
            Kind::Front => r.front.push(p),
            _ => r.survivors.push(p),
        }
    }

    let path = dir.join(TIMINGS_FILE);
    if path.exists() {
        let mut rdr = csv::Reader::from_path(&path).map_err(csv_err(&path))?;
        for row in rdr.deserialize::<TimingRow>() {
            let t = row.map_err(csv_err(&path))?;
            if let Some(r) = records
                .iter_mut()
                .find(|r| r.key() == (t.scenario.as_str(), t.optimizer, t.repeat))
            {
                r.wall_secs = t.wall_secs;
            }
        }
    }
    Ok(records)
}

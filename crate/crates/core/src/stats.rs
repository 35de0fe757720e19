//! Ranking statistics: A12 effect size, bootstrap significance and
//! Scott-Knott grouping of treatments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};

/// Effects below this A12 are considered small.
pub const SMALL_EFFECT: f64 = 0.6;
/// A treatment is reasonably close to the top when its median is within this
/// fraction of the best median.
pub const CLOSE_FRACTION: f64 = 0.05;

/// Vargha-Delaney A12: how often a value of `x` exceeds one of `y`, ties half.
pub fn a12(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return contract("a12 needs non-empty samples");
    }
    let mut more = 0.0;
    for &a in x {
        for &b in y {
            if a > b {
                more += 1.0;
            } else if a == b {
                more += 0.5;
            }
        }
    }
    Ok(more / (x.len() * y.len()) as f64)
}

/// Linearly interpolated quantile of an unsorted sample.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    quantile_sorted(&s, q)
}

fn quantile_sorted(s: &[f64], q: f64) -> f64 {
    if s.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Interquartile range, 75th minus 25th percentile.
pub fn iqr(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub confidence: f64,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            confidence: 0.95,
            resamples: 1000,
            seed: 1,
        }
    }
}

/// Bootstrap test on the difference of medians.
///
/// Both samples are shifted onto the pooled median, which makes the null
/// hypothesis true while keeping each sample's shape; the p-value is the
/// share of resampled median differences at least as large as the observed
/// one.
pub fn bootstrap_different(x: &[f64], y: &[f64], config: &BootstrapConfig) -> bool {
    if x.is_empty() || y.is_empty() {
        return false;
    }
    let observed = (median(x) - median(y)).abs();
    if observed == 0.0 {
        return false;
    }
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let centre = median(&pooled);
    let shift = |s: &[f64]| -> Vec<f64> {
        let m = median(s);
        s.iter().map(|v| v - m + centre).collect()
    };
    let (xs, ys) = (shift(x), shift(y));
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut buf_x = vec![0.0; xs.len()];
    let mut buf_y = vec![0.0; ys.len()];
    let mut extreme = 0usize;
    for _ in 0..config.resamples {
        for b in buf_x.iter_mut() {
            *b = xs[rng.random_range(0..xs.len())];
        }
        for b in buf_y.iter_mut() {
            *b = ys[rng.random_range(0..ys.len())];
        }
        // tolerate rounding from the shift
        if (median(&buf_x) - median(&buf_y)).abs() >= observed * (1.0 - 1e-9) {
            extreme += 1;
        }
    }
    let p = extreme as f64 / config.resamples.max(1) as f64;
    p < 1.0 - config.confidence
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    LowerBetter,
    HigherBetter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Treatment {
    pub name: String,
    pub samples: Vec<f64>,
}

impl Treatment {
    pub fn new(name: impl Into<String>, samples: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: usize,
    pub name: String,
    pub median: f64,
    pub iqr: f64,
    /// Outside rank 1 but with a median within [`CLOSE_FRACTION`] of the best.
    pub close: bool,
}

/// Treatments best first, with Scott-Knott ranks starting at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub direction: Direction,
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.rank)
    }

    pub fn best_rank(&self) -> usize {
        self.entries.iter().map(|e| e.rank).min().unwrap_or(1)
    }
}

/// Whether the first group is better than the second by a non-small effect.
fn non_small(better: &[f64], worse: &[f64], direction: Direction) -> bool {
    let a = match direction {
        Direction::LowerBetter => a12(worse, better),
        Direction::HigherBetter => a12(better, worse),
    };
    a.map(|a| a >= SMALL_EFFECT).unwrap_or(false)
}

/// Recursive Scott-Knott grouping.
///
/// Treatments are sorted best median first. A group is cut where the
/// between-group sum of squares of the treatment medians is largest, and the
/// cut stands only if the two sides are bootstrap-different and the effect
/// is not small.
pub fn scott_knott(
    treatments: &[Treatment],
    direction: Direction,
    config: &BootstrapConfig,
) -> Result<RankTable> {
    if treatments.is_empty() {
        return contract("scott-knott needs at least one treatment");
    }
    if treatments.iter().any(|t| t.samples.is_empty()) {
        return contract("every treatment needs samples");
    }
    let mut sorted: Vec<(f64, &Treatment)> =
        treatments.iter().map(|t| (median(&t.samples), t)).collect();
    sorted.sort_by(|a, b| {
        let by = match direction {
            Direction::LowerBetter => a.0.total_cmp(&b.0),
            Direction::HigherBetter => b.0.total_cmp(&a.0),
        };
        by.then_with(|| a.1.name.cmp(&b.1.name))
    });

    let mut cuts = Vec::new();
    divide(&sorted, 0, direction, config, &mut cuts);
    cuts.sort_unstable();

    let best = sorted[0].0;
    let mut rank = 1;
    let mut entries = Vec::with_capacity(sorted.len());
    for (i, (m, t)) in sorted.iter().enumerate() {
        if cuts.contains(&i) {
            rank += 1;
        }
        let close = rank > 1 && (m - best).abs() <= CLOSE_FRACTION * best.abs();
        entries.push(RankEntry {
            rank,
            name: t.name.clone(),
            median: *m,
            iqr: iqr(&t.samples),
            close,
        });
    }
    Ok(RankTable { direction, entries })
}

fn divide(
    items: &[(f64, &Treatment)],
    offset: usize,
    direction: Direction,
    config: &BootstrapConfig,
    cuts: &mut Vec<usize>,
) {
    if items.len() < 2 {
        return;
    }
    let weight =
        |s: &[(f64, &Treatment)]| s.iter().map(|(_, t)| t.samples.len() as f64).sum::<f64>();
    let mean = |s: &[(f64, &Treatment)]| {
        s.iter()
            .map(|(m, t)| m * t.samples.len() as f64)
            .sum::<f64>()
            / weight(s)
    };
    let mu = mean(items);
    let mut best: Option<(f64, usize)> = None;
    for cut in 1..items.len() {
        let (l, r) = items.split_at(cut);
        let ss = weight(l) * (mean(l) - mu).powi(2) + weight(r) * (mean(r) - mu).powi(2);
        if best.is_none_or(|(b, _)| ss > b) {
            best = Some((ss, cut));
        }
    }
    let (_, cut) = best.expect("at least one cut");
    let (l, r) = items.split_at(cut);
    let pool = |s: &[(f64, &Treatment)]| {
        s.iter()
            .flat_map(|(_, t)| t.samples.iter().copied())
            .collect::<Vec<_>>()
    };
    let (lp, rp) = (pool(l), pool(r));
    if bootstrap_different(&lp, &rp, config) && non_small(&lp, &rp, direction) {
        cuts.push(offset + cut);
        divide(l, offset, direction, config, cuts);
        divide(r, offset + cut, direction, config, cuts);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn a12_hand_counts() {
        assert_eq!(a12(&[1.0, 2.0], &[1.0, 3.0]).unwrap(), 0.375);
        assert_eq!(a12(&[5.0, 6.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(a12(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.5);
        assert!(a12(&[], &[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn a12_is_complementary(
            x in prop::collection::vec(0i32..10, 1..20),
            y in prop::collection::vec(0i32..10, 1..20),
        ) {
            let x: Vec<f64> = x.into_iter().map(f64::from).collect();
            let y: Vec<f64> = y.into_iter().map(f64::from).collect();
            prop_assert!((a12(&x, &y).unwrap() + a12(&y, &x).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn a12_survives_monotone_transforms(
            x in prop::collection::vec(-5.0f64..5.0, 1..20),
            y in prop::collection::vec(-5.0f64..5.0, 1..20),
        ) {
            let f = |v: &Vec<f64>| v.iter().map(|a| a.exp() * 3.0 + 1.0).collect::<Vec<_>>();
            prop_assert_eq!(a12(&x, &y).unwrap(), a12(&f(&x), &f(&y)).unwrap());
        }
    }

    #[test]
    fn quantiles_interpolate() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(iqr(&[1.0, 2.0, 3.0, 4.0, 5.0]), 2.0);
    }

    #[test]
    fn bootstrap_extremes() {
        let cfg = BootstrapConfig::default();
        let x: Vec<f64> = (0..20).map(f64::from).collect();
        assert!(!bootstrap_different(&x, &x, &cfg));
        assert!(bootstrap_different(&[0.0; 20], &[100.0; 20], &cfg));
    }

    #[test]
    fn bootstrap_false_positive_rate_is_controlled() {
        let normal = Normal::new(10.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut hits = 0;
        for trial in 0..50 {
            let x: Vec<f64> = (0..20).map(|_| normal.sample(&mut rng)).collect();
            let y: Vec<f64> = (0..20).map(|_| normal.sample(&mut rng)).collect();
            let cfg = BootstrapConfig {
                seed: trial,
                ..BootstrapConfig::default()
            };
            if bootstrap_different(&x, &y, &cfg) {
                hits += 1;
            }
        }
        assert!(hits <= 5, "{hits} false positives in 50 trials");
    }

    fn sample(mean: f64, sd: f64, seed: u64) -> Vec<f64> {
        let normal = Normal::new(mean, sd).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..20).map(|_| normal.sample(&mut rng)).collect()
    }

    #[test]
    fn scott_knott_groups_close_medians() {
        let ts = vec![
            Treatment::new("c", sample(50.0, 1.0, 3)),
            Treatment::new("a", sample(10.0, 1.0, 1)),
            Treatment::new("b", sample(10.1, 1.0, 2)),
        ];
        let table = scott_knott(&ts, Direction::LowerBetter, &BootstrapConfig::default()).unwrap();
        assert_eq!(table.rank_of("a"), Some(1));
        assert_eq!(table.rank_of("b"), Some(1));
        assert_eq!(table.rank_of("c"), Some(2));

        let flipped =
            scott_knott(&ts, Direction::HigherBetter, &BootstrapConfig::default()).unwrap();
        assert_eq!(flipped.rank_of("c"), Some(1));
        assert_eq!(flipped.rank_of("a"), Some(2));
    }

    #[test]
    fn scott_knott_trivial_cases() {
        let cfg = BootstrapConfig::default();
        let one = scott_knott(
            &[Treatment::new("x", vec![1.0, 2.0])],
            Direction::LowerBetter,
            &cfg,
        )
        .unwrap();
        assert_eq!(one.entries[0].rank, 1);
        let same = vec![
            Treatment::new("x", sample(5.0, 1.0, 4)),
            Treatment::new("y", sample(5.0, 1.0, 4)),
        ];
        let t = scott_knott(&same, Direction::LowerBetter, &cfg).unwrap();
        assert!(t.entries.iter().all(|e| e.rank == 1));
        assert!(scott_knott(&[], Direction::LowerBetter, &cfg).is_err());
    }

    #[test]
    fn ranks_follow_median_order_and_boundaries_pass_both_gates() {
        let cfg = BootstrapConfig::default();
        let means = [3.0, 9.0, 1.0, 20.0, 9.2, 40.0];
        let ts: Vec<Treatment> = means
            .iter()
            .enumerate()
            .map(|(i, &m)| Treatment::new(format!("t{i}"), sample(m, 1.0, i as u64)))
            .collect();
        let table = scott_knott(&ts, Direction::LowerBetter, &cfg).unwrap();
        for w in table.entries.windows(2) {
            assert!(w[0].median <= w[1].median);
            assert!(w[1].rank == w[0].rank || w[1].rank == w[0].rank + 1);
        }
        let by_name = |n: &str| ts.iter().find(|t| t.name == n).unwrap().samples.clone();
        for r in 1..table.entries.last().unwrap().rank {
            let left: Vec<f64> = table
                .entries
                .iter()
                .filter(|e| e.rank == r)
                .flat_map(|e| by_name(&e.name))
                .collect();
            let right: Vec<f64> = table
                .entries
                .iter()
                .filter(|e| e.rank == r + 1)
                .flat_map(|e| by_name(&e.name))
                .collect();
            assert!(bootstrap_different(&left, &right, &cfg));
            assert!(a12(&right, &left).unwrap() >= SMALL_EFFECT);
        }
    }

    #[test]
    fn close_marks_near_top_treatments() {
        let cfg = BootstrapConfig::default();
        let ts = vec![
            Treatment::new("a", vec![100.0; 20]),
            Treatment::new("b", vec![103.0; 20]),
        ];
        let t = scott_knott(&ts, Direction::LowerBetter, &cfg).unwrap();
        assert_eq!(t.rank_of("b"), Some(2));
        assert!(t.entries[1].close);
    }
}

//! Quality indicators over final fronts.
//!
//! Fronts are compared after a shared min-max normalization so that every
//! treatment of a scenario is measured in the same unit box. All points are
//! in minimization form.

use serde::{Deserialize, Serialize};

use crate::error::{contract, CoreError, Result};
use crate::problem::{dominates_unchecked, euclidean, total_cmp_slices};

/// Default hypervolume reference coordinate after normalization.
pub const HV_REFERENCE: f64 = 1.1;

/// Per-objective bounds used to map raw objectives into `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl Bounds {
    /// Bounds of the union of `fronts`.
    pub fn of<'a, I>(fronts: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [Vec<f64>]>,
    {
        let mut low: Vec<f64> = Vec::new();
        let mut high: Vec<f64> = Vec::new();
        for front in fronts {
            for p in front {
                if low.is_empty() {
                    low = p.clone();
                    high = p.clone();
                    continue;
                }
                if p.len() != low.len() {
                    return contract("fronts disagree on the objective count");
                }
                for (m, &v) in p.iter().enumerate() {
                    low[m] = low[m].min(v);
                    high[m] = high[m].max(v);
                }
            }
        }
        if low.is_empty() {
            return contract("cannot normalize without any points");
        }
        Ok(Self { low, high })
    }

    /// Map one point; objectives with zero range map to 0.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        p.iter()
            .enumerate()
            .map(|(m, &v)| {
                let span = self.high[m] - self.low[m];
                if span > 0.0 {
                    ((v - self.low[m]) / span).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedFront {
    pub points: Vec<Vec<f64>>,
    pub bounds: Bounds,
}

/// Normalize every front with the bounds of their union.
pub fn normalize_fronts(fronts: &[Vec<Vec<f64>>]) -> Result<Vec<NormalizedFront>> {
    let bounds = Bounds::of(fronts.iter().map(Vec::as_slice))?;
    Ok(fronts
        .iter()
        .map(|f| NormalizedFront {
            points: f.iter().map(|p| bounds.apply(p)).collect(),
            bounds: bounds.clone(),
        })
        .collect())
}

/// Exact hypervolume dominated by `front` and bounded by `reference`.
pub fn hypervolume(front: &[Vec<f64>], reference: &[f64]) -> Result<f64> {
    for p in front {
        if p.len() != reference.len() {
            return contract("point and reference differ in dimension");
        }
        if p.iter().zip(reference).any(|(&x, &r)| x > r || x.is_nan()) {
            return contract("front point lies beyond the reference point");
        }
    }
    if front.is_empty() || reference.is_empty() {
        return Ok(0.0);
    }
    let mut pts: Vec<Vec<f64>> = front.to_vec();
    pts.sort_by(|a, b| total_cmp_slices(a, b));
    pts.dedup();
    Ok(sweep(pts, reference))
}

fn prune(pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    pts.iter()
        .filter(|p| !pts.iter().any(|q| dominates_unchecked(q, p)))
        .cloned()
        .collect()
}

/// Slice along the last objective and recurse on the rest.
fn sweep(pts: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    let k = reference.len();
    let mut pts = if k > 2 { prune(pts) } else { pts };
    if k == 1 {
        return pts.iter().map(|p| reference[0] - p[0]).fold(0.0, f64::max);
    }
    pts.sort_by(|a, b| a[k - 1].total_cmp(&b[k - 1]));
    if k == 2 {
        let mut area = 0.0;
        let mut best_x = reference[0];
        for (i, p) in pts.iter().enumerate() {
            best_x = best_x.min(p[0]);
            let top = pts.get(i + 1).map_or(reference[1], |q| q[1]);
            area += (reference[0] - best_x) * (top - p[1]);
        }
        return area;
    }
    let mut volume = 0.0;
    for i in 0..pts.len() {
        let top = pts.get(i + 1).map_or(reference[k - 1], |q| q[k - 1]);
        let height = top - pts[i][k - 1];
        if height > 0.0 {
            let slice: Vec<Vec<f64>> = pts[..=i].iter().map(|p| p[..k - 1].to_vec()).collect();
            volume += height * sweep(slice, &reference[..k - 1]);
        }
    }
    volume
}

/// Deb's spread, generalized to any number of objectives.
///
/// Points are ordered along the line through two far-apart members of the
/// front and `d_i` are the gaps between neighbours. The boundary term is the
/// distance from each reference extreme to its nearest front member; with
/// `extremes = None` the front's own per-objective extremes are used, so the
/// boundary term vanishes.
pub fn spread(front: &[Vec<f64>], extremes: Option<&[Vec<f64>]>) -> Result<f64> {
    if front.len() < 2 {
        return Err(CoreError::UndefinedIndicator(
            "spread needs at least two points".into(),
        ));
    }
    let ordered = order_along_front(front);
    let gaps: Vec<f64> = ordered.windows(2).map(|w| euclidean(w[0], w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let boundary: f64 = match extremes {
        Some(ext) => ext
            .iter()
            .map(|e| {
                front
                    .iter()
                    .map(|p| euclidean(e, p))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum(),
        None => 0.0,
    };
    let spacing: f64 = gaps.iter().map(|d| (d - mean).abs()).sum();
    let denom = boundary + gaps.len() as f64 * mean;
    if denom <= 0.0 {
        return Err(CoreError::UndefinedIndicator("all points coincide".into()));
    }
    Ok((boundary + spacing) / denom)
}

/// Per-objective minimizers of the non-dominated union of `fronts`.
pub fn extreme_points(fronts: &[&[Vec<f64>]]) -> Vec<Vec<f64>> {
    let all: Vec<Vec<f64>> = fronts.iter().flat_map(|f| f.iter().cloned()).collect();
    let nd = prune(all);
    let Some(k) = nd.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut out: Vec<Vec<f64>> = (0..k)
        .map(|m| {
            nd.iter()
                .min_by(|a, b| a[m].total_cmp(&b[m]).then_with(|| total_cmp_slices(a, b)))
                .expect("non-empty")
                .clone()
        })
        .collect();
    out.sort_by(|a, b| total_cmp_slices(a, b));
    out.dedup();
    out
}

fn order_along_front(front: &[Vec<f64>]) -> Vec<&Vec<f64>> {
    let k = front[0].len();
    let n = front.len() as f64;
    let centroid: Vec<f64> = (0..k)
        .map(|m| front.iter().map(|p| p[m]).sum::<f64>() / n)
        .collect();
    let furthest = |from: &[f64]| {
        front
            .iter()
            .max_by(|a, b| {
                euclidean(from, a)
                    .total_cmp(&euclidean(from, b))
                    .then_with(|| total_cmp_slices(b, a))
            })
            .expect("non-empty")
    };
    let a = furthest(&centroid);
    let b = furthest(a);
    let c = euclidean(a, b);
    let mut keyed: Vec<(f64, &Vec<f64>)> = front
        .iter()
        .map(|p| {
            let x = if c > 0.0 {
                (euclidean(a, p).powi(2) + c * c - euclidean(b, p).powi(2)) / (2.0 * c)
            } else {
                0.0
            };
            (x, p)
        })
        .collect();
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| total_cmp_slices(x.1, y.1)));
    keyed.into_iter().map(|(_, p)| p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Inclusion-exclusion over all subsets: the box of a subset is bounded by
    /// its component-wise maximum.
    fn hv_inclusion_exclusion(front: &[Vec<f64>], reference: &[f64]) -> f64 {
        let n = front.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            let mut corner = vec![f64::NEG_INFINITY; reference.len()];
            for (i, p) in front.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for (c, &v) in corner.iter_mut().zip(p) {
                        *c = c.max(v);
                    }
                }
            }
            let vol: f64 = corner
                .iter()
                .zip(reference)
                .map(|(c, r)| (r - c).max(0.0))
                .product();
            total += if mask.count_ones() % 2 == 1 {
                vol
            } else {
                -vol
            };
        }
        total
    }

    fn random_front(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| (0..k).map(|_| rng.random::<f64>()).collect())
            .collect()
    }

    #[test]
    fn hypervolume_trivial_cases() {
        assert_eq!(hypervolume(&[vec![0.0, 0.0]], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(
            hypervolume(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[1.0, 1.0]).unwrap(),
            0.0
        );
        assert_eq!(hypervolume(&[], &[1.0, 1.0]).unwrap(), 0.0);
        assert!(hypervolume(&[vec![1.2, 0.0]], &[1.1, 1.1]).is_err());
    }

    #[test]
    fn hypervolume_two_dim_staircase() {
        let front = vec![vec![0.2, 0.8], vec![0.5, 0.5], vec![0.8, 0.2]];
        // 0.8*0.2 + 0.5*0.3 + 0.2*0.3 = 0.16 + 0.15 + 0.06
        assert!((hypervolume(&front, &[1.0, 1.0]).unwrap() - 0.37).abs() < 1e-12);
    }

    #[test]
    fn hypervolume_matches_inclusion_exclusion() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let n = rng.random_range(1..=6);
            let k = rng.random_range(1..=4);
            let front = random_front(&mut rng, n, k);
            let reference = vec![HV_REFERENCE; k];
            let exact = hypervolume(&front, &reference).unwrap();
            let oracle = hv_inclusion_exclusion(&front, &reference);
            assert!(
                (exact - oracle).abs() < 1e-9,
                "{exact} vs {oracle} on {front:?}"
            );
        }
    }

    proptest! {
        #[test]
        fn hypervolume_ignores_order_and_duplicates(
            pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 1..25),
            rot in 0usize..25,
        ) {
            let reference = [HV_REFERENCE; 3];
            let base = hypervolume(&pts, &reference).unwrap();
            let mut shuffled = pts.clone();
            let r = rot % shuffled.len();
            shuffled.rotate_left(r);
            shuffled.push(pts[0].clone());
            let other = hypervolume(&shuffled, &reference).unwrap();
            prop_assert!((base - other).abs() < 1e-12);
        }

        #[test]
        fn adding_a_point_never_shrinks_hypervolume(
            pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 1..20),
            extra in prop::collection::vec(0.0f64..1.0, 3),
        ) {
            let reference = [HV_REFERENCE; 3];
            let base = hypervolume(&pts, &reference).unwrap();
            let mut more = pts.clone();
            more.push(extra);
            prop_assert!(hypervolume(&more, &reference).unwrap() >= base - 1e-12);
        }
    }

    #[test]
    fn dominated_points_contribute_nothing() {
        let front = vec![vec![0.1, 0.1, 0.1]];
        let with = vec![vec![0.1, 0.1, 0.1], vec![0.5, 0.5, 0.5]];
        let r = [1.0; 3];
        assert_eq!(
            hypervolume(&front, &r).unwrap(),
            hypervolume(&with, &r).unwrap()
        );
    }

    #[test]
    fn normalization_is_shared_and_affine_invariant() {
        let a = vec![vec![1.0, 10.0], vec![3.0, 30.0]];
        let b = vec![vec![2.0, 20.0]];
        let n = normalize_fronts(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(n[0].points, vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        assert_eq!(n[1].points, vec![vec![0.5, 0.5]]);
        let scale = |f: &Vec<Vec<f64>>| {
            f.iter()
                .map(|p| vec![p[0] * 7.0 - 3.0, p[1]])
                .collect::<Vec<_>>()
        };
        let m = normalize_fronts(&[scale(&a), scale(&b)]).unwrap();
        for (x, y) in n.iter().zip(&m) {
            for (p, q) in x.points.iter().zip(&y.points) {
                assert!(p.iter().zip(q).all(|(u, v)| (u - v).abs() < 1e-12));
            }
        }
        let same = normalize_fronts(&[a.clone(), a]).unwrap();
        assert_eq!(same[0].points, same[1].points);
    }

    #[test]
    fn degenerate_objective_maps_to_zero() {
        let n = normalize_fronts(&[vec![vec![5.0, 1.0], vec![5.0, 2.0]]]).unwrap();
        assert_eq!(n[0].points[0][0], 0.0);
        assert_eq!(n[0].points[1][0], 0.0);
    }

    fn line(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                vec![t, 1.0 - t]
            })
            .collect()
    }

    #[test]
    fn uniform_front_touching_extremes_has_zero_spread() {
        let front = line(11);
        let ext = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(spread(&front, Some(&ext)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn two_point_spread_depends_on_extreme_gaps_only() {
        let front = vec![vec![0.2, 0.8], vec![0.8, 0.2]];
        let ext = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let gap = (0.08f64).sqrt();
        let d = (0.72f64).sqrt();
        let expected = 2.0 * gap / (2.0 * gap + d);
        assert!((spread(&front, Some(&ext)).unwrap() - expected).abs() < 1e-12);
        assert!(spread(&front[..1], None).is_err());
    }

    #[test]
    fn clustered_pairs_spread_more_than_uniform() {
        let uniform = line(8);
        let clustered: Vec<Vec<f64>> = [0.0, 0.02, 0.33, 0.35, 0.65, 0.67, 0.98, 1.0]
            .iter()
            .map(|&t| vec![t, 1.0 - t])
            .collect();
        let ext = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(spread(&clustered, Some(&ext)).unwrap() > spread(&uniform, Some(&ext)).unwrap());
    }

    #[test]
    fn spread_ignores_input_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let front = random_front(&mut rng, 15, 3);
        let mut reversed = front.clone();
        reversed.reverse();
        let ext = extreme_points(&[&front]);
        let a = spread(&front, Some(&ext)).unwrap();
        let b = spread(&reversed, Some(&ext)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}

use std::cmp::Ordering;

use crate::error::{contract, Result};
use crate::problem::{constrained_dominates_unchecked, Candidate};

/// Non-domination bands, best first. Entries index into the sorted slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontBands {
    pub bands: Vec<Vec<usize>>,
}

impl FrontBands {
    pub fn first(&self) -> &[usize] {
        self.bands.first().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Band index of every member.
    pub fn ranks(&self, n: usize) -> Vec<usize> {
        let mut rank = vec![usize::MAX; n];
        for (r, band) in self.bands.iter().enumerate() {
            for &i in band {
                rank[i] = r;
            }
        }
        rank
    }
}

/// Deb's fast non-dominated sort under constrained domination.
pub fn fast_nondominated_sort(pop: &[Candidate]) -> Result<FrontBands> {
    if pop.iter().any(|c| !c.is_evaluated()) {
        return contract("non-dominated sorting needs evaluated candidates");
    }
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if constrained_dominates_unchecked(&pop[i], &pop[j]) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if constrained_dominates_unchecked(&pop[j], &pop[i]) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }

    let mut bands = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        bands.push(current);
        current = next;
    }
    Ok(FrontBands { bands })
}

/// Crowding distance of each member of `band` (minimization-form objectives).
///
/// Boundary members of every objective get `+inf`; interior members sum the
/// normalized gap between their neighbours.
pub fn crowding_distance(band: &[&[f64]]) -> Vec<f64> {
    let n = band.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let k = band[0].len();
    let mut distance = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..k {
        // Ties on objective m are broken by the full vector so the result does
        // not depend on input order.
        order.sort_by(|&a, &b| {
            band[a][m]
                .total_cmp(&band[b][m])
                .then_with(|| crate::problem::total_cmp_slices(band[a], band[b]))
        });
        let lo = band[order[0]][m];
        let hi = band[order[n - 1]][m];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if distance[i].is_finite() {
                distance[i] += (band[order[w + 1]][m] - band[order[w - 1]][m]) / range;
            }
        }
    }
    distance
}

pub(crate) fn crowded_cmp(rank_a: usize, dist_a: f64, rank_b: usize, dist_b: f64) -> Ordering {
    rank_a.cmp(&rank_b).then_with(|| dist_b.total_cmp(&dist_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cand(o: &[f64]) -> Candidate {
        Candidate::evaluated(vec![0.0], o.to_vec(), 0.0)
    }

    /// Peel off non-dominated layers by exhaustive pairwise comparison.
    fn brute_force_bands(pop: &[Candidate]) -> Vec<Vec<usize>> {
        let mut left: Vec<usize> = (0..pop.len()).collect();
        let mut bands = Vec::new();
        while !left.is_empty() {
            let band: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&i| {
                    !left
                        .iter()
                        .any(|&j| constrained_dominates_unchecked(&pop[j], &pop[i]))
                })
                .collect();
            left.retain(|i| !band.contains(i));
            bands.push(band);
        }
        bands
    }

    #[test]
    fn mutually_nondominated_is_one_band() {
        let pop = vec![cand(&[1.0, 3.0]), cand(&[2.0, 2.0]), cand(&[3.0, 1.0])];
        assert_eq!(
            fast_nondominated_sort(&pop).unwrap().bands,
            vec![vec![0, 1, 2]]
        );
    }

    #[test]
    fn chain_gives_singleton_bands() {
        let pop = vec![cand(&[3.0, 3.0]), cand(&[1.0, 1.0]), cand(&[2.0, 2.0])];
        assert_eq!(
            fast_nondominated_sort(&pop).unwrap().bands,
            vec![vec![1], vec![2], vec![0]]
        );
    }

    #[test]
    fn unevaluated_is_rejected() {
        assert!(fast_nondominated_sort(&[Candidate::new(vec![0.0])]).is_err());
    }

    #[test]
    fn infeasible_members_sink() {
        let pop = vec![
            Candidate::evaluated(vec![0.0], vec![0.0, 0.0], 1.0),
            Candidate::evaluated(vec![0.0], vec![5.0, 5.0], 0.0),
        ];
        assert_eq!(
            fast_nondominated_sort(&pop).unwrap().bands,
            vec![vec![1], vec![0]]
        );
    }

    #[test]
    fn matches_brute_force_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..50 {
            let pop: Vec<Candidate> = (0..50)
                .map(|_| cand(&[0, 1, 2].map(|_| rng.random_range(0..6) as f64)))
                .collect();
            let fast = fast_nondominated_sort(&pop).unwrap().bands;
            let mut fast_sorted = fast.clone();
            for b in &mut fast_sorted {
                b.sort_unstable();
            }
            assert_eq!(fast_sorted, brute_force_bands(&pop));
        }
    }

    #[test]
    fn crowding_examples() {
        let two: Vec<&[f64]> = vec![&[0.0, 1.0], &[1.0, 0.0]];
        assert!(crowding_distance(&two).iter().all(|d| d.is_infinite()));

        let three: Vec<&[f64]> = vec![&[0.0, 1.0], &[0.5, 0.5], &[1.0, 0.0]];
        let d = crowding_distance(&three);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crowding_is_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts: Vec<Vec<f64>> = (0..30)
            .map(|_| vec![rng.random(), rng.random(), rng.random()])
            .collect();
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let base = crowding_distance(&refs);
        let perm: Vec<usize> = (0..30).rev().collect();
        let shuffled: Vec<&[f64]> = perm.iter().map(|&i| refs[i]).collect();
        let d = crowding_distance(&shuffled);
        for (k, &i) in perm.iter().enumerate() {
            assert_eq!(d[k], base[i]);
        }
    }
}

//! SPEA2 (Zitzler, Laumanns & Thiele).
//!
//! Fitness is raw strength-based fitness plus a k-th nearest neighbour
//! density term; the archive is truncated by iteratively dropping the member
//! whose sorted neighbour distances are lexicographically smallest. Distances
//! are measured in objective space after min-max scaling over the current
//! pool, and a member that is the unique best on some objective is never
//! truncated while an unprotected member remains.

use std::cmp::Ordering;

use super::{binary_tournament, evaluate_all, initial_generation, rng_for, variation, MoeaConfig};
use crate::error::{contract, Result};
use crate::problem::{constrained_dominates_unchecked, euclidean, Candidate, Problem};

fn scaled_objectives(pool: &[Candidate]) -> Vec<Vec<f64>> {
    let k = pool[0].objectives().map_or(0, <[f64]>::len);
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    for c in pool {
        for (m, &v) in c.objectives().unwrap_or(&[]).iter().enumerate() {
            lo[m] = lo[m].min(v);
            hi[m] = hi[m].max(v);
        }
    }
    pool.iter()
        .map(|c| {
            c.objectives()
                .unwrap_or(&[])
                .iter()
                .enumerate()
                .map(|(m, &v)| {
                    if hi[m] > lo[m] {
                        (v - lo[m]) / (hi[m] - lo[m])
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

fn distance_matrix(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = euclidean(&points[i], &points[j]);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// SPEA2 fitness `F = R + D` of every member of `pool` (lower is better).
pub fn spea2_fitness(pool: &[Candidate]) -> Result<Vec<f64>> {
    if pool.iter().any(|c| !c.is_evaluated()) {
        return contract("SPEA2 fitness needs evaluated candidates");
    }
    let n = pool.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut strength = vec![0usize; n];
    let mut dominators: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && constrained_dominates_unchecked(&pool[i], &pool[j]) {
                strength[i] += 1;
                dominators[j].push(i);
            }
        }
    }
    let dist = distance_matrix(&scaled_objectives(pool));
    let k = ((n as f64).sqrt() as usize).clamp(1, n.saturating_sub(1).max(1));
    Ok((0..n)
        .map(|i| {
            let raw: usize = dominators[i].iter().map(|&j| strength[j]).sum();
            let mut row: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dist[i][j]).collect();
            row.sort_by(f64::total_cmp);
            let sigma = row.get(k - 1).copied().unwrap_or(0.0);
            raw as f64 + 1.0 / (sigma + 2.0)
        })
        .collect())
}

/// Indices that are the unique minimum of at least one objective.
fn unique_extremes(pool: &[Candidate], members: &[usize]) -> Vec<bool> {
    let mut protect = vec![false; members.len()];
    let k = pool[members[0]].objectives().map_or(0, <[f64]>::len);
    for m in 0..k {
        let best = members
            .iter()
            .map(|&i| pool[i].objectives().unwrap_or(&[])[m])
            .fold(f64::INFINITY, f64::min);
        let holders: Vec<usize> = (0..members.len())
            .filter(|&a| pool[members[a]].objectives().unwrap_or(&[])[m] == best)
            .collect();
        if holders.len() == 1 {
            protect[holders[0]] = true;
        }
    }
    protect
}

fn truncate(pool: &[Candidate], mut members: Vec<usize>, target: usize) -> Vec<usize> {
    let scaled = scaled_objectives(pool);
    let dist = distance_matrix(&scaled);
    let mut alive = vec![false; pool.len()];
    for &i in &members {
        alive[i] = true;
    }
    // Neighbour lists sorted once; removed members are skipped lazily.
    let neighbours: Vec<Vec<(f64, usize)>> = (0..pool.len())
        .map(|i| {
            if !alive[i] {
                return Vec::new();
            }
            let mut row: Vec<(f64, usize)> = members
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (dist[i][j], j))
                .collect();
            row.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            row
        })
        .collect();
    let closer = |a: usize, b: usize, alive: &[bool]| -> bool {
        let mut xs = neighbours[a].iter().filter(|(_, j)| alive[*j]).map(|p| p.0);
        let mut ys = neighbours[b].iter().filter(|(_, j)| alive[*j]).map(|p| p.0);
        loop {
            match (xs.next(), ys.next()) {
                (Some(x), Some(y)) => match x.total_cmp(&y) {
                    Ordering::Equal => continue,
                    o => return o == Ordering::Less,
                },
                _ => return false,
            }
        }
    };
    while members.len() > target {
        let protect = unique_extremes(pool, &members);
        let any_free = protect.iter().any(|p| !p);
        let mut victim: Option<usize> = None;
        for a in 0..members.len() {
            if any_free && protect[a] {
                continue;
            }
            victim = match victim {
                Some(v) if !closer(members[a], members[v], &alive) => Some(v),
                _ => Some(a),
            };
        }
        let v = victim.expect("members is non-empty");
        alive[members[v]] = false;
        members.remove(v);
    }
    members
}

/// Pick `archive_size` members of `pool` by SPEA2 environmental selection.
///
/// Returns the selected candidates and their fitness values.
pub fn spea2_environmental_selection(
    pool: &[Candidate],
    archive_size: usize,
) -> Result<(Vec<Candidate>, Vec<f64>)> {
    let fitness = spea2_fitness(pool)?;
    let mut nondominated: Vec<usize> = (0..pool.len()).filter(|&i| fitness[i] < 1.0).collect();
    let chosen = if nondominated.len() > archive_size {
        truncate(pool, nondominated, archive_size)
    } else {
        let mut rest: Vec<usize> = (0..pool.len()).filter(|&i| fitness[i] >= 1.0).collect();
        rest.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
        let room = archive_size - nondominated.len();
        nondominated.extend(rest.into_iter().take(room));
        nondominated
    };
    Ok((
        chosen.iter().map(|&i| pool[i].clone()).collect(),
        chosen.iter().map(|&i| fitness[i]).collect(),
    ))
}

/// SPEA2. Returns the non-dominated members of the final archive.
pub fn spea2(problem: &Problem, config: &MoeaConfig) -> Result<Vec<Candidate>> {
    let mut rng = rng_for(config);
    let (mut pop, generations) = initial_generation(problem, config, &mut rng)?;
    let n = config.pop_size;
    let mut archive: Vec<Candidate> = Vec::new();
    let mut archive_fitness: Vec<f64>;

    let mut generation = 0;
    loop {
        let mut pool = std::mem::take(&mut pop);
        pool.append(&mut archive);
        (archive, archive_fitness) = spea2_environmental_selection(&pool, n)?;
        if generation == generations {
            break;
        }
        let parents: Vec<Candidate> = (0..n)
            .map(|_| {
                let i = binary_tournament(archive.len(), &mut rng, |a, b| {
                    archive_fitness[a] < archive_fitness[b]
                });
                archive[i].clone()
            })
            .collect();
        pop = variation(&parents, problem.schema(), config, &mut rng);
        evaluate_all(problem, &mut pop)?;
        generation += 1;
    }

    Ok(archive
        .iter()
        .filter(|c| {
            !archive
                .iter()
                .any(|o| constrained_dominates_unchecked(o, c))
        })
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cand(o: &[f64]) -> Candidate {
        Candidate::evaluated(vec![o[0]], o.to_vec(), 0.0)
    }

    #[test]
    fn single_candidate_is_kept() {
        let pool = vec![cand(&[1.0, 2.0])];
        let (sel, fit) = spea2_environmental_selection(&pool, 1).unwrap();
        assert_eq!(sel, pool);
        assert!(fit[0] < 1.0);
    }

    #[test]
    fn identical_objectives_truncate_deterministically() {
        let pool: Vec<Candidate> = (0..6)
            .map(|i| Candidate::evaluated(vec![i as f64], vec![1.0, 1.0], 0.0))
            .collect();
        let a = spea2_environmental_selection(&pool, 3).unwrap().0;
        let b = spea2_environmental_selection(&pool, 3).unwrap().0;
        assert_eq!(a.len(), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn fitness_separates_dominated_members() {
        let pool = vec![cand(&[0.0, 0.0]), cand(&[1.0, 1.0]), cand(&[2.0, 2.0])];
        let f = spea2_fitness(&pool).unwrap();
        assert!(f[0] < 1.0);
        // raw fitness: member 1 is dominated by 0 (strength 2); member 2 by 0 and 1 (2 + 1)
        assert!((f[1].floor() - 2.0).abs() < 1e-12);
        assert!((f[2].floor() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_keeps_unique_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let k = 10;
            // 2k points on the simplex x + y + z = 1 are mutually non-dominated
            let pool: Vec<Candidate> = (0..2 * k)
                .map(|_| {
                    let a: f64 = rng.random();
                    let b: f64 = rng.random::<f64>() * (1.0 - a);
                    cand(&[a, b, 1.0 - a - b])
                })
                .collect();
            let (kept, _) = spea2_environmental_selection(&pool, k).unwrap();
            assert_eq!(kept.len(), k);
            for m in 0..3 {
                let best = pool
                    .iter()
                    .min_by(|x, y| {
                        x.objectives().unwrap()[m].total_cmp(&y.objectives().unwrap()[m])
                    })
                    .unwrap();
                assert!(kept.contains(best), "objective {m} extreme was truncated");
            }
        }
    }
}

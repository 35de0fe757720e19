use super::sort::{crowded_cmp, crowding_distance, fast_nondominated_sort};
use super::{binary_tournament, evaluate_all, initial_generation, rng_for, variation, MoeaConfig};
use crate::error::Result;
use crate::problem::{Candidate, Problem};

struct Ranked {
    pop: Vec<Candidate>,
    rank: Vec<usize>,
    crowding: Vec<f64>,
}

/// Keep `n` members of `pool`: whole bands first, the last band by crowding.
fn survive(pool: Vec<Candidate>, n: usize) -> Result<Ranked> {
    let bands = fast_nondominated_sort(&pool)?;
    let mut chosen: Vec<(usize, usize, f64)> = Vec::with_capacity(n);
    for (r, band) in bands.bands.iter().enumerate() {
        if chosen.len() >= n {
            break;
        }
        let objs: Vec<&[f64]> = band
            .iter()
            .map(|&i| pool[i].objectives().unwrap_or(&[]))
            .collect();
        let dist = crowding_distance(&objs);
        let mut members: Vec<(usize, usize, f64)> =
            band.iter().zip(dist).map(|(&i, d)| (i, r, d)).collect();
        if chosen.len() + members.len() > n {
            members.sort_by(|a, b| crowded_cmp(a.1, a.2, b.1, b.2).then(a.0.cmp(&b.0)));
            members.truncate(n - chosen.len());
        }
        chosen.extend(members);
    }
    let mut slots: Vec<Option<Candidate>> = pool.into_iter().map(Some).collect();
    let mut pop = Vec::with_capacity(n);
    let mut rank = Vec::with_capacity(n);
    let mut crowding = Vec::with_capacity(n);
    for (i, r, d) in chosen {
        pop.push(slots[i].take().expect("each index chosen once"));
        rank.push(r);
        crowding.push(d);
    }
    Ok(Ranked {
        pop,
        rank,
        crowding,
    })
}

/// NSGA-II. Returns the first non-domination band of the final population.
pub fn nsga2(problem: &Problem, config: &MoeaConfig) -> Result<Vec<Candidate>> {
    let mut rng = rng_for(config);
    let (pop, generations) = initial_generation(problem, config, &mut rng)?;
    let n = config.pop_size;
    let mut current = survive(pop, n)?;

    for _ in 0..generations {
        let parents: Vec<Candidate> = (0..n)
            .map(|_| {
                let i = binary_tournament(n, &mut rng, |a, b| {
                    crowded_cmp(
                        current.rank[a],
                        current.crowding[a],
                        current.rank[b],
                        current.crowding[b],
                    )
                    .is_lt()
                });
                current.pop[i].clone()
            })
            .collect();
        let mut offspring = variation(&parents, problem.schema(), config, &mut rng);
        evaluate_all(problem, &mut offspring)?;
        let mut pool = std::mem::take(&mut current.pop);
        pool.extend(offspring);
        current = survive(pool, n)?;
    }

    Ok(current
        .pop
        .into_iter()
        .zip(current.rank)
        .filter(|(_, r)| *r == 0)
        .map(|(c, _)| c)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{
        constrained_dominates, random_population, DecisionSchema, Dim, Model, Sense,
    };
    use std::sync::Arc;

    /// Two conflicting objectives on [0,1]^3: x0 and (1 - x0) + sum of the rest.
    struct Zdt {
        schema: DecisionSchema,
    }

    impl Model for Zdt {
        fn name(&self) -> &str {
            "toy"
        }
        fn schema(&self) -> &DecisionSchema {
            &self.schema
        }
        fn senses(&self) -> &[Sense] {
            &[Sense::Minimize, Sense::Minimize]
        }
        fn objectives(&self, d: &[f64]) -> Vec<f64> {
            let g = 1.0 + d[1..].iter().sum::<f64>();
            vec![d[0], g * (1.0 - d[0])]
        }
    }

    fn toy() -> Problem {
        let schema = DecisionSchema::new(vec![Dim::continuous("x", 0.0, 1.0); 3]).unwrap();
        Problem::new(Arc::new(Zdt { schema }))
    }

    #[test]
    fn zero_generations_returns_best_band_of_initial_population() {
        let p = toy();
        let cfg = MoeaConfig {
            pop_size: 20,
            max_evals: 20,
            seed: 4,
            ..MoeaConfig::default()
        };
        let front = nsga2(&p, &cfg).unwrap();
        assert_eq!(p.evaluations(), 20);

        let mut rng = rng_for(&cfg);
        let mut init: Vec<Candidate> = (0..20)
            .map(|_| Candidate::new(p.schema().sample(&mut rng)))
            .collect();
        let q = toy();
        evaluate_all(&q, &mut init).unwrap();
        let best: Vec<&Candidate> = init
            .iter()
            .filter(|c| !init.iter().any(|o| constrained_dominates(o, c).unwrap()))
            .collect();
        assert_eq!(front.len(), best.len());
        for c in &front {
            assert!(best.iter().any(|b| b.decisions == c.decisions));
        }
    }

    #[test]
    fn budget_is_spent_exactly() {
        let p = toy();
        let cfg = MoeaConfig {
            pop_size: 10,
            max_evals: 105,
            seed: 1,
            ..MoeaConfig::default()
        };
        nsga2(&p, &cfg).unwrap();
        assert_eq!(p.evaluations(), 100);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = MoeaConfig {
            pop_size: 20,
            max_evals: 200,
            seed: 9,
            ..MoeaConfig::default()
        };
        let a = nsga2(&toy(), &cfg).unwrap();
        let b = nsga2(&toy(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn evolution_improves_on_random_sampling() {
        let p = toy();
        let cfg = MoeaConfig {
            pop_size: 40,
            max_evals: 2000,
            seed: 2,
            ..MoeaConfig::default()
        };
        let front = nsga2(&p, &cfg).unwrap();
        // distance term g = 1 + sum(x1..) shrinks toward 1 as the front converges
        let mean_g: f64 = front
            .iter()
            .map(|c| 1.0 + c.decisions[1..].iter().sum::<f64>())
            .sum::<f64>()
            / front.len() as f64;
        assert!(mean_g < 1.3, "mean g = {mean_g}");
    }

    #[test]
    fn evaluated_seeds_are_free() {
        let p = toy();
        let mut seeds = random_population(p.schema(), 10, 77).unwrap();
        let scorer = toy();
        evaluate_all(&scorer, &mut seeds).unwrap();
        let cfg = MoeaConfig {
            pop_size: 10,
            max_evals: 10,
            initial_pop: Some(seeds.clone()),
            ..MoeaConfig::default()
        };
        nsga2(&p, &cfg).unwrap();
        // the whole budget goes to one generation of offspring
        assert_eq!(p.evaluations(), 10);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let p = toy();
        assert!(nsga2(
            &p,
            &MoeaConfig {
                pop_size: 1,
                ..MoeaConfig::default()
            }
        )
        .is_err());
        assert!(nsga2(
            &p,
            &MoeaConfig {
                pop_size: 50,
                max_evals: 10,
                ..MoeaConfig::default()
            }
        )
        .is_err());
    }
}

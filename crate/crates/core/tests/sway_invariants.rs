use std::collections::HashSet;

use proptest::prelude::*;
use swaylab_core::models::Scenario;
use swaylab_core::{random_population, sway, Candidate, Problem, SwayConfig};

fn bits(c: &Candidate) -> Vec<u64> {
    c.decisions.iter().map(|v| v.to_bits()).collect()
}

const NAMES: [&str; 4] = [
    "xomo-ground",
    "pom3b",
    "monrp-50-4-5-0-110",
    "monrp-50-4-5-4-090",
];

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn survivors_come_from_the_input_and_evaluations_are_bounded(
        which in 0usize..NAMES.len(),
        n in 1usize..600,
        seed in 0u64..1000,
    ) {
        let scenario = Scenario::by_name(NAMES[which]).unwrap();
        let model = scenario.build(seed).unwrap();
        let pop = random_population(model.schema(), n, seed).unwrap();
        let pool: HashSet<Vec<u64>> = pop.iter().map(bits).collect();
        let problem = Problem::new(model.clone());
        let config = SwayConfig::new(scenario.split_strategy(), seed);
        let out = sway(&problem, pop.clone(), &config).unwrap();

        prop_assert!(!out.survivors.is_empty());
        prop_assert!(out.survivors.len() <= n);
        prop_assert!(out.survivors.iter().all(|c| pool.contains(&bits(c))));
        prop_assert!(out.stats.evaluations <= 2 * out.stats.splits);
        prop_assert_eq!(out.stats.evaluations, problem.evaluations());
        prop_assert!(out.stats.ties <= out.stats.splits);

        let again = sway(&Problem::new(model), pop, &config).unwrap();
        prop_assert_eq!(&again.survivors, &out.survivors);
        prop_assert_eq!(again.stats, out.stats);
    }
}

#[test]
fn survivors_are_distinct_members() {
    let scenario = Scenario::by_name("xomo-flight").unwrap();
    let model = scenario.build(0).unwrap();
    let pop = random_population(model.schema(), 2000, 3).unwrap();
    let out = sway(
        &Problem::new(model),
        pop,
        &SwayConfig::new(scenario.split_strategy(), 3),
    )
    .unwrap();
    let unique: HashSet<Vec<u64>> = out.survivors.iter().map(bits).collect();
    assert_eq!(unique.len(), out.survivors.len());
}

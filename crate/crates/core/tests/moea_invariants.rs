use proptest::prelude::*;
use swaylab_core::models::Scenario;
use swaylab_core::moea::{nsga2, spea2, MoeaConfig};
use swaylab_core::{constrained_dominates, Candidate, EvaluationBudget, Problem};

fn run(
    which: bool,
    scenario: &str,
    pop: usize,
    budget: usize,
    seed: u64,
) -> (Vec<Candidate>, usize) {
    let model = Scenario::by_name(scenario).unwrap().build(seed).unwrap();
    let problem = Problem::with_budget(model, EvaluationBudget::new(budget).unwrap());
    let config = MoeaConfig {
        pop_size: pop,
        max_evals: budget,
        seed,
        ..MoeaConfig::default()
    };
    let front = if which {
        nsga2(&problem, &config)
    } else {
        spea2(&problem, &config)
    }
    .unwrap();
    (front, problem.evaluations())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn budget_accounting_and_mutual_nondomination(
        use_nsga in any::<bool>(),
        constrained in any::<bool>(),
        pop in 4usize..40,
        extra in 0usize..200,
        seed in 0u64..500,
    ) {
        let scenario = if constrained { "monrp-50-4-5-4-090" } else { "xomo-osp2" };
        let budget = pop + extra;
        let (front, used) = run(use_nsga, scenario, pop, budget, seed);
        // generation zero plus whole generations only
        prop_assert_eq!(used, pop + (budget - pop) / pop * pop);
        prop_assert!(!front.is_empty());
        for a in &front {
            for b in &front {
                prop_assert!(!constrained_dominates(a, b).unwrap());
            }
        }
    }
}

#[test]
fn same_seed_same_front() {
    for which in [true, false] {
        let a = run(which, "pom3c", 12, 60, 4);
        let b = run(which, "pom3c", 12, 60, 4);
        assert_eq!(a, b);
    }
}

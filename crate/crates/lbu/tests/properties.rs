//! Property-based invariants over random sets, solutions, and samples.

use proptest::prelude::*;

use lbu::core::{evaluate_robust, worst_case_scenario, Instance, ProblemSpec, UncertaintySet};
use lbu::exact::{brute_force, certificate_for, reduced_costs, solve_selection_dp};
use lbu::fitting::detect_regions;
use lbu::sampling::{gen_random_set, sample_scenarios};

/// A small integer-valued uncertainty set: every item's region label is drawn
/// freely, then labels are compacted to a gapless partition.
fn small_set() -> impl Strategy<Value = UncertaintySet> {
    (1usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(0u8..=9, n),
            prop::collection::vec(0u8..=9, n),
            prop::collection::vec(0usize..4, n),
            prop::collection::vec(0u8..=15, 4),
        )
            .prop_map(move |(lower, dev, labels, budgets)| {
                let mut mapping = std::collections::BTreeMap::new();
                let region_of: Vec<usize> = labels
                    .iter()
                    .map(|&l| {
                        let next = mapping.len();
                        *mapping.entry(l).or_insert(next)
                    })
                    .collect();
                let budgets: Vec<f64> = (0..mapping.len()).map(|j| budgets[j] as f64).collect();
                UncertaintySet::new(
                    lower.iter().map(|&v| v as f64).collect(),
                    dev.iter().map(|&v| v as f64).collect(),
                    region_of,
                    budgets,
                )
                .expect("construction is valid by design")
            })
    })
}

fn set_and_choice() -> impl Strategy<Value = (UncertaintySet, Vec<bool>)> {
    small_set().prop_flat_map(|set| {
        let n = set.n();
        (Just(set), prop::collection::vec(any::<bool>(), n))
    })
}

proptest! {
    /// The extracted worst-case scenario is inside the set and attains the
    /// closed-form value.
    #[test]
    fn worst_case_scenario_certifies_evaluation((set, x) in set_and_choice()) {
        let value = evaluate_robust(&x, &set).unwrap();
        let scenario = worst_case_scenario(&x, &set).unwrap();
        prop_assert!(set.contains(&scenario).unwrap());
        let attained: f64 = scenario
            .iter()
            .zip(&x)
            .filter(|(_, &b)| b)
            .map(|(c, _)| c)
            .sum();
        prop_assert!((attained - value).abs() <= 1e-9);
    }

    /// With one region the evaluation is the classic budgeted formula.
    #[test]
    fn single_region_matches_classic_formula((set, x) in set_and_choice()) {
        let classic = set.to_classic();
        let base: f64 = (0..x.len()).filter(|&i| x[i]).map(|i| set.lower_costs()[i]).sum();
        let dev: f64 = (0..x.len()).filter(|&i| x[i]).map(|i| set.deviations()[i]).sum();
        let gamma: f64 = set.budgets().iter().sum();
        prop_assert_eq!(evaluate_robust(&x, &classic).unwrap(), base + gamma.min(dev));
    }

    /// Collapsing regions into one global budget can only increase the
    /// adversary's power.
    #[test]
    fn classic_collapse_dominates_local((set, x) in set_and_choice()) {
        let local = evaluate_robust(&x, &set).unwrap();
        let classic = evaluate_robust(&x, &set.to_classic()).unwrap();
        prop_assert!(local <= classic + 1e-9);
    }

    /// The evaluation is monotone in the budgets.
    #[test]
    fn evaluation_monotone_in_budgets((set, x) in set_and_choice(), f in 0.0f64..1.0) {
        let scaled = set.scale_budgets(f);
        let smaller = evaluate_robust(&x, &scaled).unwrap();
        let larger = evaluate_robust(&x, &set).unwrap();
        prop_assert!(smaller <= larger + 1e-9);
    }

    /// Adding an item never decreases the worst case (all costs nonnegative).
    #[test]
    fn evaluation_monotone_in_items((set, mut x) in set_and_choice(), pick in any::<prop::sample::Index>()) {
        let before = evaluate_robust(&x, &set).unwrap();
        let i = pick.index(x.len());
        x[i] = true;
        let after = evaluate_robust(&x, &set).unwrap();
        prop_assert!(after + 1e-9 >= before);
    }

    /// The threshold certificate attains the robust value through the
    /// decomposition's reduced costs.
    #[test]
    fn threshold_certificate_attains_value((set, x) in set_and_choice()) {
        let pi = certificate_for(&x, &set).unwrap();
        let costs = reduced_costs(&set, &pi).unwrap();
        let paid: f64 = pi
            .iter()
            .zip(set.budgets())
            .filter(|(&b, _)| b)
            .map(|(_, g)| g)
            .sum();
        let priced: f64 = costs.iter().zip(&x).filter(|(_, &b)| b).map(|(c, _)| c).sum();
        prop_assert_eq!(paid + priced, evaluate_robust(&x, &set).unwrap());
    }

    /// Every sampled scenario prices every solution at or below its robust
    /// value.
    #[test]
    fn sampled_scenarios_never_exceed_robust_value(
        n in 2usize..12,
        k in 1usize..4,
        seed in 0u64..1000,
        x_seed in any::<u64>(),
    ) {
        let k = k.min(n);
        let set = gen_random_set(n, k, seed).unwrap();
        let scenarios = sample_scenarios(&set, 20, seed ^ 0xABCD).unwrap();
        let x: Vec<bool> = (0..n).map(|i| (x_seed >> (i % 64)) & 1 == 1).collect();
        let robust = evaluate_robust(&x, &set).unwrap();
        for row in scenarios.rows() {
            let cost: f64 = row.iter().zip(&x).filter(|(_, &b)| b).map(|(c, _)| c).sum();
            prop_assert!(cost <= robust + 1e-9);
        }
    }

    /// Region detection returns a gapless partition numbered by smallest
    /// member, and raising the threshold only refines it.
    #[test]
    fn region_detection_is_a_partition_and_refines(
        n in 2usize..6,
        rows in 2usize..8,
        data_seed in any::<u64>(),
        t_low in 0.0f64..0.5,
        t_gap in 0.0f64..0.5,
    ) {
        let mut state = data_seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 10) as f64
        };
        let rows: Vec<Vec<f64>> = (0..rows).map(|_| (0..n).map(|_| next()).collect()).collect();
        let scenarios = lbu::core::ScenarioSet::new(n, rows).unwrap();
        let lower = vec![0.0; n];
        let coarse = detect_regions(&scenarios, &lower, t_low).unwrap();
        let fine = detect_regions(&scenarios, &lower, (t_low + t_gap).min(1.0)).unwrap();
        // Gapless, first-occurrence numbering.
        let mut seen = 0usize;
        for &j in &coarse {
            prop_assert!(j <= seen);
            if j == seen {
                seen += 1;
            }
        }
        // Refinement: items together at the high threshold stay together at
        // the low one.
        for a in 0..n {
            for b in 0..n {
                if fine[a] == fine[b] {
                    prop_assert_eq!(coarse[a], coarse[b]);
                }
            }
        }
    }

    /// The selection DP agrees with exhaustive search.
    #[test]
    fn selection_dp_matches_brute_force(set in small_set(), p_frac in 0.0f64..=1.0) {
        let n = set.n();
        let p = ((n as f64) * p_frac).round() as usize;
        let instance = Instance::new(set, ProblemSpec::Selection { n, p }).unwrap();
        let dp = solve_selection_dp(&instance).unwrap();
        let brute = brute_force(&instance).unwrap();
        prop_assert_eq!(dp.objective, brute.objective);
    }
}

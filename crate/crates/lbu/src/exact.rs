//! Exact robust solvers.
//!
//! The workhorse is the region-certificate decomposition: an optimal
//! per-region certificate is binary, so the robust problem splits into `2^K`
//! nominal problems with reduced costs. For selection problems a dynamic
//! program over per-region item counts avoids the exponential factor
//! entirely, and a branch-and-bound over the certificate bits handles large
//! `K` for the remaining variants. A brute-force enumerator serves as the
//! testing oracle.

use crate::core::{
    check_feasible, evaluate_robust, Instance, ProblemSpec, Solution, UncertaintySet,
};
use crate::error::{Error, Result};
use crate::nominal::{solve_nominal, CostVector};

/// Default cap on the certificate enumeration (about a million nominal
/// solves); above it `solve_branch_and_bound` is the intended tool.
pub const DECOMPOSITION_CAP: usize = 20;

const TOLERANCE: f64 = 1e-9;

/// Solver selector, matching the CLI `--method` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Decomp,
    Dp,
    Bnb,
    Brute,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decomp" => Ok(Method::Decomp),
            "dp" => Ok(Method::Dp),
            "bnb" => Ok(Method::Bnb),
            "brute" => Ok(Method::Brute),
            other => Err(Error::Invalid(format!(
                "unknown method '{other}' (expected decomp|dp|bnb|brute)"
            ))),
        }
    }
}

/// Solves with the selected method; branch-and-bound uses `limits`.
pub fn solve(instance: &Instance, method: Method, limits: &BnbLimits) -> Result<Solution> {
    match method {
        Method::Decomp => solve_decomposition(instance),
        Method::Dp => solve_selection_dp(instance),
        Method::Bnb => Ok(solve_branch_and_bound(instance, limits)?.solution),
        Method::Brute => brute_force(instance),
    }
}

/// Nominal costs induced by a binary certificate: items in paid regions
/// (`pi = 1`) keep their lower cost, all others are priced at the upper box
/// corner `lower + deviation`.
pub fn reduced_costs(set: &UncertaintySet, pi: &[bool]) -> Result<CostVector> {
    if pi.len() != set.region_count() {
        return Err(Error::DimensionMismatch {
            expected: set.region_count(),
            got: pi.len(),
        });
    }
    Ok((0..set.n())
        .map(|i| {
            let lo = set.lower_costs()[i];
            if pi[set.region_of()[i]] {
                lo
            } else {
                lo + set.deviations()[i]
            }
        })
        .collect())
}

/// The certificate that is optimal for a fixed solution: a region's budget
/// is paid iff it does not exceed the total deviation of the chosen items in
/// the region, with ties (including zero budgets) resolved to paying.
pub fn certificate_for(x: &[bool], set: &UncertaintySet) -> Result<Vec<bool>> {
    if x.len() != set.n() {
        return Err(Error::DimensionMismatch {
            expected: set.n(),
            got: x.len(),
        });
    }
    let mut dev = vec![0.0; set.region_count()];
    for i in 0..x.len() {
        if x[i] {
            dev[set.region_of()[i]] += set.deviations()[i];
        }
    }
    Ok(dev
        .iter()
        .zip(set.budgets())
        .map(|(d, g)| *g <= *d)
        .collect())
}

/// Enumerates all `2^K` binary certificates, solving one nominal problem
/// each; ties are broken by the lexicographically smallest certificate.
pub fn solve_decomposition(instance: &Instance) -> Result<Solution> {
    solve_decomposition_capped(instance, DECOMPOSITION_CAP)
}

pub fn solve_decomposition_capped(instance: &Instance, cap: usize) -> Result<Solution> {
    let set = &instance.set;
    let k = set.region_count();
    if k > cap {
        return Err(Error::Capacity(format!(
            "K={k} exceeds the decomposition cap {cap}; use branch-and-bound instead"
        )));
    }
    let mut best: Option<(f64, Solution, Vec<bool>)> = None;
    // Counting with pi_1 as the most significant bit enumerates certificates
    // in lexicographic order, so keeping strict improvements pins the tie rule.
    for mask in 0u64..(1u64 << k) {
        let pi: Vec<bool> = (0..k).map(|j| mask >> (k - 1 - j) & 1 == 1).collect();
        let costs = reduced_costs(set, &pi)?;
        let nominal = solve_nominal(&costs, &instance.spec)?;
        let paid: f64 = pi
            .iter()
            .zip(set.budgets())
            .filter(|(&b, _)| b)
            .map(|(_, g)| g)
            .sum();
        let value = paid + nominal.objective;
        if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
            best = Some((value, nominal, pi));
        }
    }
    let (value, nominal, pi) = best.expect("at least one certificate");
    let objective = evaluate_robust(&nominal.chosen, set)?;
    debug_assert!((objective - value).abs() <= TOLERANCE);
    Ok(Solution {
        chosen: nominal.chosen,
        objective,
        pi_assignment: Some(pi),
    })
}

/// Per-region table of optimal robust values when exactly `q` items are
/// taken from the region, for `q = 0..=min(region size, p)`.
#[derive(Debug, Clone)]
pub struct FTable {
    /// `tables[j][q]`; entries above the stored range are infinite.
    tables: Vec<Vec<f64>>,
    /// Region items sorted by lower cost, then by index.
    by_lower: Vec<Vec<usize>>,
    /// Region items sorted by lower + deviation, then by index.
    by_upper: Vec<Vec<usize>>,
    /// Prefix sums of the sorted lower costs.
    prefix_lower: Vec<Vec<f64>>,
    /// Prefix sums of the sorted upper costs.
    prefix_upper: Vec<Vec<f64>>,
    budgets: Vec<f64>,
}

impl FTable {
    pub fn region_count(&self) -> usize {
        self.tables.len()
    }

    /// `f_j(q)`, infinite when `q` exceeds the region size.
    pub fn value(&self, region: usize, q: usize) -> f64 {
        self.tables[region].get(q).copied().unwrap_or(f64::INFINITY)
    }

    /// Items realizing `f_j(q)`: whichever of the two certificate cases wins,
    /// with ties preferring the unpaid (upper-cost) case.
    pub fn region_choice(&self, region: usize, q: usize) -> Vec<usize> {
        let paid = self.budgets[region] + self.prefix_lower[region][q];
        let unpaid = self.prefix_upper[region][q];
        let order = if unpaid <= paid {
            &self.by_upper[region]
        } else {
            &self.by_lower[region]
        };
        order[..q].to_vec()
    }
}

/// Builds the full `f_j` table from two per-region sorts and prefix sums.
pub fn selection_f_table(set: &UncertaintySet, p: usize) -> FTable {
    let regions = set.region_items();
    let k = set.region_count();
    let mut tables = Vec::with_capacity(k);
    let mut by_lower = Vec::with_capacity(k);
    let mut by_upper = Vec::with_capacity(k);
    let mut prefix_lower = Vec::with_capacity(k);
    let mut prefix_upper = Vec::with_capacity(k);
    for (j, items) in regions.into_iter().enumerate() {
        let cap = items.len().min(p);
        let mut lower = items.clone();
        lower.sort_by(|&a, &b| {
            set.lower_costs()[a]
                .total_cmp(&set.lower_costs()[b])
                .then(a.cmp(&b))
        });
        let mut upper = items;
        let up = |i: usize| set.lower_costs()[i] + set.deviations()[i];
        upper.sort_by(|&a, &b| up(a).total_cmp(&up(b)).then(a.cmp(&b)));
        let mut pl = vec![0.0; cap + 1];
        let mut pu = vec![0.0; cap + 1];
        for q in 1..=cap {
            pl[q] = pl[q - 1] + set.lower_costs()[lower[q - 1]];
            pu[q] = pu[q - 1] + up(upper[q - 1]);
        }
        let table: Vec<f64> = (0..=cap)
            .map(|q| (set.budgets()[j] + pl[q]).min(pu[q]))
            .collect();
        debug_assert_eq!(table[0], 0.0);
        tables.push(table);
        by_lower.push(lower);
        by_upper.push(upper);
        prefix_lower.push(pl);
        prefix_upper.push(pu);
    }
    FTable {
        tables,
        by_lower,
        by_upper,
        prefix_lower,
        prefix_upper,
        budgets: set.budgets().to_vec(),
    }
}

/// Dynamic program over how many items each region contributes, in
/// `O(n log n + pn)` time; works for any number of regions.
pub fn solve_selection_dp(instance: &Instance) -> Result<Solution> {
    let p = match &instance.spec {
        ProblemSpec::Selection { p, .. } => *p,
        other => {
            return Err(Error::Variant {
                expected: "selection",
                got: other.variant_name(),
            })
        }
    };
    let set = &instance.set;
    let n = set.n();
    if p > n {
        return Err(Error::Infeasible {
            variant: "selection",
            reason: format!("p={p} exceeds n={n}"),
        });
    }
    let table = selection_f_table(set, p);
    let k = set.region_count();
    // Rolling DP rows; `choice[j][q]` records the smallest per-region count
    // among the minimizers so the backtrack is deterministic.
    let mut prev = vec![f64::INFINITY; p + 1];
    prev[0] = 0.0;
    let mut choice = vec![vec![0u32; p + 1]; k];
    for (j, row) in choice.iter_mut().enumerate() {
        let cap = table.tables[j].len() - 1;
        let mut current = vec![f64::INFINITY; p + 1];
        for total in 0..=p {
            let mut best = f64::INFINITY;
            let mut best_q = 0u32;
            for q in 0..=cap.min(total) {
                let cand = prev[total - q] + table.value(j, q);
                if cand < best {
                    best = cand;
                    best_q = q as u32;
                }
            }
            current[total] = best;
            row[total] = best_q;
        }
        prev = current;
    }
    let value = prev[p];
    debug_assert!(value.is_finite());
    let mut chosen = vec![false; n];
    let mut remaining = p;
    for j in (0..k).rev() {
        let q = choice[j][remaining] as usize;
        for i in table.region_choice(j, q) {
            chosen[i] = true;
        }
        remaining -= q;
    }
    debug_assert_eq!(remaining, 0);
    let objective = evaluate_robust(&chosen, set)?;
    debug_assert!((objective - value).abs() <= TOLERANCE);
    let pi = certificate_for(&chosen, set)?;
    Ok(Solution {
        chosen,
        objective,
        pi_assignment: Some(pi),
    })
}

/// Resource limits for branch-and-bound.
#[derive(Debug, Clone)]
pub struct BnbLimits {
    pub node_cap: usize,
    pub time_cap: Option<std::time::Duration>,
}

impl Default for BnbLimits {
    fn default() -> Self {
        BnbLimits {
            node_cap: 100_000,
            time_cap: None,
        }
    }
}

/// Branch-and-bound output: the incumbent plus whether the search finished
/// within its limits, making the incumbent a proven optimum.
#[derive(Debug, Clone)]
pub struct BnbOutcome {
    pub solution: Solution,
    pub proven_optimal: bool,
    pub nodes_explored: usize,
}

/// Implicit enumeration over the certificate bits for instances whose region
/// count rules out the full decomposition.
///
/// A node fixes a subset of regions; its lower bound prices fixed-paid and
/// unfixed regions at lower costs (unfixed regions contribute at least that)
/// and fixed-unpaid regions at the upper box corner. The node's nominal
/// solution, evaluated exactly, updates the incumbent. Branching picks the
/// unfixed region with the largest budget, paid child first.
pub fn solve_branch_and_bound(instance: &Instance, limits: &BnbLimits) -> Result<BnbOutcome> {
    let set = &instance.set;
    let k = set.region_count();
    let start = std::time::Instant::now();

    // Zero budgets are always paid (the tie rule), so fix them up front.
    let root: Vec<Option<bool>> = set
        .budgets()
        .iter()
        .map(|&g| if g == 0.0 { Some(true) } else { None })
        .collect();

    let mut incumbent: Option<Solution> = None;
    let mut stack = vec![root];
    let mut nodes = 0usize;
    let mut truncated = false;

    while let Some(fixed) = stack.pop() {
        if nodes >= limits.node_cap || limits.time_cap.is_some_and(|cap| start.elapsed() >= cap) {
            truncated = true;
            break;
        }
        nodes += 1;

        let costs: CostVector = (0..set.n())
            .map(|i| {
                let lo = set.lower_costs()[i];
                match fixed[set.region_of()[i]] {
                    Some(false) => lo + set.deviations()[i],
                    _ => lo,
                }
            })
            .collect();
        let nominal = solve_nominal(&costs, &instance.spec)?;
        let paid: f64 = fixed
            .iter()
            .zip(set.budgets())
            .filter(|(f, _)| **f == Some(true))
            .map(|(_, g)| g)
            .sum();
        let bound = paid + nominal.objective;
        if let Some(best) = &incumbent {
            if bound >= best.objective {
                continue;
            }
        }

        let value = evaluate_robust(&nominal.chosen, set)?;
        if incumbent.as_ref().is_none_or(|best| value < best.objective) {
            let pi = certificate_for(&nominal.chosen, set)?;
            incumbent = Some(Solution {
                chosen: nominal.chosen,
                objective: value,
                pi_assignment: Some(pi),
            });
        }

        // Branch on the unfixed region with the largest budget.
        let branch = (0..k).filter(|&j| fixed[j].is_none()).max_by(|&a, &b| {
            set.budgets()[a]
                .total_cmp(&set.budgets()[b])
                .then(b.cmp(&a))
        });
        if let Some(j) = branch {
            let mut unpaid = fixed.clone();
            unpaid[j] = Some(false);
            let mut paid_child = fixed;
            paid_child[j] = Some(true);
            stack.push(unpaid);
            stack.push(paid_child); // popped first
        }
    }

    let solution = incumbent.ok_or_else(|| {
        Error::Capacity("branch-and-bound produced no incumbent within its limits".into())
    })?;
    Ok(BnbOutcome {
        solution,
        proven_optimal: !truncated,
        nodes_explored: nodes,
    })
}

/// Exhaustive enumeration of the feasible set; the testing oracle.
///
/// Returns the lexicographically smallest optimal incidence vector.
pub fn brute_force(instance: &Instance) -> Result<Solution> {
    let set = &instance.set;
    let spec = &instance.spec;
    let n = set.n();
    if let ProblemSpec::Unconstrained { .. } = spec {
        // Costs are nonnegative, so the empty selection is optimal and
        // lexicographically smallest.
        return Ok(Solution {
            chosen: vec![false; n],
            objective: 0.0,
            pi_assignment: Some(certificate_for(&vec![false; n], set)?),
        });
    }
    match spec {
        ProblemSpec::ShortestPath { graph, .. }
        | ProblemSpec::SpanningTree { graph }
        | ProblemSpec::MinCut { graph, .. } => {
            if graph.nodes > 8 || n > 20 {
                return Err(Error::Capacity(format!(
                    "brute force limited to graphs with at most 8 nodes and 20 edges, got {} nodes, {n} edges",
                    graph.nodes
                )));
            }
        }
        _ => {
            if n > 20 {
                return Err(Error::Capacity(format!(
                    "brute force limited to 20 items, got {n}"
                )));
            }
        }
    }
    let mut best: Option<(f64, Vec<bool>)> = None;
    for mask in 0u64..(1u64 << n) {
        let chosen: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if !check_feasible(&chosen, spec) {
            continue;
        }
        let value = evaluate_robust(&chosen, set)?;
        let better = match &best {
            None => true,
            Some((v, x)) => value < *v || (value == *v && lex_less(&chosen, x)),
        };
        if better {
            best = Some((value, chosen));
        }
    }
    let (objective, chosen) = best.ok_or_else(|| Error::Infeasible {
        variant: spec.variant_name(),
        reason: "feasible set is empty".into(),
    })?;
    let pi = certificate_for(&chosen, set)?;
    Ok(Solution {
        chosen,
        objective,
        pi_assignment: Some(pi),
    })
}

fn lex_less(a: &[bool], b: &[bool]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return !*x;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::UncertaintySet;

    fn instance_a(spec: ProblemSpec) -> Instance {
        let set = UncertaintySet::new(
            vec![10.0, 20.0, 10.0, 20.0],
            vec![10.0, 10.0, 10.0, 10.0],
            vec![0, 0, 1, 1],
            vec![5.0, 15.0],
        )
        .unwrap();
        Instance::new(set, spec).unwrap()
    }

    #[test]
    fn reduced_costs_substitution() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 2 });
        assert_eq!(
            reduced_costs(&inst.set, &[true, false]).unwrap(),
            vec![10.0, 20.0, 20.0, 30.0]
        );
        assert_eq!(
            reduced_costs(&inst.set, &[true, true]).unwrap(),
            inst.set.lower_costs()
        );
        assert_eq!(
            reduced_costs(&inst.set, &[false, false]).unwrap(),
            vec![20.0, 30.0, 20.0, 30.0]
        );
    }

    #[test]
    fn decomposition_on_instance_a() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 2 });
        let sol = solve_decomposition(&inst).unwrap();
        assert_eq!(sol.objective, 35.0);
        assert_eq!(sol.pi_assignment, Some(vec![true, false]));
        assert_eq!(sol.chosen, vec![true, true, false, false]);
    }

    #[test]
    fn decomposition_zero_budgets_pay_everything() {
        let set = UncertaintySet::new(
            vec![3.0, 1.0, 2.0],
            vec![5.0, 5.0, 5.0],
            vec![0, 1, 1],
            vec![0.0, 0.0],
        )
        .unwrap();
        let inst = Instance::new(set, ProblemSpec::Selection { n: 3, p: 1 }).unwrap();
        let sol = solve_decomposition(&inst).unwrap();
        assert_eq!(sol.objective, 1.0);
        // Every certificate paying region 1 is optimal; the lex rule picks
        // the smallest of them.
        assert_eq!(sol.pi_assignment, Some(vec![false, true]));
    }

    #[test]
    fn decomposition_cap_errors() {
        let set = UncertaintySet::new(vec![1.0; 4], vec![1.0; 4], vec![0, 1, 2, 3], vec![1.0; 4])
            .unwrap();
        let inst = Instance::new(set, ProblemSpec::Selection { n: 4, p: 1 }).unwrap();
        assert!(matches!(
            solve_decomposition_capped(&inst, 3),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn f_table_on_instance_a() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 2 });
        let table = selection_f_table(&inst.set, 2);
        assert_eq!(table.value(0, 0), 0.0);
        assert_eq!(table.value(1, 0), 0.0);
        assert_eq!(table.value(0, 1), 15.0); // min(5 + 10, 20)
        assert_eq!(table.value(1, 1), 20.0); // min(15 + 10, 20)
        assert!(table.value(0, 3).is_infinite());
    }

    #[test]
    fn dp_on_instance_a() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 2 });
        let sol = solve_selection_dp(&inst).unwrap();
        assert_eq!(sol.objective, 35.0);
        assert_eq!(sol.chosen, vec![true, true, false, false]);
    }

    #[test]
    fn dp_degenerate_p() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 0 });
        let sol = solve_selection_dp(&inst).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.chosen.iter().all(|&b| !b));

        let full = instance_a(ProblemSpec::Selection { n: 4, p: 4 });
        let sol = solve_selection_dp(&full).unwrap();
        // Forced full selection: closed form gives 60 + min(5,20) + min(15,20).
        assert_eq!(sol.objective, 80.0);
    }

    #[test]
    fn dp_rejects_wrong_variant_and_large_p() {
        let inst = instance_a(ProblemSpec::Unconstrained { n: 4 });
        assert!(matches!(
            solve_selection_dp(&inst),
            Err(Error::Variant { .. })
        ));
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 5 });
        assert!(solve_selection_dp(&inst).is_err());
    }

    #[test]
    fn bnb_agrees_on_instance_a() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 2 });
        let out = solve_branch_and_bound(&inst, &BnbLimits::default()).unwrap();
        assert!(out.proven_optimal);
        assert_eq!(out.solution.objective, 35.0);
    }

    #[test]
    fn bnb_zero_budgets_solved_at_root() {
        let set = UncertaintySet::new(
            vec![3.0, 1.0, 2.0],
            vec![5.0, 5.0, 5.0],
            vec![0, 1, 1],
            vec![0.0, 0.0],
        )
        .unwrap();
        let inst = Instance::new(set, ProblemSpec::Selection { n: 3, p: 1 }).unwrap();
        let out = solve_branch_and_bound(&inst, &BnbLimits::default()).unwrap();
        assert!(out.proven_optimal);
        assert_eq!(out.nodes_explored, 1);
        assert_eq!(out.solution.objective, 1.0);
    }

    #[test]
    fn brute_force_on_instance_a() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 2 });
        let sol = brute_force(&inst).unwrap();
        assert_eq!(sol.objective, 35.0);
    }

    #[test]
    fn brute_force_guard() {
        let n = 25;
        let set = UncertaintySet::new(vec![1.0; n], vec![1.0; n], vec![0; n], vec![1.0]).unwrap();
        let inst = Instance::new(set, ProblemSpec::Selection { n, p: 2 }).unwrap();
        assert!(matches!(brute_force(&inst), Err(Error::Capacity(_))));
    }

    #[test]
    fn certificate_threshold_rule() {
        let inst = instance_a(ProblemSpec::Selection { n: 4, p: 2 });
        // x = {1, 2}: region 0 deviation 20 >= 5 -> paid; region 1 deviation 0 < 15.
        let pi = certificate_for(&[true, true, false, false], &inst.set).unwrap();
        assert_eq!(pi, vec![true, false]);
        // Ties resolve to paying.
        let set = UncertaintySet::new(vec![0.0], vec![2.0], vec![0], vec![2.0]).unwrap();
        assert_eq!(certificate_for(&[true], &set).unwrap(), vec![true]);
    }
}

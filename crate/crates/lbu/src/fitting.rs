//! Data-driven construction of classic and locally budgeted uncertainty sets
//! from scenario samples: bound estimation, correlation-threshold region
//! detection, budget estimation, and budget-factor scaling.

use crate::core::{ScenarioSet, UncertaintySet};
use crate::error::{Error, Result};

/// Where the box bounds come from: supplied by the caller or estimated as
/// the componentwise minimum and range of the sample.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundsMode {
    Given {
        lower: Vec<f64>,
        deviations: Vec<f64>,
    },
    Estimated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Items are connected when the absolute Pearson correlation of their
    /// deviations exceeds this value (strictly).
    pub correlation_threshold: f64,
    /// Multiplier applied to every estimated budget.
    pub budget_factor: f64,
    pub bounds_mode: BoundsMode,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            correlation_threshold: 0.3,
            budget_factor: 1.0,
            bounds_mode: BoundsMode::Estimated,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.correlation_threshold) {
            return Err(Error::Invalid(format!(
                "correlation threshold {} outside [0, 1]",
                self.correlation_threshold
            )));
        }
        if !self.budget_factor.is_finite() || self.budget_factor < 0.0 {
            return Err(Error::Invalid(format!(
                "budget factor {} must be nonnegative",
                self.budget_factor
            )));
        }
        Ok(())
    }
}

/// A classic and a local set fitted to the same sample, sharing box bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub classic: UncertaintySet,
    pub local: UncertaintySet,
    pub region_count: usize,
    /// Scenario entries below the lower bound that were clipped to zero
    /// deviation during budget estimation.
    pub clipped_entries: usize,
}

/// Componentwise minimum and range of the sample.
pub fn estimate_bounds(scenarios: &ScenarioSet) -> Result<(Vec<f64>, Vec<f64>)> {
    if scenarios.is_empty() {
        return Err(Error::InsufficientData(
            "bound estimation needs at least one scenario".into(),
        ));
    }
    let n = scenarios.n();
    let mut lower = scenarios.rows()[0].clone();
    let mut upper = scenarios.rows()[0].clone();
    for row in &scenarios.rows()[1..] {
        for i in 0..n {
            lower[i] = lower[i].min(row[i]);
            upper[i] = upper[i].max(row[i]);
        }
    }
    let deviations = upper.iter().zip(&lower).map(|(u, l)| u - l).collect();
    Ok((lower, deviations))
}

/// Partitions items into regions: items are connected when the absolute
/// Pearson correlation of their deviations exceeds `threshold`, and
/// connected components become regions. Zero-variance items end up in
/// singleton regions. Regions are numbered by their smallest item index.
pub fn detect_regions(
    scenarios: &ScenarioSet,
    lower: &[f64],
    threshold: f64,
) -> Result<Vec<usize>> {
    let rows = scenarios.len();
    if rows < 2 {
        return Err(Error::InsufficientData(format!(
            "region detection needs at least 2 scenarios, got {rows}"
        )));
    }
    let n = scenarios.n();
    if lower.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lower.len(),
        });
    }
    // Column means of the deviations, summed left-to-right over rows.
    let mut mean = vec![0.0; n];
    for row in scenarios.rows() {
        for i in 0..n {
            mean[i] += row[i] - lower[i];
        }
    }
    for m in &mut mean {
        *m /= rows as f64;
    }
    let mut variance = vec![0.0; n];
    for row in scenarios.rows() {
        for i in 0..n {
            let centered = row[i] - lower[i] - mean[i];
            variance[i] += centered * centered;
        }
    }
    let mut uf = ComponentFinder::new(n);
    for a in 0..n {
        if variance[a] == 0.0 {
            continue; // undefined correlation counts as zero
        }
        for b in (a + 1)..n {
            if variance[b] == 0.0 {
                continue;
            }
            let mut cov = 0.0;
            for row in scenarios.rows() {
                cov += (row[a] - lower[a] - mean[a]) * (row[b] - lower[b] - mean[b]);
            }
            let corr = cov / (variance[a].sqrt() * variance[b].sqrt());
            if corr.abs() > threshold {
                uf.union(a, b);
            }
        }
    }
    Ok(uf.into_partition())
}

/// Budget estimates: the largest observed total deviation, globally and per
/// region. Scenario entries below the lower bound contribute zero deviation;
/// the number of such clipped entries is returned alongside.
pub fn estimate_budgets(
    scenarios: &ScenarioSet,
    lower: &[f64],
    region_of: &[usize],
) -> Result<(f64, Vec<f64>, usize)> {
    let n = scenarios.n();
    if lower.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lower.len(),
        });
    }
    if region_of.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: region_of.len(),
        });
    }
    let regions = region_of.iter().max().map_or(0, |m| m + 1);
    let mut global: f64 = 0.0;
    let mut per_region = vec![0.0f64; regions];
    let mut clipped = 0usize;
    for row in scenarios.rows() {
        let mut total = 0.0;
        let mut regional = vec![0.0; regions];
        for i in 0..n {
            let mut dev = row[i] - lower[i];
            if dev < 0.0 {
                dev = 0.0;
                clipped += 1;
            }
            total += dev;
            regional[region_of[i]] += dev;
        }
        global = global.max(total);
        for (g, r) in per_region.iter_mut().zip(&regional) {
            *g = g.max(*r);
        }
    }
    Ok((global, per_region, clipped))
}

/// The full pipeline: bounds, regions, budgets, then the budget factor.
pub fn fit(scenarios: &ScenarioSet, config: &FitConfig) -> Result<FittedModel> {
    config.validate()?;
    let (lower, deviations) = match &config.bounds_mode {
        BoundsMode::Given { lower, deviations } => (lower.clone(), deviations.clone()),
        BoundsMode::Estimated => estimate_bounds(scenarios)?,
    };
    let region_of = detect_regions(scenarios, &lower, config.correlation_threshold)?;
    let (global, per_region, clipped_entries) = estimate_budgets(scenarios, &lower, &region_of)?;
    let f = config.budget_factor;
    let classic = UncertaintySet::new(
        lower.clone(),
        deviations.clone(),
        vec![0; scenarios.n()],
        vec![global * f],
    )?;
    let region_count = per_region.len();
    let local = UncertaintySet::new(
        lower,
        deviations,
        region_of,
        per_region.iter().map(|g| g * f).collect(),
    )?;
    Ok(FittedModel {
        classic,
        local,
        region_count,
        clipped_entries,
    })
}

/// Union-find specialized to produce a partition numbered by first
/// occurrence.
struct ComponentFinder {
    parent: Vec<usize>,
}

impl ComponentFinder {
    fn new(n: usize) -> Self {
        ComponentFinder {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Attach the larger root to the smaller so region numbering by
            // smallest member falls out of the scan below.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn into_partition(mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|i| {
                let root = self.find(i);
                if label[root] == usize::MAX {
                    label[root] = next;
                    next += 1;
                }
                label[root]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario_set(rows: Vec<Vec<f64>>) -> ScenarioSet {
        let n = rows[0].len();
        ScenarioSet::new(n, rows).unwrap()
    }

    #[test]
    fn bounds_are_column_min_and_range() {
        let s = scenario_set(vec![vec![1.0, 5.0], vec![3.0, 4.0], vec![2.0, 6.0]]);
        let (lower, dev) = estimate_bounds(&s).unwrap();
        assert_eq!(lower, vec![1.0, 4.0]);
        assert_eq!(dev, vec![2.0, 2.0]);
    }

    #[test]
    fn single_scenario_has_zero_range() {
        let s = scenario_set(vec![vec![3.0, 7.0]]);
        let (lower, dev) = estimate_bounds(&s).unwrap();
        assert_eq!(lower, vec![3.0, 7.0]);
        assert_eq!(dev, vec![0.0, 0.0]);
    }

    #[test]
    fn empty_sample_rejected() {
        let s = ScenarioSet::new(2, vec![]).unwrap();
        assert!(estimate_bounds(&s).is_err());
    }

    #[test]
    fn identical_columns_share_a_region() {
        // corr(col 0, col 1) = 1; corr(col 0, col 2) = -1/sqrt(50) ~ -0.14.
        let s = scenario_set(vec![
            vec![1.0, 1.0, 5.0],
            vec![2.0, 2.0, 1.0],
            vec![3.0, 3.0, 2.0],
            vec![4.0, 4.0, 4.0],
        ]);
        let regions = detect_regions(&s, &[0.0; 3], 0.3).unwrap();
        assert_eq!(regions[0], regions[1]);
        assert_ne!(regions[0], regions[2]);
    }

    #[test]
    fn zero_variance_items_are_singletons() {
        let s = scenario_set(vec![
            vec![1.0, 1.0, 2.0],
            vec![1.0, 2.0, 3.0],
            vec![1.0, 3.0, 4.0],
        ]);
        let regions = detect_regions(&s, &[0.0; 3], 0.3).unwrap();
        assert_eq!(regions[0], 0);
        assert_ne!(regions[0], regions[1]);
        assert_ne!(regions[0], regions[2]);
    }

    #[test]
    fn too_few_rows_rejected() {
        let s = scenario_set(vec![vec![1.0, 2.0]]);
        assert!(matches!(
            detect_regions(&s, &[0.0, 0.0], 0.3),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn budgets_take_the_max_deviation() {
        // Per-scenario total deviations: 3, 7, 5.
        let s = scenario_set(vec![vec![1.0, 2.0], vec![4.0, 3.0], vec![2.0, 3.0]]);
        let (global, per_region, clipped) = estimate_budgets(&s, &[0.0, 0.0], &[0, 0]).unwrap();
        assert_eq!(global, 7.0);
        assert_eq!(per_region, vec![7.0]);
        assert_eq!(clipped, 0);
    }

    #[test]
    fn below_bound_entries_are_clipped_and_counted() {
        let s = scenario_set(vec![vec![1.0, 5.0]]);
        let (global, _, clipped) = estimate_budgets(&s, &[2.0, 4.0], &[0, 1]).unwrap();
        assert_eq!(global, 1.0);
        assert_eq!(clipped, 1);
    }

    #[test]
    fn budget_factor_scales_both_sets() {
        let s = scenario_set(vec![
            vec![1.0, 1.0, 5.0],
            vec![2.0, 2.0, 1.0],
            vec![3.0, 3.0, 4.0],
            vec![4.0, 4.0, 2.0],
        ]);
        let full = fit(&s, &FitConfig::default()).unwrap();
        let half = fit(
            &s,
            &FitConfig {
                budget_factor: 0.5,
                ..FitConfig::default()
            },
        )
        .unwrap();
        let zero = fit(
            &s,
            &FitConfig {
                budget_factor: 0.0,
                ..FitConfig::default()
            },
        )
        .unwrap();
        for (h, f) in half.local.budgets().iter().zip(full.local.budgets()) {
            assert_eq!(*h, f / 2.0);
        }
        assert_eq!(half.classic.budgets()[0], full.classic.budgets()[0] / 2.0);
        assert!(zero.local.budgets().iter().all(|&g| g == 0.0));
        assert_eq!(zero.classic.budgets(), &[0.0]);
    }

    #[test]
    fn coverage_at_unit_factor() {
        let s = scenario_set(vec![
            vec![1.0, 9.0, 5.0],
            vec![2.0, 7.0, 1.0],
            vec![3.0, 3.0, 4.0],
            vec![4.0, 4.0, 2.0],
        ]);
        let model = fit(&s, &FitConfig::default()).unwrap();
        for row in s.rows() {
            assert!(model.classic.contains(row).unwrap());
            assert!(model.local.contains(row).unwrap());
        }
    }
}

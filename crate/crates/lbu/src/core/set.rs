use crate::error::{Error, Result};

/// A locally budgeted uncertainty set.
///
/// Costs live in `[lower_costs_i, lower_costs_i + deviations_i]` per item,
/// and within each region the total deviation above the lower bound is
/// capped by that region's budget. `K = 1` recovers the classic budgeted
/// set with a single global budget.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintySet {
    lower_costs: Vec<f64>,
    deviations: Vec<f64>,
    /// 0-based region index per item.
    region_of: Vec<usize>,
    budgets: Vec<f64>,
}

impl UncertaintySet {
    /// Builds a set, validating that `region_of` encodes a partition into
    /// `budgets.len()` nonempty regions and that all data is finite and
    /// nonnegative.
    pub fn new(
        lower_costs: Vec<f64>,
        deviations: Vec<f64>,
        region_of: Vec<usize>,
        budgets: Vec<f64>,
    ) -> Result<Self> {
        let n = lower_costs.len();
        if n == 0 {
            return Err(Error::Invalid("item count must be positive".into()));
        }
        if deviations.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: deviations.len(),
            });
        }
        if region_of.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: region_of.len(),
            });
        }
        let k = budgets.len();
        if k == 0 {
            return Err(Error::Invalid("region count must be positive".into()));
        }
        for &v in lower_costs.iter().chain(&deviations).chain(&budgets) {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Invalid(format!(
                    "cost value {v} is negative or not finite"
                )));
            }
        }
        let mut seen = vec![false; k];
        for &j in &region_of {
            if j >= k {
                return Err(Error::Invalid(format!(
                    "region index {j} out of range for K={k}"
                )));
            }
            seen[j] = true;
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("region {j} is empty")));
        }
        Ok(UncertaintySet {
            lower_costs,
            deviations,
            region_of,
            budgets,
        })
    }

    pub fn n(&self) -> usize {
        self.lower_costs.len()
    }

    pub fn region_count(&self) -> usize {
        self.budgets.len()
    }

    pub fn lower_costs(&self) -> &[f64] {
        &self.lower_costs
    }

    pub fn deviations(&self) -> &[f64] {
        &self.deviations
    }

    pub fn region_of(&self) -> &[usize] {
        &self.region_of
    }

    pub fn budgets(&self) -> &[f64] {
        &self.budgets
    }

    /// Item lists per region, each in increasing item order.
    pub fn region_items(&self) -> Vec<Vec<usize>> {
        let mut items = vec![Vec::new(); self.region_count()];
        for (i, &j) in self.region_of.iter().enumerate() {
            items[j].push(i);
        }
        items
    }

    /// Collapses the partition into a single region whose budget is the sum
    /// of all regional budgets, i.e. the classic budgeted set containing
    /// this one.
    pub fn to_classic(&self) -> UncertaintySet {
        UncertaintySet {
            lower_costs: self.lower_costs.clone(),
            deviations: self.deviations.clone(),
            region_of: vec![0; self.n()],
            budgets: vec![self.budgets.iter().sum()],
        }
    }

    /// Returns a copy with every budget multiplied by `factor`.
    pub fn scale_budgets(&self, factor: f64) -> UncertaintySet {
        UncertaintySet {
            lower_costs: self.lower_costs.clone(),
            deviations: self.deviations.clone(),
            region_of: self.region_of.clone(),
            budgets: self.budgets.iter().map(|g| g * factor).collect(),
        }
    }

    /// Whether the cost vector `c` lies inside this set: within the per-item
    /// box and within every regional budget.
    pub fn contains(&self, c: &[f64]) -> Result<bool> {
        if c.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: c.len(),
            });
        }
        const EPS: f64 = 1e-9;
        let mut used = vec![0.0; self.region_count()];
        for i in 0..self.n() {
            let delta = c[i] - self.lower_costs[i];
            if delta < -EPS || delta > self.deviations[i] + EPS {
                return Ok(false);
            }
            used[self.region_of[i]] += delta.max(0.0);
        }
        Ok(used.iter().zip(&self.budgets).all(|(u, g)| *u <= g + EPS))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance_a_set() -> UncertaintySet {
        UncertaintySet::new(
            vec![10.0, 20.0, 10.0, 20.0],
            vec![10.0, 10.0, 10.0, 10.0],
            vec![0, 0, 1, 1],
            vec![5.0, 15.0],
        )
        .unwrap()
    }

    #[test]
    fn rejects_empty_region() {
        let err = UncertaintySet::new(vec![1.0, 2.0], vec![0.0, 0.0], vec![0, 0], vec![1.0, 1.0]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_negative_costs() {
        assert!(UncertaintySet::new(vec![-1.0], vec![0.0], vec![0], vec![0.0]).is_err());
        assert!(UncertaintySet::new(vec![1.0], vec![f64::NAN], vec![0], vec![0.0]).is_err());
    }

    #[test]
    fn to_classic_sums_budgets() {
        let u = instance_a_set().to_classic();
        assert_eq!(u.region_count(), 1);
        assert_eq!(u.budgets()[0], 20.0);
        // Already classic: collapsing is the identity.
        let again = u.to_classic();
        assert_eq!(again, u);
    }

    #[test]
    fn membership_checks_box_and_budget() {
        let u = instance_a_set();
        assert!(u.contains(&[15.0, 20.0, 20.0, 20.0]).unwrap());
        // Region 1 budget is 5: deviation 6 exceeds it.
        assert!(!u.contains(&[16.0, 20.0, 10.0, 20.0]).unwrap());
        // Above the box.
        assert!(!u.contains(&[10.0, 31.0, 10.0, 20.0]).unwrap());
        // Below the lower bound.
        assert!(!u.contains(&[9.0, 20.0, 10.0, 20.0]).unwrap());
    }
}

use crate::error::{Error, Result};

/// One observed cost vector.
pub type Scenario = Vec<f64>;

/// An ordered collection of scenarios, all of the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    n: usize,
    rows: Vec<Scenario>,
}

impl ScenarioSet {
    pub fn new(n: usize, rows: Vec<Scenario>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("item count must be positive".into()));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::Invalid(format!("scenario cost {v} is not finite")));
            }
        }
        Ok(ScenarioSet { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Scenario] {
        &self.rows
    }

    /// Splits into (first `count` rows, remainder) preserving order.
    pub fn split_at(&self, count: usize) -> (ScenarioSet, ScenarioSet) {
        let cut = count.min(self.rows.len());
        (
            ScenarioSet {
                n: self.n,
                rows: self.rows[..cut].to_vec(),
            },
            ScenarioSet {
                n: self.n,
                rows: self.rows[cut..].to_vec(),
            },
        )
    }
}

//! Domain types for locally budgeted uncertainty sets and the exact
//! closed-form robust evaluation they admit.
//!
//! A locally budgeted uncertainty set partitions the items into regions
//! `P_1, ..., P_K`, each carrying its own deviation budget. For a fixed
//! solution the adversarial problem decomposes per region and is solved in
//! closed form, so no LP machinery is needed anywhere in this crate.

mod eval;
mod scenario;
mod set;
mod spec;

pub use eval::{evaluate_robust, worst_case_scenario, Solution};
pub use scenario::{Scenario, ScenarioSet};
pub use set::UncertaintySet;
pub(crate) use spec::UnionFind;
pub use spec::{check_feasible, Graph, ProblemSpec};

use crate::error::{Error, Result};

/// An uncertainty set paired with a feasible-set description of matching size.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub set: UncertaintySet,
    pub spec: ProblemSpec,
}

impl Instance {
    pub fn new(set: UncertaintySet, spec: ProblemSpec) -> Result<Self> {
        if set.n() != spec.n() {
            return Err(Error::DimensionMismatch {
                expected: set.n(),
                got: spec.n(),
            });
        }
        Ok(Instance { set, spec })
    }

    pub fn n(&self) -> usize {
        self.set.n()
    }
}

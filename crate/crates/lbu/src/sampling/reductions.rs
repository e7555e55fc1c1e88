//! Generators turning vertex cover, 3-SAT, and set cover inputs into
//! representative selection instances whose robust optimum equals the source
//! problem's optimum. They produce exact integer data, so oracle comparisons
//! against exhaustive search on the source instance are exact.

use crate::core::{Graph, Instance, ProblemSpec, UncertaintySet};
use crate::error::{Error, Result};

/// A 3-CNF formula; literals are DIMACS-style (positive index = variable,
/// negative = negation, 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i64; 3]>,
}

impl SatFormula {
    pub fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::Invalid("formula needs at least one variable".into()));
        }
        for (c, clause) in self.clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > self.num_vars {
                    return Err(Error::Invalid(format!(
                        "clause {c} has literal {lit} outside 1..={}",
                        self.num_vars
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A set cover input: ground elements `0..ground_size` and a family of
/// subsets over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub ground_size: usize,
    pub subsets: Vec<Vec<usize>>,
}

impl CoverInstance {
    pub fn validate(&self) -> Result<()> {
        if self.ground_size == 0 || self.subsets.is_empty() {
            return Err(Error::Invalid(
                "ground set and subset family must be nonempty".into(),
            ));
        }
        for (s, subset) in self.subsets.iter().enumerate() {
            if subset.is_empty() {
                return Err(Error::Invalid(format!("subset {s} is empty")));
            }
            let mut sorted = subset.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != subset.len() {
                return Err(Error::Invalid(format!("subset {s} has duplicate elements")));
            }
            if let Some(&v) = subset.iter().find(|&&v| v >= self.ground_size) {
                return Err(Error::Invalid(format!(
                    "subset {s} references element {v} outside 0..{}",
                    self.ground_size
                )));
            }
        }
        Ok(())
    }
}

fn unit_cost_set(n: usize, region_of: Vec<usize>, k: usize) -> Result<UncertaintySet> {
    UncertaintySet::new(vec![0.0; n], vec![1.0; n], region_of, vec![1.0; k])
}

/// Vertex cover reduction: one item per (edge, endpoint) incidence, one part
/// per edge with quota 1, one region per vertex. The robust optimum equals
/// the minimum vertex cover size.
pub fn gen_from_vertex_cover(graph: &Graph) -> Result<Instance> {
    let mut degree = vec![0usize; graph.nodes];
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in &graph.edges {
        if u == v {
            return Err(Error::Invalid(format!("self-loop at node {u}")));
        }
        if u >= graph.nodes || v >= graph.nodes {
            return Err(Error::Invalid(format!("edge ({u}, {v}) out of range")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Invalid(format!("duplicate edge ({u}, {v})")));
        }
        degree[u] += 1;
        degree[v] += 1;
    }
    if graph.edges.is_empty() {
        return Err(Error::Invalid("graph has no edges".into()));
    }
    if let Some(v) = degree.iter().position(|&d| d == 0) {
        return Err(Error::Invalid(format!("isolated vertex {v}")));
    }
    let n = 2 * graph.edges.len();
    let mut region_of = Vec::with_capacity(n);
    let mut part_of = Vec::with_capacity(n);
    for (e, &(u, v)) in graph.edges.iter().enumerate() {
        region_of.push(u);
        region_of.push(v);
        part_of.push(e);
        part_of.push(e);
    }
    let set = unit_cost_set(n, region_of, graph.nodes)?;
    let quotas = vec![1; graph.edges.len()];
    Instance::new(
        set,
        ProblemSpec::RepresentativeSelection { part_of, quotas },
    )
}

/// 3-SAT reduction: a two-item part per variable (true/false gadget), a
/// three-item part per clause, and one region per literal polarity. The
/// robust optimum is the variable count iff the formula is satisfiable.
pub fn gen_from_3sat(formula: &SatFormula) -> Result<Instance> {
    formula.validate()?;
    let vars = formula.num_vars;
    let clauses = formula.clauses.len();
    let n = 2 * vars + 3 * clauses;
    let k = 2 * vars;
    // Item 2i is the "true" gadget element of variable i (region 2i), item
    // 2i+1 the "false" element (region 2i+1).
    let mut region_of: Vec<usize> = (0..k).collect();
    let mut part_of: Vec<usize> = (0..vars).flat_map(|i| [i, i]).collect();
    for (c, clause) in formula.clauses.iter().enumerate() {
        for &lit in clause {
            let var = lit.unsigned_abs() as usize - 1;
            region_of.push(2 * var + usize::from(lit < 0));
            part_of.push(vars + c);
        }
    }
    let set = unit_cost_set(n, region_of, k)?;
    let quotas = vec![1; vars + clauses];
    Instance::new(
        set,
        ProblemSpec::RepresentativeSelection { part_of, quotas },
    )
}

/// Set cover reduction: one item per (element, covering subset) pair, one
/// part per ground element with quota 1, one region per subset. The robust
/// optimum equals the minimum set cover size.
pub fn gen_from_set_cover(cover: &CoverInstance) -> Result<Instance> {
    cover.validate()?;
    let mut covered_by = vec![Vec::new(); cover.ground_size];
    for (s, subset) in cover.subsets.iter().enumerate() {
        for &v in subset {
            covered_by[v].push(s);
        }
    }
    if let Some(v) = covered_by.iter().position(|c| c.is_empty()) {
        return Err(Error::Infeasible {
            variant: "set_cover",
            reason: format!("element {v} is not covered by any subset"),
        });
    }
    let mut region_of = Vec::new();
    let mut part_of = Vec::new();
    for (v, subsets) in covered_by.iter().enumerate() {
        for &s in subsets {
            region_of.push(s);
            part_of.push(v);
        }
    }
    let n = region_of.len();
    let set = unit_cost_set(n, region_of, cover.subsets.len())?;
    let quotas = vec![1; cover.ground_size];
    Instance::new(
        set,
        ProblemSpec::RepresentativeSelection { part_of, quotas },
    )
}

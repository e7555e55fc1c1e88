//! File formats: instance JSON, scenario CSV, graph files, DIMACS-style CNF,
//! and set cover JSON. All parsers validate fully and never panic on
//! malformed input; they are the crate's fuzzing surface.

use serde::{Deserialize, Serialize};

use crate::core::{Graph, Instance, ProblemSpec, ScenarioSet, UncertaintySet};
use crate::error::{Error, Result};
use crate::sampling::{CoverInstance, SatFormula};

// ---------------------------------------------------------------------------
// Instance JSON

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    n: usize,
    lower_costs: Vec<f64>,
    deviations: Vec<f64>,
    /// 1-based region indices.
    region_of: Vec<usize>,
    budgets: Vec<f64>,
    spec: SpecWire,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum SpecWire {
    Selection {
        p: usize,
    },
    RepresentativeSelection {
        /// 1-based part indices.
        part_of: Vec<usize>,
        quotas: Vec<usize>,
    },
    ShortestPath {
        nodes: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default = "default_directed")]
        directed: bool,
        source: usize,
        target: usize,
    },
    SpanningTree {
        nodes: usize,
        edges: Vec<(usize, usize)>,
    },
    MinCut {
        nodes: usize,
        edges: Vec<(usize, usize)>,
        source: usize,
        sink: usize,
    },
    Unconstrained {},
}

fn default_directed() -> bool {
    true
}

fn to_zero_based(indices: &[usize], what: &str) -> Result<Vec<usize>> {
    indices
        .iter()
        .map(|&r| {
            r.checked_sub(1)
                .ok_or_else(|| Error::Invalid(format!("{what} indices are 1-based, found 0")))
        })
        .collect()
}

/// Parses and validates an instance from its JSON form.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let wire: InstanceWire = serde_json::from_str(text)?;
    let region_of = to_zero_based(&wire.region_of, "region")?;
    let set = UncertaintySet::new(wire.lower_costs, wire.deviations, region_of, wire.budgets)?;
    if set.n() != wire.n {
        return Err(Error::DimensionMismatch {
            expected: wire.n,
            got: set.n(),
        });
    }
    let spec = match wire.spec {
        SpecWire::Selection { p } => ProblemSpec::Selection { n: wire.n, p },
        SpecWire::RepresentativeSelection { part_of, quotas } => {
            ProblemSpec::RepresentativeSelection {
                part_of: to_zero_based(&part_of, "part")?,
                quotas,
            }
        }
        SpecWire::ShortestPath {
            nodes,
            edges,
            directed,
            source,
            target,
        } => ProblemSpec::ShortestPath {
            graph: Graph::new(nodes, edges)?,
            directed,
            source,
            target,
        },
        SpecWire::SpanningTree { nodes, edges } => ProblemSpec::SpanningTree {
            graph: Graph::new(nodes, edges)?,
        },
        SpecWire::MinCut {
            nodes,
            edges,
            source,
            sink,
        } => ProblemSpec::MinCut {
            graph: Graph::new(nodes, edges)?,
            source,
            sink,
        },
        SpecWire::Unconstrained {} => ProblemSpec::Unconstrained { n: wire.n },
    };
    spec.validate()?;
    Instance::new(set, spec)
}

pub fn instance_to_json(instance: &Instance) -> String {
    let set = &instance.set;
    let spec = match &instance.spec {
        ProblemSpec::Selection { p, .. } => SpecWire::Selection { p: *p },
        ProblemSpec::RepresentativeSelection { part_of, quotas } => {
            SpecWire::RepresentativeSelection {
                part_of: part_of.iter().map(|&l| l + 1).collect(),
                quotas: quotas.clone(),
            }
        }
        ProblemSpec::ShortestPath {
            graph,
            directed,
            source,
            target,
        } => SpecWire::ShortestPath {
            nodes: graph.nodes,
            edges: graph.edges.clone(),
            directed: *directed,
            source: *source,
            target: *target,
        },
        ProblemSpec::SpanningTree { graph } => SpecWire::SpanningTree {
            nodes: graph.nodes,
            edges: graph.edges.clone(),
        },
        ProblemSpec::MinCut {
            graph,
            source,
            sink,
        } => SpecWire::MinCut {
            nodes: graph.nodes,
            edges: graph.edges.clone(),
            source: *source,
            sink: *sink,
        },
        ProblemSpec::Unconstrained { .. } => SpecWire::Unconstrained {},
    };
    let wire = InstanceWire {
        n: set.n(),
        lower_costs: set.lower_costs().to_vec(),
        deviations: set.deviations().to_vec(),
        region_of: set.region_of().iter().map(|&j| j + 1).collect(),
        budgets: set.budgets().to_vec(),
        spec,
    };
    serde_json::to_string_pretty(&wire).expect("instance serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Scenario CSV: header `item_1,...,item_n`, one row per scenario.

pub fn scenarios_from_csv(text: &str) -> Result<ScenarioSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let n = headers.len();
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "empty header".into(),
        });
    }
    for (i, field) in headers.iter().enumerate() {
        let expected = format!("item_{}", i + 1);
        if field != expected {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header column '{expected}', got '{field}'"),
            });
        }
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record?;
        if record.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("expected {n} columns, got {}", record.len()),
            });
        }
        let mut row = Vec::with_capacity(n);
        for field in record.iter() {
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid number '{field}'"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("non-finite cost {value}"),
                });
            }
            row.push(value);
        }
        rows.push(row);
    }
    ScenarioSet::new(n, rows)
}

pub fn scenarios_to_csv(scenarios: &ScenarioSet) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=scenarios.n()).map(|i| format!("item_{i}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in scenarios.rows() {
        let fields: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Shortest decimal form that round-trips; integers print without a dot.
pub fn format_float(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

// ---------------------------------------------------------------------------
// Graph files

/// Region-labeled graph file: first line `nodes <count>`, then one
/// `edge <u> <v> <label>` line per edge (0-based nodes, edge order = item
/// order). Labels are mapped to region indices by first appearance.
pub struct LabeledGraph {
    pub graph: Graph,
    pub region_of: Vec<usize>,
    pub region_labels: Vec<String>,
}

pub fn labeled_graph_from_text(text: &str) -> Result<LabeledGraph> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let nodes = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["nodes", count] => count.parse::<usize>().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("invalid node count '{count}'"),
        })?,
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "expected 'nodes <count>'".into(),
            });
        }
    };
    let mut edges = Vec::new();
    let mut region_of = Vec::new();
    let mut region_labels: Vec<String> = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        let (u, v, label) = match parts[..] {
            ["edge", u, v, label] => (u, v, label),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "expected 'edge <u> <v> <label>'".into(),
                });
            }
        };
        let u: usize = u.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid node '{u}'"),
        })?;
        let v: usize = v.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid node '{v}'"),
        })?;
        if u >= nodes || v >= nodes {
            return Err(Error::Parse {
                line,
                msg: format!("edge ({u}, {v}) out of range"),
            });
        }
        let region = match region_labels.iter().position(|l| l == label) {
            Some(j) => j,
            None => {
                region_labels.push(label.to_string());
                region_labels.len() - 1
            }
        };
        edges.push((u, v));
        region_of.push(region);
    }
    if edges.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "graph has no edges".into(),
        });
    }
    Ok(LabeledGraph {
        graph: Graph::new(nodes, edges)?,
        region_of,
        region_labels,
    })
}

pub fn labeled_graph_to_text(graph: &Graph, region_of: &[usize], labels: &[String]) -> String {
    let mut out = format!("nodes {}\n", graph.nodes);
    for (e, &(u, v)) in graph.edges.iter().enumerate() {
        out.push_str(&format!("edge {u} {v} {}\n", labels[region_of[e]]));
    }
    out
}

/// Plain edge list (`u v` per line, 0-based) for the vertex cover generator;
/// the node count is one past the largest endpoint.
pub fn edge_list_from_text(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_node = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: "expected 'u v'".into(),
            });
        }
        let u: usize = parts[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid node '{}'", parts[0]),
        })?;
        let v: usize = parts[1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid node '{}'", parts[1]),
        })?;
        max_node = max_node.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no edges".into(),
        });
    }
    Graph::new(max_node + 1, edges)
}

// ---------------------------------------------------------------------------
// DIMACS-like CNF

/// Parses a DIMACS-style CNF file; every clause must have exactly three
/// literals (the generators target 3-CNF).
pub fn cnf_from_text(text: &str) -> Result<SatFormula> {
    let mut num_vars = None;
    let mut declared_clauses = 0usize;
    let mut clauses = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::Parse {
                    line,
                    msg: "expected 'p cnf <vars> <clauses>'".into(),
                });
            }
            num_vars = Some(parts[1].parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid variable count '{}'", parts[1]),
            })?);
            declared_clauses = parts[2].parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid clause count '{}'", parts[2]),
            })?;
            continue;
        }
        let mut literals = Vec::new();
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid literal '{tok}'"),
            })?;
            if lit == 0 {
                break;
            }
            literals.push(lit);
        }
        if literals.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "expected exactly 3 literals per clause, got {}",
                    literals.len()
                ),
            });
        }
        clauses.push([literals[0], literals[1], literals[2]]);
    }
    let num_vars = num_vars.ok_or(Error::Parse {
        line: 1,
        msg: "missing 'p cnf' header".into(),
    })?;
    if clauses.len() != declared_clauses {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "header declares {declared_clauses} clauses, found {}",
                clauses.len()
            ),
        });
    }
    let formula = SatFormula { num_vars, clauses };
    formula.validate()?;
    Ok(formula)
}

// ---------------------------------------------------------------------------
// Set cover JSON

#[derive(Serialize, Deserialize)]
struct CoverWire {
    ground_size: usize,
    subsets: Vec<Vec<usize>>,
}

pub fn set_cover_from_json(text: &str) -> Result<CoverInstance> {
    let wire: CoverWire = serde_json::from_str(text)?;
    let cover = CoverInstance {
        ground_size: wire.ground_size,
        subsets: wire.subsets,
    };
    cover.validate()?;
    Ok(cover)
}

// ---------------------------------------------------------------------------
// Dataset bundle (graph + scenario snapshots) for the shortest path study

#[derive(Debug, Clone)]
pub struct DatasetBundle {
    pub graph: Graph,
    pub region_of: Vec<usize>,
    pub region_labels: Vec<String>,
    pub snapshots: ScenarioSet,
}

/// Loads and cross-validates a labeled graph file and a snapshot CSV whose
/// columns are the graph's edges.
pub fn ingest(graph_text: &str, scenarios_text: &str) -> Result<DatasetBundle> {
    let labeled = labeled_graph_from_text(graph_text)?;
    let snapshots = scenarios_from_csv(scenarios_text)?;
    if snapshots.n() != labeled.graph.edges.len() {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "scenario columns ({}) do not match edge count ({})",
                snapshots.n(),
                labeled.graph.edges.len()
            ),
        });
    }
    for (r, row) in snapshots.rows().iter().enumerate() {
        if let Some(v) = row.iter().find(|&&v| v < 0.0) {
            return Err(Error::Parse {
                line: r + 2,
                msg: format!("negative travel time {v}"),
            });
        }
    }
    Ok(DatasetBundle {
        graph: labeled.graph,
        region_of: labeled.region_of,
        region_labels: labeled.region_labels,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance_a_json() -> String {
        r#"{
            "n": 4,
            "lower_costs": [10, 20, 10, 20],
            "deviations": [10, 10, 10, 10],
            "region_of": [1, 1, 2, 2],
            "budgets": [5, 15],
            "spec": { "type": "selection", "p": 2 }
        }"#
        .to_string()
    }

    #[test]
    fn instance_round_trip() {
        let inst = instance_from_json(&instance_a_json()).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.set.region_of(), &[0, 0, 1, 1]);
        let text = instance_to_json(&inst);
        let again = instance_from_json(&text).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn zero_based_region_rejected() {
        let text = instance_a_json().replace("[1, 1, 2, 2]", "[0, 1, 2, 2]");
        assert!(instance_from_json(&text).is_err());
    }

    #[test]
    fn shortest_path_defaults_to_directed() {
        let text = r#"{
            "n": 2,
            "lower_costs": [1, 1],
            "deviations": [0, 0],
            "region_of": [1, 1],
            "budgets": [0],
            "spec": { "type": "shortest_path", "nodes": 2, "edges": [[0,1],[0,1]], "source": 0, "target": 1 }
        }"#;
        let inst = instance_from_json(text).unwrap();
        assert!(matches!(
            inst.spec,
            ProblemSpec::ShortestPath { directed: true, .. }
        ));
    }

    #[test]
    fn scenario_csv_round_trip() {
        let set = ScenarioSet::new(2, vec![vec![1.0, 2.5], vec![3.0, 4.0]]).unwrap();
        let text = scenarios_to_csv(&set);
        assert!(text.starts_with("item_1,item_2\n"));
        assert_eq!(scenarios_from_csv(&text).unwrap(), set);
    }

    #[test]
    fn scenario_csv_errors_carry_line_numbers() {
        let bad_header = "item_1,widget\n1,2\n";
        assert!(matches!(
            scenarios_from_csv(bad_header),
            Err(Error::Parse { line: 1, .. })
        ));
        let bad_value = "item_1,item_2\n1,2\n3,oops\n";
        assert!(matches!(
            scenarios_from_csv(bad_value),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn labeled_graph_round_trip() {
        let text = "nodes 3\nedge 0 1 main\nedge 1 2 main\nedge 0 2 side\n";
        let labeled = labeled_graph_from_text(text).unwrap();
        assert_eq!(labeled.graph.nodes, 3);
        assert_eq!(labeled.region_of, vec![0, 0, 1]);
        assert_eq!(labeled.region_labels, vec!["main", "side"]);
        let out = labeled_graph_to_text(&labeled.graph, &labeled.region_of, &labeled.region_labels);
        assert_eq!(out, text);
    }

    #[test]
    fn ingest_rejects_mismatched_columns_and_negatives() {
        let graph = "nodes 2\nedge 0 1 a\nedge 1 0 a\n";
        let wrong_cols = "item_1\n1\n";
        assert!(ingest(graph, wrong_cols).is_err());
        let negative = "item_1,item_2\n1,-2\n";
        let err = ingest(graph, negative).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn cnf_parsing() {
        let text = "c comment\np cnf 4 3\n-1 2 -4 0\n2 -3 4 0\n1 -2 3 0\n";
        let formula = cnf_from_text(text).unwrap();
        assert_eq!(formula.num_vars, 4);
        assert_eq!(formula.clauses.len(), 3);
        assert_eq!(formula.clauses[0], [-1, 2, -4]);

        assert!(cnf_from_text("p cnf 2 1\n1 2 0\n").is_err()); // not 3-CNF
        assert!(cnf_from_text("1 2 3 0\n").is_err()); // missing header
    }

    #[test]
    fn set_cover_json() {
        let cover =
            set_cover_from_json(r#"{"ground_size": 4, "subsets": [[0,1],[1,2],[2,3]]}"#).unwrap();
        assert_eq!(cover.subsets.len(), 3);
        assert!(set_cover_from_json(r#"{"ground_size": 2, "subsets": [[5]]}"#).is_err());
    }

    #[test]
    fn edge_list_parsing() {
        let g = edge_list_from_text("0 1\n1 2\n# comment\n0 2\n").unwrap();
        assert_eq!(g.nodes, 3);
        assert_eq!(g.edges.len(), 3);
        assert!(edge_list_from_text("0\n").is_err());
    }
}

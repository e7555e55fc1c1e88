//! Deterministic polynomial-time solvers for the nominal (certain-cost)
//! problem `min c^t x over X`, one per supported feasible-set variant.
//!
//! These are the subroutines the exact robust solvers call once per
//! region-certificate guess, so determinism matters: every tie is broken by
//! `(cost, item index)` or by first-found order over edges in index order.

use crate::core::{Graph, ProblemSpec, Solution};
use crate::error::{Error, Result};

/// Per-item nonnegative costs.
pub type CostVector = Vec<f64>;

fn validate_costs(costs: &[f64], n: usize) -> Result<()> {
    if costs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: costs.len(),
        });
    }
    for &c in costs {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::Invalid(format!(
                "nominal cost {c} is negative or not finite"
            )));
        }
    }
    Ok(())
}

/// Minimizes `c^t x` over the feasible set.
pub fn solve_nominal(costs: &[f64], spec: &ProblemSpec) -> Result<Solution> {
    validate_costs(costs, spec.n())?;
    let chosen = match spec {
        ProblemSpec::Selection { n, p } => {
            if p > n {
                return Err(Error::Infeasible {
                    variant: "selection",
                    reason: format!("p={p} exceeds n={n}"),
                });
            }
            cheapest_subset(costs, (0..*n).collect(), *p)
        }
        ProblemSpec::RepresentativeSelection { part_of, quotas } => {
            let mut parts = vec![Vec::new(); quotas.len()];
            for (i, &l) in part_of.iter().enumerate() {
                parts[l].push(i);
            }
            let mut chosen = vec![false; part_of.len()];
            for (l, (items, &quota)) in parts.into_iter().zip(quotas).enumerate() {
                if quota > items.len() {
                    return Err(Error::Infeasible {
                        variant: "representative_selection",
                        reason: format!(
                            "quota {quota} exceeds part size {} in part {l}",
                            items.len()
                        ),
                    });
                }
                for (i, b) in cheapest_subset(costs, items, quota).iter().enumerate() {
                    chosen[i] |= b;
                }
            }
            chosen
        }
        ProblemSpec::ShortestPath {
            graph,
            directed,
            source,
            target,
        } => shortest_path(graph, *directed, *source, *target, costs)?,
        ProblemSpec::SpanningTree { graph } => spanning_tree(graph, costs)?,
        ProblemSpec::MinCut {
            graph,
            source,
            sink,
        } => min_cut(graph, *source, *sink, costs),
        ProblemSpec::Unconstrained { n } => vec![false; *n],
    };
    let objective = chosen
        .iter()
        .zip(costs)
        .filter(|(&b, _)| b)
        .map(|(_, c)| c)
        .sum();
    Ok(Solution {
        chosen,
        objective,
        pi_assignment: None,
    })
}

/// Marks the `count` cheapest of `items`, stably by (cost, index).
fn cheapest_subset(costs: &[f64], mut items: Vec<usize>, count: usize) -> Vec<bool> {
    items.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
    let mut chosen = vec![false; costs.len()];
    for &i in items.iter().take(count) {
        chosen[i] = true;
    }
    chosen
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest distance.
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Label-setting shortest path; nonnegative costs are guaranteed upstream.
fn shortest_path(
    graph: &Graph,
    directed: bool,
    source: usize,
    target: usize,
    costs: &[f64],
) -> Result<Vec<bool>> {
    let mut adjacency = vec![Vec::new(); graph.nodes];
    for (e, &(u, v)) in graph.edges.iter().enumerate() {
        adjacency[u].push((e, v));
        if !directed {
            adjacency[v].push((e, u));
        }
    }
    let mut dist = vec![f64::INFINITY; graph.nodes];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; graph.nodes];
    let mut done = vec![false; graph.nodes];
    let mut heap = std::collections::BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { node, .. }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == target {
            break;
        }
        for &(e, to) in &adjacency[node] {
            let cand = dist[node] + costs[e];
            if cand < dist[to] {
                dist[to] = cand;
                pred[to] = Some((e, node));
                heap.push(HeapEntry {
                    dist: cand,
                    node: to,
                });
            }
        }
    }
    if dist[target].is_infinite() {
        return Err(Error::Infeasible {
            variant: "shortest_path",
            reason: format!("no path from {source} to {target}"),
        });
    }
    let mut chosen = vec![false; graph.edges.len()];
    let mut node = target;
    while node != source {
        let (e, prev) = pred[node].expect("finite distance implies a predecessor");
        chosen[e] = true;
        node = prev;
    }
    Ok(chosen)
}

fn spanning_tree(graph: &Graph, costs: &[f64]) -> Result<Vec<bool>> {
    let mut order: Vec<usize> = (0..graph.edges.len()).collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
    let mut uf = crate::core::UnionFind::new(graph.nodes);
    let mut chosen = vec![false; graph.edges.len()];
    let mut picked = 0;
    for e in order {
        let (u, v) = graph.edges[e];
        if uf.union(u, v) {
            chosen[e] = true;
            picked += 1;
        }
    }
    if picked + 1 != graph.nodes {
        return Err(Error::Infeasible {
            variant: "spanning_tree",
            reason: "graph is not connected".into(),
        });
    }
    Ok(chosen)
}

/// Edmonds-Karp max-flow, then the cut is the set of edges leaving the
/// residual-reachable side of the source. Parallel edges are supported.
fn min_cut(graph: &Graph, source: usize, sink: usize, capacities: &[f64]) -> Vec<bool> {
    let m = graph.edges.len();
    let mut flow = vec![0.0; m];
    let mut out_edges = vec![Vec::new(); graph.nodes];
    let mut in_edges = vec![Vec::new(); graph.nodes];
    for (e, &(u, v)) in graph.edges.iter().enumerate() {
        out_edges[u].push(e);
        in_edges[v].push(e);
    }
    loop {
        // BFS over residual edges in index order.
        let mut pred: Vec<Option<(usize, bool)>> = vec![None; graph.nodes]; // (edge, forward?)
        let mut seen = vec![false; graph.nodes];
        seen[source] = true;
        let mut queue = std::collections::VecDeque::from([source]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &e in &out_edges[u] {
                let v = graph.edges[e].1;
                if !seen[v] && capacities[e] - flow[e] > 1e-12 {
                    seen[v] = true;
                    pred[v] = Some((e, true));
                    if v == sink {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
            for &e in &in_edges[u] {
                let v = graph.edges[e].0;
                if !seen[v] && flow[e] > 1e-12 {
                    seen[v] = true;
                    pred[v] = Some((e, false));
                    if v == sink {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !seen[sink] {
            let mut chosen = vec![false; m];
            for (e, &(u, v)) in graph.edges.iter().enumerate() {
                chosen[e] = seen[u] && !seen[v];
            }
            return chosen;
        }
        let mut bottleneck = f64::INFINITY;
        let mut node = sink;
        while node != source {
            let (e, forward) = pred[node].unwrap();
            let slack = if forward {
                capacities[e] - flow[e]
            } else {
                flow[e]
            };
            bottleneck = bottleneck.min(slack);
            node = if forward {
                graph.edges[e].0
            } else {
                graph.edges[e].1
            };
        }
        let mut node = sink;
        while node != source {
            let (e, forward) = pred[node].unwrap();
            if forward {
                flow[e] += bottleneck;
                node = graph.edges[e].0;
            } else {
                flow[e] -= bottleneck;
                node = graph.edges[e].1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::check_feasible;

    #[test]
    fn selection_takes_p_cheapest() {
        let spec = ProblemSpec::Selection { n: 3, p: 2 };
        let sol = solve_nominal(&[3.0, 1.0, 2.0], &spec).unwrap();
        assert_eq!(sol.chosen, vec![false, true, true]);
        assert_eq!(sol.objective, 3.0);
    }

    #[test]
    fn selection_ties_break_by_index() {
        let spec = ProblemSpec::Selection { n: 3, p: 1 };
        let sol = solve_nominal(&[2.0, 2.0, 2.0], &spec).unwrap();
        assert_eq!(sol.chosen, vec![true, false, false]);
    }

    #[test]
    fn representative_selection_per_part() {
        let spec = ProblemSpec::RepresentativeSelection {
            part_of: vec![0, 0],
            quotas: vec![1],
        };
        let sol = solve_nominal(&[5.0, 4.0], &spec).unwrap();
        assert_eq!(sol.chosen, vec![false, true]);
        assert_eq!(sol.objective, 4.0);
    }

    #[test]
    fn shortest_path_two_hops() {
        let graph = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let spec = ProblemSpec::ShortestPath {
            graph,
            directed: true,
            source: 0,
            target: 2,
        };
        let sol = solve_nominal(&[1.0, 1.0, 3.0], &spec).unwrap();
        assert_eq!(sol.chosen, vec![true, true, false]);
        assert_eq!(sol.objective, 2.0);
        assert!(check_feasible(&sol.chosen, &spec));
    }

    #[test]
    fn shortest_path_disconnected_errors() {
        let graph = Graph::new(3, vec![(0, 1)]).unwrap();
        let spec = ProblemSpec::ShortestPath {
            graph,
            directed: true,
            source: 0,
            target: 2,
        };
        assert!(matches!(
            solve_nominal(&[1.0], &spec),
            Err(Error::Infeasible {
                variant: "shortest_path",
                ..
            })
        ));
    }

    #[test]
    fn spanning_tree_on_triangle() {
        let graph = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let spec = ProblemSpec::SpanningTree { graph };
        let sol = solve_nominal(&[1.0, 2.0, 3.0], &spec).unwrap();
        assert_eq!(sol.chosen, vec![true, true, false]);
        assert_eq!(sol.objective, 3.0);
    }

    #[test]
    fn spanning_tree_disconnected_errors() {
        let graph = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let spec = ProblemSpec::SpanningTree { graph };
        assert!(solve_nominal(&[1.0, 1.0], &spec).is_err());
    }

    #[test]
    fn min_cut_parallel_edges() {
        let graph = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let spec = ProblemSpec::MinCut {
            graph,
            source: 0,
            sink: 1,
        };
        let sol = solve_nominal(&[2.0, 3.0], &spec).unwrap();
        assert_eq!(sol.chosen, vec![true, true]);
        assert_eq!(sol.objective, 5.0);
        assert!(check_feasible(&sol.chosen, &spec));
    }

    #[test]
    fn min_cut_picks_cheaper_side() {
        // s -> a -> t; cutting the cheaper of the two arcs suffices.
        let graph = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let spec = ProblemSpec::MinCut {
            graph: graph.clone(),
            source: 0,
            sink: 2,
        };
        let sol = solve_nominal(&[1.0, 5.0], &spec).unwrap();
        assert_eq!(sol.chosen, vec![true, false]);
        assert_eq!(sol.objective, 1.0);
        assert!(check_feasible(&sol.chosen, &spec));
    }

    #[test]
    fn unconstrained_selects_nothing() {
        let spec = ProblemSpec::Unconstrained { n: 3 };
        let sol = solve_nominal(&[1.0, 2.0, 3.0], &spec).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.chosen.iter().all(|&b| !b));
    }

    #[test]
    fn negative_costs_rejected() {
        let spec = ProblemSpec::Selection { n: 2, p: 1 };
        assert!(solve_nominal(&[-1.0, 2.0], &spec).is_err());
    }
}

use crate::error::{Error, Result};

/// A graph whose edge order defines the item order of the instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Graph { nodes, edges };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::Invalid("graph must have at least one node".into()));
        }
        for &(u, v) in &self.edges {
            if u >= self.nodes || v >= self.nodes {
                return Err(Error::Invalid(format!(
                    "edge ({u}, {v}) references a node outside 0..{}",
                    self.nodes
                )));
            }
        }
        Ok(())
    }
}

/// Description of the feasible set over which the robust minimum is taken.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// Choose exactly `p` of `n` items.
    Selection { n: usize, p: usize },
    /// Choose exactly `quotas[l]` items from each part; `part_of` maps each
    /// item to its 0-based part.
    RepresentativeSelection {
        part_of: Vec<usize>,
        quotas: Vec<usize>,
    },
    /// Chosen edges must form a simple path from `source` to `target`.
    ShortestPath {
        graph: Graph,
        directed: bool,
        source: usize,
        target: usize,
    },
    /// Chosen edges must form a spanning tree of the undirected graph.
    SpanningTree { graph: Graph },
    /// Chosen edges must be exactly the out-edges of a node set containing
    /// `source` but not `sink`.
    MinCut {
        graph: Graph,
        source: usize,
        sink: usize,
    },
    /// Any binary vector is feasible.
    Unconstrained { n: usize },
}

impl ProblemSpec {
    pub fn n(&self) -> usize {
        match self {
            ProblemSpec::Selection { n, .. } | ProblemSpec::Unconstrained { n } => *n,
            ProblemSpec::RepresentativeSelection { part_of, .. } => part_of.len(),
            ProblemSpec::ShortestPath { graph, .. }
            | ProblemSpec::SpanningTree { graph }
            | ProblemSpec::MinCut { graph, .. } => graph.edges.len(),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            ProblemSpec::Selection { .. } => "selection",
            ProblemSpec::RepresentativeSelection { .. } => "representative_selection",
            ProblemSpec::ShortestPath { .. } => "shortest_path",
            ProblemSpec::SpanningTree { .. } => "spanning_tree",
            ProblemSpec::MinCut { .. } => "min_cut",
            ProblemSpec::Unconstrained { .. } => "unconstrained",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProblemSpec::Selection { n, p } => {
                if *n == 0 {
                    return Err(Error::Invalid("item count must be positive".into()));
                }
                if p > n {
                    return Err(Error::Infeasible {
                        variant: "selection",
                        reason: format!("p={p} exceeds n={n}"),
                    });
                }
            }
            ProblemSpec::RepresentativeSelection { part_of, quotas } => {
                if part_of.is_empty() {
                    return Err(Error::Invalid("item count must be positive".into()));
                }
                let parts = quotas.len();
                if parts == 0 {
                    return Err(Error::Invalid("at least one part required".into()));
                }
                let mut sizes = vec![0usize; parts];
                for &l in part_of {
                    if l >= parts {
                        return Err(Error::Invalid(format!(
                            "part index {l} out of range for L={parts}"
                        )));
                    }
                    sizes[l] += 1;
                }
                for (l, (&size, &quota)) in sizes.iter().zip(quotas).enumerate() {
                    if size == 0 {
                        return Err(Error::Invalid(format!("part {l} is empty")));
                    }
                    if quota > size {
                        return Err(Error::Infeasible {
                            variant: "representative_selection",
                            reason: format!("quota {quota} exceeds part size {size} in part {l}"),
                        });
                    }
                }
            }
            ProblemSpec::ShortestPath {
                graph,
                source,
                target,
                ..
            } => {
                graph.validate()?;
                validate_terminals(graph, *source, *target)?;
            }
            ProblemSpec::SpanningTree { graph } => graph.validate()?,
            ProblemSpec::MinCut {
                graph,
                source,
                sink,
            } => {
                graph.validate()?;
                validate_terminals(graph, *source, *sink)?;
            }
            ProblemSpec::Unconstrained { n } => {
                if *n == 0 {
                    return Err(Error::Invalid("item count must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

fn validate_terminals(graph: &Graph, s: usize, t: usize) -> Result<()> {
    if s >= graph.nodes || t >= graph.nodes {
        return Err(Error::Invalid(format!(
            "terminal out of range: s={s}, t={t}"
        )));
    }
    if s == t {
        return Err(Error::Invalid("source and target must differ".into()));
    }
    Ok(())
}

/// Whether `chosen` lies in the feasible set described by `spec`.
pub fn check_feasible(chosen: &[bool], spec: &ProblemSpec) -> bool {
    if chosen.len() != spec.n() {
        return false;
    }
    match spec {
        ProblemSpec::Selection { p, .. } => chosen.iter().filter(|&&b| b).count() == *p,
        ProblemSpec::RepresentativeSelection { part_of, quotas } => {
            let mut counts = vec![0usize; quotas.len()];
            for (i, &b) in chosen.iter().enumerate() {
                if b {
                    counts[part_of[i]] += 1;
                }
            }
            counts == *quotas
        }
        ProblemSpec::ShortestPath {
            graph,
            directed,
            source,
            target,
        } => is_simple_path(graph, *directed, *source, *target, chosen),
        ProblemSpec::SpanningTree { graph } => is_spanning_tree(graph, chosen),
        ProblemSpec::MinCut {
            graph,
            source,
            sink,
        } => is_st_cut(graph, *source, *sink, chosen),
        ProblemSpec::Unconstrained { .. } => true,
    }
}

/// Walks from `source` consuming chosen edges; true iff they form a simple
/// path ending at `target` with no edge left over.
fn is_simple_path(
    graph: &Graph,
    directed: bool,
    source: usize,
    target: usize,
    chosen: &[bool],
) -> bool {
    let total = chosen.iter().filter(|&&b| b).count();
    if total == 0 {
        return false;
    }
    let mut used = vec![false; graph.edges.len()];
    let mut visited = vec![false; graph.nodes];
    let mut current = source;
    visited[source] = true;
    let mut steps = 0;
    while current != target {
        let mut next = None;
        for (e, &(u, v)) in graph.edges.iter().enumerate() {
            if !chosen[e] || used[e] {
                continue;
            }
            let to = if u == current {
                Some(v)
            } else if !directed && v == current {
                Some(u)
            } else {
                None
            };
            if let Some(to) = to {
                if next.is_some() {
                    return false; // branching: not a simple path
                }
                next = Some((e, to));
            }
        }
        match next {
            Some((e, to)) => {
                if visited[to] {
                    return false;
                }
                used[e] = true;
                visited[to] = true;
                current = to;
                steps += 1;
            }
            None => return false,
        }
    }
    steps == total
}

fn is_spanning_tree(graph: &Graph, chosen: &[bool]) -> bool {
    let count = chosen.iter().filter(|&&b| b).count();
    if graph.nodes == 0 || count != graph.nodes - 1 {
        return false;
    }
    let mut uf = UnionFind::new(graph.nodes);
    for (e, &(u, v)) in graph.edges.iter().enumerate() {
        if chosen[e] {
            uf.union(u, v);
        }
    }
    (1..graph.nodes).all(|v| uf.find(v) == uf.find(0))
}

/// True iff the chosen edges are exactly the out-edges of some node set
/// containing `source` and not `sink`. The witness set is the nodes reachable
/// from `source` through non-chosen edges.
fn is_st_cut(graph: &Graph, source: usize, sink: usize, chosen: &[bool]) -> bool {
    let mut in_side = vec![false; graph.nodes];
    in_side[source] = true;
    let mut stack = vec![source];
    while let Some(u) = stack.pop() {
        for (e, &(a, b)) in graph.edges.iter().enumerate() {
            if !chosen[e] && a == u && !in_side[b] {
                in_side[b] = true;
                stack.push(b);
            }
        }
    }
    if in_side[sink] {
        return false;
    }
    graph
        .edges
        .iter()
        .enumerate()
        .all(|(e, &(u, v))| chosen[e] == (in_side[u] && !in_side[v]))
}

/// Plain union-find with path halving, shared by feasibility checks and the
/// nominal spanning tree solver.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

//! The benchmark harness behind the `exp1`, `exp2`, and `exp3` subcommands.
//!
//! Experiment 1 quantifies what ignoring known region structure costs.
//! Experiment 2 recovers region structure from sampled scenarios.
//! Experiment 3 runs the fitted-model shortest path study on a dataset
//! bundle (or a synthetic grid network when none is available).
//!
//! All randomness is derived from the configured seed, and parallel loops
//! collect per-instance results in index order before aggregating, so output
//! tables are byte-identical across runs and thread counts.

use rayon::prelude::*;
use serde::Deserialize;

use crate::core::{evaluate_robust, Graph, Instance, ProblemSpec, ScenarioSet, UncertaintySet};
use crate::error::{Error, Result};
use crate::exact::{solve_branch_and_bound, solve_decomposition, solve_selection_dp, BnbLimits};
use crate::fitting::{estimate_bounds, fit, BoundsMode, FitConfig};
use crate::io::{format_float, DatasetBundle};
use crate::sampling::{derive_seed, gen_random_set, sample_scenarios, Rng};

// ---------------------------------------------------------------------------
// Experiment 1

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct Exp1Config {
    pub instances: usize,
    pub n: usize,
    pub region_counts: Vec<usize>,
    pub p_values: Vec<usize>,
    pub seed: u64,
    /// Ratio of per-cell averages (the default) versus mean of per-instance
    /// ratios, kept for sensitivity checks.
    pub mean_of_ratios: bool,
}

impl Default for Exp1Config {
    fn default() -> Self {
        Exp1Config {
            instances: 1000,
            n: 30,
            region_counts: vec![2, 3, 4, 5],
            p_values: (1..=29).collect(),
            seed: 1,
            mean_of_ratios: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exp1Row {
    pub k: usize,
    pub p: usize,
    pub avg_local: f64,
    pub avg_classic_evaluated_locally: f64,
    pub ratio: f64,
}

/// Solves each instance with the local set and with its classic collapse,
/// evaluates both solutions under the local set, and reports the cost ratio
/// per `(K, p)` cell.
pub fn run_exp1(config: &Exp1Config) -> Result<Vec<Exp1Row>> {
    if config.instances == 0 || config.region_counts.is_empty() || config.p_values.is_empty() {
        return Err(Error::Invalid(
            "experiment 1 needs instances, region counts, and p values".into(),
        ));
    }
    let mut rows = Vec::new();
    for &k in &config.region_counts {
        // (local value, classic-solution value under the local set) per
        // instance and p.
        let per_instance: Vec<Vec<(f64, f64)>> = (0..config.instances)
            .into_par_iter()
            .map(|i| -> Result<Vec<(f64, f64)>> {
                let set = gen_random_set(config.n, k, derive_seed(config.seed, i as u64))?;
                let classic = set.to_classic();
                config
                    .p_values
                    .iter()
                    .map(|&p| {
                        let spec = ProblemSpec::Selection { n: config.n, p };
                        let local_sol =
                            solve_selection_dp(&Instance::new(set.clone(), spec.clone())?)?;
                        let classic_sol =
                            solve_selection_dp(&Instance::new(classic.clone(), spec)?)?;
                        let classic_local = evaluate_robust(&classic_sol.chosen, &set)?;
                        Ok((local_sol.objective, classic_local))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        for (pi, &p) in config.p_values.iter().enumerate() {
            let mut sum_local = 0.0;
            let mut sum_classic = 0.0;
            let mut sum_ratio = 0.0;
            for values in &per_instance {
                let (local, classic) = values[pi];
                sum_local += local;
                sum_classic += classic;
                sum_ratio += classic / local;
            }
            let count = config.instances as f64;
            let avg_local = sum_local / count;
            let avg_classic = sum_classic / count;
            let ratio = if config.mean_of_ratios {
                sum_ratio / count
            } else {
                avg_classic / avg_local
            };
            rows.push(Exp1Row {
                k,
                p,
                avg_local,
                avg_classic_evaluated_locally: avg_classic,
                ratio,
            });
        }
    }
    Ok(rows)
}

pub fn exp1_to_csv(rows: &[Exp1Row]) -> String {
    let mut out = String::from("K,p,avg_local,avg_classic_evaluated_locally,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6}\n",
            r.k, r.p, r.avg_local, r.avg_classic_evaluated_locally, r.ratio
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Experiment 2

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct Exp2Config {
    pub instances: usize,
    pub n: usize,
    pub p: usize,
    pub region_counts: Vec<usize>,
    pub sample_sizes: Vec<usize>,
    pub correlation_threshold: f64,
    pub seed: u64,
}

impl Default for Exp2Config {
    fn default() -> Self {
        Exp2Config {
            instances: 1000,
            n: 30,
            p: 10,
            region_counts: vec![2, 3, 4, 5],
            sample_sizes: vec![10, 30, 100, 300, 1000, 3000, 10_000],
            correlation_threshold: 0.3,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exp2Row {
    pub k: usize,
    pub sample_size: usize,
    pub avg_true_value_local_fit: f64,
    pub avg_true_value_classic_fit: f64,
    pub avg_true_optimum: f64,
}

/// Samples scenarios from a hidden local set, fits classic and local models
/// (box bounds given, regions and budgets estimated), and scores the fitted
/// models' solutions under the true set.
pub fn run_exp2(config: &Exp2Config) -> Result<Vec<Exp2Row>> {
    if config.instances == 0 || config.region_counts.is_empty() || config.sample_sizes.is_empty() {
        return Err(Error::Invalid(
            "experiment 2 needs instances, region counts, and sample sizes".into(),
        ));
    }
    let mut rows = Vec::new();
    for &k in &config.region_counts {
        let max_n = *config.sample_sizes.iter().max().expect("nonempty");
        let per_instance: Vec<Vec<(f64, f64, f64)>> = (0..config.instances)
            .into_par_iter()
            .map(|i| -> Result<Vec<(f64, f64, f64)>> {
                let instance_seed = derive_seed(config.seed, i as u64);
                let set = gen_random_set(config.n, k, instance_seed)?;
                let spec = ProblemSpec::Selection {
                    n: config.n,
                    p: config.p,
                };
                let truth =
                    solve_selection_dp(&Instance::new(set.clone(), spec.clone())?)?.objective;
                // One long sample per instance; each N uses its prefix, so
                // growing the sample refines rather than redraws.
                let scenarios = sample_scenarios(&set, max_n, derive_seed(instance_seed, 1))?;
                config
                    .sample_sizes
                    .iter()
                    .map(|&n_samples| {
                        let (train, _) = scenarios.split_at(n_samples);
                        let model = fit(
                            &train,
                            &FitConfig {
                                correlation_threshold: config.correlation_threshold,
                                budget_factor: 1.0,
                                bounds_mode: BoundsMode::Given {
                                    lower: set.lower_costs().to_vec(),
                                    deviations: set.deviations().to_vec(),
                                },
                            },
                        )?;
                        let local_sol =
                            solve_selection_dp(&Instance::new(model.local, spec.clone())?)?;
                        let classic_sol =
                            solve_selection_dp(&Instance::new(model.classic, spec.clone())?)?;
                        Ok((
                            evaluate_robust(&local_sol.chosen, &set)?,
                            evaluate_robust(&classic_sol.chosen, &set)?,
                            truth,
                        ))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        for (ni, &n_samples) in config.sample_sizes.iter().enumerate() {
            let count = config.instances as f64;
            let mut local = 0.0;
            let mut classic = 0.0;
            let mut truth = 0.0;
            for values in &per_instance {
                local += values[ni].0;
                classic += values[ni].1;
                truth += values[ni].2;
            }
            rows.push(Exp2Row {
                k,
                sample_size: n_samples,
                avg_true_value_local_fit: local / count,
                avg_true_value_classic_fit: classic / count,
                avg_true_optimum: truth / count,
            });
        }
    }
    Ok(rows)
}

pub fn exp2_to_csv(rows: &[Exp2Row]) -> String {
    let mut out =
        String::from("K,N,avg_true_value_local_fit,avg_true_value_classic_fit,avg_true_optimum\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6}\n",
            r.k,
            r.sample_size,
            r.avg_true_value_local_fit,
            r.avg_true_value_classic_fit,
            r.avg_true_optimum
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Experiment 3

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct Exp3Config {
    /// Budget factor grid: `start`, `stop` inclusive, `step`.
    pub f_start: f64,
    pub f_stop: f64,
    pub f_step: f64,
    pub queries: usize,
    pub train_fraction: f64,
    pub node_cap: usize,
    pub seed: u64,
    /// Snapshot count when generating the synthetic bundle.
    pub synthetic_snapshots: usize,
}

impl Default for Exp3Config {
    fn default() -> Self {
        Exp3Config {
            f_start: 0.0,
            f_stop: 0.5,
            f_step: 0.002,
            queries: 200,
            train_fraction: 0.75,
            node_cap: 100_000,
            seed: 1,
            synthetic_snapshots: 400,
        }
    }
}

impl Exp3Config {
    pub fn factor_grid(&self) -> Result<Vec<f64>> {
        if self.f_step <= 0.0 {
            return Err(Error::Invalid("budget factor step must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.train_fraction) {
            return Err(Error::Invalid(
                "training fraction must lie in [0, 1]".into(),
            ));
        }
        let mut grid = Vec::new();
        let mut i = 0u64;
        loop {
            let f = self.f_start + self.f_step * i as f64;
            if f > self.f_stop + 1e-12 {
                break;
            }
            grid.push(f);
            i += 1;
        }
        if grid.is_empty() {
            return Err(Error::Invalid("budget factor grid is empty".into()));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exp3Row {
    pub factor: f64,
    pub model: &'static str,
    pub avg_time: f64,
    pub avg_worst_case_time: f64,
    pub split: &'static str,
    /// How many of the queries' searches finished with a proven optimum.
    pub proven_optimal: usize,
}

/// Chronological train/eval split, fitted classic and local sets (bounds
/// estimated from training data, regions taken from the bundle's edge
/// labels), then seeded shortest path queries solved per budget factor and
/// scored in- and out-of-sample.
pub fn run_exp3(bundle: &DatasetBundle, config: &Exp3Config) -> Result<Vec<Exp3Row>> {
    let grid = config.factor_grid()?;
    if config.queries == 0 {
        return Err(Error::Invalid(
            "experiment 3 needs at least one query".into(),
        ));
    }
    let edges = bundle.graph.edges.len();
    let train_count = ((bundle.snapshots.len() as f64) * config.train_fraction).floor() as usize;
    let (train, eval) = bundle.snapshots.split_at(train_count);
    if train.is_empty() || eval.is_empty() {
        return Err(Error::InsufficientData(format!(
            "split of {} snapshots at fraction {} leaves an empty side",
            bundle.snapshots.len(),
            config.train_fraction
        )));
    }
    let (lower, deviations) = estimate_bounds(&train)?;
    let (global_budget, region_budgets, _clipped) =
        crate::fitting::estimate_budgets(&train, &lower, &bundle.region_of)?;

    let queries = draw_query_pairs(bundle, &lower, config)?;

    let rows: Vec<Vec<Exp3Row>> = grid
        .par_iter()
        .map(|&f| -> Result<Vec<Exp3Row>> {
            let classic_set = UncertaintySet::new(
                lower.clone(),
                deviations.clone(),
                vec![0; edges],
                vec![global_budget * f],
            )?;
            let local_set = UncertaintySet::new(
                lower.clone(),
                deviations.clone(),
                bundle.region_of.clone(),
                region_budgets.iter().map(|g| g * f).collect(),
            )?;
            let limits = BnbLimits {
                node_cap: config.node_cap,
                time_cap: None,
            };
            let mut stats = [ModelStats::default(), ModelStats::default()];
            for &(s, t) in &queries {
                let spec = ProblemSpec::ShortestPath {
                    graph: bundle.graph.clone(),
                    directed: true,
                    source: s,
                    target: t,
                };
                let classic_sol =
                    solve_decomposition(&Instance::new(classic_set.clone(), spec.clone())?)?;
                stats[0].add(&classic_sol.chosen, true, &train, &eval);
                let local_out =
                    solve_branch_and_bound(&Instance::new(local_set.clone(), spec)?, &limits)?;
                stats[1].add(
                    &local_out.solution.chosen,
                    local_out.proven_optimal,
                    &train,
                    &eval,
                );
            }
            let count = queries.len() as f64;
            let mut out = Vec::with_capacity(4);
            for (stats, model) in stats.iter().zip(["classic", "local"]) {
                for (split, avg, worst) in [
                    ("in", stats.sum_avg_in / count, stats.sum_worst_in / count),
                    (
                        "out",
                        stats.sum_avg_out / count,
                        stats.sum_worst_out / count,
                    ),
                ] {
                    out.push(Exp3Row {
                        factor: f,
                        model,
                        avg_time: avg,
                        avg_worst_case_time: worst,
                        split,
                        proven_optimal: stats.proven,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Default)]
struct ModelStats {
    sum_avg_in: f64,
    sum_worst_in: f64,
    sum_avg_out: f64,
    sum_worst_out: f64,
    proven: usize,
}

impl ModelStats {
    fn add(&mut self, chosen: &[bool], proven: bool, train: &ScenarioSet, eval: &ScenarioSet) {
        let (avg_in, worst_in) = path_stats(chosen, train);
        let (avg_out, worst_out) = path_stats(chosen, eval);
        self.sum_avg_in += avg_in;
        self.sum_worst_in += worst_in;
        self.sum_avg_out += avg_out;
        self.sum_worst_out += worst_out;
        self.proven += usize::from(proven);
    }
}

fn path_stats(chosen: &[bool], scenarios: &ScenarioSet) -> (f64, f64) {
    let items: Vec<usize> = chosen
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect();
    let mut sum = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for row in scenarios.rows() {
        let cost: f64 = items.iter().map(|&i| row[i]).sum();
        sum += cost;
        worst = worst.max(cost);
    }
    (sum / scenarios.len() as f64, worst)
}

/// Seeded random s-t pairs; disconnected draws are discarded and redrawn.
fn draw_query_pairs(
    bundle: &DatasetBundle,
    lower: &[f64],
    config: &Exp3Config,
) -> Result<Vec<(usize, usize)>> {
    let nodes = bundle.graph.nodes;
    if nodes < 2 {
        return Err(Error::Invalid(
            "dataset graph needs at least two nodes".into(),
        ));
    }
    let mut rng = Rng::from_seed(derive_seed(config.seed, 0xE3));
    let mut pairs = Vec::with_capacity(config.queries);
    let mut attempts = 0usize;
    let budget = config.queries.saturating_mul(1000).max(1000);
    while pairs.len() < config.queries {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Infeasible {
                variant: "shortest_path",
                reason: format!(
                    "could not find {} connected query pairs in {attempts} draws",
                    config.queries
                ),
            });
        }
        let s = rng.below(nodes as u64) as usize;
        let t = rng.below(nodes as u64) as usize;
        if s == t {
            continue;
        }
        let spec = ProblemSpec::ShortestPath {
            graph: bundle.graph.clone(),
            directed: true,
            source: s,
            target: t,
        };
        if crate::nominal::solve_nominal(lower, &spec).is_ok() {
            pairs.push((s, t));
        }
    }
    Ok(pairs)
}

pub fn exp3_to_csv(rows: &[Exp3Row]) -> String {
    let mut out = String::from("f,model,avg_time,avg_worst_case_time,split\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{}\n",
            format_float(round6(r.factor)),
            r.model,
            r.avg_time,
            r.avg_worst_case_time,
            r.split
        ));
    }
    out
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

// ---------------------------------------------------------------------------
// Synthetic dataset bundle

/// A stand-in for a real road dataset: a 10x10 crossing grid whose links are
/// subdivided into three segments, so the maximal degree-2 chains (one per
/// link and direction) form multi-edge corridor regions. Snapshots are base
/// travel times plus region-correlated congestion spikes and small
/// independent noise.
pub fn synthetic_bundle(seed: u64, snapshots: usize) -> Result<DatasetBundle> {
    const SIDE: usize = 10;
    const SEGMENTS: usize = 3;
    let crossings = SIDE * SIDE;
    let mut nodes = crossings;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut region_of: Vec<usize> = Vec::new();
    let mut region_labels: Vec<String> = Vec::new();
    let mut base_times: Vec<f64> = Vec::new();
    let mut rng = Rng::from_seed(derive_seed(seed, 0x6E7));

    let mut links: Vec<(usize, usize)> = Vec::new();
    for r in 0..SIDE {
        for c in 0..SIDE {
            let id = r * SIDE + c;
            if c + 1 < SIDE {
                links.push((id, id + 1));
            }
            if r + 1 < SIDE {
                links.push((id, id + SIDE));
            }
        }
    }
    for (idx, &(a, b)) in links.iter().enumerate() {
        // Two intermediate nodes shared by both directions of the corridor.
        let m1 = nodes;
        let m2 = nodes + 1;
        nodes += 2;
        let segment_time = |rng: &mut Rng| 1.0 + rng.below(5) as f64;
        for (dir, chain) in [(0, [a, m1, m2, b]), (1, [b, m2, m1, a])] {
            let region = region_labels.len();
            region_labels.push(format!(
                "corridor_{idx}_{}",
                if dir == 0 { "fwd" } else { "rev" }
            ));
            for w in 0..SEGMENTS {
                edges.push((chain[w], chain[w + 1]));
                region_of.push(region);
                base_times.push(segment_time(&mut rng));
            }
        }
    }
    let graph = Graph::new(nodes, edges)?;

    let rows: Vec<Vec<f64>> = (0..snapshots)
        .map(|k| {
            let mut rng = Rng::substream(derive_seed(seed, 0x5A7), k as u64);
            // Region-wide congestion: with probability 0.3 a corridor slows
            // down by up to 2x its base time.
            let spikes: Vec<f64> = (0..region_labels.len())
                .map(|_| {
                    let hit = rng.unit_f64() < 0.3;
                    let level = rng.unit_f64();
                    if hit {
                        2.0 * level
                    } else {
                        0.0
                    }
                })
                .collect();
            base_times
                .iter()
                .enumerate()
                .map(|(e, &base)| {
                    let noise = 0.1 * base * rng.unit_f64();
                    base * (1.0 + spikes[region_of[e]]) + noise
                })
                .collect()
        })
        .collect();
    let snapshots = ScenarioSet::new(graph.edges.len(), rows)?;
    Ok(DatasetBundle {
        graph,
        region_of,
        region_labels,
        snapshots,
    })
}

//! Command line front end: solve and evaluate instances, fit sets from
//! scenario data, generate benchmark and reduction instances, and run the
//! three experiment suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lbu::core::{evaluate_robust, worst_case_scenario, Instance, ProblemSpec, Solution};
use lbu::exact::{solve, BnbLimits, Method};
use lbu::experiments::{
    exp1_to_csv, exp2_to_csv, exp3_to_csv, run_exp1, run_exp2, run_exp3, synthetic_bundle,
    Exp1Config, Exp2Config, Exp3Config,
};
use lbu::fitting::{fit, BoundsMode, FitConfig};
use lbu::io;
use lbu::sampling::{
    gen_from_3sat, gen_from_set_cover, gen_from_vertex_cover, gen_random_set, sample_scenarios,
};
use lbu::{Error, Result};

#[derive(Parser)]
#[command(
    name = "lbu",
    version,
    about = "Robust optimization under locally budgeted uncertainty"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file exactly.
    Solve(SolveArgs),
    /// Evaluate a fixed solution's robust objective and worst case.
    Evaluate(EvaluateArgs),
    /// Fit classic and local uncertainty sets from a scenario CSV.
    Fit(FitArgs),
    /// Sample scenarios from an instance's uncertainty set.
    Sample(SampleArgs),
    /// Generate instances (random benchmarks or hardness reductions).
    #[command(subcommand)]
    Gen(GenCommand),
    /// Price of ignoring region structure on random selection instances.
    Exp1(ExpArgs),
    /// Value of fitted models as the scenario sample grows.
    Exp2(ExpArgs),
    /// Fitted-model shortest path study on a dataset bundle.
    Exp3(Exp3Args),
    /// Validate a labeled graph plus snapshot CSV and print a summary.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    instance: PathBuf,
    /// decomp | dp | bnb | brute
    #[arg(long, default_value = "decomp")]
    method: String,
    /// Branch-and-bound node cap.
    #[arg(long, default_value_t = 100_000)]
    node_cap: usize,
    /// Branch-and-bound time cap in seconds.
    #[arg(long)]
    time_cap_secs: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Instance JSON file (the spec part is ignored beyond its size).
    instance: PathBuf,
    /// Chosen items as a comma-separated list of 0-based indices.
    #[arg(long)]
    items: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Scenario CSV file.
    scenarios: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    threshold: f64,
    #[arg(long, default_value_t = 1.0)]
    budget_factor: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Instance JSON file.
    instance: PathBuf,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random selection benchmark instance.
    Random {
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduction from vertex cover (edge list file, `u v` per line).
    Vc {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduction from 3-SAT (DIMACS CNF file).
    #[command(name = "3sat")]
    Sat {
        cnf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduction from set cover (JSON with ground_size and subsets).
    Setcover {
        cover: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExpArgs {
    /// JSON config file; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed override.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Exp3Args {
    /// Labeled graph file (`nodes N`, then `edge u v label` lines).
    #[arg(long, requires = "snapshots")]
    graph: Option<PathBuf>,
    /// Snapshot CSV whose columns are the graph's edges.
    #[arg(long, requires = "graph")]
    snapshots: Option<PathBuf>,
    /// Use the built-in synthetic grid network instead of files.
    #[arg(long, conflicts_with_all = ["graph", "snapshots"])]
    synthetic: bool,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    snapshots: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let instance = io::instance_from_json(&fs::read_to_string(&args.instance)?)?;
            let method: Method = args.method.parse()?;
            let limits = BnbLimits {
                node_cap: args.node_cap,
                time_cap: args.time_cap_secs.map(std::time::Duration::from_secs),
            };
            let solution = solve(&instance, method, &limits)?;
            emit(&args.out, &solution_json(&instance, &solution))
        }
        Command::Evaluate(args) => {
            let instance = io::instance_from_json(&fs::read_to_string(&args.instance)?)?;
            let chosen = parse_items(&args.items, instance.n())?;
            let objective = evaluate_robust(&chosen, &instance.set)?;
            let worst = worst_case_scenario(&chosen, &instance.set)?;
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "objective": objective,
                "worst_case_scenario": worst,
            }))
            .expect("serialization cannot fail");
            emit(&args.out, &text)
        }
        Command::Fit(args) => {
            let scenarios = io::scenarios_from_csv(&fs::read_to_string(&args.scenarios)?)?;
            let model = fit(
                &scenarios,
                &FitConfig {
                    correlation_threshold: args.threshold,
                    budget_factor: args.budget_factor,
                    bounds_mode: BoundsMode::Estimated,
                },
            )?;
            let set_json = |set: &lbu::core::UncertaintySet| {
                serde_json::json!({
                    "lower_costs": set.lower_costs(),
                    "deviations": set.deviations(),
                    "region_of": set.region_of().iter().map(|&j| j + 1).collect::<Vec<_>>(),
                    "budgets": set.budgets(),
                })
            };
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "region_count": model.region_count,
                "clipped_entries": model.clipped_entries,
                "classic": set_json(&model.classic),
                "local": set_json(&model.local),
            }))
            .expect("serialization cannot fail");
            emit(&args.out, &text)
        }
        Command::Sample(args) => {
            let instance = io::instance_from_json(&fs::read_to_string(&args.instance)?)?;
            let scenarios = sample_scenarios(&instance.set, args.count, args.seed)?;
            emit(&args.out, io::scenarios_to_csv(&scenarios).trim_end())
        }
        Command::Gen(gen) => match gen {
            GenCommand::Random { n, k, p, seed, out } => {
                let set = gen_random_set(n, k, seed)?;
                let instance = Instance::new(set, ProblemSpec::Selection { n, p })?;
                emit(&out, &io::instance_to_json(&instance))
            }
            GenCommand::Vc { graph, out } => {
                let g = io::edge_list_from_text(&fs::read_to_string(&graph)?)?;
                emit(&out, &io::instance_to_json(&gen_from_vertex_cover(&g)?))
            }
            GenCommand::Sat { cnf, out } => {
                let formula = io::cnf_from_text(&fs::read_to_string(&cnf)?)?;
                emit(&out, &io::instance_to_json(&gen_from_3sat(&formula)?))
            }
            GenCommand::Setcover { cover, out } => {
                let cover = io::set_cover_from_json(&fs::read_to_string(&cover)?)?;
                emit(&out, &io::instance_to_json(&gen_from_set_cover(&cover)?))
            }
        },
        Command::Exp1(args) => {
            let mut config: Exp1Config = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            emit(&args.out, exp1_to_csv(&run_exp1(&config)?).trim_end())
        }
        Command::Exp2(args) => {
            let mut config: Exp2Config = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            emit(&args.out, exp2_to_csv(&run_exp2(&config)?).trim_end())
        }
        Command::Exp3(args) => {
            let mut config: Exp3Config = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            let bundle = match (&args.graph, &args.snapshots) {
                (Some(graph), Some(snapshots)) => {
                    io::ingest(&fs::read_to_string(graph)?, &fs::read_to_string(snapshots)?)?
                }
                _ if args.synthetic => synthetic_bundle(config.seed, config.synthetic_snapshots)?,
                _ => {
                    return Err(Error::Invalid(
                        "exp3 needs either --graph and --snapshots or --synthetic".into(),
                    ))
                }
            };
            emit(
                &args.out,
                exp3_to_csv(&run_exp3(&bundle, &config)?).trim_end(),
            )
        }
        Command::Ingest(args) => {
            let bundle = io::ingest(
                &fs::read_to_string(&args.graph)?,
                &fs::read_to_string(&args.snapshots)?,
            )?;
            println!(
                "ok: {} nodes, {} edges, {} regions, {} snapshots",
                bundle.graph.nodes,
                bundle.graph.edges.len(),
                bundle.region_labels.len(),
                bundle.snapshots.len()
            );
            Ok(())
        }
    }
}

fn load_config<T: Default + serde::de::DeserializeOwned>(path: &Option<PathBuf>) -> Result<T> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(T::default()),
    }
}

fn parse_items(text: &str, n: usize) -> Result<Vec<bool>> {
    let mut chosen = vec![false; n];
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i: usize = tok
            .parse()
            .map_err(|_| Error::Invalid(format!("invalid item index '{tok}'")))?;
        if i >= n {
            return Err(Error::Invalid(format!(
                "item index {i} out of range for n={n}"
            )));
        }
        chosen[i] = true;
    }
    Ok(chosen)
}

fn solution_json(instance: &Instance, solution: &Solution) -> String {
    let items: Vec<usize> = solution
        .chosen
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect();
    let pi: Option<Vec<u8>> = solution
        .pi_assignment
        .as_ref()
        .map(|pi| pi.iter().map(|&b| u8::from(b)).collect());
    serde_json::to_string_pretty(&serde_json::json!({
        "objective": solution.objective,
        "chosen_items": items,
        "pi_assignment": pi,
        "n": instance.n(),
    }))
    .expect("serialization cannot fail")
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, format!("{text}\n"))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

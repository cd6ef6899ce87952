mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use univne::dispatch::{dispatch, solve_with, SolveOptions};
use univne::instance::{mapping_value, parse_instance, parse_mapping, serialize_instance, Instance};
use univne::oracle::{brute_force_find_feasible, brute_force_solve, OracleLimits};
use univne::reductions::{self, GeneratedInstance};
use univne::{check_feasible, classify, mapping_cost, SolveOutcome, UnivneError, Variant, Verdict, VirtualNetwork};

#[derive(Parser)]
#[command(name = "univne", version, about = "Exact solvers for uniform-demand virtual network embedding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the topology classes of both networks and the selected solver.
    Classify { file: PathBuf },
    /// Solve an instance with the solver picked for its topology cell.
    Solve {
        file: PathBuf,
        /// Cost bound; overrides the budget stored in the instance.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
        /// Run exhaustive search even above the size guard.
        #[arg(long)]
        force_oracle: bool,
    },
    /// Check a mapping against an instance and report loads and cost.
    Verify { instance: PathBuf, mapping: PathBuf },
    /// Solve by exhaustive search regardless of topology.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        force_oracle: bool,
    },
    /// Build a uniVNE instance from a source problem instance.
    Generate { kind: SourceKind, source: PathBuf },
    /// Time solvers on random instances and print CSV.
    Bench {
        suite: bench::Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Timed repetitions per point; the minimum is reported.
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    HgpCycle,
    HgpWheel,
    EdppClique,
    EdppCliqueOnClique,
    TspCycle,
    TspPath,
    TspWheel,
    BppStar,
    BppTree,
    MclaPath,
}

enum Failure {
    Input(String),
    Guard(String),
    Internal(String),
}

impl From<UnivneError> for Failure {
    fn from(e: UnivneError) -> Self {
        match e {
            UnivneError::SizeGuard(_) | UnivneError::BudgetExceeded(_) => Failure::Guard(e.to_string()),
            UnivneError::Internal(_) | UnivneError::Overflow => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Existence => "existence",
        Variant::Cost => "cost",
    }
}

fn report(inst: &Instance, outcome: &SolveOutcome, cell: Option<String>, as_json: bool) {
    let v = &inst.virtual_network;
    if as_json {
        let mut doc = json!({
            "status": if outcome.is_feasible() { "Feasible" } else { "Infeasible" },
            "solver_id": outcome.solver,
            "variant": variant_name(inst.variant),
        });
        if let Some(c) = cell {
            doc["cell"] = json!(c);
        }
        if let Verdict::Feasible { mapping, cost } = &outcome.verdict {
            doc["total_cost"] = json!(cost);
            doc["mapping"] = mapping_value(v, mapping, *cost);
        }
        println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
        return;
    }
    println!("solver: {}", outcome.solver);
    if let Some(c) = cell {
        println!("cell: {c}");
    }
    match &outcome.verdict {
        Verdict::Infeasible => println!("status: Infeasible"),
        Verdict::Feasible { mapping, cost } => {
            println!("status: Feasible");
            println!("cost: {cost}");
            println!("placement: {:?}", mapping.placement);
            println!("routing:");
            for (&(a, b), p) in v.graph().edges().iter().zip(&mapping.routing) {
                println!("  ({a}, {b}): {:?}", p.nodes());
            }
        }
    }
}

fn check_budget(outcome: &SolveOutcome, budget: Option<u64>) -> Result<(), Failure> {
    match (outcome.cost(), budget) {
        (Some(cost), Some(g)) if cost > g => Err(Failure::Guard(format!("budget exceeded: optimum {cost} is above the bound {g}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { file } => {
            let inst = load_instance(&file)?;
            let vc = classify(inst.virtual_network.graph());
            let sc = classify(inst.substrate.graph());
            let choice = dispatch(&inst.virtual_network, &inst.substrate, inst.variant);
            println!("virtual: {}", vc.set);
            println!("substrate: {}", sc.set);
            println!("cell: {} ({})", choice.cell, choice.cell.status().describe());
            println!("solver: {}", choice.solver_id);
            Ok(())
        }
        Command::Solve { file, budget, json, force_oracle } => {
            let inst = load_instance(&file)?;
            let choice = dispatch(&inst.virtual_network, &inst.substrate, inst.variant);
            let opts = SolveOptions { force_oracle, ..SolveOptions::default() };
            let outcome = solve_with(&inst.virtual_network, &inst.substrate, &choice, &opts)?;
            report(&inst, &outcome, Some(choice.cell.to_string()), json);
            let bound = if inst.variant == Variant::Cost { budget.or(inst.budget) } else { None };
            check_budget(&outcome, bound)
        }
        Command::Oracle { file, json, force_oracle } => {
            let inst = load_instance(&file)?;
            let (v, s) = (&inst.virtual_network, &inst.substrate);
            let mut limits = OracleLimits::default();
            if force_oracle {
                limits.max_placements = u64::MAX;
            }
            let outcome = match inst.variant {
                Variant::Existence => brute_force_find_feasible(v, s, &limits)?,
                Variant::Cost => brute_force_solve(v, s, &limits)?,
            };
            report(&inst, &outcome, None, json);
            let bound = if inst.variant == Variant::Cost { inst.budget } else { None };
            check_budget(&outcome, bound)
        }
        Command::Verify { instance, mapping } => {
            let inst = load_instance(&instance)?;
            let text = read(&mapping)?;
            let (m, stated) = parse_mapping(&text, &inst.virtual_network).map_err(|e| Failure::Input(format!("{}: {e}", mapping.display())))?;
            verify(&inst.virtual_network, &inst, &m, stated)
        }
        Command::Generate { kind, source } => {
            let text = read(&source)?;
            let generated = generate(kind, &text)?;
            print!("{}", serialize_instance(&Instance::from(generated)));
            Ok(())
        }
        Command::Bench { suite, seed, reps } => {
            print!("{}", bench::run_suite(suite, seed, reps.max(1))?);
            Ok(())
        }
    }
}

fn verify(v: &VirtualNetwork, inst: &Instance, m: &univne::Mapping, stated: Option<u64>) -> Result<(), Failure> {
    let s = &inst.substrate;
    let report = check_feasible(v, s, m)?;
    for (u, usage) in report.nodes.iter().enumerate() {
        println!("node {u}: {}/{}{}", usage.load, usage.capacity, if usage.violated() { " VIOLATED" } else { "" });
    }
    for (e, usage) in report.edges.iter().enumerate() {
        let (a, b) = s.graph().edge(e);
        println!("edge ({a}, {b}): {}/{}{}", usage.load, usage.capacity, if usage.violated() { " VIOLATED" } else { "" });
    }
    let cost = mapping_cost(v, s, m)?;
    println!("{}", if report.is_feasible() { "feasible" } else { "infeasible" });
    println!("cost: {cost}");
    if let Some(c) = stated.filter(|&c| c != cost) {
        println!("stated cost {c} differs");
    }
    Ok(())
}

fn source<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("source instance: {e}")))
}

fn generate(kind: SourceKind, text: &str) -> Result<GeneratedInstance, Failure> {
    let g = match kind {
        SourceKind::HgpCycle => reductions::hgp_to_cycle(&source(text)?)?,
        SourceKind::HgpWheel => reductions::hgp_to_wheel(&source(text)?)?,
        SourceKind::EdppClique => reductions::edpp_to_clique(&source(text)?)?,
        SourceKind::EdppCliqueOnClique => reductions::edpp_to_clique_on_clique(&source(text)?)?,
        SourceKind::TspCycle => reductions::tsp_to_cycle(&source(text)?)?,
        SourceKind::TspPath => reductions::tsp_to_path(&source(text)?)?,
        SourceKind::TspWheel => reductions::tsp_to_wheel(&source(text)?)?,
        SourceKind::BppStar => reductions::bpp_to_tree_on_star(&source(text)?)?,
        SourceKind::BppTree => reductions::bpp_to_tree_on_tree(&source(text)?)?,
        SourceKind::MclaPath => reductions::mcla_to_general_on_path(&source(text)?)?,
    };
    Ok(g)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

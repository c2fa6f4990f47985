//! `fondkit`: solve FOND planning problems, validate policies, and run
//! benchmark suites.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fondkit::determinize::{compile, OrderKey};
use fondkit::solver::{policy_from_json, policy_to_dot, policy_to_json, solve, SolveOutcome};
use fondkit::validate::{classify, PolicyClass};

use fondkit_cli::bench::{cactus_csv, run_suite};
use fondkit_cli::{load_task, parse_budget, parse_ordering, parse_strategies, PlannerSettings};

const EXIT_SOLVED: u8 = 0;
const EXIT_NO_SOLUTION: u8 = 10;
const EXIT_BUDGET: u8 = 20;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "fondkit", version, about = "FOND planning toolkit: strong cyclic policies via determinization and replanning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverFlags {
    /// Ranking of single-outcome determinizations: desc or asc.
    #[arg(long, default_value = "desc")]
    ordering: String,
    /// Maximum number of single-outcome members to enumerate.
    #[arg(long, default_value_t = 64)]
    cap: usize,
    /// All-outcome determinization only (plain replanner mode).
    #[arg(long)]
    ndp2: bool,
    /// Overall wall-clock budget, e.g. 60s, 30m.
    #[arg(long, default_value = "60s")]
    budget: String,
    /// Node-expansion limit per planner call.
    #[arg(long)]
    expansions: Option<u64>,
    /// Comma-separated strategies to race: astar, gbfs.
    #[arg(long, default_value = "astar,gbfs")]
    strategies: String,
    /// External planner command raced alongside the embedded strategies.
    #[arg(long)]
    external_planner: Option<String>,
    /// Experimental ordering key ranking whole schemas by effect count.
    #[arg(long, hide = true)]
    order_key_effect_count: bool,
    /// Per-iteration structural invariant checks (slow).
    #[arg(long, hide = true)]
    debug_checks: bool,
}

impl SolverFlags {
    fn settings(&self) -> Result<PlannerSettings> {
        let mut strategies = parse_strategies(&self.strategies)?;
        if let Some(cmd) = &self.external_planner {
            strategies.push(fondkit::search::Strategy::External(cmd.clone()));
        }
        let budget = parse_budget(&self.budget)?;
        if budget.is_zero() {
            bail!("budget must be positive");
        }
        if self.expansions == Some(0) {
            bail!("expansion limit must be positive");
        }
        Ok(PlannerSettings {
            ordering: parse_ordering(&self.ordering)?,
            order_key: if self.order_key_effect_count {
                OrderKey::EffectCount
            } else {
                OrderKey::LiteralCount
            },
            cap: self.cap,
            ndp2: self.ndp2,
            strategies,
            budget: fondkit::search::SearchBudget {
                wall: budget,
                expansions: self.expansions.unwrap_or(u64::MAX),
            },
            debug_checks: self.debug_checks,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a strong cyclic policy for a FOND problem.
    Solve {
        domain: PathBuf,
        problem: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        /// Write the policy to a .json or .dot file.
        #[arg(long)]
        policy_out: Option<PathBuf>,
        /// Write solver statistics as JSON.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Classify a policy JSON file against a domain and problem.
    Validate {
        domain: PathBuf,
        problem: PathBuf,
        policy: PathBuf,
    },
    /// Run a suite manifest and print the coverage table.
    Bench {
        manifest: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        /// Write cumulative (time, solved) pairs as CSV.
        #[arg(long)]
        csv_out: Option<PathBuf>,
        /// Write all run records as JSON.
        #[arg(long)]
        records_out: Option<PathBuf>,
    },
    /// Ground a domain/problem pair.
    Ground {
        domain: PathBuf,
        problem: PathBuf,
        /// Print the ground task, one atom or action per line.
        #[arg(long)]
        dump: bool,
    },
    /// Compile the determinization set.
    Determinize {
        domain: PathBuf,
        problem: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        /// Describe every member of the set.
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { domain, problem, flags, policy_out, trace_out } => {
            let settings = flags.settings()?;
            let task = load_task(&domain, &problem)?;
            let delta = compile(task.clone(), settings.determinize_options())?;
            let (outcome, trace) = solve(&delta, &settings.solve_config());
            if let Some(path) = &trace_out {
                std::fs::write(path, trace.to_json())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let code = match outcome {
                SolveOutcome::Solved(policy) => {
                    let verdict = classify(&policy, &task);
                    if !matches!(
                        verdict.class,
                        PolicyClass::StrongCyclic | PolicyClass::StrongAcyclic
                    ) {
                        eprintln!("internal error: returned policy classified {:?}", verdict.class);
                        return Ok(ExitCode::from(1));
                    }
                    println!(
                        "solved: {} policy entries ({:?}), {} reachable states",
                        policy.len(),
                        verdict.class,
                        verdict.reachable_states
                    );
                    if let Some(path) = &policy_out {
                        write_policy(path, &policy, &task)?;
                    }
                    EXIT_SOLVED
                }
                SolveOutcome::NoSolution => {
                    println!("no strong cyclic solution exists");
                    EXIT_NO_SOLUTION
                }
                SolveOutcome::BudgetExhausted => {
                    println!("budget exhausted");
                    EXIT_BUDGET
                }
            };
            println!(
                "iterations {} | planner calls {} | deadends {} | backtracks {} | {} ms",
                trace.iterations,
                trace.planner_calls,
                trace.deadends_found,
                trace.msp_backtracks,
                trace.wall_ms
            );
            Ok(ExitCode::from(code))
        }
        Command::Validate { domain, problem, policy } => {
            let task = load_task(&domain, &problem)?;
            let text = std::fs::read_to_string(&policy)
                .with_context(|| format!("reading {}", policy.display()))?;
            let policy = policy_from_json(&text, &task)?;
            let verdict = classify(&policy, &task);
            println!("{}", serde_json::to_string_pretty(&verdict)?);
            let ok = matches!(verdict.class, PolicyClass::StrongCyclic | PolicyClass::StrongAcyclic);
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }
        Command::Bench { manifest, flags, csv_out, records_out } => {
            let settings = flags.settings()?;
            let report = run_suite(&manifest, &settings)?;
            for record in &report.records {
                let detail = match (&record.policy_size, &record.error) {
                    (Some(size), _) => format!("{size} entries"),
                    (None, Some(err)) => err.clone(),
                    _ => String::new(),
                };
                println!(
                    "{:<24} {:<16} {:>6} ms  {}  {}",
                    format!("{}/{}", record.domain, record.problem),
                    format!("{:?}", record.status),
                    record.wall_ms,
                    record.config.ordering,
                    detail
                );
            }
            println!();
            print!("{}", report.summary);
            if let Some(path) = &csv_out {
                std::fs::write(path, cactus_csv(&report.records))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(path) = &records_out {
                std::fs::write(path, serde_json::to_string_pretty(&report.records)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ground { domain, problem, dump } => {
            let task = load_task(&domain, &problem)?;
            if dump {
                print!("{}", task.dump());
            } else {
                println!(
                    "{} atoms, {} actions ({} schemas)",
                    task.num_atoms(),
                    task.actions.len(),
                    task.schemas.len()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Determinize { domain, problem, flags, list } => {
            let settings = flags.settings()?;
            let task = load_task(&domain, &problem)?;
            let delta = compile(task, settings.determinize_options())?;
            println!(
                "{} members: {} single-outcome (of {} uncapped) + all-outcome",
                delta.len(),
                delta.single_outcome_count(),
                delta.uncapped_product()
            );
            if list {
                for i in 0..delta.len() {
                    println!("{}", delta.describe(i)?);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_policy(path: &Path, policy: &fondkit::solver::Policy, task: &fondkit::ground::GroundTask) -> Result<()> {
    let rendered = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => policy_to_json(policy, task),
        Some("dot") => policy_to_dot(policy, task),
        _ => bail!("policy output must end in .json or .dot"),
    };
    std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

//! Shared plumbing for the `fondkit` command line: settings, task loading,
//! and the benchmark harness.

pub mod bench;

use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};

use fondkit::determinize::{DeterminizeOptions, EffectOrdering, OrderKey};
use fondkit::ground::{ground, GroundTask};
use fondkit::pddl::{parse_domain, parse_problem};
use fondkit::search::{SearchBudget, Strategy};
use fondkit::solver::SolveConfig;

/// Everything a solve run needs, assembled from CLI flags or a suite entry.
#[derive(Debug, Clone)]
pub struct PlannerSettings {
    pub ordering: EffectOrdering,
    pub order_key: OrderKey,
    pub cap: usize,
    pub ndp2: bool,
    pub strategies: Vec<Strategy>,
    pub budget: SearchBudget,
    pub debug_checks: bool,
}

impl Default for PlannerSettings {
    fn default() -> Self {
        PlannerSettings {
            ordering: EffectOrdering::Descending,
            order_key: OrderKey::LiteralCount,
            cap: 64,
            ndp2: false,
            strategies: vec![Strategy::AStarHMax, Strategy::GbfsHAdd],
            budget: SearchBudget::with_wall(Duration::from_secs(60)),
            debug_checks: false,
        }
    }
}

impl PlannerSettings {
    pub fn determinize_options(&self) -> DeterminizeOptions {
        DeterminizeOptions {
            ordering: self.ordering,
            order_key: self.order_key,
            cap: self.cap,
            all_outcome_only: self.ndp2,
        }
    }

    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig {
            strategies: self.strategies.clone(),
            budget: self.budget,
            debug_checks: self.debug_checks,
            record_images: false,
        }
    }

    pub fn strategy_names(&self) -> Vec<String> {
        self.strategies
            .iter()
            .map(|s| match s {
                Strategy::AStarHMax => "astar".to_string(),
                Strategy::GbfsHAdd => "gbfs".to_string(),
                Strategy::External(cmd) => format!("external:{cmd}"),
            })
            .collect()
    }
}

pub fn load_task(domain_path: &Path, problem_path: &Path) -> Result<Arc<GroundTask>> {
    let domain_text = std::fs::read_to_string(domain_path)
        .with_context(|| format!("reading {}", domain_path.display()))?;
    let problem_text = std::fs::read_to_string(problem_path)
        .with_context(|| format!("reading {}", problem_path.display()))?;
    let domain = parse_domain(&domain_text)
        .with_context(|| format!("parsing {}", domain_path.display()))?;
    let problem = parse_problem(&problem_text, &domain)
        .with_context(|| format!("parsing {}", problem_path.display()))?;
    Ok(Arc::new(ground(&domain, &problem)?))
}

/// Accepts `90`, `90s`, `30m`, `2h`, or fractional seconds like `0.5s`.
pub fn parse_budget(text: &str) -> Result<Duration> {
    let text = text.trim();
    let (number, unit) = match text.find(|c: char| c.is_ascii_alphabetic()) {
        Some(split) => text.split_at(split),
        None => (text, "s"),
    };
    let value: f64 = number.parse().with_context(|| format!("bad duration `{text}`"))?;
    if !value.is_finite() || value < 0.0 {
        bail!("bad duration `{text}`");
    }
    let secs = match unit {
        "s" | "sec" | "secs" => value,
        "m" | "min" | "mins" => value * 60.0,
        "h" | "hr" | "hrs" => value * 3600.0,
        "ms" => value / 1000.0,
        other => bail!("unknown duration unit `{other}`"),
    };
    Ok(Duration::from_secs_f64(secs))
}

pub fn parse_ordering(text: &str) -> Result<EffectOrdering> {
    match text {
        "desc" | "descending" => Ok(EffectOrdering::Descending),
        "asc" | "ascending" => Ok(EffectOrdering::Ascending),
        other => bail!("unknown ordering `{other}` (expected desc or asc)"),
    }
}

/// Comma-separated strategy list, e.g. `astar,gbfs`.
pub fn parse_strategies(text: &str) -> Result<Vec<Strategy>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        match part.trim() {
            "astar" => out.push(Strategy::AStarHMax),
            "gbfs" => out.push(Strategy::GbfsHAdd),
            "" => {}
            other => bail!("unknown strategy `{other}` (expected astar or gbfs)"),
        }
    }
    if out.is_empty() {
        bail!("at least one strategy is required");
    }
    Ok(out)
}

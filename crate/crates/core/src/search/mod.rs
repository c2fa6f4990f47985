//! Embedded classical planners and the racing combinator.
//!
//! Two complete strategies are shipped: A* with the admissible `h_max`
//! heuristic and greedy best-first search with `h_add` plus systematic
//! duplicate detection. Both prove unsolvability by exhausting the search
//! space, which the replanning loop relies on when concluding deadends;
//! running out of budget is reported as a distinct outcome. An optional
//! adapter runs an external classical planner as a third strategy.

mod engine;
mod external;
mod heuristic;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use crate::determinize::ClassicalTask;
use crate::ground::State;

pub use heuristic::{Combine, Heuristic, INFINITY};

/// Wall-clock and node-expansion limits for one planner invocation.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub wall: Duration,
    pub expansions: u64,
}

impl SearchBudget {
    /// Large enough that desk-scale tasks never exhaust it.
    pub fn generous() -> Self {
        SearchBudget { wall: Duration::from_secs(600), expansions: u64::MAX }
    }

    pub fn with_wall(wall: Duration) -> Self {
        SearchBudget { wall, expansions: u64::MAX }
    }
}

/// An ordered list of classical action ids, applicable in sequence from the
/// queried state and ending in a goal state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<u32>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Three-way planner verdict. `Unsolvable` is an exhaustive proof, never a
/// guess; `BudgetExhausted` means nothing was proven.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Plan(Plan),
    Unsolvable,
    BudgetExhausted,
}

/// Like [`SearchOutcome`] plus early exit on cancellation by a racing peer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RunOutcome {
    Plan(Plan),
    Unsolvable,
    BudgetExhausted,
    Cancelled,
}

impl From<RunOutcome> for SearchOutcome {
    fn from(run: RunOutcome) -> Self {
        match run {
            RunOutcome::Plan(p) => SearchOutcome::Plan(p),
            RunOutcome::Unsolvable => SearchOutcome::Unsolvable,
            // A cancelled run proved nothing, same as running out of budget.
            RunOutcome::BudgetExhausted | RunOutcome::Cancelled => SearchOutcome::BudgetExhausted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// A* with `h_max`; finds shortest plans.
    AStarHMax,
    /// Greedy best-first with `h_add` and full duplicate detection.
    GbfsHAdd,
    /// External planner command; see the adapter protocol in
    /// [`external`](self::external).
    External(String),
}

impl Strategy {
    pub(crate) fn run(
        &self,
        task: &ClassicalTask,
        state: &State,
        budget: &SearchBudget,
        cancel: &AtomicBool,
    ) -> RunOutcome {
        match self {
            Strategy::AStarHMax => engine::best_first(task, state, budget, cancel, engine::Mode::AStarHMax),
            Strategy::GbfsHAdd => engine::best_first(task, state, budget, cancel, engine::Mode::GbfsHAdd),
            Strategy::External(cmd) => external::run(cmd, task, state, budget, cancel),
        }
    }
}

/// A* with `h_max`. Plans are shortest; `Unsolvable` is proven by a closed
/// search space.
pub fn solve_astar(task: &ClassicalTask, state: &State, budget: &SearchBudget) -> SearchOutcome {
    Strategy::AStarHMax.run(task, state, budget, &AtomicBool::new(false)).into()
}

/// Greedy best-first with `h_add`; plans need not be optimal but duplicate
/// detection keeps the search complete.
pub fn solve_gbfs(task: &ClassicalTask, state: &State, budget: &SearchBudget) -> SearchOutcome {
    Strategy::GbfsHAdd.run(task, state, budget, &AtomicBool::new(false)).into()
}

/// Runs every strategy concurrently on the same task; the first definitive
/// answer wins and the rest are cancelled at node-expansion granularity.
/// A plan is returned whenever any strategy alone would find one within
/// budget; `Unsolvable` requires some strategy to have proven it.
pub fn race(
    strategies: &[Strategy],
    task: &ClassicalTask,
    state: &State,
    budget: &SearchBudget,
) -> SearchOutcome {
    assert!(!strategies.is_empty(), "race needs at least one strategy");
    if strategies.len() == 1 {
        return strategies[0].run(task, state, budget, &AtomicBool::new(false)).into();
    }

    let cancel = AtomicBool::new(false);
    let mut winner: Option<SearchOutcome> = None;
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<RunOutcome>();
        for strategy in strategies {
            let tx = tx.clone();
            let cancel = &cancel;
            scope.spawn(move || {
                let outcome = strategy.run(task, state, budget, cancel);
                let _ = tx.send(outcome);
            });
        }
        drop(tx);
        while let Ok(outcome) = rx.recv() {
            match outcome {
                RunOutcome::Plan(_) | RunOutcome::Unsolvable if winner.is_none() => {
                    cancel.store(true, Ordering::Relaxed);
                    winner = Some(outcome.into());
                }
                _ => {}
            }
        }
    });
    winner.unwrap_or(SearchOutcome::BudgetExhausted)
}

/// Replays a plan, returning the visited states (starting after the first
/// action) or `None` when some step is inapplicable or the final state
/// misses the goal.
pub fn validate_plan(task: &ClassicalTask, state: &State, plan: &Plan) -> Option<Vec<State>> {
    let mut current = state.clone();
    let mut trajectory = Vec::with_capacity(plan.steps.len());
    for &step in &plan.steps {
        let action = task.actions.get(step as usize)?;
        if !action.is_applicable(&current) {
            return None;
        }
        current = task.apply(&current, action);
        trajectory.push(current.clone());
    }
    let last = trajectory.last().unwrap_or(&current);
    task.is_goal(last).then_some(trajectory)
}

/// A wall-clock cutoff shared by nested planner calls.
#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    at: Instant,
}

impl Deadline {
    pub fn new(wall: Duration) -> Self {
        Deadline { at: Instant::now() + wall }
    }

    pub fn passed(&self) -> bool {
        Instant::now() >= self.at
    }

    pub fn remaining(&self) -> Duration {
        self.at.saturating_duration_since(Instant::now())
    }
}

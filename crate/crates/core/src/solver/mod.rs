//! The iterative replanning solver for strong cyclic policies.
//!
//! The main loop executes the current policy from the initial state, picks a
//! non-goal terminal, and asks [`make_safe_plan`] for an acyclic policy image
//! at that state that avoids all known deadends. Images are merged into the
//! policy with new actions replacing old ones; when no image exists the
//! terminal is recorded as a deadend and every entry producing it is removed.
//! The inner planner works over the determinization set in order, racing the
//! configured strategies on a constrained copy of each member so that no
//! plan begins with an action already known to cause a cycle or a deadend.
//!
//! Deadend conclusions require proven unsolvability from every member;
//! running out of budget aborts the solve with a distinct outcome instead of
//! corrupting the deadend set.

mod export;
mod policy;

use std::collections::HashSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constrain::constrain;
use crate::determinize::DeterminizationSet;
use crate::ground::State;
use crate::search::{race, Deadline, SearchBudget, SearchOutcome, Strategy};

pub use export::{policy_from_json, policy_to_dot, policy_to_json, ExportError};
pub use policy::{assert_no_inescapable_cycles, execute, Policy};

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub strategies: Vec<Strategy>,
    /// Wall clock for the whole solve; the expansion limit applies per
    /// planner call.
    pub budget: SearchBudget,
    /// Check the no-inescapable-cycles invariant after every iteration.
    pub debug_checks: bool,
    /// Record every policy image for offline inspection of the trace.
    pub record_images: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            strategies: vec![Strategy::AStarHMax, Strategy::GbfsHAdd],
            budget: SearchBudget::generous(),
            debug_checks: false,
            record_images: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Solved(Policy),
    /// No strong cyclic policy avoiding the discovered deadends exists from
    /// the initial state.
    NoSolution,
    BudgetExhausted,
}

/// One step of an acyclic policy image: the classical action is identified
/// by its non-deterministic action and chosen effect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageStep {
    pub state: State,
    pub nd_action: u32,
    pub effect: u16,
}

/// The policy equivalent of a sequential plan: consecutive states are linked
/// by the chosen effects, no state repeats, and the terminal satisfies the
/// goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyImage {
    pub steps: Vec<ImageStep>,
    pub terminal: State,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MspOutcome {
    Image(PolicyImage),
    Failure,
    BudgetExhausted,
}

/// A recorded image together with the deadend set it was asked to avoid;
/// states as sorted atom-id lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageRecord {
    pub theta: Vec<Vec<u32>>,
    pub start: Vec<u32>,
    pub steps: Vec<(Vec<u32>, u32, u16)>,
    pub terminal: Vec<u32>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SolveTrace {
    pub iterations: u64,
    pub planner_calls: u64,
    pub deadends_found: u64,
    pub msp_backtracks: u64,
    pub wall_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub images: Vec<ImageRecord>,
}

impl SolveTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

fn state_ids(state: &State) -> Vec<u32> {
    state.iter().collect()
}

/// Computes a strong cyclic policy for the determinization set's base task,
/// or reports that none exists.
pub fn solve(delta: &DeterminizationSet, config: &SolveConfig) -> (SolveOutcome, SolveTrace) {
    let task = delta.base();
    let started = Instant::now();
    let deadline = Deadline::new(config.budget.wall);
    let mut trace = SolveTrace::default();
    let mut policy = Policy::new();
    let mut theta: HashSet<State> = HashSet::new();

    let outcome = loop {
        trace.iterations += 1;
        if deadline.passed() {
            break SolveOutcome::BudgetExhausted;
        }
        let terminals = execute(&policy, task, &task.init);
        let target = terminals.into_iter().find(|s| !task.is_goal(s));
        let Some(target) = target else {
            break SolveOutcome::Solved(policy);
        };
        match make_safe_plan(delta, &target, &theta, config, &deadline, &mut trace) {
            MspOutcome::Image(image) => {
                if config.record_images {
                    trace.images.push(ImageRecord {
                        theta: theta.iter().map(state_ids).collect(),
                        start: state_ids(&target),
                        steps: image
                            .steps
                            .iter()
                            .map(|s| (state_ids(&s.state), s.nd_action, s.effect))
                            .collect(),
                        terminal: state_ids(&image.terminal),
                    });
                }
                for step in image.steps {
                    policy.insert(step.state, step.nd_action);
                }
            }
            MspOutcome::Failure => {
                if target == task.init {
                    break SolveOutcome::NoSolution;
                }
                theta.insert(target.clone());
                trace.deadends_found = theta.len() as u64;
                let producers: Vec<State> = policy
                    .iter()
                    .filter(|&(state, action)| {
                        task.apply_unchecked(state, task.action(action)).contains(&target)
                    })
                    .map(|(state, _)| state.clone())
                    .collect();
                for state in producers {
                    policy.remove(&state);
                }
            }
            MspOutcome::BudgetExhausted => break SolveOutcome::BudgetExhausted,
        }
        if config.debug_checks {
            assert_no_inescapable_cycles(&policy, task);
        }
    };
    trace.wall_ms = started.elapsed().as_millis() as u64;
    (outcome, trace)
}

/// One node of the image search: a state on the path, the first-step bans
/// accumulated while this node is the frontier, and the edge taken into the
/// next node. Bans die with their frame — a ban only ever encodes "leads to
/// a cycle or deadend *given this prefix*", so letting it outlive the prefix
/// would block routes that are safe in other contexts and lose completeness.
struct Frame {
    state: State,
    banned: HashSet<(u32, u16)>,
    chosen: Option<(u32, u16)>,
    /// Members proven unsolvable under this frame's (growing) ban set.
    ruled_out: HashSet<usize>,
}

impl Frame {
    fn new(state: State) -> Self {
        Frame { state, banned: HashSet::new(), chosen: None, ruled_out: HashSet::new() }
    }
}

/// Builds an acyclic policy image at `start` that avoids `theta`: a
/// depth-first search over simple paths, guided by plans from the
/// determinization members in order. A step whose deterministic successor
/// revisits the path (or leaves the state unchanged), or whose
/// non-deterministic successors touch `theta`, is banned at the frontier and
/// planning restarts there; when every member proves unsolvable at the
/// frontier the search pops one frame and bans the edge that led to it.
/// Failure therefore means no acyclic `theta`-avoiding image exists at
/// `start` at all, which keeps the outer loop's deadend conclusions exact.
pub fn make_safe_plan(
    delta: &DeterminizationSet,
    start: &State,
    theta: &HashSet<State>,
    config: &SolveConfig,
    deadline: &Deadline,
    trace: &mut SolveTrace,
) -> MspOutcome {
    let base = delta.base();
    let mut frames: Vec<Frame> = vec![Frame::new(start.clone())];
    let mut on_path: HashSet<State> = HashSet::from([start.clone()]);
    // Unsolvability proven without any ban is a fact about the state alone
    // and never goes stale.
    let mut unconstrained_unsolvable: HashSet<(usize, State)> = HashSet::new();

    'replan: loop {
        let mut saw_budget_exhaustion = false;
        let frontier = frames.len() - 1;
        for index in 0..delta.len() {
            let current = &frames[frontier];
            if current.ruled_out.contains(&index) {
                continue;
            }
            if current.banned.is_empty()
                && unconstrained_unsolvable.contains(&(index, current.state.clone()))
            {
                continue;
            }
            let member = delta.member(index).expect("index in range");
            let banned_here: Vec<u32> = member
                .actions
                .iter()
                .filter(|a| current.banned.contains(&a.origin))
                .map(|a| a.id)
                .collect();
            let remaining = deadline.remaining();
            if remaining.is_zero() {
                return MspOutcome::BudgetExhausted;
            }
            let call_budget =
                SearchBudget { wall: remaining, expansions: config.budget.expansions };
            trace.planner_calls += 1;
            // An empty ban set constrains nothing; skip the task copy.
            let outcome = if banned_here.is_empty() {
                race(&config.strategies, &member, &current.state, &call_budget)
            } else {
                let constrained = constrain(&member, &current.state, &banned_here);
                race(&config.strategies, &constrained.task, &constrained.state, &call_budget)
            };
            match outcome {
                SearchOutcome::Plan(plan) => {
                    for &step in &plan.steps {
                        let classical = &member.actions[step as usize];
                        let (nd_id, effect) = classical.origin;
                        let state = frames.last().unwrap().state.clone();
                        debug_assert!(classical.is_applicable(&state));
                        let succ = state.apply_effect(&classical.add, &classical.del);
                        let causes_cycle = succ == state || on_path.contains(&succ);
                        let hits_deadend = base
                            .apply_unchecked(&state, base.action(nd_id))
                            .iter()
                            .any(|s| theta.contains(s));
                        if causes_cycle || hits_deadend {
                            frames.last_mut().unwrap().banned.insert((nd_id, effect));
                            continue 'replan;
                        }
                        frames.last_mut().unwrap().chosen = Some((nd_id, effect));
                        on_path.insert(succ.clone());
                        frames.push(Frame::new(succ));
                    }
                    // Whole plan consumed without a break.
                    let terminal = frames.pop().unwrap().state;
                    let steps = frames
                        .into_iter()
                        .map(|f| {
                            let (nd_action, effect) = f.chosen.expect("interior frames have edges");
                            ImageStep { state: f.state, nd_action, effect }
                        })
                        .collect();
                    return MspOutcome::Image(PolicyImage { steps, terminal });
                }
                SearchOutcome::Unsolvable => {
                    let current = &mut frames[frontier];
                    if current.banned.is_empty() {
                        unconstrained_unsolvable.insert((index, current.state.clone()));
                    }
                    current.ruled_out.insert(index);
                }
                SearchOutcome::BudgetExhausted => saw_budget_exhaustion = true,
            }
        }
        if saw_budget_exhaustion {
            // Some member neither produced a plan nor a proof; a failure
            // conclusion would be unsound.
            return MspOutcome::BudgetExhausted;
        }
        // Every member is unsolvable at the frontier: this subtree is empty.
        let exhausted = frames.pop().unwrap();
        on_path.remove(&exhausted.state);
        let Some(parent) = frames.last_mut() else {
            return MspOutcome::Failure;
        };
        trace.msp_backtracks += 1;
        parent.banned.insert(parent.chosen.take().expect("parent chose this edge"));
    }
}

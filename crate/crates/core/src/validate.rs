//! Independent policy classification and a brute-force existence oracle.
//!
//! Nothing here depends on the solver: classification consumes only the
//! ground task and the policy's public data, and the oracle is the textbook
//! backward fixpoint over the explicitly enumerated reachable state space.
//! Together they act as the trusted referee for the solver's soundness and
//! completeness properties.
//!
//! Goal semantics follow the execution function: an execution terminates
//! only at unmapped states, so "reaching the goal" means reaching a
//! goal-satisfying terminal.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::ground::{GroundTask, State};
use crate::solver::Policy;

#[derive(Debug, Error)]
pub enum ValidateError {
    #[error("reachable state space exceeds the bound of {bound} states")]
    StateSpaceExceeded { bound: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyClass {
    NotASolution,
    Weak,
    StrongCyclic,
    StrongAcyclic,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicyVerdict {
    pub class: PolicyClass,
    /// An offending state (unmapped non-goal, inapplicable mapping, or
    /// goal-unreachable) when the policy is not a strong solution.
    pub witness: Option<Vec<String>>,
    pub reachable_states: usize,
}

/// Classifies a policy by building the full policy graph from the initial
/// state: every non-deterministic successor of every mapped state.
///
/// - `strong-acyclic`: every terminal satisfies the goal, every reachable
///   state can reach a goal terminal, and the graph has no cycle;
/// - `strong-cyclic`: the same but with cycles;
/// - `weak`: some execution reaches a goal terminal but not all;
/// - `not-a-solution`: no execution reaches the goal (this includes a
///   mapped action that is inapplicable in its state).
pub fn classify(policy: &Policy, task: &GroundTask) -> PolicyVerdict {
    let mut states: Vec<State> = vec![task.init.clone()];
    let mut index: HashMap<State, usize> = HashMap::from([(task.init.clone(), 0)]);
    let mut successors: Vec<Vec<usize>> = Vec::new();
    let mut broken: Option<usize> = None;

    let mut cursor = 0;
    while cursor < states.len() {
        let state = states[cursor].clone();
        let succs = match policy.get(&state) {
            None => Vec::new(),
            Some(action_id) => {
                let action = task.action(action_id);
                if !action.is_applicable(&state) {
                    broken.get_or_insert(cursor);
                    Vec::new()
                } else {
                    task.apply_unchecked(&state, action)
                        .into_iter()
                        .map(|succ| {
                            *index.entry(succ.clone()).or_insert_with(|| {
                                states.push(succ);
                                states.len() - 1
                            })
                        })
                        .collect()
                }
            }
        };
        successors.push(succs);
        cursor += 1;
    }

    let n = states.len();
    let is_terminal: Vec<bool> = (0..n).map(|i| successors[i].is_empty()).collect();
    let is_goal_terminal: Vec<bool> =
        (0..n).map(|i| is_terminal[i] && task.is_goal(&states[i])).collect();

    // Backward reachability to goal terminals along the policy graph.
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, succs) in successors.iter().enumerate() {
        for &j in succs {
            incoming[j].push(i);
        }
    }
    let mut reaches_goal = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for i in 0..n {
        if is_goal_terminal[i] {
            reaches_goal[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(j) = queue.pop_front() {
        for &i in &incoming[j] {
            if !reaches_goal[i] {
                reaches_goal[i] = true;
                queue.push_back(i);
            }
        }
    }

    let witness_of = |i: usize| Some(task.state_atoms(&states[i]));
    let some_goal_execution = reaches_goal[0];

    if !some_goal_execution {
        let offender = broken
            .or_else(|| (0..n).find(|&i| is_terminal[i] && !is_goal_terminal[i]))
            .unwrap_or(0);
        return PolicyVerdict {
            class: PolicyClass::NotASolution,
            witness: witness_of(offender),
            reachable_states: n,
        };
    }

    let bad_terminal = (0..n).find(|&i| is_terminal[i] && !is_goal_terminal[i]);
    let trapped = (0..n).find(|&i| !reaches_goal[i]);
    if broken.is_some() || bad_terminal.is_some() || trapped.is_some() {
        let offender = broken.or(bad_terminal).or(trapped).unwrap();
        return PolicyVerdict {
            class: PolicyClass::Weak,
            witness: witness_of(offender),
            reachable_states: n,
        };
    }

    // All terminals are goals and every state has a goal path; acyclic iff
    // the graph is a DAG.
    let acyclic = {
        let mut out_deg: Vec<usize> = successors.iter().map(|s| s.len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&i| out_deg[i] == 0).collect();
        let mut removed = 0;
        while let Some(j) = stack.pop() {
            removed += 1;
            for &i in &incoming[j] {
                out_deg[i] -= 1;
                if out_deg[i] == 0 {
                    stack.push(i);
                }
            }
        }
        removed == n
    };
    PolicyVerdict {
        class: if acyclic { PolicyClass::StrongAcyclic } else { PolicyClass::StrongCyclic },
        witness: None,
        reachable_states: n,
    }
}

/// Result of the strong-cyclic existence oracle: whether a strong cyclic
/// policy exists from the initial state, and the maximal set of state/action
/// pairs any such policy can use.
#[derive(Debug)]
pub struct OracleReport {
    pub exists: bool,
    pub maximal_states: HashSet<State>,
    pub reachable_states: usize,
}

/// Exhaustively enumerates the reachable state space and removes
/// state/action pairs to a fixpoint: a pair dies when some outcome leaves
/// the candidate set or when its state loses every path to the goal inside
/// the candidate graph. Existence holds iff the initial state survives (or
/// already satisfies the goal).
pub fn oracle_strong_cyclic(
    task: &GroundTask,
    state_bound: usize,
) -> Result<OracleReport, ValidateError> {
    let mut states: Vec<State> = vec![task.init.clone()];
    let mut index: HashMap<State, usize> = HashMap::from([(task.init.clone(), 0)]);
    let mut cursor = 0;
    while cursor < states.len() {
        let state = states[cursor].clone();
        for action in task.applicable(&state) {
            for succ in task.apply_unchecked(&state, action) {
                if !index.contains_key(&succ) {
                    if states.len() >= state_bound {
                        return Err(ValidateError::StateSpaceExceeded { bound: state_bound });
                    }
                    index.insert(succ.clone(), states.len());
                    states.push(succ);
                }
            }
        }
        cursor += 1;
    }

    let n = states.len();
    let goal: Vec<bool> = states.iter().map(|s| task.is_goal(s)).collect();
    // Applicable pairs on non-goal states, with outcome state indices.
    struct Pair {
        state: usize,
        outcomes: Vec<usize>,
    }
    let mut pairs: Vec<Pair> = Vec::new();
    for (i, state) in states.iter().enumerate() {
        if goal[i] {
            continue;
        }
        for action in task.applicable(state) {
            let outcomes =
                task.apply_unchecked(state, action).iter().map(|s| index[s]).collect();
            pairs.push(Pair { state: i, outcomes });
        }
    }

    // Pairs indexed by outcome state, for linear reachability passes.
    let mut pairs_with_outcome: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (p, pair) in pairs.iter().enumerate() {
        for &o in &pair.outcomes {
            pairs_with_outcome[o].push(p);
        }
    }

    let mut alive: Vec<bool> = vec![true; pairs.len()];
    loop {
        let mut changed = false;

        // Candidate states: goals plus states with a surviving pair.
        let mut candidate = goal.clone();
        for (p, pair) in pairs.iter().enumerate() {
            if alive[p] {
                candidate[pair.state] = true;
            }
        }
        // Drop pairs with an outcome outside the candidate set.
        for (p, pair) in pairs.iter().enumerate() {
            if alive[p] && pair.outcomes.iter().any(|&o| !candidate[o]) {
                alive[p] = false;
                changed = true;
            }
        }

        // Drop pairs whose state cannot reach the goal through surviving
        // pairs (some-outcome reachability), via a backward worklist.
        let mut reaches = goal.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| goal[i]).collect();
        while let Some(state) = queue.pop_front() {
            for &p in &pairs_with_outcome[state] {
                let owner = pairs[p].state;
                if alive[p] && !reaches[owner] {
                    reaches[owner] = true;
                    queue.push_back(owner);
                }
            }
        }
        for (p, pair) in pairs.iter().enumerate() {
            if alive[p] && !reaches[pair.state] {
                alive[p] = false;
                changed = true;
            }
        }

        if !changed {
            break;
        }
    }

    let mut maximal_states: HashSet<State> = HashSet::new();
    for (p, pair) in pairs.iter().enumerate() {
        if alive[p] {
            maximal_states.insert(states[pair.state].clone());
        }
    }
    let exists = goal[0] || maximal_states.contains(&task.init);
    Ok(OracleReport { exists, maximal_states, reachable_states: n })
}

pub const DEFAULT_ORACLE_BOUND: usize = 1 << 16;

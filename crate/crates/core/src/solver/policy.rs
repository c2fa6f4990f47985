//! Policies and their execution function.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::ground::{GroundTask, State};

/// A mapping from unique states to non-deterministic action ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Policy {
    entries: HashMap<State, u32>,
}

impl Policy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, state: &State) -> Option<u32> {
        self.entries.get(state).copied()
    }

    pub fn contains(&self, state: &State) -> bool {
        self.entries.contains_key(state)
    }

    /// Inserts or replaces the action mapped at `state`.
    pub fn insert(&mut self, state: State, action: u32) {
        self.entries.insert(state, action);
    }

    pub fn remove(&mut self, state: &State) {
        self.entries.remove(state);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, u32)> {
        self.entries.iter().map(|(s, &a)| (s, a))
    }

    /// Entries in canonical state order, for deterministic output.
    pub fn sorted_entries(&self) -> Vec<(State, u32)> {
        let mut out: Vec<(State, u32)> = self.entries.iter().map(|(s, &a)| (s.clone(), a)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// The execution function Σ: terminal states reached by following the policy
/// from `start`, in breadth-first discovery order. A start state with no
/// mapped action is its own terminal; in particular the empty policy yields
/// `{start}`.
pub fn execute(policy: &Policy, task: &GroundTask, start: &State) -> Vec<State> {
    if !policy.contains(start) {
        return vec![start.clone()];
    }
    let mut terminals = Vec::new();
    let mut visited: HashSet<State> = HashSet::from([start.clone()]);
    let mut queue: VecDeque<State> = VecDeque::from([start.clone()]);
    while let Some(state) = queue.pop_front() {
        let action = task.action(policy.get(&state).unwrap());
        for succ in task.apply_unchecked(&state, action) {
            if !visited.insert(succ.clone()) {
                continue;
            }
            if policy.contains(&succ) {
                queue.push_back(succ);
            } else {
                terminals.push(succ);
            }
        }
    }
    terminals
}

/// Asserts that no state mapped by the policy is trapped in an inescapable
/// cycle: every mapped state must reach some unmapped state by following
/// policy transitions. Used as a per-iteration debug check.
pub fn assert_no_inescapable_cycles(policy: &Policy, task: &GroundTask) {
    let states: Vec<State> = policy.iter().map(|(s, _)| s.clone()).collect();
    let index: HashMap<&State, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
    let mut escapes = vec![false; states.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (i, state) in states.iter().enumerate() {
        let action = task.action(policy.get(state).unwrap());
        for succ in task.apply_unchecked(state, action) {
            match index.get(&succ) {
                Some(&j) => incoming[j].push(i),
                None => {
                    if !escapes[i] {
                        escapes[i] = true;
                        queue.push_back(i);
                    }
                }
            }
        }
    }
    while let Some(j) = queue.pop_front() {
        for &i in &incoming[j] {
            if !escapes[i] {
                escapes[i] = true;
                queue.push_back(i);
            }
        }
    }
    for (i, ok) in escapes.iter().enumerate() {
        assert!(
            ok,
            "inescapable cycle: policy state {:?} cannot reach a terminal",
            task.state_atoms(&states[i])
        );
    }
}

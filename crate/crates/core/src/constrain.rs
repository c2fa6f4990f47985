//! Rewrites a classical task so a given action set cannot begin any plan.
//!
//! For every banned ground action `n(c1,…,ck)` a fresh marker atom
//! `disallowed_n(c1,…,ck)` is added to the state and to that action's
//! negative precondition, and every action in the task deletes every marker.
//! Plans therefore cannot start with a banned action, but may use one from
//! the second step onward, and the rewrite never interferes with the
//! original atoms. Banned actions sharing a name (outcome variants of one
//! non-deterministic action) share a marker.

use std::collections::HashMap;

use crate::determinize::{ClassicalAction, ClassicalTask};
use crate::ground::State;

/// A one-shot constrained task: used for a single planner invocation, then
/// discarded. Atom ids below the original width are unchanged.
#[derive(Debug)]
pub struct ConstrainedTask {
    pub task: ClassicalTask,
    pub state: State,
    pub banned: Vec<u32>,
}

impl ConstrainedTask {
    /// Width of the unconstrained atom table.
    pub fn base_atoms(&self) -> usize {
        self.task.num_atoms() - self.marker_count()
    }

    pub fn marker_count(&self) -> usize {
        self.task
            .atoms
            .iter()
            .filter(|a| a.starts_with("(disallowed_") || a.starts_with("disallowed_"))
            .count()
    }
}

fn marker_name(action: &ClassicalAction) -> String {
    match action.name.strip_prefix('(') {
        Some(inner) => format!("(disallowed_{inner}"),
        None => format!("disallowed_{}", action.name),
    }
}

pub fn constrain(task: &ClassicalTask, state: &State, banned: &[u32]) -> ConstrainedTask {
    debug_assert!(banned.iter().all(|&b| (b as usize) < task.actions.len()));
    if banned.is_empty() {
        return ConstrainedTask { task: task.clone(), state: state.clone(), banned: Vec::new() };
    }

    let mut atoms = task.atoms.clone();
    let mut marker_of: HashMap<String, u32> = HashMap::new();
    for &b in banned {
        let name = marker_name(&task.actions[b as usize]);
        marker_of.entry(name.clone()).or_insert_with(|| {
            atoms.push(name);
            (atoms.len() - 1) as u32
        });
    }
    let width = atoms.len();
    let mut all_markers = State::empty(width);
    for &m in marker_of.values() {
        all_markers.insert(m);
    }

    let actions = task
        .actions
        .iter()
        .map(|a| {
            let mut pre_neg = a.pre_neg.widened(width);
            if banned.contains(&a.id) {
                pre_neg.insert(marker_of[&marker_name(a)]);
            }
            let mut del = a.del.widened(width);
            del.union_with(&all_markers);
            ClassicalAction {
                id: a.id,
                name: a.name.clone(),
                pre_pos: a.pre_pos.widened(width),
                pre_neg,
                add: a.add.widened(width),
                del,
                origin: a.origin,
            }
        })
        .collect();

    let mut constrained_state = state.widened(width);
    constrained_state.union_with(&all_markers);

    ConstrainedTask {
        task: ClassicalTask {
            atoms,
            actions,
            goal_pos: task.goal_pos.widened(width),
            goal_neg: task.goal_neg.widened(width),
            kind: task.kind,
        },
        state: constrained_state,
        banned: banned.to_vec(),
    }
}

//! Policy serialization: a JSON list of state/action/successor records and a
//! GraphViz rendering of the policy graph.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ground::{GroundTask, State};

use super::Policy;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("malformed policy JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    state: Vec<String>,
    action: Option<String>,
    successors: Vec<usize>,
}

/// Policy states in canonical order followed by the terminal states they can
/// produce, with each node's successor indices.
fn graph(policy: &Policy, task: &GroundTask) -> (Vec<State>, Vec<Option<u32>>, Vec<Vec<usize>>) {
    let mut nodes: Vec<State> = policy.sorted_entries().into_iter().map(|(s, _)| s).collect();
    let mut index: HashMap<State, usize> =
        nodes.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut terminals: Vec<State> = Vec::new();
    for (state, action) in policy.sorted_entries() {
        for succ in task.apply_unchecked(&state, task.action(action)) {
            if !index.contains_key(&succ) && !terminals.contains(&succ) {
                terminals.push(succ);
            }
        }
    }
    terminals.sort();
    for t in terminals {
        index.insert(t.clone(), nodes.len());
        nodes.push(t);
    }

    let mut actions: Vec<Option<u32>> = Vec::with_capacity(nodes.len());
    let mut successors: Vec<Vec<usize>> = Vec::with_capacity(nodes.len());
    for node in &nodes {
        match policy.get(node) {
            Some(action) => {
                actions.push(Some(action));
                successors.push(
                    task.apply_unchecked(node, task.action(action))
                        .iter()
                        .map(|s| index[s])
                        .collect(),
                );
            }
            None => {
                actions.push(None);
                successors.push(Vec::new());
            }
        }
    }
    (nodes, actions, successors)
}

pub fn policy_to_json(policy: &Policy, task: &GroundTask) -> String {
    let (nodes, actions, successors) = graph(policy, task);
    let entries: Vec<EntryJson> = nodes
        .iter()
        .zip(&actions)
        .zip(&successors)
        .map(|((state, action), succs)| EntryJson {
            state: task.state_atoms(state),
            action: action.map(|a| task.action(a).name.clone()),
            successors: succs.clone(),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("policy serializes")
}

pub fn policy_from_json(text: &str, task: &GroundTask) -> Result<Policy, ExportError> {
    let entries: Vec<EntryJson> = serde_json::from_str(text)?;
    let atom_index: HashMap<&str, u32> =
        task.atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i as u32)).collect();
    let action_index: HashMap<&str, u32> =
        task.actions.iter().map(|a| (a.name.as_str(), a.id)).collect();
    let mut policy = Policy::new();
    for entry in &entries {
        let Some(action_name) = &entry.action else { continue };
        let action = *action_index
            .get(action_name.as_str())
            .ok_or_else(|| ExportError::UnknownAction(action_name.clone()))?;
        let mut state = State::empty(task.num_atoms());
        for atom in &entry.state {
            let id = *atom_index
                .get(atom.as_str())
                .ok_or_else(|| ExportError::UnknownAtom(atom.clone()))?;
            state.insert(id);
        }
        policy.insert(state, action);
    }
    Ok(policy)
}

/// GraphViz rendering: one node per policy state and reachable terminal,
/// edges labeled by the applied action, goal states doubly circled, the
/// initial state drawn bold.
pub fn policy_to_dot(policy: &Policy, task: &GroundTask) -> String {
    let (nodes, actions, successors) = graph(policy, task);
    let mut out = String::from("digraph policy {\n  rankdir=LR;\n  node [shape=box];\n");
    for (i, state) in nodes.iter().enumerate() {
        let atoms = task.state_atoms(state);
        let label = if atoms.is_empty() { "{}".to_string() } else { atoms.join("\\n") };
        let mut attrs = format!("label=\"{}\"", label.replace('"', "\\\""));
        if task.is_goal(state) {
            attrs.push_str(", peripheries=2");
        }
        if *state == task.init {
            attrs.push_str(", penwidth=2");
        }
        out.push_str(&format!("  n{i} [{attrs}];\n"));
    }
    for (i, (action, succs)) in actions.iter().zip(&successors).enumerate() {
        if let Some(action) = action {
            let name = task.action(*action).name.replace('"', "\\\"");
            for &j in succs {
                out.push_str(&format!("  n{i} -> n{j} [label=\"{name}\"];\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

//! Best-first search core shared by the A* and GBFS strategies.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};

use crate::determinize::ClassicalTask;
use crate::ground::State;

use super::heuristic::{Combine, Heuristic, INFINITY};
use super::{Deadline, Plan, RunOutcome, SearchBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    AStarHMax,
    GbfsHAdd,
}

struct Node {
    state: State,
    g: u32,
    h: u32,
    parent: u32,
    action: u32,
    closed: bool,
}

/// Expands lowest priority first with goal tests at expansion time; ties
/// break FIFO by insertion sequence, so with successors generated in
/// action-id order the lower id wins. States are only ever dropped when the
/// heuristic proves them dead (relaxed unreachability), so an emptied open
/// list is an exhaustive unsolvability proof.
pub fn best_first(
    task: &ClassicalTask,
    start: &State,
    budget: &SearchBudget,
    cancel: &AtomicBool,
    mode: Mode,
) -> RunOutcome {
    if task.is_goal(start) {
        return RunOutcome::Plan(Plan { steps: Vec::new() });
    }
    let combine = match mode {
        Mode::AStarHMax => Combine::Max,
        Mode::GbfsHAdd => Combine::Add,
    };
    let mut heuristic = Heuristic::new(task, combine);
    let deadline = Deadline::new(budget.wall);

    let h0 = heuristic.evaluate(task, start);
    if h0 == INFINITY {
        return RunOutcome::Unsolvable;
    }
    let priority = |g: u32, h: u32| -> u64 {
        match mode {
            Mode::AStarHMax => g as u64 + h as u64,
            Mode::GbfsHAdd => h as u64,
        }
    };

    let mut nodes: Vec<Node> =
        vec![Node { state: start.clone(), g: 0, h: h0, parent: u32::MAX, action: u32::MAX, closed: false }];
    let mut index: HashMap<State, u32> = HashMap::from([(start.clone(), 0)]);
    let mut open: BinaryHeap<Reverse<(u64, u64, u32)>> = BinaryHeap::new();
    let mut seq: u64 = 0;
    open.push(Reverse((priority(0, h0), seq, 0)));

    let mut expansions: u64 = 0;
    while let Some(Reverse((_, _, idx))) = open.pop() {
        let idx = idx as usize;
        if nodes[idx].closed {
            continue;
        }
        nodes[idx].closed = true;

        if task.is_goal(&nodes[idx].state) {
            return RunOutcome::Plan(Plan { steps: extract(&nodes, idx) });
        }
        if cancel.load(Ordering::Relaxed) {
            return RunOutcome::Cancelled;
        }
        expansions += 1;
        if expansions > budget.expansions || deadline.passed() {
            return RunOutcome::BudgetExhausted;
        }

        let state = nodes[idx].state.clone();
        let new_g = nodes[idx].g + 1;
        for action in &task.actions {
            if !action.is_applicable(&state) {
                continue;
            }
            let succ = task.apply(&state, action);
            match index.get(&succ) {
                Some(&existing) => {
                    // A shorter route reopens the node; with the consistent
                    // h_max this cannot fire after closing, and GBFS keeps
                    // its first route.
                    let existing = existing as usize;
                    if mode == Mode::AStarHMax && new_g < nodes[existing].g {
                        nodes[existing].g = new_g;
                        nodes[existing].parent = idx as u32;
                        nodes[existing].action = action.id;
                        nodes[existing].closed = false;
                        seq += 1;
                        open.push(Reverse((priority(new_g, nodes[existing].h), seq, existing as u32)));
                    }
                }
                None => {
                    let h = heuristic.evaluate(task, &succ);
                    if h == INFINITY {
                        continue;
                    }
                    let new_idx = nodes.len() as u32;
                    nodes.push(Node {
                        state: succ.clone(),
                        g: new_g,
                        h,
                        parent: idx as u32,
                        action: action.id,
                        closed: false,
                    });
                    index.insert(succ, new_idx);
                    seq += 1;
                    open.push(Reverse((priority(new_g, h), seq, new_idx)));
                }
            }
        }
    }
    RunOutcome::Unsolvable
}

fn extract(nodes: &[Node], goal: usize) -> Vec<u32> {
    let mut steps = Vec::new();
    let mut cur = goal;
    while nodes[cur].parent != u32::MAX {
        steps.push(nodes[cur].action);
        cur = nodes[cur].parent as usize;
    }
    steps.reverse();
    steps
}

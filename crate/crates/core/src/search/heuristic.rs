//! Delete-relaxation heuristics over classical tasks.
//!
//! Atom costs are computed by a generalized Dijkstra pass over the relaxed
//! task (deletes and negative preconditions ignored, unit action costs).
//! `Max` combines precondition costs by maximum (admissible, consistent);
//! `Add` combines by sum (inadmissible but more informed). Negative goals
//! cost nothing; a relaxed-unreachable positive goal yields `INFINITY`,
//! which is a sound unsolvability proof for the evaluated state.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::determinize::ClassicalTask;
use crate::ground::State;

pub const INFINITY: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Max,
    Add,
}

pub struct Heuristic {
    combine: Combine,
    /// For each atom, the actions with that atom in their positive
    /// precondition.
    dependents: Vec<Vec<u32>>,
    /// Number of positive precondition atoms per action.
    pre_counts: Vec<u32>,
    // scratch, reused across evaluations
    costs: Vec<u32>,
    remaining: Vec<u32>,
    acc: Vec<u32>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
}

impl Heuristic {
    pub fn new(task: &ClassicalTask, combine: Combine) -> Self {
        let mut dependents = vec![Vec::new(); task.num_atoms()];
        let mut pre_counts = vec![0u32; task.actions.len()];
        for action in &task.actions {
            for atom in action.pre_pos.iter() {
                dependents[atom as usize].push(action.id);
            }
            pre_counts[action.id as usize] = action.pre_pos.count() as u32;
        }
        Heuristic {
            combine,
            dependents,
            pre_counts,
            costs: vec![INFINITY; task.num_atoms()],
            remaining: Vec::new(),
            acc: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// Heuristic value of `state` for the task's goal.
    pub fn evaluate(&mut self, task: &ClassicalTask, state: &State) -> u32 {
        self.costs.fill(INFINITY);
        self.remaining.clear();
        self.remaining.extend_from_slice(&self.pre_counts);
        self.acc.clear();
        self.acc.resize(task.actions.len(), 0);
        self.heap.clear();

        for atom in state.iter() {
            self.costs[atom as usize] = 0;
            self.heap.push(Reverse((0, atom)));
        }
        // Actions with no positive precondition fire unconditionally.
        for action in &task.actions {
            if self.pre_counts[action.id as usize] == 0 {
                self.fire(task, action.id);
            }
        }

        while let Some(Reverse((cost, atom))) = self.heap.pop() {
            if cost > self.costs[atom as usize] {
                continue;
            }
            for idx in 0..self.dependents[atom as usize].len() {
                let action = self.dependents[atom as usize][idx];
                let a = action as usize;
                match self.combine {
                    Combine::Max => self.acc[a] = self.acc[a].max(cost),
                    Combine::Add => self.acc[a] = self.acc[a].saturating_add(cost),
                }
                self.remaining[a] -= 1;
                if self.remaining[a] == 0 {
                    self.fire(task, action);
                }
            }
        }

        let mut h: u32 = 0;
        for goal in task.goal_pos.iter() {
            let c = self.costs[goal as usize];
            if c == INFINITY {
                return INFINITY;
            }
            h = match self.combine {
                Combine::Max => h.max(c),
                Combine::Add => h.saturating_add(c),
            };
        }
        h
    }

    fn fire(&mut self, task: &ClassicalTask, action: u32) {
        let total = self.acc[action as usize].saturating_add(1);
        for atom in task.actions[action as usize].add.iter() {
            if total < self.costs[atom as usize] {
                self.costs[atom as usize] = total;
                self.heap.push(Reverse((total, atom)));
            }
        }
    }
}

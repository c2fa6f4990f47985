//! Programmatic construction of ground tasks, used for synthetic corpora and
//! hand-built miniatures in tests.

use std::collections::HashMap;

use super::{Effect, GroundTask, NdGroundAction, SchemaInfo, State};

type ProtoEffects = Vec<(Vec<u32>, Vec<u32>)>;

/// Builds a [`GroundTask`] directly from named atoms. Every action forms its
/// own schema; effect ordering keys are the ground literal counts.
#[derive(Default)]
pub struct TaskBuilder {
    atoms: Vec<String>,
    index: HashMap<String, u32>,
    actions: Vec<(String, Vec<u32>, Vec<u32>, ProtoEffects)>,
    init: Vec<u32>,
    goal_pos: Vec<u32>,
    goal_neg: Vec<u32>,
}

impl TaskBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.atoms.len() as u32;
        self.index.insert(name.to_string(), id);
        self.atoms.push(name.to_string());
        id
    }

    fn atom_ids(&mut self, names: &[&str]) -> Vec<u32> {
        names.iter().map(|n| self.atom(n)).collect()
    }

    pub fn init(&mut self, atoms: &[&str]) -> &mut Self {
        self.init = self.atom_ids(atoms);
        self
    }

    pub fn goal(&mut self, pos: &[&str], neg: &[&str]) -> &mut Self {
        self.goal_pos = self.atom_ids(pos);
        self.goal_neg = self.atom_ids(neg);
        self
    }

    /// Adds an action with the given precondition and one `(add, del)` pair
    /// per non-deterministic outcome. Returns the action id.
    pub fn action(
        &mut self,
        name: &str,
        pre_pos: &[&str],
        pre_neg: &[&str],
        effects: &[(&[&str], &[&str])],
    ) -> u32 {
        assert!(!effects.is_empty(), "action `{name}` needs at least one effect");
        let pre_pos = self.atom_ids(pre_pos);
        let pre_neg = self.atom_ids(pre_neg);
        assert!(
            pre_pos.iter().all(|a| !pre_neg.contains(a)),
            "action `{name}` has contradictory preconditions"
        );
        let effs: Vec<(Vec<u32>, Vec<u32>)> = effects
            .iter()
            .map(|(add, del)| {
                let add = self.atom_ids(add);
                let del = self.atom_ids(del);
                assert!(
                    add.iter().all(|a| !del.contains(a)),
                    "action `{name}` adds and deletes the same atom"
                );
                (add, del)
            })
            .collect();
        let id = self.actions.len() as u32;
        self.actions.push((name.to_string(), pre_pos, pre_neg, effs));
        id
    }

    pub fn build(&self) -> GroundTask {
        let n = self.atoms.len();
        let to_state = |ids: &[u32]| State::from_atoms(n, ids.iter().copied());
        let mut actions = Vec::with_capacity(self.actions.len());
        let mut schemas = Vec::with_capacity(self.actions.len());
        for (i, (name, pre_pos, pre_neg, effs)) in self.actions.iter().enumerate() {
            schemas.push(SchemaInfo {
                name: name.clone(),
                effect_sizes: effs.iter().map(|(a, d)| a.len() + d.len()).collect(),
            });
            actions.push(NdGroundAction {
                id: i as u32,
                name: name.clone(),
                pre_pos: to_state(pre_pos),
                pre_neg: to_state(pre_neg),
                effects: effs
                    .iter()
                    .map(|(a, d)| Effect { add: to_state(a), del: to_state(d) })
                    .collect(),
                schema: i,
            });
        }
        GroundTask {
            atoms: self.atoms.clone(),
            actions,
            schemas,
            init: to_state(&self.init),
            goal_pos: to_state(&self.goal_pos),
            goal_neg: to_state(&self.goal_neg),
        }
    }
}

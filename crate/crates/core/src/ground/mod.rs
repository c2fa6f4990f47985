//! Grounding of schematic FOND domains into indexed tasks.
//!
//! States are bitsets over a dense atom table. Grounding enumerates all
//! type-consistent operator instantiations, resolves equality and static
//! preconditions at instantiation time, and prunes actions that can never
//! fire under delete-free reachability from the initial state.

mod builder;
mod grounding;
mod state;

use thiserror::Error;

pub use builder::TaskBuilder;
pub use grounding::{ground, ground_with, GroundOptions};
pub use state::State;

#[derive(Debug, Error)]
pub enum GroundError {
    #[error("grounding produced more than {cap} actions")]
    TooManyActions { cap: usize },
    #[error("action `{action}` is not applicable in the given state")]
    NotApplicable { action: String },
}

/// One non-deterministic outcome of a ground action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Effect {
    pub add: State,
    pub del: State,
}

/// A ground instance of a non-deterministic operator. `schema` indexes the
/// originating operator schema in [`GroundTask::schemas`], and the position
/// of each effect matches the schema's effect list.
#[derive(Debug, Clone)]
pub struct NdGroundAction {
    pub id: u32,
    pub name: String,
    pub pre_pos: State,
    pub pre_neg: State,
    pub effects: Vec<Effect>,
    pub schema: usize,
}

impl NdGroundAction {
    pub fn is_applicable(&self, state: &State) -> bool {
        self.pre_pos.is_subset(state) && self.pre_neg.is_disjoint(state)
    }
}

/// Per-schema metadata needed by the determinizer: the literal size of each
/// lifted effect, used as the ordering key when ranking compiled domains.
#[derive(Debug, Clone)]
pub struct SchemaInfo {
    pub name: String,
    pub effect_sizes: Vec<usize>,
}

/// A grounded FOND task: atom table, ground actions, initial state and goal.
#[derive(Debug, Clone)]
pub struct GroundTask {
    pub atoms: Vec<String>,
    pub actions: Vec<NdGroundAction>,
    pub schemas: Vec<SchemaInfo>,
    pub init: State,
    pub goal_pos: State,
    pub goal_neg: State,
}

impl GroundTask {
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_goal(&self, state: &State) -> bool {
        self.goal_pos.is_subset(state) && self.goal_neg.is_disjoint(state)
    }

    pub fn action(&self, id: u32) -> &NdGroundAction {
        &self.actions[id as usize]
    }

    /// The state-transition function: one successor per effect, duplicates
    /// merged. Errors when the action is not applicable.
    pub fn apply(&self, state: &State, action: &NdGroundAction) -> Result<Vec<State>, GroundError> {
        if !action.is_applicable(state) {
            return Err(GroundError::NotApplicable { action: action.name.clone() });
        }
        Ok(self.apply_unchecked(state, action))
    }

    /// Successor set without the applicability check; callers guard it.
    pub fn apply_unchecked(&self, state: &State, action: &NdGroundAction) -> Vec<State> {
        let mut out: Vec<State> = Vec::with_capacity(action.effects.len());
        for eff in &action.effects {
            let succ = state.apply_effect(&eff.add, &eff.del);
            if !out.contains(&succ) {
                out.push(succ);
            }
        }
        out
    }

    /// Actions applicable in `state`, in id order.
    pub fn applicable<'a>(
        &'a self,
        state: &'a State,
    ) -> impl Iterator<Item = &'a NdGroundAction> + 'a {
        self.actions.iter().filter(move |a| a.is_applicable(state))
    }

    /// Renders a state as its sorted atom texts.
    pub fn state_atoms(&self, state: &State) -> Vec<String> {
        state.iter().map(|i| self.atoms[i as usize].clone()).collect()
    }

    /// One atom or action per line; the format diffed against reference
    /// grounders in tests and exposed behind `ground --dump`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            out.push_str(&format!("atom {i} {atom}\n"));
        }
        let fmt_ids = |s: &State| {
            s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        out.push_str(&format!("init {}\n", fmt_ids(&self.init)));
        out.push_str(&format!("goal +[{}] -[{}]\n", fmt_ids(&self.goal_pos), fmt_ids(&self.goal_neg)));
        for a in &self.actions {
            out.push_str(&format!(
                "action {} {} pre +[{}] -[{}]",
                a.id,
                a.name,
                fmt_ids(&a.pre_pos),
                fmt_ids(&a.pre_neg)
            ));
            for eff in &a.effects {
                out.push_str(&format!(" eff add[{}] del[{}]", fmt_ids(&eff.add), fmt_ids(&eff.del)));
            }
            out.push('\n');
        }
        out
    }
}

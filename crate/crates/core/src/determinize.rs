//! Compilation of a FOND task into an ordered set of classical tasks.
//!
//! Each single-outcome member fixes one effect per non-deterministic operator
//! schema (deterministic schemas contribute no branching); the all-outcome
//! member, in which every effect becomes its own action, is always appended
//! last so completeness never depends on the cap. Members are ranked by an
//! ordering heuristic over effect sizes and materialized lazily.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::ground::{GroundTask, State};

#[derive(Debug, Error)]
pub enum DeterminizeError {
    #[error("cap of 0 single-outcome members requires all-outcome-only mode")]
    ZeroCap,
    #[error("member index {index} out of range: the set has {len} members")]
    OutOfRange { index: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectOrdering {
    /// Larger effects first (the default).
    Descending,
    Ascending,
}

/// What "larger" means when ranking. The literal-count key orders each
/// schema's effects by `|e+| + |e-|`; the effect-count key instead ranks
/// whole schemas by their number of effects. The latter is experimental and
/// hidden behind a CLI flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKey {
    LiteralCount,
    EffectCount,
}

#[derive(Debug, Clone, Copy)]
pub struct DeterminizeOptions {
    pub ordering: EffectOrdering,
    pub order_key: OrderKey,
    /// Maximum number of single-outcome members to enumerate.
    pub cap: usize,
    /// Skip single-outcome members entirely, leaving only the all-outcome
    /// task; this reproduces a plain all-outcome replanner.
    pub all_outcome_only: bool,
}

impl Default for DeterminizeOptions {
    fn default() -> Self {
        DeterminizeOptions {
            ordering: EffectOrdering::Descending,
            order_key: OrderKey::LiteralCount,
            cap: 64,
            all_outcome_only: false,
        }
    }
}

/// A deterministic ground action: one effect, with a back-reference to the
/// non-deterministic action and effect index it was compiled from.
#[derive(Debug, Clone)]
pub struct ClassicalAction {
    pub id: u32,
    pub name: String,
    pub pre_pos: State,
    pub pre_neg: State,
    pub add: State,
    pub del: State,
    pub origin: (u32, u16),
}

impl ClassicalAction {
    pub fn is_applicable(&self, state: &State) -> bool {
        self.pre_pos.is_subset(state) && self.pre_neg.is_disjoint(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberKind {
    SingleOutcome,
    AllOutcome,
}

/// A classical planning task over the same atom table as its base FOND task.
#[derive(Debug, Clone)]
pub struct ClassicalTask {
    pub atoms: Vec<String>,
    pub actions: Vec<ClassicalAction>,
    pub goal_pos: State,
    pub goal_neg: State,
    pub kind: MemberKind,
}

impl ClassicalTask {
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_goal(&self, state: &State) -> bool {
        self.goal_pos.is_subset(state) && self.goal_neg.is_disjoint(state)
    }

    pub fn apply(&self, state: &State, action: &ClassicalAction) -> State {
        debug_assert!(action.is_applicable(state));
        state.apply_effect(&action.add, &action.del)
    }
}

struct BranchingSchema {
    schema: usize,
    /// Effect indices in ranked order.
    effect_order: Vec<u16>,
    /// Runs of equal ordering key within `effect_order`, as (offset, len).
    groups: Vec<(usize, usize)>,
}

/// The ordered set Δ of compiled classical tasks.
pub struct DeterminizationSet {
    base: Arc<GroundTask>,
    options: DeterminizeOptions,
    branching: Vec<BranchingSchema>,
    /// Effect choice per branching schema, one row per single-outcome member.
    choices: Vec<Vec<u16>>,
    memo: Mutex<HashMap<usize, Arc<ClassicalTask>>>,
}

/// Compiles `task` into its ordered determinization set.
pub fn compile(
    task: Arc<GroundTask>,
    options: DeterminizeOptions,
) -> Result<DeterminizationSet, DeterminizeError> {
    if options.cap == 0 && !options.all_outcome_only {
        return Err(DeterminizeError::ZeroCap);
    }

    let mut branching: Vec<BranchingSchema> = task
        .schemas
        .iter()
        .enumerate()
        .filter(|(_, s)| s.effect_sizes.len() >= 2)
        .map(|(schema, info)| {
            let m = info.effect_sizes.len();
            let mut effect_order: Vec<u16> = (0..m as u16).collect();
            let mut groups = Vec::new();
            match options.order_key {
                OrderKey::LiteralCount => {
                    effect_order.sort_by_key(|&e| {
                        let size = info.effect_sizes[e as usize] as i64;
                        let primary = match options.ordering {
                            EffectOrdering::Descending => -size,
                            EffectOrdering::Ascending => size,
                        };
                        (primary, e)
                    });
                    let mut start = 0;
                    for i in 1..=m {
                        if i == m
                            || info.effect_sizes[effect_order[i] as usize]
                                != info.effect_sizes[effect_order[start] as usize]
                        {
                            groups.push((start, i - start));
                            start = i;
                        }
                    }
                }
                OrderKey::EffectCount => {
                    // Declaration order; every effect is its own group.
                    groups = (0..m).map(|i| (i, 1)).collect();
                }
            }
            BranchingSchema { schema, effect_order, groups }
        })
        .collect();

    if options.order_key == OrderKey::EffectCount {
        branching.sort_by_key(|b| {
            let m = task.schemas[b.schema].effect_sizes.len() as i64;
            let primary = match options.ordering {
                EffectOrdering::Descending => -m,
                EffectOrdering::Ascending => m,
            };
            (primary, b.schema)
        });
    }

    let choices = if options.all_outcome_only {
        Vec::new()
    } else {
        enumerate_choices(&branching, options.cap)
    };

    Ok(DeterminizationSet { base: task, options, branching, choices, memo: Mutex::new(HashMap::new()) })
}

/// Streams the first `cap` members of the choice product in key-lexicographic
/// order (ties between equal keys broken by declaration order), without
/// enumerating the whole product.
fn enumerate_choices(branching: &[BranchingSchema], cap: usize) -> Vec<Vec<u16>> {
    fn bump(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
        for i in (0..digits.len()).rev() {
            digits[i] += 1;
            if digits[i] < radix(i) {
                return true;
            }
            digits[i] = 0;
        }
        false
    }

    let n = branching.len();
    let mut out: Vec<Vec<u16>> = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut group_tuple = vec![0usize; n];
    'all: loop {
        let mut pos = vec![0usize; n];
        loop {
            let coord: Vec<u16> = (0..n)
                .map(|i| {
                    let (offset, _) = branching[i].groups[group_tuple[i]];
                    branching[i].effect_order[offset + pos[i]]
                })
                .collect();
            out.push(coord);
            if out.len() >= cap {
                break 'all;
            }
            if !bump(&mut pos, |i| branching[i].groups[group_tuple[i]].1) {
                break;
            }
        }
        if !bump(&mut group_tuple, |i| branching[i].groups.len()) {
            break;
        }
    }
    out
}

impl DeterminizationSet {
    pub fn base(&self) -> &Arc<GroundTask> {
        &self.base
    }

    pub fn options(&self) -> &DeterminizeOptions {
        &self.options
    }

    /// Total member count including the trailing all-outcome task.
    pub fn len(&self) -> usize {
        self.choices.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn single_outcome_count(&self) -> usize {
        self.choices.len()
    }

    /// Size of the uncapped single-outcome product, saturating.
    pub fn uncapped_product(&self) -> u128 {
        self.branching.iter().fold(1u128, |acc, b| {
            acc.saturating_mul(self.base.schemas[b.schema].effect_sizes.len() as u128)
        })
    }

    /// Materializes (and memoizes) the index-th member.
    pub fn member(&self, index: usize) -> Result<Arc<ClassicalTask>, DeterminizeError> {
        if index >= self.len() {
            return Err(DeterminizeError::OutOfRange { index, len: self.len() });
        }
        let mut memo = self.memo.lock().unwrap();
        if let Some(task) = memo.get(&index) {
            return Ok(Arc::clone(task));
        }
        let task = Arc::new(if index == self.choices.len() {
            self.build_all_outcome()
        } else {
            self.build_single_outcome(&self.choices[index])
        });
        memo.insert(index, Arc::clone(&task));
        Ok(task)
    }

    pub fn members(&self) -> impl Iterator<Item = Arc<ClassicalTask>> + '_ {
        (0..self.len()).map(|i| self.member(i).unwrap())
    }

    /// The effect index each schema uses in the given single-outcome member.
    pub fn schema_choice(&self, index: usize) -> HashMap<usize, u16> {
        let mut map: HashMap<usize, u16> = HashMap::new();
        for (k, b) in self.branching.iter().enumerate() {
            map.insert(b.schema, self.choices[index][k]);
        }
        map
    }

    fn build_single_outcome(&self, choice: &[u16]) -> ClassicalTask {
        let chosen: HashMap<usize, u16> = self
            .branching
            .iter()
            .enumerate()
            .map(|(k, b)| (b.schema, choice[k]))
            .collect();
        let mut actions = Vec::with_capacity(self.base.actions.len());
        for nd in &self.base.actions {
            let eff_idx = *chosen.get(&nd.schema).unwrap_or(&0);
            let eff = &nd.effects[eff_idx as usize];
            actions.push(ClassicalAction {
                id: actions.len() as u32,
                name: nd.name.clone(),
                pre_pos: nd.pre_pos.clone(),
                pre_neg: nd.pre_neg.clone(),
                add: eff.add.clone(),
                del: eff.del.clone(),
                origin: (nd.id, eff_idx),
            });
        }
        ClassicalTask {
            atoms: self.base.atoms.clone(),
            actions,
            goal_pos: self.base.goal_pos.clone(),
            goal_neg: self.base.goal_neg.clone(),
            kind: MemberKind::SingleOutcome,
        }
    }

    fn build_all_outcome(&self) -> ClassicalTask {
        let mut actions = Vec::new();
        for nd in &self.base.actions {
            for (eff_idx, eff) in nd.effects.iter().enumerate() {
                actions.push(ClassicalAction {
                    id: actions.len() as u32,
                    name: nd.name.clone(),
                    pre_pos: nd.pre_pos.clone(),
                    pre_neg: nd.pre_neg.clone(),
                    add: eff.add.clone(),
                    del: eff.del.clone(),
                    origin: (nd.id, eff_idx as u16),
                });
            }
        }
        ClassicalTask {
            atoms: self.base.atoms.clone(),
            actions,
            goal_pos: self.base.goal_pos.clone(),
            goal_neg: self.base.goal_neg.clone(),
            kind: MemberKind::AllOutcome,
        }
    }

    /// One line per member for `determinize --list`.
    pub fn describe(&self, index: usize) -> Result<String, DeterminizeError> {
        let member = self.member(index)?;
        Ok(match member.kind {
            MemberKind::AllOutcome => {
                format!("member {index}: all-outcome, {} actions", member.actions.len())
            }
            MemberKind::SingleOutcome => {
                let picks: Vec<String> = self
                    .branching
                    .iter()
                    .enumerate()
                    .map(|(k, b)| {
                        format!(
                            "{}={}",
                            self.base.schemas[b.schema].name, self.choices[index][k]
                        )
                    })
                    .collect();
                format!(
                    "member {index}: single-outcome [{}], {} actions",
                    picks.join(" "),
                    member.actions.len()
                )
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::TaskBuilder;

    fn profile_task(effect_counts: &[usize]) -> Arc<GroundTask> {
        let mut b = TaskBuilder::new();
        b.init(&[]);
        b.goal(&["g"], &[]);
        for (i, &m) in effect_counts.iter().enumerate() {
            let atom_names: Vec<String> = (0..m).map(|e| format!("p{i}e{e}")).collect();
            let effects: Vec<(Vec<&str>, Vec<&str>)> =
                atom_names.iter().map(|a| (vec![a.as_str()], Vec::new())).collect();
            let eff_slices: Vec<(&[&str], &[&str])> =
                effects.iter().map(|(a, d)| (a.as_slice(), d.as_slice())).collect();
            b.action(&format!("act{i}"), &[], &[], &eff_slices);
        }
        Arc::new(b.build())
    }

    #[test]
    fn member_count_follows_the_product_formula() {
        let task = profile_task(&[2, 3, 1]);
        let delta = compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap();
        assert_eq!(delta.single_outcome_count(), 6);
        assert_eq!(delta.len(), 7);
        assert_eq!(delta.uncapped_product(), 6);
    }

    #[test]
    fn cap_truncates_but_keeps_all_outcome() {
        let task = profile_task(&[2, 2, 2, 2]);
        let delta =
            compile(Arc::clone(&task), DeterminizeOptions { cap: 5, ..Default::default() }).unwrap();
        assert_eq!(delta.single_outcome_count(), 5);
        assert_eq!(delta.uncapped_product(), 16);
        assert_eq!(delta.member(5).unwrap().kind, MemberKind::AllOutcome);
        assert!(matches!(
            delta.member(6),
            Err(DeterminizeError::OutOfRange { index: 6, len: 6 })
        ));
    }

    #[test]
    fn zero_cap_requires_all_outcome_mode() {
        let task = profile_task(&[2]);
        assert!(matches!(
            compile(Arc::clone(&task), DeterminizeOptions { cap: 0, ..Default::default() }),
            Err(DeterminizeError::ZeroCap)
        ));
        let ndp2 = compile(
            task,
            DeterminizeOptions { cap: 0, all_outcome_only: true, ..Default::default() },
        )
        .unwrap();
        assert_eq!(ndp2.len(), 1);
        assert_eq!(ndp2.member(0).unwrap().kind, MemberKind::AllOutcome);
    }

    #[test]
    fn all_outcome_action_count_is_the_effect_sum() {
        let task = profile_task(&[2, 3, 1, 4]);
        let delta = compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap();
        let all = delta.member(delta.len() - 1).unwrap();
        assert_eq!(all.actions.len(), 2 + 3 + 1 + 4);
        for a in &all.actions {
            let nd = &task.actions[a.origin.0 as usize];
            assert!((a.origin.1 as usize) < nd.effects.len());
        }
    }

    #[test]
    fn single_outcome_members_pick_one_effect_per_action() {
        let task = profile_task(&[2, 3]);
        let delta = compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap();
        for i in 0..delta.single_outcome_count() {
            let member = delta.member(i).unwrap();
            assert_eq!(member.actions.len(), task.actions.len());
        }
    }

    /// Effects that add more literals are chosen by earlier members under the
    /// descending ordering.
    #[test]
    fn descending_picks_larger_effects_first() {
        let mut b = TaskBuilder::new();
        b.init(&["at1"]);
        b.goal(&["at2"], &[]);
        b.action(
            "move",
            &["at1"],
            &[],
            &[(&["at2"], &["at1"]), (&["at2", "flat"], &["at1"])],
        );
        b.action("fix", &["flat"], &[], &[(&[], &["flat"])]);
        let task = Arc::new(b.build());

        let desc = compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap();
        // Member 0 must pick the 3-literal flat-tire outcome (effect 1).
        let first = desc.member(0).unwrap();
        let move_action = first.actions.iter().find(|a| a.name == "move").unwrap();
        assert_eq!(move_action.origin, (0, 1));
        assert_eq!(desc.single_outcome_count(), 2);
        assert_eq!(desc.len(), 3);

        let asc = compile(
            Arc::clone(&task),
            DeterminizeOptions { ordering: EffectOrdering::Ascending, ..Default::default() },
        )
        .unwrap();
        let first = asc.member(0).unwrap();
        let move_action = first.actions.iter().find(|a| a.name == "move").unwrap();
        assert_eq!(move_action.origin, (0, 0));
    }

    /// Effects of action `i` have sizes 1..=m, so ordering keys differ
    /// within every schema.
    fn varied_task(effect_counts: &[usize]) -> Arc<GroundTask> {
        let mut b = TaskBuilder::new();
        b.init(&[]);
        b.goal(&["g"], &[]);
        for (i, &m) in effect_counts.iter().enumerate() {
            let atom_names: Vec<Vec<String>> = (0..m)
                .map(|e| (0..=e).map(|k| format!("p{i}e{e}k{k}")).collect())
                .collect();
            let effects: Vec<(Vec<&str>, Vec<&str>)> = atom_names
                .iter()
                .map(|adds| (adds.iter().map(|s| s.as_str()).collect(), Vec::new()))
                .collect();
            let eff_slices: Vec<(&[&str], &[&str])> =
                effects.iter().map(|(a, d)| (a.as_slice(), d.as_slice())).collect();
            b.action(&format!("act{i}"), &[], &[], &eff_slices);
        }
        Arc::new(b.build())
    }

    fn member_keys(task: &GroundTask, delta: &DeterminizationSet) -> Vec<Vec<usize>> {
        (0..delta.single_outcome_count())
            .map(|idx| {
                let choice = delta.schema_choice(idx);
                let mut schemas: Vec<usize> = choice.keys().copied().collect();
                schemas.sort_unstable();
                schemas
                    .iter()
                    .map(|s| task.schemas[*s].effect_sizes[choice[s] as usize])
                    .collect()
            })
            .collect()
    }

    /// Reversing the flag reverses the relative order of any two
    /// single-outcome members whose key tuples differ.
    #[test]
    fn ordering_flag_reverses_distinct_key_members() {
        let task = varied_task(&[3, 2]);
        let desc = compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap();
        let asc = compile(
            Arc::clone(&task),
            DeterminizeOptions { ordering: EffectOrdering::Ascending, ..Default::default() },
        )
        .unwrap();
        let n = desc.single_outcome_count();
        assert_eq!(n, 6);
        assert_eq!(n, asc.single_outcome_count());
        let desc_keys = member_keys(&task, &desc);
        let asc_keys = member_keys(&task, &asc);
        for i in 0..n {
            for j in (i + 1)..n {
                assert_ne!(desc_keys[i], desc_keys[j]);
                let pi = asc_keys.iter().position(|k| *k == desc_keys[i]).unwrap();
                let pj = asc_keys.iter().position(|k| *k == desc_keys[j]).unwrap();
                assert!(pi > pj, "members {i},{j} not reversed under ascending");
            }
        }
    }

    /// When every key ties, both orderings fall back to declaration order.
    #[test]
    fn tied_keys_keep_declaration_order_in_both_directions() {
        let task = profile_task(&[2, 3]);
        let desc = compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap();
        let asc = compile(
            Arc::clone(&task),
            DeterminizeOptions { ordering: EffectOrdering::Ascending, ..Default::default() },
        )
        .unwrap();
        let order = |d: &DeterminizationSet| -> Vec<Vec<u16>> {
            (0..d.single_outcome_count())
                .map(|i| {
                    let c = d.schema_choice(i);
                    let mut ks: Vec<usize> = c.keys().copied().collect();
                    ks.sort_unstable();
                    ks.iter().map(|k| c[k]).collect()
                })
                .collect()
        };
        assert_eq!(order(&desc), order(&asc));
    }

    #[test]
    fn members_are_memoized_and_shared_across_threads() {
        let task = profile_task(&[2, 2]);
        let delta =
            Arc::new(compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap());
        let first = delta.member(0).unwrap();
        let again = delta.member(0).unwrap();
        assert!(Arc::ptr_eq(&first, &again));

        let handles: Vec<_> = (0..4)
            .map(|_| {
                let delta = Arc::clone(&delta);
                std::thread::spawn(move || {
                    (0..delta.len()).map(|i| delta.member(i).unwrap().actions.len()).sum::<usize>()
                })
            })
            .collect();
        let sums: Vec<usize> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(sums.windows(2).all(|w| w[0] == w[1]));
    }
}

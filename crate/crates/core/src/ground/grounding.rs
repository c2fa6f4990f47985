//! Operator instantiation, static resolution, and reachability pruning.

use std::collections::{HashMap, HashSet};

use crate::pddl::{Domain, Literal, NdOperator, Problem, Term};

use super::{Effect, GroundError, GroundTask, NdGroundAction, SchemaInfo, State};

pub struct GroundOptions {
    /// Abort when instantiation produces more ground actions than this.
    pub action_cap: usize,
    /// Delete-free reachability pruning; disabled only by tests that check
    /// the pruning itself.
    pub prune_unreachable: bool,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { action_cap: 1_000_000, prune_unreachable: true }
    }
}

/// Grounds a parsed domain/problem pair with default options.
pub fn ground(domain: &Domain, problem: &Problem) -> Result<GroundTask, GroundError> {
    ground_with(domain, problem, &GroundOptions::default())
}

struct Interner {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn new() -> Self {
        Interner { names: Vec::new(), index: HashMap::new() }
    }

    fn intern(&mut self, name: String) -> u32 {
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.index.insert(name.clone(), id);
        self.names.push(name);
        id
    }
}

struct ProtoAction {
    name: String,
    pre_pos: Vec<u32>,
    pre_neg: Vec<u32>,
    effects: Vec<(Vec<u32>, Vec<u32>)>,
    schema: usize,
}

fn atom_text(pred: &str, args: &[&str]) -> String {
    if args.is_empty() {
        format!("({pred})")
    } else {
        format!("({pred} {})", args.join(" "))
    }
}

fn instantiate(lit: &Literal, binding: &HashMap<&str, &str>) -> String {
    let args: Vec<&str> = lit
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => binding[v.as_str()],
            Term::Obj(o) => o.as_str(),
        })
        .collect();
    atom_text(&lit.pred, &args)
}

pub fn ground_with(
    domain: &Domain,
    problem: &Problem,
    options: &GroundOptions,
) -> Result<GroundTask, GroundError> {
    let mut interner = Interner::new();

    // Predicates never touched by any effect are static: their preconditions
    // are resolved here and never reach the ground task.
    let mut static_preds: HashSet<&str> = domain.predicates.iter().map(|p| p.name.as_str()).collect();
    for op in &domain.operators {
        for eff in &op.effects {
            for lit in eff {
                static_preds.remove(lit.pred.as_str());
            }
        }
    }

    let init_atoms: HashSet<String> = problem.init.iter().map(|a| a.text()).collect();
    for atom in &problem.init {
        interner.intern(atom.text());
    }
    let goal_pos_names: Vec<u32> = problem
        .goal
        .iter()
        .filter(|l| l.positive)
        .map(|l| interner.intern(l.atom.text()))
        .collect();
    let goal_neg_names: Vec<u32> = problem
        .goal
        .iter()
        .filter(|l| !l.positive)
        .map(|l| interner.intern(l.atom.text()))
        .collect();

    // Objects per operator parameter, honouring the type hierarchy.
    let all_objects: Vec<(&str, &str)> = domain
        .constants
        .iter()
        .chain(problem.objects.iter())
        .map(|o| (o.name.as_str(), o.ty.as_str()))
        .collect();
    let candidates = |ty: &str| -> Vec<&str> {
        all_objects
            .iter()
            .filter(|(_, oty)| domain.is_subtype(oty, ty))
            .map(|(name, _)| *name)
            .collect()
    };

    let mut protos: Vec<ProtoAction> = Vec::new();
    for (schema, op) in domain.operators.iter().enumerate() {
        let domains: Vec<Vec<&str>> = op.params.iter().map(|p| candidates(&p.ty)).collect();
        let mut binding: Vec<&str> = Vec::with_capacity(op.params.len());
        enumerate_bindings(op, schema, &domains, &mut binding, &static_preds, &init_atoms, &mut interner, &mut protos, options.action_cap)?;
    }

    // Delete-free reachability: negative preconditions are optimistically
    // satisfied, so every really reachable atom is relaxed-reachable and the
    // pruning below is sound.
    let keep: Vec<bool> = if options.prune_unreachable {
        let mut reached: HashSet<u32> = problem.init.iter().map(|a| interner.index[&a.text()]).collect();
        let mut fired = vec![false; protos.len()];
        loop {
            let mut changed = false;
            for (i, p) in protos.iter().enumerate() {
                if fired[i] || !p.pre_pos.iter().all(|a| reached.contains(a)) {
                    continue;
                }
                fired[i] = true;
                changed = true;
                for (add, _) in &p.effects {
                    reached.extend(add.iter().copied());
                }
            }
            if !changed {
                break;
            }
        }
        fired
    } else {
        vec![true; protos.len()]
    };

    // Compact the atom table to what init, goal and surviving actions
    // reference, preserving relative id order.
    let mut referenced: HashSet<u32> = HashSet::new();
    referenced.extend(problem.init.iter().map(|a| interner.index[&a.text()]));
    referenced.extend(goal_pos_names.iter().copied());
    referenced.extend(goal_neg_names.iter().copied());
    for (i, p) in protos.iter().enumerate() {
        if !keep[i] {
            continue;
        }
        referenced.extend(p.pre_pos.iter().copied());
        referenced.extend(p.pre_neg.iter().copied());
        for (add, del) in &p.effects {
            referenced.extend(add.iter().copied());
            referenced.extend(del.iter().copied());
        }
    }
    let mut old_ids: Vec<u32> = referenced.into_iter().collect();
    old_ids.sort_unstable();
    let remap: HashMap<u32, u32> = old_ids.iter().enumerate().map(|(new, &old)| (old, new as u32)).collect();
    let atoms: Vec<String> = old_ids.iter().map(|&old| interner.names[old as usize].clone()).collect();
    let n = atoms.len();

    let to_state = |ids: &[u32]| State::from_atoms(n, ids.iter().map(|a| remap[a]));

    let mut actions: Vec<NdGroundAction> = Vec::new();
    for (i, p) in protos.into_iter().enumerate() {
        if !keep[i] {
            continue;
        }
        let effects = p
            .effects
            .iter()
            .map(|(add, del)| Effect { add: to_state(add), del: to_state(del) })
            .collect();
        actions.push(NdGroundAction {
            id: actions.len() as u32,
            name: p.name,
            pre_pos: to_state(&p.pre_pos),
            pre_neg: to_state(&p.pre_neg),
            effects,
            schema: p.schema,
        });
    }

    let schemas = domain
        .operators
        .iter()
        .map(|op| SchemaInfo {
            name: op.name.clone(),
            effect_sizes: op.effects.iter().map(|e| e.len()).collect(),
        })
        .collect();

    let init_ids: Vec<u32> = problem.init.iter().map(|a| interner.index[&a.text()]).collect();
    Ok(GroundTask {
        atoms,
        actions,
        schemas,
        init: to_state(&init_ids),
        goal_pos: to_state(&goal_pos_names),
        goal_neg: to_state(&goal_neg_names),
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_bindings<'a>(
    op: &'a NdOperator,
    schema: usize,
    domains: &[Vec<&'a str>],
    binding: &mut Vec<&'a str>,
    static_preds: &HashSet<&str>,
    init_atoms: &HashSet<String>,
    interner: &mut Interner,
    out: &mut Vec<ProtoAction>,
    cap: usize,
) -> Result<(), GroundError> {
    if binding.len() == domains.len() {
        if let Some(proto) = instantiate_operator(op, schema, binding, static_preds, init_atoms, interner) {
            if out.len() >= cap {
                return Err(GroundError::TooManyActions { cap });
            }
            out.push(proto);
        }
        return Ok(());
    }
    let depth = binding.len();
    for obj in &domains[depth] {
        binding.push(obj);
        enumerate_bindings(op, schema, domains, binding, static_preds, init_atoms, interner, out, cap)?;
        binding.pop();
    }
    Ok(())
}

/// Instantiates one binding. Returns `None` when an equality or static
/// precondition fails or the instantiated precondition is contradictory.
fn instantiate_operator(
    op: &NdOperator,
    schema: usize,
    binding: &[&str],
    static_preds: &HashSet<&str>,
    init_atoms: &HashSet<String>,
    interner: &mut Interner,
) -> Option<ProtoAction> {
    let map: HashMap<&str, &str> = op
        .params
        .iter()
        .map(|p| p.name.as_str())
        .zip(binding.iter().copied())
        .collect();

    let mut pre_pos: Vec<u32> = Vec::new();
    let mut pre_neg: Vec<u32> = Vec::new();
    fn resolve<'a>(t: &'a Term, map: &HashMap<&str, &'a str>) -> &'a str {
        match t {
            Term::Var(v) => map[v.as_str()],
            Term::Obj(o) => o.as_str(),
        }
    }
    for lit in &op.precondition {
        if lit.pred == "=" {
            let eq = resolve(&lit.args[0], &map) == resolve(&lit.args[1], &map);
            if eq != lit.positive {
                return None;
            }
            continue;
        }
        let text = instantiate(lit, &map);
        if static_preds.contains(lit.pred.as_str()) {
            if init_atoms.contains(&text) != lit.positive {
                return None;
            }
            continue;
        }
        let id = interner.intern(text);
        if lit.positive {
            if pre_neg.contains(&id) {
                return None;
            }
            if !pre_pos.contains(&id) {
                pre_pos.push(id);
            }
        } else {
            if pre_pos.contains(&id) {
                return None;
            }
            if !pre_neg.contains(&id) {
                pre_neg.push(id);
            }
        }
    }

    let mut effects: Vec<(Vec<u32>, Vec<u32>)> = Vec::with_capacity(op.effects.len());
    for eff in &op.effects {
        let mut add: Vec<u32> = Vec::new();
        let mut del: Vec<u32> = Vec::new();
        for lit in eff {
            let id = interner.intern(instantiate(lit, &map));
            if lit.positive {
                if !add.contains(&id) {
                    add.push(id);
                }
            } else if !del.contains(&id) {
                del.push(id);
            }
        }
        // `(s - del) ∪ add` makes the add side win; drop the overlap so
        // add and del stay disjoint.
        del.retain(|d| !add.contains(d));
        effects.push((add, del));
    }

    let name = atom_text(&op.name, binding);
    Some(ProtoAction { name, pre_pos, pre_neg, effects, schema })
}

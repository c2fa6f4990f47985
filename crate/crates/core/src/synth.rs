//! Seeded random FOND tasks for property testing and synthetic benchmarks.
//!
//! Tasks are desk-scale by construction (≤ 12 atoms by default) so that
//! exhaustive referees — reachable-state enumeration, the strong-cyclic
//! fixpoint oracle, brute-force plan enumeration — stay cheap. The shape
//! parameters are tuned to produce a healthy mix of solvable and unsolvable
//! instances with genuine deadends.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ground::{GroundTask, TaskBuilder};

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub min_atoms: usize,
    pub max_atoms: usize,
    pub min_actions: usize,
    pub max_actions: usize,
    pub max_effects: usize,
    pub max_goal_atoms: usize,
    pub max_pre_neg: usize,
    pub max_del: usize,
    pub init_density: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            min_atoms: 4,
            max_atoms: 12,
            min_actions: 3,
            max_actions: 20,
            max_effects: 3,
            max_goal_atoms: 2,
            max_pre_neg: 1,
            max_del: 2,
            init_density: 0.35,
        }
    }
}

impl SynthConfig {
    /// Sparse initial states and delete-heavy effects: most tasks grow
    /// absorbing regions, which drives the solver through its deadend
    /// discovery and backtracking paths far more often than the default
    /// shape does. Same size bounds.
    pub fn adversarial() -> Self {
        SynthConfig {
            min_atoms: 6,
            max_pre_neg: 2,
            max_del: 3,
            init_density: 0.2,
            ..Self::default()
        }
    }
}

pub fn random_task(seed: u64, config: &SynthConfig) -> GroundTask {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_atoms = rng.gen_range(config.min_atoms..=config.max_atoms);
    let n_actions = rng.gen_range(config.min_actions..=config.max_actions);
    let names: Vec<String> = (0..n_atoms).map(|i| format!("p{i}")).collect();

    let pick = |rng: &mut ChaCha8Rng, count: usize, exclude: &[u32]| -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for _ in 0..count {
            let a = rng.gen_range(0..n_atoms) as u32;
            if !out.contains(&a) && !exclude.contains(&a) {
                out.push(a);
            }
        }
        out
    };

    let mut b = TaskBuilder::new();
    for name in &names {
        b.atom(name);
    }
    let as_names = |ids: &[u32]| -> Vec<String> { ids.iter().map(|&i| names[i as usize].clone()).collect() };

    let init: Vec<u32> =
        (0..n_atoms as u32).filter(|_| rng.gen_bool(config.init_density)).collect();
    let init_names = as_names(&init);
    b.init(&init_names.iter().map(|s| s.as_str()).collect::<Vec<_>>());

    let goal: Vec<u32> = {
        let want = rng.gen_range(1..=config.max_goal_atoms);
        let mut g = pick(&mut rng, want, &[]);
        if g.is_empty() {
            g.push(rng.gen_range(0..n_atoms) as u32);
        }
        g
    };
    let goal_names = as_names(&goal);
    b.goal(&goal_names.iter().map(|s| s.as_str()).collect::<Vec<_>>(), &[]);

    for i in 0..n_actions {
        let n_pre_pos = rng.gen_range(0..=2);
        let pre_pos = pick(&mut rng, n_pre_pos, &[]);
        let n_pre_neg = rng.gen_range(0..=config.max_pre_neg);
        let pre_neg = pick(&mut rng, n_pre_neg, &pre_pos);
        // Weight toward one or two outcomes; three is the tail.
        let m = match rng.gen_range(0..10) {
            0..=4 => 1,
            5..=7 => 2.min(config.max_effects),
            _ => config.max_effects,
        };
        let mut effects: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        for _ in 0..m {
            let n_add = rng.gen_range(1..=2);
            let add = pick(&mut rng, n_add, &[]);
            let n_del = rng.gen_range(0..=config.max_del);
            let del = pick(&mut rng, n_del, &add);
            effects.push((add, del));
        }
        let pre_pos_names = as_names(&pre_pos);
        let pre_neg_names = as_names(&pre_neg);
        let eff_names: Vec<(Vec<String>, Vec<String>)> =
            effects.iter().map(|(a, d)| (as_names(a), as_names(d))).collect();
        let eff_refs: Vec<(Vec<&str>, Vec<&str>)> = eff_names
            .iter()
            .map(|(a, d)| {
                (a.iter().map(|s| s.as_str()).collect(), d.iter().map(|s| s.as_str()).collect())
            })
            .collect();
        let eff_slices: Vec<(&[&str], &[&str])> =
            eff_refs.iter().map(|(a, d)| (a.as_slice(), d.as_slice())).collect();
        b.action(
            &format!("act{i}"),
            &pre_pos_names.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &pre_neg_names.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &eff_slices,
        );
    }
    b.build()
}

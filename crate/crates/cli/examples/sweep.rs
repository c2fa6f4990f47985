use std::sync::Arc;
use fondkit::determinize::{compile, DeterminizeOptions};
use fondkit::search::{SearchBudget, Strategy};
use fondkit::solver::{solve, SolveConfig, SolveOutcome};
use fondkit::synth::{random_task, SynthConfig};
use fondkit::validate::{classify, oracle_strong_cyclic, PolicyClass, DEFAULT_ORACLE_BOUND};

fn sweep(label: &str, cfg: &SynthConfig, seeds: std::ops::Range<u64>) -> u64 {
    let config = SolveConfig {
        strategies: vec![Strategy::AStarHMax, Strategy::GbfsHAdd],
        budget: SearchBudget::generous(),
        debug_checks: true,
        record_images: false,
    };
    let mut bad = 0u64;
    let (mut solved, mut unsolvable) = (0u64, 0u64);
    for seed in seeds {
        let task = Arc::new(random_task(seed, cfg));
        let delta = compile(Arc::clone(&task), DeterminizeOptions::default()).unwrap();
        let report = oracle_strong_cyclic(&task, DEFAULT_ORACLE_BOUND).unwrap();
        let (outcome, _trace) = solve(&delta, &config);
        match outcome {
            SolveOutcome::Solved(policy) => {
                solved += 1;
                if !report.exists {
                    println!("{label} seed {seed}: SOLVED BUT ORACLE SAYS NO");
                    bad += 1;
                }
                let v = classify(&policy, &task);
                if !matches!(v.class, PolicyClass::StrongCyclic | PolicyClass::StrongAcyclic) {
                    println!("{label} seed {seed}: UNSOUND POLICY {:?}", v.class);
                    bad += 1;
                }
            }
            SolveOutcome::NoSolution => {
                unsolvable += 1;
                if report.exists {
                    println!("{label} seed {seed}: FAILED BUT ORACLE SAYS YES");
                    bad += 1;
                }
            }
            SolveOutcome::BudgetExhausted => {
                println!("{label} seed {seed}: BUDGET EXHAUSTED");
                bad += 1;
            }
        }
    }
    println!("{label}: solved {solved} unsolvable {unsolvable} -> {bad} disagreements");
    bad
}

fn main() {
    let mut bad = 0;
    bad += sweep("default    ", &SynthConfig::default(), 0..5000);
    bad += sweep("adversarial", &SynthConfig::adversarial(), 0..5000);
    let brutal = SynthConfig {
        min_atoms: 8,
        max_pre_neg: 2,
        max_del: 3,
        init_density: 0.1,
        ..SynthConfig::default()
    };
    bad += sweep("brutal     ", &brutal, 0..5000);
    println!("TOTAL disagreements: {bad}");
}

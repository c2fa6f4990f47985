//! A self-contained toolkit for fully observable non-deterministic (FOND)
//! planning. Non-deterministic PDDL (STRIPS + typing + `oneof` effects) is
//! parsed and grounded, compiled into an ordered set of classical tasks by
//! single-outcome determinization, and solved by iterative replanning with
//! embedded classical planners. Solutions are strong cyclic policies; an
//! independent validator and a brute-force fixpoint oracle act as referees.

pub mod constrain;
pub mod determinize;
pub mod ground;
pub mod pddl;
pub mod search;
pub mod solver;
pub mod synth;
pub mod validate;

pub use determinize::{DeterminizationSet, DeterminizeOptions, EffectOrdering};
pub use ground::{ground, GroundTask, State};
pub use pddl::{parse_domain, parse_problem, Domain, Problem};
pub use search::{race, SearchBudget, SearchOutcome, Strategy};
pub use solver::{solve, Policy, SolveConfig, SolveOutcome, SolveTrace};
pub use validate::{classify, oracle_strong_cyclic, PolicyClass, PolicyVerdict};

//! Adapter for black-box classical planners.
//!
//! Protocol: the command is invoked with two arguments, a domain file and a
//! problem file (ground PDDL with mangled names, one 0-ary action per
//! classical action). Exit code 0 means a plan was found, printed to stdout
//! one `(name)` line at a time; exit code 10 claims a proven unsolvability;
//! anything else is unknown. Plans are replay-validated before being
//! trusted; crashes, timeouts, unparseable or invalid output all count as
//! budget exhaustion, never as unsolvability.

use std::collections::HashMap;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Duration;

use crate::determinize::ClassicalTask;
use crate::ground::State;

use super::{validate_plan, Deadline, Plan, RunOutcome, SearchBudget};

pub fn run(
    command: &str,
    task: &ClassicalTask,
    state: &State,
    budget: &SearchBudget,
    cancel: &AtomicBool,
) -> RunOutcome {
    let deadline = Deadline::new(budget.wall);
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(_) => return RunOutcome::BudgetExhausted,
    };
    let domain_path = dir.path().join("domain.pddl");
    let problem_path = dir.path().join("problem.pddl");
    let (domain_text, problem_text) = encode(task, state);
    if std::fs::write(&domain_path, domain_text).is_err()
        || std::fs::write(&problem_path, problem_text).is_err()
    {
        return RunOutcome::BudgetExhausted;
    }

    let mut parts = command.split_whitespace();
    let program = match parts.next() {
        Some(p) => p,
        None => return RunOutcome::BudgetExhausted,
    };
    let mut child = match Command::new(program)
        .args(parts)
        .arg(&domain_path)
        .arg(&problem_path)
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .stdin(Stdio::null())
        .spawn()
    {
        Ok(c) => c,
        Err(_) => return RunOutcome::BudgetExhausted,
    };

    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {
                if cancel.load(Ordering::Relaxed) {
                    let _ = child.kill();
                    let _ = child.wait();
                    return RunOutcome::Cancelled;
                }
                if deadline.passed() {
                    let _ = child.kill();
                    let _ = child.wait();
                    return RunOutcome::BudgetExhausted;
                }
                std::thread::sleep(Duration::from_millis(5));
            }
            Err(_) => return RunOutcome::BudgetExhausted,
        }
    };

    match status.code() {
        Some(0) => {
            let mut output = Vec::new();
            if let Some(mut stdout) = child.stdout.take() {
                use std::io::Read;
                let _ = stdout.read_to_end(&mut output);
            }
            let text = String::from_utf8_lossy(&output);
            match parse_plan(&text, task) {
                Some(plan) if validate_plan(task, state, &plan).is_some() => {
                    RunOutcome::Plan(plan)
                }
                _ => RunOutcome::BudgetExhausted,
            }
        }
        Some(10) => RunOutcome::Unsolvable,
        _ => RunOutcome::BudgetExhausted,
    }
}

fn action_symbol(task: &ClassicalTask, id: u32) -> String {
    let a = &task.actions[id as usize];
    format!("a{}o{}", a.origin.0, a.origin.1)
}

/// Ground encoding: atoms become 0-ary predicates `x{id}`, classical actions
/// become 0-ary operators named by their origin, disallowed markers included
/// like any other atom.
fn encode(task: &ClassicalTask, state: &State) -> (String, String) {
    let mut domain = String::from("(define (domain compiled)\n  (:requirements :strips :negative-preconditions)\n  (:predicates");
    for i in 0..task.num_atoms() {
        domain.push_str(&format!(" (x{i})"));
    }
    domain.push_str(")\n");
    for action in &task.actions {
        domain.push_str(&format!("  (:action {}\n    :parameters ()\n    :precondition (and", action_symbol(task, action.id)));
        for a in action.pre_pos.iter() {
            domain.push_str(&format!(" (x{a})"));
        }
        for a in action.pre_neg.iter() {
            domain.push_str(&format!(" (not (x{a}))"));
        }
        domain.push_str(")\n    :effect (and");
        for a in action.add.iter() {
            domain.push_str(&format!(" (x{a})"));
        }
        for a in action.del.iter() {
            domain.push_str(&format!(" (not (x{a}))"));
        }
        domain.push_str("))\n");
    }
    domain.push_str(")\n");

    let mut problem = String::from("(define (problem compiled-1)\n  (:domain compiled)\n  (:init");
    for a in state.iter() {
        problem.push_str(&format!(" (x{a})"));
    }
    problem.push_str(")\n  (:goal (and");
    for a in task.goal_pos.iter() {
        problem.push_str(&format!(" (x{a})"));
    }
    for a in task.goal_neg.iter() {
        problem.push_str(&format!(" (not (x{a}))"));
    }
    problem.push_str(")))\n");
    (domain, problem)
}

fn parse_plan(text: &str, task: &ClassicalTask) -> Option<Plan> {
    let by_symbol: HashMap<String, u32> =
        task.actions.iter().map(|a| (action_symbol(task, a.id), a.id)).collect();
    let mut steps = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let inner = line.strip_prefix('(')?.strip_suffix(')')?;
        let name = inner.split_whitespace().next()?;
        steps.push(*by_symbol.get(&name.to_ascii_lowercase())?);
    }
    Some(Plan { steps })
}

/// Writes a tiny external-planner stub script, used by tests.
#[cfg(test)]
pub fn write_stub_script(path: &std::path::Path, body: &str) -> std::io::Result<()> {
    use std::io::Write;
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "#!/bin/sh")?;
    writeln!(f, "{body}")?;
    f.flush()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        std::fs::set_permissions(path, std::fs::Permissions::from_mode(0o755))?;
    }
    Ok(())
}

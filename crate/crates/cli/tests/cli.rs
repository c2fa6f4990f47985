//! End-to-end checks of the `fondkit` binary: subcommands, flags, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn domains() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../domains")
}

fn fondkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fondkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(rel: &str) -> String {
    domains().join(rel).to_string_lossy().into_owned()
}

#[test]
fn solve_reports_success_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let policy = dir.path().join("policy.json");
    let trace = dir.path().join("trace.json");
    let out = fondkit(&[
        "solve",
        &path("xy/domain.pddl"),
        &path("xy/p01.pddl"),
        "--policy-out",
        policy.to_str().unwrap(),
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("solved: 3 policy entries"), "stdout: {stdout}");
    let policy_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&policy).unwrap()).unwrap();
    assert_eq!(policy_json.as_array().unwrap().len(), 4);
    let trace_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(trace_json["planner_calls"], 4);
}

#[test]
fn solve_distinguishes_no_solution_from_budget_exhaustion() {
    let out = fondkit(&["solve", &path("river/domain.pddl"), &path("river/impossible.pddl")]);
    assert_eq!(out.status.code(), Some(10));

    let out = fondkit(&[
        "solve",
        &path("tireworld/domain.pddl"),
        &path("tireworld/line3.pddl"),
        "--expansions",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(20));
}

#[test]
fn solve_rejects_bad_flags_with_usage_errors() {
    let out = fondkit(&[
        "solve",
        &path("xy/domain.pddl"),
        &path("xy/p01.pddl"),
        "--ordering",
        "sideways",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = fondkit(&["solve", "/nonexistent.pddl", &path("xy/p01.pddl")]);
    assert_eq!(out.status.code(), Some(2));

    let out = fondkit(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // cap 0 without ndp2 is rejected by the determinizer
    let out = fondkit(&["solve", &path("xy/domain.pddl"), &path("xy/p01.pddl"), "--cap", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_round_trips_solved_policies() {
    let dir = tempfile::tempdir().unwrap();
    let policy = dir.path().join("policy.json");
    let out = fondkit(&[
        "solve",
        &path("triangle-tireworld/domain.pddl"),
        &path("triangle-tireworld/mini.pddl"),
        "--policy-out",
        policy.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = fondkit(&[
        "validate",
        &path("triangle-tireworld/domain.pddl"),
        &path("triangle-tireworld/mini.pddl"),
        policy.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let verdict: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verdict is JSON");
    let class = verdict["class"].as_str().unwrap();
    assert!(class == "strong-cyclic" || class == "strong-acyclic");
}

#[test]
fn validate_rejects_non_strong_policies() {
    let dir = tempfile::tempdir().unwrap();
    let policy = dir.path().join("weak.json");
    // Maps only the initial state, so both outcome states are unmapped and
    // the goal is never reached on any path that stops there.
    std::fs::write(&policy, r#"[{"state": [], "action": "(a)", "successors": []}]"#).unwrap();
    let out = fondkit(&[
        "validate",
        &path("xy/domain.pddl"),
        &path("xy/p01.pddl"),
        policy.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ground_dump_is_stable_and_matches_hand_enumeration() {
    let out = fondkit(&[
        "ground",
        &path("tireworld/domain.pddl"),
        &path("tireworld/line3.pddl"),
        "--dump",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dump = String::from_utf8_lossy(&out.stdout);
    let actions: Vec<&str> = dump.lines().filter(|l| l.starts_with("action ")).collect();
    assert_eq!(actions.len(), 3);
    assert!(dump.contains("action 2 (changetire l2)"));
    let again = fondkit(&[
        "ground",
        &path("tireworld/domain.pddl"),
        &path("tireworld/line3.pddl"),
        "--dump",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn determinize_list_shows_ranked_members() {
    let out = fondkit(&[
        "determinize",
        &path("river/domain.pddl"),
        &path("river/crossing.pddl"),
        "--list",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("3 members"));
    // Descending ranks the 3-literal drowning outcome first.
    assert!(text.contains("member 0: single-outcome [swim=1]"), "got: {text}");
    assert!(text.contains("member 2: all-outcome"));

    let out = fondkit(&[
        "determinize",
        &path("river/domain.pddl"),
        &path("river/crossing.pddl"),
        "--list",
        "--ndp2",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("1 members") || text.contains("0 single-outcome"), "got: {text}");

    // Triangle miniature: only `move` branches (2 effects, changetire has 1),
    // so two single-outcome members plus the all-outcome one; descending
    // ranks the 3-literal flat-tire outcome (effect 1) first.
    let out = fondkit(&[
        "determinize",
        &path("triangle-tireworld/domain.pddl"),
        &path("triangle-tireworld/mini.pddl"),
        "--list",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("3 members: 2 single-outcome"), "got: {text}");
    assert!(text.contains("member 0: single-outcome [move=1]"), "got: {text}");
    let out = fondkit(&[
        "determinize",
        &path("triangle-tireworld/domain.pddl"),
        &path("triangle-tireworld/mini.pddl"),
        "--list",
        "--ordering",
        "asc",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("member 0: single-outcome [move=0]"), "got: {text}");
}

#[cfg(unix)]
#[test]
fn external_planner_races_alongside_embedded_strategies() {
    use std::os::unix::fs::PermissionsExt;
    let dir = tempfile::tempdir().unwrap();
    // A useless external tool (exit code outside the protocol); the embedded
    // strategies must still win the race.
    let stub = dir.path().join("stub.sh");
    std::fs::write(&stub, "#!/bin/sh\nexit 3\n").unwrap();
    std::fs::set_permissions(&stub, std::fs::Permissions::from_mode(0o755)).unwrap();
    let out = fondkit(&[
        "solve",
        &path("xy/domain.pddl"),
        &path("xy/p01.pddl"),
        "--external-planner",
        stub.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("solved: 3 policy entries"));
}

#[test]
fn bench_isolates_per_row_failures() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("suite.json");
    std::fs::write(
        &manifest,
        format!(
            r#"{{ "problems": [
                 {{ "domain_file": "{xy}", "problem_file": "{p}" }},
                 {{ "domain_file": "/missing/domain.pddl", "problem_file": "/missing/p.pddl" }}
               ] }}"#,
            xy = path("xy/domain.pddl"),
            p = path("xy/p01.pddl"),
        ),
    )
    .unwrap();
    let records = dir.path().join("records.json");
    let out = fondkit(&["bench", manifest.to_str().unwrap(), "--records-out", records.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Solved"));
    assert!(text.contains("Failure"));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&records).unwrap()).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 2);
    assert!(parsed[1]["error"].as_str().unwrap().contains("missing"));
}

#[test]
fn bench_emits_cactus_csv_and_bracketed_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cactus.csv");
    let out = fondkit(&[
        "bench",
        &path("suite-with-unsolvable.json"),
        "--csv-out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("5 (1)"), "summary missing bracketed count: {text}");
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("time_secs,solved\n"));
    assert_eq!(csv_text.lines().count(), 6); // header + 5 solved rows
    assert!(csv_text.lines().last().unwrap().ends_with(",5"));
}

#[test]
fn single_strategy_bench_records_are_deterministic_modulo_time() {
    use fondkit::search::{SearchBudget, Strategy};
    use fondkit_cli::bench::run_suite;
    use fondkit_cli::PlannerSettings;

    let settings = PlannerSettings {
        strategies: vec![Strategy::AStarHMax],
        budget: SearchBudget::generous(),
        ..Default::default()
    };
    let manifest = domains().join("suite.json");
    let normalize = |report: &fondkit_cli::bench::BenchReport| -> serde_json::Value {
        let mut value = serde_json::to_value(&report.records).unwrap();
        for record in value.as_array_mut().unwrap() {
            record["wall_ms"] = 0.into();
            if let Some(trace) = record.get_mut("trace").filter(|t| !t.is_null()) {
                trace["wall_ms"] = 0.into();
            }
        }
        value
    };
    let first = normalize(&run_suite(&manifest, &settings).unwrap());
    let second = normalize(&run_suite(&manifest, &settings).unwrap());
    assert_eq!(first, second);
}

#[test]
fn per_entry_ordering_overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("suite.json");
    std::fs::write(
        &manifest,
        format!(
            r#"{{ "problems": [
                 {{ "domain_file": "{d}", "problem_file": "{p}", "ordering": "asc" }}
               ] }}"#,
            d = path("river/domain.pddl"),
            p = path("river/crossing.pddl"),
        ),
    )
    .unwrap();
    let records = dir.path().join("records.json");
    let out = fondkit(&["bench", manifest.to_str().unwrap(), "--records-out", records.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&records).unwrap()).unwrap();
    assert_eq!(parsed[0]["config"]["ordering"], "asc");
    assert_eq!(parsed[0]["status"], "solved");
}

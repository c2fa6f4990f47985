use proptest::prelude::*;

use super::*;

const XY_DOMAIN: &str = r#"
(define (domain xy)
  (:requirements :strips :non-deterministic)
  (:predicates (x) (y))
  (:action a
    :parameters ()
    :precondition (and)
    :effect (oneof (x) (y))))
"#;

fn lit(positive: bool, pred: &str, args: &[&str]) -> Literal {
    Literal {
        positive,
        pred: pred.into(),
        args: args
            .iter()
            .map(|a| match a.strip_prefix('?') {
                Some(v) => Term::Var(v.into()),
                None => Term::Obj((*a).into()),
            })
            .collect(),
    }
}

#[test]
fn oneof_effect_splits_into_outcome_sets() {
    let domain = parse_domain(XY_DOMAIN).unwrap();
    assert_eq!(domain.operators.len(), 1);
    let op = &domain.operators[0];
    assert_eq!(op.effects, vec![vec![lit(true, "x", &[])], vec![lit(true, "y", &[])]]);
}

#[test]
fn plain_conjunction_is_a_single_outcome() {
    let text = r#"
(define (domain d)
  (:predicates (p) (q))
  (:action a :parameters () :precondition (p) :effect (and (p) (not (q)))))
"#;
    let domain = parse_domain(text).unwrap();
    let op = &domain.operators[0];
    assert_eq!(op.effects.len(), 1);
    assert_eq!(op.effects[0], vec![lit(false, "q", &[]), lit(true, "p", &[])]);
}

#[test]
fn conjunct_distributes_over_oneof() {
    let text = r#"
(define (domain d)
  (:predicates (a) (b) (c))
  (:action act :parameters () :precondition (and) :effect (and (c) (oneof (a) (b)))))
"#;
    let domain = parse_domain(text).unwrap();
    let op = &domain.operators[0];
    assert_eq!(
        op.effects,
        vec![
            vec![lit(true, "a", &[]), lit(true, "c", &[])],
            vec![lit(true, "b", &[]), lit(true, "c", &[])],
        ]
    );
}

#[test]
fn distribution_preserves_member_count() {
    let text = r#"
(define (domain d)
  (:predicates (a) (b) (c) (d) (e))
  (:action act
    :parameters ()
    :precondition (and)
    :effect (and (e) (oneof (a) (b) (c) (and (d) (not (a)))))))
"#;
    let domain = parse_domain(text).unwrap();
    assert_eq!(domain.operators[0].effects.len(), 4);
}

#[test]
fn empty_oneof_member_is_allowed() {
    // The no-change outcome of tireworld-style moves.
    let text = r#"
(define (domain d)
  (:predicates (p) (flat))
  (:action move :parameters () :precondition (p) :effect (oneof (and) (flat))))
"#;
    let domain = parse_domain(text).unwrap();
    assert_eq!(domain.operators[0].effects, vec![vec![], vec![lit(true, "flat", &[])]]);
}

#[test]
fn syntax_error_carries_position() {
    let err = parse_domain("(define (domain d)\n  (:predicates (p)").unwrap_err();
    match err {
        ParseError::Syntax { line, col, .. } => {
            assert_eq!((line, col), (2, 3)); // the innermost unclosed list
        }
        other => panic!("expected syntax error, got {other:?}"),
    }
}

#[test]
fn unsupported_constructs_are_rejected_by_name() {
    let cases = [
        (
            "(define (domain d) (:predicates (p) (q))
               (:action a :parameters () :effect (when (p) (q))))",
            "conditional effect",
        ),
        (
            "(define (domain d) (:predicates (p ?x))
               (:action a :parameters (?x) :effect (forall (?y) (p ?y))))",
            "quantified effect",
        ),
        (
            "(define (domain d) (:predicates (p) (q) (r))
               (:action a :parameters () :effect (oneof (p) (oneof (q) (r)))))",
            "nested `oneof`",
        ),
        (
            "(define (domain d) (:requirements :probabilistic-effects))",
            "requirement `:probabilistic-effects`",
        ),
        (
            "(define (domain d) (:predicates (p) (q) (r) (s))
               (:action a :parameters () :effect (and (oneof (p) (q)) (oneof (r) (s)))))",
            "multiple `oneof` clauses in one effect",
        ),
    ];
    for (text, feature) in cases {
        match parse_domain(text) {
            Err(ParseError::Unsupported { feature: f, .. }) => assert_eq!(f, feature),
            other => panic!("expected unsupported `{feature}`, got {other:?}"),
        }
    }
}

#[test]
fn duplicate_oneof_members_are_rejected() {
    let text = r#"
(define (domain d)
  (:predicates (p) (c))
  (:action a :parameters () :effect (and (c) (oneof (p) (p)))))
"#;
    assert!(matches!(parse_domain(text), Err(ParseError::Invalid { .. })));
}

#[test]
fn contradictory_effect_set_is_rejected() {
    let text = r#"
(define (domain d)
  (:predicates (p))
  (:action a :parameters () :effect (and (p) (not (p)))))
"#;
    assert!(matches!(parse_domain(text), Err(ParseError::Invalid { .. })));
}

#[test]
fn identifiers_are_lowercased() {
    let text = r#"
(define (domain CaseTest)
  (:predicates (At ?X - Object))
  (:action Go :parameters (?X) :precondition (AT ?x) :effect (not (at ?X))))
"#;
    let domain = parse_domain(text).unwrap();
    assert_eq!(domain.name, "casetest");
    assert_eq!(domain.predicates[0].name, "at");
    assert_eq!(domain.operators[0].name, "go");
}

#[test]
fn typed_operator_arguments_are_checked() {
    let text = r#"
(define (domain d)
  (:types truck - object)
  (:predicates (rolling ?t - truck))
  (:action a :parameters (?x - object) :precondition (and) :effect (rolling ?x)))
"#;
    assert!(matches!(parse_domain(text), Err(ParseError::Invalid { .. })));
}

#[test]
fn undeclared_variable_is_rejected() {
    let text = r#"
(define (domain d)
  (:predicates (p ?x))
  (:action a :parameters () :effect (p ?ghost)))
"#;
    assert!(matches!(parse_domain(text), Err(ParseError::Invalid { .. })));
}

fn tiny_typed_domain() -> Domain {
    parse_domain(
        r#"
(define (domain logistics)
  (:requirements :strips :typing :equality :negative-preconditions :non-deterministic)
  (:types truck box - object)
  (:constants depot - object)
  (:predicates (at ?t - truck) (holds ?t - truck ?b - box) (free ?b - box))
  (:action load
    :parameters (?t - truck ?b - box ?c - box)
    :precondition (and (at ?t) (free ?b) (not (= ?b ?c)))
    :effect (oneof (holds ?t ?b) (and (not (free ?b)))))
)
"#,
    )
    .unwrap()
}

#[test]
fn problem_objects_and_goal_are_validated() {
    let domain = tiny_typed_domain();
    let good = r#"
(define (problem p1)
  (:domain logistics)
  (:objects t1 - truck b1 b2 - box)
  (:init (at t1) (free b1))
  (:goal (and (holds t1 b1) (not (free b2)))))
"#;
    let problem = parse_problem(good, &domain).unwrap();
    assert_eq!(problem.objects.len(), 3);
    assert_eq!(problem.init.len(), 2);
    assert_eq!(problem.goal.len(), 2);
    assert!(!problem.goal[1].positive);

    let undeclared_pred = r#"
(define (problem p2) (:domain logistics)
  (:objects t1 - truck)
  (:init (ghost t1))
  (:goal (at t1)))
"#;
    assert!(matches!(parse_problem(undeclared_pred, &domain), Err(ParseError::Invalid { .. })));

    let undeclared_obj = r#"
(define (problem p3) (:domain logistics)
  (:objects t1 - truck)
  (:init (at t1))
  (:goal (holds t1 nowhere)))
"#;
    assert!(matches!(parse_problem(undeclared_obj, &domain), Err(ParseError::Invalid { .. })));

    let type_mismatch = r#"
(define (problem p4) (:domain logistics)
  (:objects t1 - truck b1 - box)
  (:init (at b1))
  (:goal (at t1)))
"#;
    assert!(matches!(parse_problem(type_mismatch, &domain), Err(ParseError::Invalid { .. })));

    let wrong_domain = r#"
(define (problem p5) (:domain other) (:init) (:goal (and)))
"#;
    assert!(matches!(parse_problem(wrong_domain, &domain), Err(ParseError::Invalid { .. })));
}

#[test]
fn domain_round_trips_through_printer() {
    let domain = tiny_typed_domain();
    let printed = print_domain(&domain);
    let reparsed = parse_domain(&printed).unwrap();
    assert_eq!(domain, reparsed);
}

#[test]
fn problem_round_trips_through_printer() {
    let domain = tiny_typed_domain();
    let problem = parse_problem(
        r#"
(define (problem p1) (:domain logistics)
  (:objects t1 - truck b1 - box)
  (:init (at t1) (free b1))
  (:goal (and (holds t1 b1))))
"#,
        &domain,
    )
    .unwrap();
    let reparsed = parse_problem(&print_problem(&problem), &domain).unwrap();
    assert_eq!(problem, reparsed);
}

// Generator for structurally valid domains: distinct names drawn from small
// pools, literal sets sanitized the same way the parser normalizes them.

fn sanitize_set(mut lits: Vec<Literal>) -> Vec<Literal> {
    lits.sort();
    lits.dedup();
    let mut out: Vec<Literal> = Vec::new();
    for l in lits {
        if !out.iter().any(|o| o.pred == l.pred && o.args == l.args) {
            out.push(l);
        }
    }
    out
}

fn arb_literal(n_preds: usize, arities: Vec<usize>, n_params: usize) -> BoxedStrategy<Literal> {
    (0..n_preds, any::<bool>())
        .prop_flat_map(move |(p, positive)| {
            let arity = arities[p];
            proptest::collection::vec(0..n_params.max(1), arity).prop_map(move |vars| Literal {
                positive,
                pred: format!("p{p}"),
                args: vars.into_iter().map(|v| Term::Var(format!("v{v}"))).collect(),
            })
        })
        .boxed()
}

fn arb_domain() -> BoxedStrategy<Domain> {
    let arities = proptest::collection::vec(0usize..3, 1..4);
    arities
        .prop_flat_map(|arities: Vec<usize>| {
            let n_preds = arities.len();
            let n_params = 3usize;
            let op = (
                proptest::collection::vec(arb_literal(n_preds, arities.clone(), n_params), 0..3),
                proptest::collection::vec(
                    proptest::collection::vec(
                        arb_literal(n_preds, arities.clone(), n_params),
                        0..3,
                    ),
                    1..4,
                ),
            );
            let preds: Vec<Predicate> = arities
                .iter()
                .enumerate()
                .map(|(i, a)| Predicate {
                    name: format!("p{i}"),
                    params: (0..*a)
                        .map(|j| Param { name: format!("x{j}"), ty: "object".into() })
                        .collect(),
                })
                .collect();
            proptest::collection::vec(op, 1..3).prop_map(move |ops| Domain {
                name: "generated".into(),
                requirements: vec![":strips".into(), ":non-deterministic".into()],
                types: vec![
                    TypeDef { name: "ta".into(), parent: "object".into() },
                    TypeDef { name: "tb".into(), parent: "ta".into() },
                ],
                constants: vec![TypedObject { name: "c0".into(), ty: "tb".into() }],
                predicates: preds.clone(),
                operators: ops
                    .into_iter()
                    .enumerate()
                    .map(|(i, (pre, effs))| {
                        let mut effects: Vec<Vec<Literal>> = Vec::new();
                        for set in effs {
                            let set = sanitize_set(set);
                            if !effects.contains(&set) {
                                effects.push(set);
                            }
                        }
                        NdOperator {
                            name: format!("op{i}"),
                            params: (0..3)
                                .map(|j| Param { name: format!("v{j}"), ty: "ta".into() })
                                .collect(),
                            precondition: sanitize_set(pre),
                            effects,
                        }
                    })
                    .collect(),
            })
        })
        .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_domains_reparse_identically(domain in arb_domain()) {
        let printed = print_domain(&domain);
        let reparsed = parse_domain(&printed).unwrap();
        prop_assert_eq!(domain, reparsed);
    }

    #[test]
    fn parsed_effect_lists_are_nonempty_and_distinct(domain in arb_domain()) {
        let reparsed = parse_domain(&print_domain(&domain)).unwrap();
        for op in &reparsed.operators {
            prop_assert!(!op.effects.is_empty());
            for (i, a) in op.effects.iter().enumerate() {
                for b in &op.effects[i + 1..] {
                    prop_assert_ne!(a, b);
                }
            }
        }
    }
}

//! Recursive-descent extraction of domains and problems from s-expressions.

use std::collections::HashSet;

use super::lexer::{read_sexp, Sexp};
use super::{
    Domain, GroundAtom, GroundLiteral, Literal, NdOperator, Param, ParseError, Predicate, Problem,
    Term, TypeDef, TypedObject,
};

const SUPPORTED_REQUIREMENTS: &[&str] = &[
    ":strips",
    ":typing",
    ":equality",
    ":negative-preconditions",
    ":non-deterministic",
];

fn syntax(sexp: &Sexp, msg: impl Into<String>) -> ParseError {
    let (line, col) = sexp.pos();
    ParseError::Syntax { line, col, msg: msg.into() }
}

fn unsupported(sexp: &Sexp, feature: impl Into<String>) -> ParseError {
    let (line, col) = sexp.pos();
    ParseError::Unsupported { line, col, feature: feature.into() }
}

fn invalid(sexp: &Sexp, msg: impl Into<String>) -> ParseError {
    let (line, col) = sexp.pos();
    ParseError::Invalid { line, col, msg: msg.into() }
}

fn expect_atom<'a>(sexp: &'a Sexp, what: &str) -> Result<&'a str, ParseError> {
    sexp.atom().ok_or_else(|| syntax(sexp, format!("expected {what}, found a list")))
}

fn expect_list<'a>(sexp: &'a Sexp, what: &str) -> Result<&'a [Sexp], ParseError> {
    sexp.items().ok_or_else(|| syntax(sexp, format!("expected {what}, found an atom")))
}

fn check_name(sexp: &Sexp, text: &str) -> Result<String, ParseError> {
    let ok = !text.is_empty()
        && text.chars().next().unwrap().is_ascii_alphabetic()
        && text.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if !ok {
        return Err(syntax(sexp, format!("invalid identifier `{text}`")));
    }
    Ok(text.to_string())
}

/// Parses a typed list such as `?x ?y - loc ?z`, calling `emit` for each
/// entry with its resolved type (`object` when untyped).
fn parse_typed_list(
    items: &[Sexp],
    parent: &Sexp,
    mut emit: impl FnMut(&Sexp, String, String) -> Result<(), ParseError>,
) -> Result<(), ParseError> {
    let mut pending: Vec<(&Sexp, String)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let atom = expect_atom(&items[i], "a name in a typed list")?;
        if atom == "-" {
            i += 1;
            let ty_sexp = items
                .get(i)
                .ok_or_else(|| syntax(parent, "missing type after `-`"))?;
            let ty = check_name(ty_sexp, expect_atom(ty_sexp, "a type name")?)?;
            if pending.is_empty() {
                return Err(syntax(ty_sexp, "type with no preceding names"));
            }
            for (sexp, name) in pending.drain(..) {
                emit(sexp, name, ty.clone())?;
            }
        } else {
            pending.push((&items[i], atom.to_string()));
        }
        i += 1;
    }
    for (sexp, name) in pending {
        emit(sexp, name, "object".to_string())?;
    }
    Ok(())
}

fn parse_term(sexp: &Sexp) -> Result<Term, ParseError> {
    let text = expect_atom(sexp, "a term")?;
    if let Some(var) = text.strip_prefix('?') {
        check_name(sexp, var)?;
        Ok(Term::Var(var.to_string()))
    } else {
        check_name(sexp, text)?;
        Ok(Term::Obj(text.to_string()))
    }
}

/// A single literal: `(p a ?x)`, `(not (p a ?x))`, `(= ?x ?y)` or its
/// negation. `allow_equality` gates the `=` form (preconditions only).
fn parse_literal(sexp: &Sexp, allow_equality: bool) -> Result<Literal, ParseError> {
    let items = expect_list(sexp, "a literal")?;
    let head = sexp.head().ok_or_else(|| syntax(sexp, "empty literal"))?;
    match head {
        "not" => {
            if items.len() != 2 {
                return Err(syntax(sexp, "`not` takes exactly one literal"));
            }
            let inner = parse_literal(&items[1], allow_equality)?;
            if !inner.positive {
                return Err(syntax(sexp, "double negation"));
            }
            Ok(Literal { positive: false, ..inner })
        }
        "=" => {
            if !allow_equality {
                return Err(unsupported(sexp, "equality outside operator preconditions"));
            }
            if items.len() != 3 {
                return Err(syntax(sexp, "`=` takes exactly two terms"));
            }
            let args = vec![parse_term(&items[1])?, parse_term(&items[2])?];
            Ok(Literal { positive: true, pred: "=".into(), args })
        }
        "and" | "or" | "oneof" | "when" | "forall" | "exists" | "imply" => {
            Err(syntax(sexp, format!("expected a literal, found `{head}`")))
        }
        name => {
            let pred = check_name(&items[0], name)?;
            let args = items[1..].iter().map(parse_term).collect::<Result<_, _>>()?;
            Ok(Literal { positive: true, pred, args })
        }
    }
}

/// Sorts and dedups a literal set, rejecting internal contradictions.
fn normalize_literal_set(mut lits: Vec<Literal>, at: &Sexp) -> Result<Vec<Literal>, ParseError> {
    lits.sort();
    lits.dedup();
    for lit in &lits {
        let twin = Literal { positive: !lit.positive, ..lit.clone() };
        if lits.contains(&twin) {
            return Err(invalid(
                at,
                format!("contradictory literal set: both polarities of `{}`", lit.pred),
            ));
        }
    }
    Ok(lits)
}

fn parse_precondition(sexp: &Sexp) -> Result<Vec<Literal>, ParseError> {
    let items = expect_list(sexp, "a precondition")?;
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let lits = match sexp.head() {
        Some("and") => items[1..]
            .iter()
            .map(|s| parse_literal(s, true))
            .collect::<Result<Vec<_>, _>>()?,
        Some("or") | Some("forall") | Some("exists") | Some("imply") => {
            return Err(unsupported(sexp, format!("`{}` in precondition", sexp.head().unwrap())))
        }
        Some("oneof") => return Err(unsupported(sexp, "`oneof` in precondition")),
        _ => vec![parse_literal(sexp, true)?],
    };
    normalize_literal_set(lits, sexp)
}

/// One `oneof` member: a literal or a conjunction of literals.
fn parse_effect_member(sexp: &Sexp) -> Result<Vec<Literal>, ParseError> {
    match sexp.head() {
        Some("and") => sexp.items().unwrap()[1..].iter().map(parse_effect_literal).collect(),
        Some("oneof") => Err(unsupported(sexp, "nested `oneof`")),
        None if sexp.items().map(|i| i.is_empty()).unwrap_or(false) => Ok(Vec::new()),
        _ => Ok(vec![parse_effect_literal(sexp)?]),
    }
}

fn parse_effect_literal(sexp: &Sexp) -> Result<Literal, ParseError> {
    match sexp.head() {
        Some("when") => Err(unsupported(sexp, "conditional effect")),
        Some("forall") => Err(unsupported(sexp, "quantified effect")),
        Some("increase") | Some("decrease") | Some("assign") => {
            Err(unsupported(sexp, "numeric effect"))
        }
        Some("oneof") => Err(unsupported(sexp, "nested `oneof`")),
        _ => parse_literal(sexp, false),
    }
}

/// Effect grammar: a conjunction of literals, a top-level `oneof`, or one
/// `and` wrapping literals plus at most one `oneof`. The conjuncts are
/// distributed over the `oneof` members.
fn parse_effect(sexp: &Sexp) -> Result<Vec<Vec<Literal>>, ParseError> {
    let items = expect_list(sexp, "an effect")?;
    let mut base: Vec<Literal> = Vec::new();
    let mut members: Option<(&Sexp, Vec<Vec<Literal>>)> = None;

    let parts: &[Sexp] = match sexp.head() {
        Some("and") => &items[1..],
        _ => std::slice::from_ref(sexp),
    };
    for part in parts {
        if part.head() == Some("oneof") {
            if members.is_some() {
                return Err(unsupported(part, "multiple `oneof` clauses in one effect"));
            }
            let inner = &part.items().unwrap()[1..];
            if inner.is_empty() {
                return Err(syntax(part, "`oneof` needs at least one member"));
            }
            let parsed = inner.iter().map(parse_effect_member).collect::<Result<Vec<_>, _>>()?;
            members = Some((part, parsed));
        } else {
            base.push(parse_effect_literal(part)?);
        }
    }

    let raw: Vec<Vec<Literal>> = match members {
        None => vec![base],
        Some((_, member_sets)) => member_sets
            .into_iter()
            .map(|m| base.iter().cloned().chain(m).collect())
            .collect(),
    };
    let mut effects = Vec::with_capacity(raw.len());
    for set in raw {
        let set = normalize_literal_set(set, sexp)?;
        if effects.contains(&set) {
            return Err(invalid(
                sexp,
                "outcomes are not mutually exclusive: two `oneof` members denote the same effect",
            ));
        }
        effects.push(set);
    }
    Ok(effects)
}

struct DomainChecker<'a> {
    domain: &'a Domain,
}

impl DomainChecker<'_> {
    fn check_literal_decl(&self, lit: &Literal, at: &Sexp) -> Result<(), ParseError> {
        if lit.pred == "=" {
            return Ok(());
        }
        let pred = self
            .domain
            .predicate(&lit.pred)
            .ok_or_else(|| invalid(at, format!("undeclared predicate `{}`", lit.pred)))?;
        if pred.params.len() != lit.args.len() {
            return Err(invalid(
                at,
                format!(
                    "predicate `{}` takes {} arguments, found {}",
                    lit.pred,
                    pred.params.len(),
                    lit.args.len()
                ),
            ));
        }
        Ok(())
    }

    /// Every variable must come from the operator head; object arguments must
    /// be declared constants of a compatible type.
    fn check_operator_args(&self, op: &NdOperator, at: &Sexp) -> Result<(), ParseError> {
        let all = op.precondition.iter().chain(op.effects.iter().flatten());
        for lit in all {
            self.check_literal_decl(lit, at)?;
            for (i, term) in lit.args.iter().enumerate() {
                match term {
                    Term::Var(v) => {
                        let param = op.params.iter().find(|p| p.name == *v).ok_or_else(|| {
                            invalid(
                                at,
                                format!("variable `?{v}` in `{}` is not an operator parameter", op.name),
                            )
                        })?;
                        if lit.pred != "=" {
                            let want = &self.domain.predicate(&lit.pred).unwrap().params[i].ty;
                            if !self.domain.is_subtype(&param.ty, want) {
                                return Err(invalid(
                                    at,
                                    format!(
                                        "variable `?{v}` of type `{}` where `{want}` expected",
                                        param.ty
                                    ),
                                ));
                            }
                        }
                    }
                    Term::Obj(o) => {
                        let con = self
                            .domain
                            .constants
                            .iter()
                            .find(|c| c.name == *o)
                            .ok_or_else(|| {
                                invalid(at, format!("`{o}` is not a declared constant"))
                            })?;
                        if lit.pred != "=" {
                            let want = &self.domain.predicate(&lit.pred).unwrap().params[i].ty;
                            if !self.domain.is_subtype(&con.ty, want) {
                                return Err(invalid(
                                    at,
                                    format!("constant `{o}` of type `{}` where `{want}` expected", con.ty),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses a FOND PDDL domain. Errors carry the line and column of the
/// offending form; constructs outside the frozen dialect are rejected by
/// name.
pub fn parse_domain(text: &str) -> Result<Domain, ParseError> {
    let sexp = read_sexp(text)?;
    let items = expect_list(&sexp, "`(define ...)`")?;
    if sexp.head() != Some("define") {
        return Err(syntax(&sexp, "expected `(define (domain ...) ...)`"));
    }

    let mut domain = Domain {
        name: String::new(),
        requirements: Vec::new(),
        types: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        operators: Vec::new(),
    };

    let name_form = items.get(1).ok_or_else(|| syntax(&sexp, "missing `(domain NAME)`"))?;
    let name_items = expect_list(name_form, "`(domain NAME)`")?;
    if name_form.head() != Some("domain") || name_items.len() != 2 {
        return Err(syntax(name_form, "expected `(domain NAME)`"));
    }
    domain.name = check_name(&name_items[1], expect_atom(&name_items[1], "a domain name")?)?;

    for section in &items[2..] {
        let sec_items = expect_list(section, "a domain section")?;
        match section.head() {
            Some(":requirements") => {
                for req in &sec_items[1..] {
                    let r = expect_atom(req, "a requirement flag")?;
                    if !SUPPORTED_REQUIREMENTS.contains(&r) {
                        return Err(unsupported(req, format!("requirement `{r}`")));
                    }
                    domain.requirements.push(r.to_string());
                }
            }
            Some(":types") => {
                parse_typed_list(&sec_items[1..], section, |sexp, name, parent| {
                    if name == "object" {
                        return Err(invalid(sexp, "`object` cannot be redeclared"));
                    }
                    if domain.types.iter().any(|t| t.name == name) {
                        return Err(invalid(sexp, format!("duplicate type `{name}`")));
                    }
                    domain.types.push(TypeDef { name, parent });
                    Ok(())
                })?;
                // Parents mentioned but never declared sit directly below
                // `object`.
                let mut implied: Vec<TypeDef> = Vec::new();
                for t in &domain.types {
                    if t.parent != "object"
                        && !domain.types.iter().any(|d| d.name == t.parent)
                        && !implied.iter().any(|d| d.name == t.parent)
                    {
                        implied.push(TypeDef { name: t.parent.clone(), parent: "object".into() });
                    }
                }
                domain.types.extend(implied);
            }
            Some(":constants") => {
                parse_typed_list(&sec_items[1..], section, |sexp, name, ty| {
                    if domain.constants.iter().any(|c| c.name == name) {
                        return Err(invalid(sexp, format!("duplicate constant `{name}`")));
                    }
                    domain.constants.push(TypedObject { name, ty });
                    Ok(())
                })?;
            }
            Some(":predicates") => {
                for pred_form in &sec_items[1..] {
                    let pitems = expect_list(pred_form, "a predicate declaration")?;
                    if pitems.is_empty() {
                        return Err(syntax(pred_form, "empty predicate declaration"));
                    }
                    let pname = check_name(&pitems[0], expect_atom(&pitems[0], "a predicate name")?)?;
                    if domain.predicates.iter().any(|p| p.name == pname) {
                        return Err(invalid(pred_form, format!("duplicate predicate `{pname}`")));
                    }
                    let mut params = Vec::new();
                    parse_typed_list(&pitems[1..], pred_form, |sexp, name, ty| {
                        let var = name
                            .strip_prefix('?')
                            .ok_or_else(|| syntax(sexp, "predicate parameters must be variables"))?;
                        params.push(Param { name: var.to_string(), ty });
                        Ok(())
                    })?;
                    domain.predicates.push(Predicate { name: pname, params });
                }
            }
            Some(":action") => {
                let op = parse_action(section, sec_items)?;
                if domain.operators.iter().any(|o| o.name == op.name) {
                    return Err(invalid(section, format!("duplicate action `{}`", op.name)));
                }
                domain.operators.push(op);
            }
            Some(":functions") => return Err(unsupported(section, "numeric fluents")),
            Some(":derived") => return Err(unsupported(section, "derived predicates")),
            Some(other) => return Err(unsupported(section, format!("domain section `{other}`"))),
            None => return Err(syntax(section, "expected a domain section")),
        }
    }

    // Types must resolve; validated after all sections since `:types` may
    // follow `:constants` in the wild.
    for t in &domain.types {
        if t.parent != "object" && !domain.types.iter().any(|d| d.name == t.parent) {
            return Err(ParseError::Invalid {
                line: 0,
                col: 0,
                msg: format!("type `{}` has undeclared parent `{}`", t.name, t.parent),
            });
        }
    }
    let type_known = |ty: &str| ty == "object" || domain.types.iter().any(|t| t.name == ty);
    for c in &domain.constants {
        if !type_known(&c.ty) {
            return Err(ParseError::Invalid {
                line: 0,
                col: 0,
                msg: format!("constant `{}` has undeclared type `{}`", c.name, c.ty),
            });
        }
    }
    for p in &domain.predicates {
        for param in &p.params {
            if !type_known(&param.ty) {
                return Err(ParseError::Invalid {
                    line: 0,
                    col: 0,
                    msg: format!("predicate `{}` uses undeclared type `{}`", p.name, param.ty),
                });
            }
        }
    }

    let checker = DomainChecker { domain: &domain };
    for op in &domain.operators {
        for param in &op.params {
            if !type_known(&param.ty) {
                return Err(ParseError::Invalid {
                    line: 0,
                    col: 0,
                    msg: format!("action `{}` uses undeclared type `{}`", op.name, param.ty),
                });
            }
        }
        checker.check_operator_args(op, &sexp)?;
    }

    Ok(domain)
}

fn parse_action(section: &Sexp, items: &[Sexp]) -> Result<NdOperator, ParseError> {
    let name_sexp = items.get(1).ok_or_else(|| syntax(section, "missing action name"))?;
    let name = check_name(name_sexp, expect_atom(name_sexp, "an action name")?)?;

    let mut params = Vec::new();
    let mut precondition = Vec::new();
    let mut effects: Option<Vec<Vec<Literal>>> = None;

    let mut i = 2;
    while i < items.len() {
        let key = expect_atom(&items[i], "an action keyword")?;
        let value = items
            .get(i + 1)
            .ok_or_else(|| syntax(&items[i], format!("missing value for `{key}`")))?;
        match key {
            ":parameters" => {
                let plist = expect_list(value, "a parameter list")?;
                parse_typed_list(plist, value, |sexp, pname, ty| {
                    let var = pname
                        .strip_prefix('?')
                        .ok_or_else(|| syntax(sexp, "parameters must be variables"))?;
                    if params.iter().any(|p: &Param| p.name == var) {
                        return Err(invalid(sexp, format!("duplicate parameter `?{var}`")));
                    }
                    params.push(Param { name: var.to_string(), ty });
                    Ok(())
                })?;
            }
            ":precondition" => precondition = parse_precondition(value)?,
            ":effect" => effects = Some(parse_effect(value)?),
            other => return Err(unsupported(&items[i], format!("action keyword `{other}`"))),
        }
        i += 2;
    }

    let effects = effects.ok_or_else(|| syntax(section, "action without `:effect`"))?;
    debug_assert!(!effects.is_empty());
    Ok(NdOperator { name, params, precondition, effects })
}

/// Parses a problem against an already-parsed domain; objects, initial atoms
/// and goal literals are checked for declaration and type consistency.
pub fn parse_problem(text: &str, domain: &Domain) -> Result<Problem, ParseError> {
    let sexp = read_sexp(text)?;
    let items = expect_list(&sexp, "`(define ...)`")?;
    if sexp.head() != Some("define") {
        return Err(syntax(&sexp, "expected `(define (problem ...) ...)`"));
    }

    let name_form = items.get(1).ok_or_else(|| syntax(&sexp, "missing `(problem NAME)`"))?;
    let name_items = expect_list(name_form, "`(problem NAME)`")?;
    if name_form.head() != Some("problem") || name_items.len() != 2 {
        return Err(syntax(name_form, "expected `(problem NAME)`"));
    }

    let mut problem = Problem {
        name: check_name(&name_items[1], expect_atom(&name_items[1], "a problem name")?)?,
        domain_name: String::new(),
        objects: Vec::new(),
        init: Vec::new(),
        goal: Vec::new(),
    };

    let type_known = |ty: &str| ty == "object" || domain.types.iter().any(|t| t.name == ty);

    for section in &items[2..] {
        let sec_items = expect_list(section, "a problem section")?;
        match section.head() {
            Some(":domain") => {
                let dname = sec_items
                    .get(1)
                    .and_then(|s| s.atom())
                    .ok_or_else(|| syntax(section, "expected `(:domain NAME)`"))?;
                if dname != domain.name {
                    return Err(invalid(
                        section,
                        format!("problem is for domain `{dname}`, parsed domain is `{}`", domain.name),
                    ));
                }
                problem.domain_name = dname.to_string();
            }
            Some(":requirements") => {
                for req in &sec_items[1..] {
                    let r = expect_atom(req, "a requirement flag")?;
                    if !SUPPORTED_REQUIREMENTS.contains(&r) {
                        return Err(unsupported(req, format!("requirement `{r}`")));
                    }
                }
            }
            Some(":objects") => {
                parse_typed_list(&sec_items[1..], section, |sexp, name, ty| {
                    if !type_known(&ty) {
                        return Err(invalid(sexp, format!("undeclared type `{ty}`")));
                    }
                    if problem.objects.iter().any(|o| o.name == name)
                        || domain.constants.iter().any(|c| c.name == name)
                    {
                        return Err(invalid(sexp, format!("duplicate object `{name}`")));
                    }
                    problem.objects.push(TypedObject { name, ty });
                    Ok(())
                })?;
            }
            Some(":init") => {
                for atom_form in &sec_items[1..] {
                    let atom = parse_ground_atom(atom_form, domain, &problem.objects)?;
                    if !problem.init.contains(&atom) {
                        problem.init.push(atom);
                    }
                }
            }
            Some(":goal") => {
                let goal_form = sec_items
                    .get(1)
                    .ok_or_else(|| syntax(section, "empty `:goal`"))?;
                problem.goal = parse_goal(goal_form, domain, &problem.objects)?;
            }
            Some(":metric") => return Err(unsupported(section, "metrics")),
            Some(other) => return Err(unsupported(section, format!("problem section `{other}`"))),
            None => return Err(syntax(section, "expected a problem section")),
        }
    }

    if problem.domain_name.is_empty() {
        return Err(syntax(&sexp, "missing `(:domain NAME)`"));
    }
    Ok(problem)
}

fn object_type<'a>(
    name: &str,
    domain: &'a Domain,
    objects: &'a [TypedObject],
) -> Option<&'a str> {
    objects
        .iter()
        .find(|o| o.name == name)
        .or_else(|| domain.constants.iter().find(|c| c.name == name))
        .map(|o| o.ty.as_str())
}

fn parse_ground_atom(
    sexp: &Sexp,
    domain: &Domain,
    objects: &[TypedObject],
) -> Result<GroundAtom, ParseError> {
    let lit = parse_literal(sexp, false)?;
    if !lit.positive {
        return Err(invalid(sexp, "negated atom where a ground atom is expected"));
    }
    ground_literal_checked(&lit, sexp, domain, objects).map(|gl| gl.atom)
}

fn ground_literal_checked(
    lit: &Literal,
    at: &Sexp,
    domain: &Domain,
    objects: &[TypedObject],
) -> Result<GroundLiteral, ParseError> {
    let pred = domain
        .predicate(&lit.pred)
        .ok_or_else(|| invalid(at, format!("undeclared predicate `{}`", lit.pred)))?;
    if pred.params.len() != lit.args.len() {
        return Err(invalid(
            at,
            format!(
                "predicate `{}` takes {} arguments, found {}",
                lit.pred,
                pred.params.len(),
                lit.args.len()
            ),
        ));
    }
    let mut args = Vec::with_capacity(lit.args.len());
    for (term, param) in lit.args.iter().zip(&pred.params) {
        match term {
            Term::Var(v) => return Err(invalid(at, format!("unexpected variable `?{v}`"))),
            Term::Obj(o) => {
                let ty = object_type(o, domain, objects)
                    .ok_or_else(|| invalid(at, format!("undeclared object `{o}`")))?;
                if !domain.is_subtype(ty, &param.ty) {
                    return Err(invalid(
                        at,
                        format!("object `{o}` of type `{ty}` where `{}` expected", param.ty),
                    ));
                }
                args.push(o.clone());
            }
        }
    }
    Ok(GroundLiteral { positive: lit.positive, atom: GroundAtom { pred: lit.pred.clone(), args } })
}

fn parse_goal(
    sexp: &Sexp,
    domain: &Domain,
    objects: &[TypedObject],
) -> Result<Vec<GroundLiteral>, ParseError> {
    let lits = match sexp.head() {
        Some("and") => sexp.items().unwrap()[1..]
            .iter()
            .map(|s| parse_literal(s, false).map(|l| (l, s)))
            .collect::<Result<Vec<_>, _>>()?,
        Some("oneof") | Some("or") | Some("forall") | Some("exists") => {
            return Err(unsupported(sexp, format!("`{}` in goal", sexp.head().unwrap())))
        }
        None if sexp.items().map(|i| i.is_empty()).unwrap_or(false) => Vec::new(),
        _ => vec![(parse_literal(sexp, false)?, sexp)],
    };
    let mut seen = HashSet::new();
    let mut goal = Vec::new();
    for (lit, at) in lits {
        let gl = ground_literal_checked(&lit, at, domain, objects)?;
        let key = (gl.positive, gl.atom.clone());
        let twin = (!gl.positive, gl.atom.clone());
        if seen.contains(&twin) {
            return Err(invalid(at, format!("contradictory goal on `{}`", gl.atom.text())));
        }
        if seen.insert(key) {
            goal.push(gl);
        }
    }
    Ok(goal)
}

//! Canonical pretty-printing; re-parsing the output reproduces the same
//! structures.

use std::fmt::Write;

use super::{Domain, Literal, Problem, Term};

fn write_literal(out: &mut String, lit: &Literal) {
    if !lit.positive {
        out.push_str("(not ");
    }
    out.push('(');
    out.push_str(&lit.pred);
    for arg in &lit.args {
        match arg {
            Term::Var(v) => {
                let _ = write!(out, " ?{v}");
            }
            Term::Obj(o) => {
                let _ = write!(out, " {o}");
            }
        }
    }
    out.push(')');
    if !lit.positive {
        out.push(')');
    }
}

fn write_literal_conj(out: &mut String, lits: &[Literal]) {
    out.push_str("(and");
    for lit in lits {
        out.push(' ');
        write_literal(out, lit);
    }
    out.push(')');
}

pub fn print_domain(domain: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", domain.name);
    if !domain.requirements.is_empty() {
        let _ = writeln!(out, "  (:requirements {})", domain.requirements.join(" "));
    }
    if !domain.types.is_empty() {
        out.push_str("  (:types");
        for t in &domain.types {
            let _ = write!(out, " {} - {}", t.name, t.parent);
        }
        out.push_str(")\n");
    }
    if !domain.constants.is_empty() {
        out.push_str("  (:constants");
        for c in &domain.constants {
            let _ = write!(out, " {} - {}", c.name, c.ty);
        }
        out.push_str(")\n");
    }
    if !domain.predicates.is_empty() {
        out.push_str("  (:predicates");
        for p in &domain.predicates {
            let _ = write!(out, " ({}", p.name);
            for param in &p.params {
                let _ = write!(out, " ?{} - {}", param.name, param.ty);
            }
            out.push(')');
        }
        out.push_str(")\n");
    }
    for op in &domain.operators {
        let _ = writeln!(out, "  (:action {}", op.name);
        out.push_str("    :parameters (");
        for (i, p) in op.params.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "?{} - {}", p.name, p.ty);
        }
        out.push_str(")\n    :precondition ");
        write_literal_conj(&mut out, &op.precondition);
        out.push_str("\n    :effect ");
        if op.effects.len() == 1 {
            write_literal_conj(&mut out, &op.effects[0]);
        } else {
            out.push_str("(oneof");
            for eff in &op.effects {
                out.push(' ');
                write_literal_conj(&mut out, eff);
            }
            out.push(')');
        }
        out.push_str(")\n");
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(problem: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", problem.name);
    let _ = writeln!(out, "  (:domain {})", problem.domain_name);
    if !problem.objects.is_empty() {
        out.push_str("  (:objects");
        for o in &problem.objects {
            let _ = write!(out, " {} - {}", o.name, o.ty);
        }
        out.push_str(")\n");
    }
    out.push_str("  (:init");
    for atom in &problem.init {
        let _ = write!(out, " {}", atom.text());
    }
    out.push_str(")\n  (:goal (and");
    for lit in &problem.goal {
        if lit.positive {
            let _ = write!(out, " {}", lit.atom.text());
        } else {
            let _ = write!(out, " (not {})", lit.atom.text());
        }
    }
    out.push_str(")))\n");
    out
}

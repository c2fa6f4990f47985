//! Parser and model for the FOND PDDL dialect.
//!
//! The accepted dialect is frozen to `:strips :typing :equality
//! :negative-preconditions :non-deterministic`. Non-determinism is written
//! with `oneof`: one level per effect, optionally wrapped in a single `and`,
//! so `(and c (oneof a b))` expands to the effect sets `{c,a}` and `{c,b}`.
//! Anything outside the dialect (conditional effects, quantifiers, nested
//! `oneof`, costs) is rejected with a named-feature error rather than
//! silently misparsed. Identifiers are case-insensitive and normalized to
//! lower case.

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use parser::{parse_domain, parse_problem};
pub use printer::{print_domain, print_problem};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("{line}:{col}: unsupported feature: {feature}")]
    Unsupported { line: u32, col: u32, feature: String },
    #[error("{line}:{col}: {msg}")]
    Invalid { line: u32, col: u32, msg: String },
}

/// A typed formal parameter (`?x - block`). Untyped parameters get `object`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Param {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Predicate {
    pub name: String,
    pub params: Vec<Param>,
}

/// A type with its declared parent; the hierarchy is rooted at `object`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDef {
    pub name: String,
    pub parent: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedObject {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Obj(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Obj(n) => n,
        }
    }
}

/// A possibly negated predicate application. Equality preconditions use the
/// reserved predicate name `=`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub pred: String,
    pub args: Vec<Term>,
}

/// Non-deterministic operator `(h, P, E)`: a named head with typed variables,
/// a precondition literal set, and a non-empty list of mutually exclusive
/// effect literal sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NdOperator {
    pub name: String,
    pub params: Vec<Param>,
    pub precondition: Vec<Literal>,
    pub effects: Vec<Vec<Literal>>,
}

impl NdOperator {
    /// Number of literals (`|e+| + |e-|`) in one effect set; the ordering key
    /// used when ranking determinized domains.
    pub fn effect_size(&self, idx: usize) -> usize {
        self.effects[idx].len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: Vec<TypeDef>,
    pub constants: Vec<TypedObject>,
    pub predicates: Vec<Predicate>,
    pub operators: Vec<NdOperator>,
}

impl Domain {
    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name == name)
    }

    /// Whether `child` equals `ancestor` or is declared below it.
    pub fn is_subtype(&self, child: &str, ancestor: &str) -> bool {
        if ancestor == "object" || child == ancestor {
            return true;
        }
        let mut cur = child;
        loop {
            match self.types.iter().find(|t| t.name == cur) {
                Some(def) => {
                    if def.parent == ancestor {
                        return true;
                    }
                    cur = &def.parent;
                }
                None => return false,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    /// Canonical text form, e.g. `(at truck l1)`.
    pub fn text(&self) -> String {
        if self.args.is_empty() {
            format!("({})", self.pred)
        } else {
            format!("({} {})", self.pred, self.args.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundLiteral {
    pub positive: bool,
    pub atom: GroundAtom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<TypedObject>,
    pub init: Vec<GroundAtom>,
    pub goal: Vec<GroundLiteral>,
}

#[cfg(test)]
mod tests;

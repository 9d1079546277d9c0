//! Canonical PDDL rendering. `parse(print(x))` is structurally equal to `x`.

use std::fmt;

use super::ast::*;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable { name, .. } => write!(f, "?{name}"),
            Term::Constant { name, .. } => write!(f, "{name}"),
        }
    }
}

fn write_typed_term(f: &mut fmt::Formatter<'_>, term: &Term) -> fmt::Result {
    match term.type_name() {
        Some(ty) => write!(f, "{term} - {ty}"),
        None => write!(f, "{term}"),
    }
}

struct TypedTermList<'a>(&'a [Term]);

impl fmt::Display for TypedTermList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write_typed_term(f, term)?;
        }
        Ok(())
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "({})", self.name)
        } else {
            write!(f, "({}", self.name)?;
            for arg in &self.args {
                write!(f, " {arg}")?;
            }
            write!(f, ")")
        }
    }
}

/// Renders a predicate declaration with per-argument types.
struct PredicateDecl<'a>(&'a Predicate);

impl fmt::Display for PredicateDecl<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.args.is_empty() {
            write!(f, "({})", self.0.name)
        } else {
            write!(f, "({} {})", self.0.name, TypedTermList(&self.0.args))
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.predicate)
        } else {
            write!(f, "(not {})", self.predicate)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Literal(lit) => write!(f, "{lit}"),
            Formula::And(items) => write_list(f, "and", items),
            Formula::Or(items) => write_list(f, "or", items),
            Formula::Oneof(items) => write_list(f, "oneof", items),
            Formula::Not(inner) => write!(f, "(not {inner})"),
            Formula::Imply(a, b) => write!(f, "(imply {a} {b})"),
            Formula::When(c, e) => write!(f, "(when {c} {e})"),
            Formula::Forall(vars, body) => {
                write!(f, "(forall ({}) {body})", TypedTermList(vars))
            }
            Formula::Exists(vars, body) => {
                write!(f, "(exists ({}) {body})", TypedTermList(vars))
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({head}")?;
    for item in items {
        write!(f, " {item}")?;
    }
    write!(f, ")")
}

pub fn print_domain(domain: &PlanningDomain) -> String {
    let mut out = String::new();
    out.push_str(&format!("(define (domain {})\n", domain.name));
    if !domain.requirements.is_empty() {
        out.push_str(&format!(
            "  (:requirements {})\n",
            domain.requirements.join(" ")
        ));
    }
    if !domain.types.is_empty() {
        out.push_str(&format!("  (:types {})\n", domain.types.join(" ")));
    }
    if !domain.constants.is_empty() {
        let rendered: Vec<String> = domain
            .constants
            .iter()
            .map(|c| match c.type_name() {
                Some(ty) => format!("{c} - {ty}"),
                None => format!("{c}"),
            })
            .collect();
        out.push_str(&format!("  (:constants {})\n", rendered.join(" ")));
    }
    out.push_str("  (:predicates\n");
    for pred in &domain.predicates {
        out.push_str(&format!("    {}\n", PredicateDecl(pred)));
    }
    out.push_str("  )\n");
    for action in &domain.actions {
        out.push_str(&format!("  (:action {}\n", action.name));
        out.push_str(&format!(
            "    :parameters ({})\n",
            TypedTermList(&action.parameters)
        ));
        out.push_str(&format!("    :precondition {}\n", action.precondition));
        out.push_str(&format!("    :effect {}\n", action.effect));
        out.push_str("  )\n");
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(problem: &PlanningProblem) -> String {
    let mut out = String::new();
    out.push_str(&format!("(define (problem {})\n", problem.name));
    out.push_str(&format!("  (:domain {})\n", problem.domain_name));
    let mut groups = Vec::new();
    for (ty, names) in &problem.objects {
        if ty.is_some() {
            groups.push((ty, names));
        }
    }
    if let Some(names) = problem.objects.get(&None) {
        groups.push((&None, names));
    }
    out.push_str("  (:objects");
    for (ty, names) in groups {
        out.push(' ');
        out.push_str(&names.join(" "));
        if let Some(ty) = ty {
            out.push_str(&format!(" - {ty}"));
        }
    }
    out.push_str(")\n");
    let atoms: Vec<String> = problem.init.iter().map(|a| a.to_string()).collect();
    out.push_str(&format!("  (:init {})\n", atoms.join(" ")));
    out.push_str(&format!("  (:goal {})\n", problem.goal));
    out.push_str(")\n");
    out
}

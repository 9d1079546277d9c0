//! PDDL lexing, parsing, data model and pretty-printing for the STRIPS +
//! simple-ADL + nondeterministic (`oneof`) fragment.

mod ast;
mod lexer;
mod parser;
mod printer;

pub use ast::{ActionSchema, Formula, Literal, PlanningDomain, PlanningProblem, Predicate, Term};
pub use lexer::KEYWORDS;
pub use parser::{lint_domain, parse_domain, parse_problem};
pub use printer::{print_domain, print_problem};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PddlError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("predicate `{name}` used in action `{action}` is not declared")]
    UndeclaredPredicate { name: String, action: String },
    #[error("predicate `{name}` declared with arity {declared} but used with {used} in action `{action}`")]
    ArityMismatch {
        name: String,
        declared: usize,
        used: usize,
        action: String,
    },
    #[error("variable `?{variable}` in action `{action}` is not a parameter")]
    FreeVariable { variable: String, action: String },
    #[error("non-ground atom {atom} at line {line}")]
    NonGroundAtom { line: usize, atom: String },
    #[error("duplicate predicate declaration `{name}`")]
    DuplicatePredicate { name: String },
    #[error("duplicate action `{name}`")]
    DuplicateAction { name: String },
}

//! Abstract syntax for the PDDL fragment handled by this crate:
//! STRIPS plus simple ADL conditions, conditional effects and `oneof`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// A variable or constant occurring as a predicate/action argument.
///
/// Variable names are stored without the leading `?`; the printer adds it
/// back. `type_name` is `None` wherever the surrounding construct is untyped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Variable {
        name: String,
        type_name: Option<String>,
    },
    Constant {
        name: String,
        type_name: Option<String>,
    },
}

impl Term {
    pub fn variable(name: impl Into<String>, type_name: Option<String>) -> Self {
        Term::Variable {
            name: name.into(),
            type_name,
        }
    }

    pub fn constant(name: impl Into<String>, type_name: Option<String>) -> Self {
        Term::Constant {
            name: name.into(),
            type_name,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Variable { name, .. } | Term::Constant { name, .. } => name,
        }
    }

    pub fn type_name(&self) -> Option<&str> {
        match self {
            Term::Variable { type_name, .. } | Term::Constant { type_name, .. } => {
                type_name.as_deref()
            }
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable { .. })
    }
}

/// A predicate declaration or use. The special name `=` denotes equality
/// and always carries exactly two arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub name: String,
    pub args: Vec<Term>,
}

impl Predicate {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> Self {
        Predicate {
            name: name.into(),
            args,
        }
    }

    pub fn nullary(name: impl Into<String>) -> Self {
        Predicate::new(name, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_equality(&self) -> bool {
        self.name == "="
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_variable())
    }
}

/// A possibly negated predicate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub predicate: Predicate,
    pub positive: bool,
}

impl Literal {
    pub fn positive(predicate: Predicate) -> Self {
        Literal {
            predicate,
            positive: true,
        }
    }

    pub fn negative(predicate: Predicate) -> Self {
        Literal {
            predicate,
            positive: false,
        }
    }
}

/// Condition and effect formulas share one shape; `oneof`/`when` only ever
/// appear in effect position and `or`/`imply`/`exists` only in condition
/// position (the parser enforces this).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Literal(Literal),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Imply(Box<Formula>, Box<Formula>),
    Forall(Vec<Term>, Box<Formula>),
    Exists(Vec<Term>, Box<Formula>),
    When(Box<Formula>, Box<Formula>),
    Oneof(Vec<Formula>),
}

impl Formula {
    pub fn atom(predicate: Predicate) -> Self {
        Formula::Literal(Literal::positive(predicate))
    }

    pub fn neg_atom(predicate: Predicate) -> Self {
        Formula::Literal(Literal::negative(predicate))
    }

    /// Flattens nested `and`/`or` and sorts their children; used by tests and
    /// golden comparisons where conjunct order is immaterial. `oneof`
    /// alternatives keep their order.
    pub fn normalized(&self) -> Formula {
        match self {
            Formula::Literal(_) => self.clone(),
            Formula::And(items) => {
                let mut flat = Vec::new();
                for item in items {
                    match item.normalized() {
                        Formula::And(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                Formula::And(flat)
            }
            Formula::Or(items) => {
                let mut flat = Vec::new();
                for item in items {
                    match item.normalized() {
                        Formula::Or(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                Formula::Or(flat)
            }
            Formula::Not(f) => Formula::Not(Box::new(f.normalized())),
            Formula::Imply(a, b) => {
                Formula::Imply(Box::new(a.normalized()), Box::new(b.normalized()))
            }
            Formula::Forall(vars, f) => Formula::Forall(vars.clone(), Box::new(f.normalized())),
            Formula::Exists(vars, f) => Formula::Exists(vars.clone(), Box::new(f.normalized())),
            Formula::When(c, e) => {
                Formula::When(Box::new(c.normalized()), Box::new(e.normalized()))
            }
            Formula::Oneof(items) => {
                Formula::Oneof(items.iter().map(|f| f.normalized()).collect())
            }
        }
    }

    /// Visits every predicate use in the formula.
    pub fn visit_predicates<'a>(&'a self, visit: &mut impl FnMut(&'a Predicate)) {
        match self {
            Formula::Literal(lit) => visit(&lit.predicate),
            Formula::And(items) | Formula::Or(items) | Formula::Oneof(items) => {
                for item in items {
                    item.visit_predicates(visit);
                }
            }
            Formula::Not(f) => f.visit_predicates(visit),
            Formula::Imply(a, b) | Formula::When(a, b) => {
                a.visit_predicates(visit);
                b.visit_predicates(visit);
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.visit_predicates(visit),
        }
    }

    /// Variables occurring free in the formula (binders of `forall`/`exists`
    /// are excluded within their scope).
    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Literal(lit) => {
                    for arg in &lit.predicate.args {
                        if let Term::Variable { name, .. } = arg {
                            if !bound.iter().any(|b| b == name) {
                                out.insert(name.clone());
                            }
                        }
                    }
                }
                Formula::And(items) | Formula::Or(items) | Formula::Oneof(items) => {
                    for item in items {
                        walk(item, bound, out);
                    }
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::Imply(a, b) | Formula::When(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Forall(vars, g) | Formula::Exists(vars, g) => {
                    let n = bound.len();
                    bound.extend(vars.iter().map(|v| v.name().to_string()));
                    walk(g, bound, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// True if a `when` occurs anywhere in the formula.
    pub fn contains_when(&self) -> bool {
        let mut found = false;
        self.visit_structure(&mut |f| {
            if matches!(f, Formula::When(_, _)) {
                found = true;
            }
        });
        found
    }

    pub fn visit_structure(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Literal(_) => {}
            Formula::And(items) | Formula::Or(items) | Formula::Oneof(items) => {
                for item in items {
                    item.visit_structure(visit);
                }
            }
            Formula::Not(f) => f.visit_structure(visit),
            Formula::Imply(a, b) | Formula::When(a, b) => {
                a.visit_structure(visit);
                b.visit_structure(visit);
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.visit_structure(visit),
        }
    }
}

/// A lifted action: parameters, precondition and effect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub parameters: Vec<Term>,
    pub precondition: Formula,
    pub effect: Formula,
}

/// A parsed `(define (domain ...) ...)` document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanningDomain {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: Vec<String>,
    pub constants: Vec<Term>,
    pub predicates: Vec<Predicate>,
    pub actions: Vec<ActionSchema>,
}

impl PlanningDomain {
    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }
}

/// A parsed `(define (problem ...) ...)` document. Objects are grouped by
/// type with `None` holding the untyped bucket; init is a set of ground
/// atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanningProblem {
    pub name: String,
    pub domain_name: String,
    pub objects: BTreeMap<Option<String>, Vec<String>>,
    pub init: BTreeSet<Predicate>,
    pub goal: Formula,
}

impl PlanningProblem {
    /// Iterates `(object, declared type)` pairs across all buckets.
    pub fn all_objects(&self) -> impl Iterator<Item = (&str, Option<&str>)> {
        self.objects.iter().flat_map(|(ty, names)| {
            names
                .iter()
                .map(move |n| (n.as_str(), ty.as_deref()))
        })
    }

    pub fn has_object(&self, name: &str) -> bool {
        self.all_objects().any(|(n, _)| n == name)
    }
}

//! LTLf and PLTLf formulas over finite traces. Evaluation here is by direct
//! structural recursion on the trace and acts as the semantic oracle the DFA
//! constructions are checked against.

mod parser;

pub use parser::{parse_formula, parse_symbol};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TemporalError {
    #[error("syntax error in formula: {0}")]
    Syntax(String),
    #[error("atom `{name}` is used with different arities")]
    ArityConflict { name: String },
    #[error("formula mixes past and future operators: {0}")]
    Mixed(String),
}

/// A grounded predicate such as `vehicleat(l13)`; these are the alphabet
/// generators of the goal formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundedSymbol {
    pub name: String,
    pub objects: Vec<String>,
}

impl GroundedSymbol {
    pub fn new(name: impl Into<String>, objects: Vec<String>) -> Self {
        GroundedSymbol {
            name: name.into(),
            objects,
        }
    }

    pub fn nullary(name: impl Into<String>) -> Self {
        GroundedSymbol::new(name, Vec::new())
    }
}

impl fmt::Display for GroundedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.objects.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}({})", self.name, self.objects.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemporalFormula {
    True,
    False,
    Atom(GroundedSymbol),
    Not(Box<TemporalFormula>),
    And(Vec<TemporalFormula>),
    Or(Vec<TemporalFormula>),
    Implies(Box<TemporalFormula>, Box<TemporalFormula>),
    Iff(Box<TemporalFormula>, Box<TemporalFormula>),
    // future
    Next(Box<TemporalFormula>),
    WeakNext(Box<TemporalFormula>),
    Until(Box<TemporalFormula>, Box<TemporalFormula>),
    Release(Box<TemporalFormula>, Box<TemporalFormula>),
    Eventually(Box<TemporalFormula>),
    Always(Box<TemporalFormula>),
    // past
    Yesterday(Box<TemporalFormula>),
    Since(Box<TemporalFormula>, Box<TemporalFormula>),
    Once(Box<TemporalFormula>),
    Historically(Box<TemporalFormula>),
}

use TemporalFormula::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaClass {
    Propositional,
    Future,
    Past,
    Mixed,
}

impl TemporalFormula {
    pub fn negated(f: TemporalFormula) -> TemporalFormula {
        Not(Box::new(f))
    }

    pub fn atom(name: &str) -> TemporalFormula {
        Atom(GroundedSymbol::nullary(name))
    }

    /// Grounded symbols in order of first occurrence, deduplicated.
    pub fn atoms(&self) -> Vec<GroundedSymbol> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<GroundedSymbol>) {
        match self {
            True | False => {}
            Atom(sym) => {
                if !out.contains(sym) {
                    out.push(sym.clone());
                }
            }
            Not(f) | Next(f) | WeakNext(f) | Eventually(f) | Always(f) | Yesterday(f)
            | Once(f) | Historically(f) => f.collect_atoms(out),
            And(items) | Or(items) => {
                for item in items {
                    item.collect_atoms(out);
                }
            }
            Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) | Since(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

/// Classifies a formula by the temporal operators it contains.
pub fn classify(f: &TemporalFormula) -> FormulaClass {
    fn scan(f: &TemporalFormula, future: &mut bool, past: &mut bool) {
        match f {
            True | False | Atom(_) => {}
            Not(g) => scan(g, future, past),
            And(items) | Or(items) => {
                for item in items {
                    scan(item, future, past);
                }
            }
            Implies(a, b) | Iff(a, b) => {
                scan(a, future, past);
                scan(b, future, past);
            }
            Next(g) | WeakNext(g) | Eventually(g) | Always(g) => {
                *future = true;
                scan(g, future, past);
            }
            Until(a, b) | Release(a, b) => {
                *future = true;
                scan(a, future, past);
                scan(b, future, past);
            }
            Yesterday(g) | Once(g) | Historically(g) => {
                *past = true;
                scan(g, future, past);
            }
            Since(a, b) => {
                *past = true;
                scan(a, future, past);
                scan(b, future, past);
            }
        }
    }
    let (mut future, mut past) = (false, false);
    scan(f, &mut future, &mut past);
    match (future, past) {
        (false, false) => FormulaClass::Propositional,
        (true, false) => FormulaClass::Future,
        (false, true) => FormulaClass::Past,
        (true, true) => FormulaClass::Mixed,
    }
}

/// Negation normal form. `implies`/`iff` are eliminated and negation is
/// pushed down to atoms by the usual dualities. There is no weak-yesterday
/// operator, so a negation directly above `Y` stays in place; evaluation
/// handles it natively.
pub fn to_nnf(f: &TemporalFormula) -> TemporalFormula {
    match f {
        True | False | Atom(_) => f.clone(),
        And(items) => And(items.iter().map(to_nnf).collect()),
        Or(items) => Or(items.iter().map(to_nnf).collect()),
        Next(g) => Next(Box::new(to_nnf(g))),
        WeakNext(g) => WeakNext(Box::new(to_nnf(g))),
        Eventually(g) => Eventually(Box::new(to_nnf(g))),
        Always(g) => Always(Box::new(to_nnf(g))),
        Until(a, b) => Until(Box::new(to_nnf(a)), Box::new(to_nnf(b))),
        Release(a, b) => Release(Box::new(to_nnf(a)), Box::new(to_nnf(b))),
        Yesterday(g) => Yesterday(Box::new(to_nnf(g))),
        Once(g) => Once(Box::new(to_nnf(g))),
        Historically(g) => Historically(Box::new(to_nnf(g))),
        Since(a, b) => Since(Box::new(to_nnf(a)), Box::new(to_nnf(b))),
        Implies(a, b) => Or(vec![to_nnf(&TemporalFormula::negated((**a).clone())), to_nnf(b)]),
        Iff(a, b) => Or(vec![
            And(vec![to_nnf(a), to_nnf(b)]),
            And(vec![
                to_nnf(&TemporalFormula::negated((**a).clone())),
                to_nnf(&TemporalFormula::negated((**b).clone())),
            ]),
        ]),
        Not(inner) => match &**inner {
            True => False,
            False => True,
            Atom(_) => Not(Box::new((**inner).clone())),
            Not(g) => to_nnf(g),
            And(items) => Or(items
                .iter()
                .map(|g| to_nnf(&TemporalFormula::negated(g.clone())))
                .collect()),
            Or(items) => And(items
                .iter()
                .map(|g| to_nnf(&TemporalFormula::negated(g.clone())))
                .collect()),
            Implies(a, b) => And(vec![
                to_nnf(a),
                to_nnf(&TemporalFormula::negated((**b).clone())),
            ]),
            Iff(a, b) => Or(vec![
                And(vec![to_nnf(a), to_nnf(&TemporalFormula::negated((**b).clone()))]),
                And(vec![to_nnf(&TemporalFormula::negated((**a).clone())), to_nnf(b)]),
            ]),
            Next(g) => WeakNext(Box::new(to_nnf(&TemporalFormula::negated((**g).clone())))),
            WeakNext(g) => Next(Box::new(to_nnf(&TemporalFormula::negated((**g).clone())))),
            Eventually(g) => Always(Box::new(to_nnf(&TemporalFormula::negated((**g).clone())))),
            Always(g) => Eventually(Box::new(to_nnf(&TemporalFormula::negated((**g).clone())))),
            Until(a, b) => Release(
                Box::new(to_nnf(&TemporalFormula::negated((**a).clone()))),
                Box::new(to_nnf(&TemporalFormula::negated((**b).clone()))),
            ),
            Release(a, b) => Until(
                Box::new(to_nnf(&TemporalFormula::negated((**a).clone()))),
                Box::new(to_nnf(&TemporalFormula::negated((**b).clone()))),
            ),
            Once(g) => Historically(Box::new(to_nnf(&TemporalFormula::negated((**g).clone())))),
            Historically(g) => Once(Box::new(to_nnf(&TemporalFormula::negated((**g).clone())))),
            // ¬Y g has no dual here; keep the negation on the Y node.
            Yesterday(g) => TemporalFormula::negated(Yesterday(Box::new(to_nnf(g)))),
            // ¬(a S b) = ¬b ∧ (¬a ∨ ¬Y(a S b)), one unfolding of the
            // fixpoint with the negation left on the Y node.
            Since(a, b) => {
                let na = to_nnf(&TemporalFormula::negated((**a).clone()));
                let nb = to_nnf(&TemporalFormula::negated((**b).clone()));
                let since = Since(Box::new(to_nnf(a)), Box::new(to_nnf(b)));
                And(vec![
                    nb,
                    Or(vec![na, TemporalFormula::negated(Yesterday(Box::new(since)))]),
                ])
            }
        },
    }
}

/// A nonempty finite trace: one total interpretation of the atom set per
/// instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    atoms: Vec<GroundedSymbol>,
    index: HashMap<GroundedSymbol, usize>,
    steps: Vec<Vec<bool>>,
}

impl Trace {
    /// Panics if `steps` is empty or some step is not total over `atoms`.
    pub fn new(atoms: Vec<GroundedSymbol>, steps: Vec<Vec<bool>>) -> Self {
        assert!(!steps.is_empty(), "trace must be nonempty");
        for step in &steps {
            assert_eq!(step.len(), atoms.len(), "interpretation must be total");
        }
        let index = atoms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        Trace {
            atoms,
            index,
            steps,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atoms(&self) -> &[GroundedSymbol] {
        &self.atoms
    }

    pub fn holds(&self, i: usize, sym: &GroundedSymbol) -> bool {
        match self.index.get(sym) {
            Some(&j) => self.steps[i][j],
            None => false,
        }
    }

    /// The interpretation at instant `i` projected onto `order`.
    pub fn interpretation(&self, i: usize, order: &[GroundedSymbol]) -> Vec<bool> {
        order.iter().map(|a| self.holds(i, a)).collect()
    }
}

/// Finite-trace truth value of `f` at position `i`. Future operators look
/// toward the end of the trace, past operators toward position 0.
pub fn evaluate(f: &TemporalFormula, t: &Trace, i: usize) -> bool {
    assert!(i < t.len(), "position {i} out of range for trace of length {}", t.len());
    match f {
        True => true,
        False => false,
        Atom(sym) => t.holds(i, sym),
        Not(g) => !evaluate(g, t, i),
        And(items) => items.iter().all(|g| evaluate(g, t, i)),
        Or(items) => items.iter().any(|g| evaluate(g, t, i)),
        Implies(a, b) => !evaluate(a, t, i) || evaluate(b, t, i),
        Iff(a, b) => evaluate(a, t, i) == evaluate(b, t, i),
        Next(g) => i + 1 < t.len() && evaluate(g, t, i + 1),
        WeakNext(g) => i + 1 >= t.len() || evaluate(g, t, i + 1),
        Until(a, b) => (i..t.len())
            .any(|j| evaluate(b, t, j) && (i..j).all(|k| evaluate(a, t, k))),
        Release(a, b) => (i..t.len())
            .all(|j| evaluate(b, t, j) || (i..j).any(|k| evaluate(a, t, k))),
        Eventually(g) => (i..t.len()).any(|j| evaluate(g, t, j)),
        Always(g) => (i..t.len()).all(|j| evaluate(g, t, j)),
        Yesterday(g) => i > 0 && evaluate(g, t, i - 1),
        Since(a, b) => (0..=i)
            .any(|j| evaluate(b, t, j) && (j + 1..=i).all(|k| evaluate(a, t, k))),
        Once(g) => (0..=i).any(|j| evaluate(g, t, j)),
        Historically(g) => (0..=i).all(|j| evaluate(g, t, j)),
    }
}

/// Whole-trace satisfaction: future and propositional formulas are read at
/// the first instant, pure-past formulas at the last. Mixed formulas are
/// rejected.
pub fn satisfies(f: &TemporalFormula, t: &Trace) -> Result<bool, TemporalError> {
    match classify(f) {
        FormulaClass::Future | FormulaClass::Propositional => Ok(evaluate(f, t, 0)),
        FormulaClass::Past => Ok(evaluate(f, t, t.len() - 1)),
        FormulaClass::Mixed => Err(TemporalError::Mixed(format!("{f:?}"))),
    }
}

//! LTLf-to-DFA by formula progression. States are canonicalized residual
//! obligations in NNF; reading a letter expands the temporal fixpoints,
//! substitutes the letter's atom truth values and strips one X/WX layer.

use std::collections::HashMap;

use super::explicit::ExplicitDfa;
use super::{AutomatonError, Dfa};
use crate::temporal::{classify, to_nnf, FormulaClass, GroundedSymbol, TemporalFormula};

use TemporalFormula::*;

pub fn ltlf_to_dfa(f: &TemporalFormula) -> Result<Dfa, AutomatonError> {
    match classify(f) {
        FormulaClass::Future | FormulaClass::Propositional => {}
        other => {
            return Err(AutomatonError::WrongClass {
                expected: "an LTLf (future or propositional) formula".into(),
                found: format!("{other:?}"),
            })
        }
    }

    let atom_order = f.atoms();
    let n = atom_order.len();
    let initial = canonicalize(&to_nnf(f));

    let mut index: HashMap<TemporalFormula, usize> = HashMap::new();
    let mut states = vec![initial.clone()];
    index.insert(initial, 0);
    let mut succ: Vec<Vec<usize>> = Vec::new();

    let mut next_unprocessed = 0;
    while next_unprocessed < states.len() {
        let state = states[next_unprocessed].clone();
        next_unprocessed += 1;
        let expanded = expand(&state);
        let mut row = Vec::with_capacity(1 << n);
        for code in 0..(1usize << n) {
            let interpretation: Vec<bool> = (0..n).map(|j| code & (1 << j) != 0).collect();
            let residual = canonicalize(&strip(&substitute(
                &expanded,
                &atom_order,
                &interpretation,
            )));
            let id = *index.entry(residual.clone()).or_insert_with(|| {
                states.push(residual);
                states.len() - 1
            });
            row.push(id);
        }
        succ.push(row);
    }

    let accepting = states.iter().map(empty_suffix_eval).collect();
    Ok(ExplicitDfa {
        atom_order,
        initial: 0,
        accepting,
        succ,
    }
    .into_dfa())
}

/// One-step fixpoint unfolding: after this, every temporal obligation sits
/// under an X or WX, and everything else is a boolean over literals.
fn expand(f: &TemporalFormula) -> TemporalFormula {
    match f {
        True | False | Atom(_) | Next(_) | WeakNext(_) => f.clone(),
        Not(inner) => {
            debug_assert!(matches!(**inner, Atom(_)), "NNF keeps negation on atoms");
            f.clone()
        }
        And(items) => And(items.iter().map(expand).collect()),
        Or(items) => Or(items.iter().map(expand).collect()),
        Until(a, b) => Or(vec![
            expand(b),
            And(vec![expand(a), Next(Box::new(f.clone()))]),
        ]),
        Release(a, b) => And(vec![
            expand(b),
            Or(vec![expand(a), WeakNext(Box::new(f.clone()))]),
        ]),
        Eventually(a) => Or(vec![expand(a), Next(Box::new(f.clone()))]),
        Always(a) => And(vec![expand(a), WeakNext(Box::new(f.clone()))]),
        other => unreachable!("past operator in LTLf residual: {other:?}"),
    }
}

/// Replaces top-level literals (everything not under X/WX) by constants.
fn substitute(
    f: &TemporalFormula,
    atoms: &[GroundedSymbol],
    interpretation: &[bool],
) -> TemporalFormula {
    let lookup = |sym: &GroundedSymbol| {
        atoms
            .iter()
            .position(|a| a == sym)
            .map(|i| interpretation[i])
            .unwrap_or(false)
    };
    fn walk(
        f: &TemporalFormula,
        lookup: &impl Fn(&GroundedSymbol) -> bool,
    ) -> TemporalFormula {
        match f {
            True | False | Next(_) | WeakNext(_) => f.clone(),
            Atom(sym) => {
                if lookup(sym) {
                    True
                } else {
                    False
                }
            }
            Not(inner) => match &**inner {
                Atom(sym) => {
                    if lookup(sym) {
                        False
                    } else {
                        True
                    }
                }
                other => unreachable!("negation on non-atom after expand: {other:?}"),
            },
            And(items) => And(items.iter().map(|g| walk(g, lookup)).collect()),
            Or(items) => Or(items.iter().map(|g| walk(g, lookup)).collect()),
            other => unreachable!("unexpanded operator {other:?}"),
        }
    }
    walk(f, &lookup)
}

/// Removes one X/WX layer from a boolean over next-obligations. A stripped
/// strong X whose body would accept the empty suffix gets `∧ F(true)`
/// conjoined, and a stripped weak WX whose body would reject it gets
/// `∨ G(false)`, so that the empty-suffix value of the new state formula
/// stays faithful (F(true) is true on every nonempty trace and false on the
/// empty one; G(false) dually).
fn strip(f: &TemporalFormula) -> TemporalFormula {
    match f {
        True | False => f.clone(),
        And(items) => And(items.iter().map(strip).collect()),
        Or(items) => Or(items.iter().map(strip).collect()),
        Next(g) => {
            if empty_suffix_eval(g) {
                And(vec![(**g).clone(), Eventually(Box::new(True))])
            } else {
                (**g).clone()
            }
        }
        WeakNext(g) => {
            if empty_suffix_eval(g) {
                (**g).clone()
            } else {
                Or(vec![(**g).clone(), Always(Box::new(False))])
            }
        }
        other => unreachable!("cannot strip {other:?}"),
    }
}

/// Truth of a residual on the empty suffix: literals are false, X is false,
/// WX is true, U/◇ are false, R/□ are true.
fn empty_suffix_eval(f: &TemporalFormula) -> bool {
    match f {
        True => true,
        False => false,
        Atom(_) | Not(_) => false,
        And(items) => items.iter().all(empty_suffix_eval),
        Or(items) => items.iter().any(empty_suffix_eval),
        Next(_) | Until(_, _) | Eventually(_) => false,
        WeakNext(_) | Release(_, _) | Always(_) => true,
        other => unreachable!("past operator in LTLf residual: {other:?}"),
    }
}

/// Canonical form for residuals: flatten nested ∧/∨, drop units, dedupe,
/// apply absorption and sort children by the structural order, so that
/// syntactically different but obviously equal residuals share a state.
pub(crate) fn canonicalize(f: &TemporalFormula) -> TemporalFormula {
    match f {
        True | False | Atom(_) => f.clone(),
        Not(g) => Not(Box::new(canonicalize(g))),
        Next(g) => Next(Box::new(canonicalize(g))),
        WeakNext(g) => WeakNext(Box::new(canonicalize(g))),
        Eventually(g) => Eventually(Box::new(canonicalize(g))),
        Always(g) => Always(Box::new(canonicalize(g))),
        Yesterday(g) => Yesterday(Box::new(canonicalize(g))),
        Once(g) => Once(Box::new(canonicalize(g))),
        Historically(g) => Historically(Box::new(canonicalize(g))),
        Until(a, b) => Until(Box::new(canonicalize(a)), Box::new(canonicalize(b))),
        Release(a, b) => Release(Box::new(canonicalize(a)), Box::new(canonicalize(b))),
        Since(a, b) => Since(Box::new(canonicalize(a)), Box::new(canonicalize(b))),
        Implies(a, b) => Implies(Box::new(canonicalize(a)), Box::new(canonicalize(b))),
        Iff(a, b) => Iff(Box::new(canonicalize(a)), Box::new(canonicalize(b))),
        And(items) => {
            let mut flat = Vec::new();
            for item in items {
                match canonicalize(item) {
                    True => {}
                    False => return False,
                    And(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            flat.sort();
            flat.dedup();
            // absorption: a ∧ (a ∨ b) = a
            let conjuncts = flat.clone();
            flat.retain(|item| match item {
                Or(disjuncts) => !disjuncts.iter().any(|d| conjuncts.contains(d)),
                _ => true,
            });
            match flat.len() {
                0 => True,
                1 => flat.pop().unwrap(),
                _ => And(flat),
            }
        }
        Or(items) => {
            let mut flat = Vec::new();
            for item in items {
                match canonicalize(item) {
                    False => {}
                    True => return True,
                    Or(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            flat.sort();
            flat.dedup();
            // absorption: a ∨ (a ∧ b) = a
            let disjuncts = flat.clone();
            flat.retain(|item| match item {
                And(conjuncts) => !conjuncts.iter().any(|c| disjuncts.contains(c)),
                _ => true,
            });
            match flat.len() {
                0 => False,
                1 => flat.pop().unwrap(),
                _ => Or(flat),
            }
        }
    }
}

//! PLTLf-to-DFA through truth assignments over the closure (the set of all
//! subformulas). Reading a letter updates every subformula's value from the
//! letter and the previous assignment; a distinguished pre-initial state
//! seeds the recurrences.

use std::collections::HashMap;

use super::explicit::ExplicitDfa;
use super::{AutomatonError, Dfa};
use crate::temporal::{classify, FormulaClass, TemporalFormula};

use TemporalFormula::*;

pub fn pltlf_to_dfa(f: &TemporalFormula) -> Result<Dfa, AutomatonError> {
    match classify(f) {
        FormulaClass::Past => {}
        // Whole-trace satisfaction reads propositional formulas at the
        // first instant, which the closure recurrences cannot remember;
        // progression reads there natively.
        FormulaClass::Propositional => return super::ltlf_to_dfa(f),
        other => {
            return Err(AutomatonError::WrongClass {
                expected: "a PLTLf (past or propositional) formula".into(),
                found: format!("{other:?}"),
            })
        }
    }

    let atom_order = f.atoms();
    let n = atom_order.len();
    let closure = closure_of(f);
    let root = closure.len() - 1;

    // Child indices are resolved once; the closure is in postorder so every
    // child precedes its parent.
    let child = |g: &TemporalFormula| closure.iter().position(|h| h == g).unwrap();

    let step = |prev: Option<&Vec<bool>>, code: usize| -> Vec<bool> {
        let mut val = vec![false; closure.len()];
        for (i, g) in closure.iter().enumerate() {
            val[i] = match g {
                True => true,
                False => false,
                Atom(sym) => {
                    let j = atom_order.iter().position(|a| a == sym).unwrap();
                    code & (1 << j) != 0
                }
                Not(a) => !val[child(a)],
                And(items) => items.iter().all(|a| val[child(a)]),
                Or(items) => items.iter().any(|a| val[child(a)]),
                Implies(a, b) => !val[child(a)] || val[child(b)],
                Iff(a, b) => val[child(a)] == val[child(b)],
                Yesterday(a) => match prev {
                    None => false,
                    Some(v) => v[child(a)],
                },
                Since(a, b) => match prev {
                    None => val[child(b)],
                    Some(v) => val[child(b)] || (val[child(a)] && v[i]),
                },
                Once(a) => match prev {
                    None => val[child(a)],
                    Some(v) => val[child(a)] || v[i],
                },
                Historically(a) => match prev {
                    None => val[child(a)],
                    Some(v) => val[child(a)] && v[i],
                },
                other => unreachable!("future operator in PLTLf closure: {other:?}"),
            };
        }
        val
    };

    // State 0 is the pre-initial marker; assignment states follow.
    let mut assignments: Vec<Vec<bool>> = Vec::new();
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut succ: Vec<Vec<usize>> = vec![Vec::with_capacity(1 << n)];

    let mut intern =
        |v: Vec<bool>, assignments: &mut Vec<Vec<bool>>, succ: &mut Vec<Vec<usize>>| -> usize {
            *index.entry(v.clone()).or_insert_with(|| {
                assignments.push(v);
                succ.push(Vec::with_capacity(1 << n));
                assignments.len() // ids are offset by the pre-initial state
            })
        };

    for code in 0..(1usize << n) {
        let v = step(None, code);
        let id = intern(v, &mut assignments, &mut succ);
        succ[0].push(id);
    }
    let mut next_unprocessed = 0;
    while next_unprocessed < assignments.len() {
        let prev = assignments[next_unprocessed].clone();
        let state = next_unprocessed + 1;
        next_unprocessed += 1;
        for code in 0..(1usize << n) {
            let v = step(Some(&prev), code);
            let id = intern(v, &mut assignments, &mut succ);
            succ[state].push(id);
        }
    }

    let mut accepting = vec![false]; // the pre-initial state is never accepting
    accepting.extend(assignments.iter().map(|v| v[root]));

    // If some assignment behaves exactly like the pre-initial state, start
    // there instead; the pre-initial state has no incoming edges, so only
    // nonempty traces are observable and the merge is language-preserving.
    let initial = (1..succ.len())
        .find(|&s| succ[s] == succ[0])
        .unwrap_or(0);

    Ok(ExplicitDfa {
        atom_order,
        initial,
        accepting,
        succ,
    }
    .into_dfa())
}

/// All subformulas in postorder (children before parents), deduplicated.
fn closure_of(f: &TemporalFormula) -> Vec<TemporalFormula> {
    fn walk(f: &TemporalFormula, out: &mut Vec<TemporalFormula>) {
        match f {
            True | False | Atom(_) => {}
            Not(a) | Yesterday(a) | Once(a) | Historically(a) => walk(a, out),
            And(items) | Or(items) => {
                for item in items {
                    walk(item, out);
                }
            }
            Implies(a, b) | Iff(a, b) | Since(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            other => unreachable!("future operator in PLTLf closure: {other:?}"),
        }
        if !out.contains(f) {
            out.push(f.clone());
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}

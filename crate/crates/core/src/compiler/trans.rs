//! Synthesis of the `trans-<k>` actions: one action per DFA destination
//! state with incoming transitions, its precondition disjoining the
//! (source state, guard) pairs and its effect installing the destination's
//! q-atom while deleting every other one.

use std::collections::BTreeMap;

use super::{ObjectVarMap, TURN_DOMAIN};
use crate::automaton::{Dfa, Guard, GuardBit, StateId};
use crate::pddl::{ActionSchema, Formula, Predicate};

fn q_predicate(state: StateId, map: &ObjectVarMap) -> Predicate {
    Predicate::new(format!("q{state}"), map.argument_variables())
}

fn guard_literals(guard: &Guard, dfa: &Dfa, map: &ObjectVarMap) -> Vec<Formula> {
    let mut literals = Vec::new();
    for (i, bit) in guard.0.iter().enumerate() {
        let symbol = &dfa.atom_order[i];
        let predicate = Predicate::new(symbol.name.clone(), map.symbol_arguments(symbol));
        match bit {
            GuardBit::MustTrue => literals.push(Formula::atom(predicate)),
            GuardBit::MustFalse => literals.push(Formula::neg_atom(predicate)),
            GuardBit::Any => {}
        }
    }
    literals
}

pub fn synthesize_trans(dfa: &Dfa, map: &ObjectVarMap) -> Vec<ActionSchema> {
    let mut incoming: BTreeMap<StateId, Vec<(StateId, &Guard)>> = BTreeMap::new();
    for &src in &dfa.states {
        for (guard, dest) in &dfa.transitions[&src] {
            incoming.entry(*dest).or_default().push((src, guard));
        }
    }

    let not_turn = Formula::neg_atom(Predicate::nullary(TURN_DOMAIN));
    let mut actions = Vec::new();
    for (index, (dest, sources)) in incoming.iter().enumerate() {
        let mut disjuncts = Vec::with_capacity(sources.len());
        for (src, guard) in sources {
            let mut parts = vec![Formula::atom(q_predicate(*src, map))];
            parts.extend(guard_literals(guard, dfa, map));
            disjuncts.push(if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                Formula::And(parts)
            });
        }
        let precondition = if disjuncts.len() == 1 {
            match disjuncts.pop().unwrap() {
                Formula::And(mut parts) => {
                    parts.push(not_turn.clone());
                    Formula::And(parts)
                }
                single => Formula::And(vec![single, not_turn.clone()]),
            }
        } else {
            Formula::And(vec![Formula::Or(disjuncts), not_turn.clone()])
        };

        let mut effects = vec![Formula::atom(q_predicate(*dest, map))];
        for &state in &dfa.states {
            if state != *dest {
                effects.push(Formula::neg_atom(q_predicate(state, map)));
            }
        }
        effects.push(Formula::atom(Predicate::nullary(TURN_DOMAIN)));

        actions.push(ActionSchema {
            name: format!("trans-{index}"),
            parameters: map.parameters(),
            precondition,
            effect: Formula::And(effects),
        });
    }
    actions
}

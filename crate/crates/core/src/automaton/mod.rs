//! DFA construction for LTLf (residual progression) and PLTLf (closure
//! assignments), minimization, and MONA-convention DOT serialization.
//! Transition guards are ternary vectors over the formula's atom order.

mod dot;
mod explicit;
mod ltlf;
mod minimize;
mod pltlf;

pub use dot::{from_dot, to_dot};
pub use ltlf::ltlf_to_dfa;
pub use minimize::minimize;
pub use pltlf::pltlf_to_dfa;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::temporal::GroundedSymbol;

/// States are numbered 1..=m with the initial state first in BFS order.
pub type StateId = usize;

#[derive(Debug, Error)]
pub enum AutomatonError {
    #[error("formula is {found}, expected {expected}")]
    WrongClass { expected: String, found: String },
    #[error("malformed DOT at line {line}: {message}")]
    Dot { line: usize, message: String },
    #[error("guard `{guard}` has length {found}, expected {expected}")]
    GuardLength {
        guard: String,
        found: usize,
        expected: usize,
    },
    #[error("state {state} is not deterministic and complete: interpretation {interpretation} matched {matches} guards")]
    NotPartition {
        state: StateId,
        interpretation: usize,
        matches: usize,
    },
    #[error("unknown state {0} referenced in transition")]
    UnknownState(StateId),
}

/// One entry of a ternary transition guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GuardBit {
    MustTrue,
    MustFalse,
    Any,
}

impl GuardBit {
    fn as_char(self) -> char {
        match self {
            GuardBit::MustTrue => '1',
            GuardBit::MustFalse => '0',
            GuardBit::Any => 'X',
        }
    }
}

/// A ternary vector over the DFA's atom order; `X` entries are don't-care.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Guard(pub Vec<GuardBit>);

impl Guard {
    /// An interpretation matches iff every non-`X` entry agrees with it.
    pub fn matches(&self, interpretation: &[bool]) -> bool {
        self.0.iter().zip(interpretation).all(|(g, &v)| match g {
            GuardBit::MustTrue => v,
            GuardBit::MustFalse => !v,
            GuardBit::Any => true,
        })
    }

    pub fn parse(text: &str) -> Option<Guard> {
        text.chars()
            .map(|c| match c {
                '1' => Some(GuardBit::MustTrue),
                '0' => Some(GuardBit::MustFalse),
                'X' => Some(GuardBit::Any),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Guard)
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in &self.0 {
            write!(f, "{}", bit.as_char())?;
        }
        Ok(())
    }
}

/// A deterministic, complete automaton over interpretations of `atom_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub atom_order: Vec<GroundedSymbol>,
    pub states: Vec<StateId>,
    pub initial: StateId,
    pub accepting: BTreeSet<StateId>,
    pub transitions: BTreeMap<StateId, Vec<(Guard, StateId)>>,
}

impl Dfa {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// The unique successor of `state` under `interpretation`.
    pub fn step(&self, state: StateId, interpretation: &[bool]) -> StateId {
        for (guard, dest) in &self.transitions[&state] {
            if guard.matches(interpretation) {
                return *dest;
            }
        }
        unreachable!("complete DFA has a matching guard");
    }

    /// Runs the automaton over a sequence of interpretations (one per
    /// instant) and reports acceptance of the final state.
    pub fn accepts(&self, word: &[Vec<bool>]) -> bool {
        let mut state = self.initial;
        for letter in word {
            state = self.step(state, letter);
        }
        self.accepting.contains(&state)
    }

    /// Checks determinism and completeness: for each state the guards must
    /// partition the full interpretation space.
    pub fn validate(&self) -> Result<(), AutomatonError> {
        let n = self.atom_order.len();
        for &state in &self.states {
            let outgoing = self
                .transitions
                .get(&state)
                .ok_or(AutomatonError::UnknownState(state))?;
            for (_, dest) in outgoing {
                if !self.states.contains(dest) {
                    return Err(AutomatonError::UnknownState(*dest));
                }
            }
            for code in 0..(1usize << n) {
                let interpretation: Vec<bool> = (0..n).map(|j| code & (1 << j) != 0).collect();
                let matches = outgoing
                    .iter()
                    .filter(|(g, _)| g.matches(&interpretation))
                    .count();
                if matches != 1 {
                    return Err(AutomatonError::NotPartition {
                        state,
                        interpretation: code,
                        matches,
                    });
                }
            }
        }
        if !self.states.contains(&self.initial) {
            return Err(AutomatonError::UnknownState(self.initial));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::{parse_formula, satisfies, Trace};

    pub(crate) fn all_words(n_atoms: usize, len: usize) -> Vec<Vec<Vec<bool>>> {
        let letters = 1usize << n_atoms;
        let total = letters.pow(len as u32);
        (0..total)
            .map(|mut code| {
                (0..len)
                    .map(|_| {
                        let letter = code % letters;
                        code /= letters;
                        (0..n_atoms).map(|j| letter & (1 << j) != 0).collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// DFA acceptance must equal direct finite-trace semantics on every
    /// trace of length 1..=max_len.
    pub(crate) fn assert_oracle_equivalence(dfa: &Dfa, text: &str, max_len: usize) {
        let f = parse_formula(text).unwrap();
        dfa.validate().unwrap();
        let atoms = dfa.atom_order.clone();
        for len in 1..=max_len {
            for word in all_words(atoms.len(), len) {
                let trace = Trace::new(atoms.clone(), word.clone());
                let expected = satisfies(&f, &trace).unwrap();
                assert_eq!(
                    dfa.accepts(&word),
                    expected,
                    "`{text}` disagrees with semantics on {word:?}"
                );
            }
        }
    }

    #[test]
    fn guard_matching() {
        let g = Guard::parse("10X").unwrap();
        assert!(g.matches(&[true, false, true]));
        assert!(g.matches(&[true, false, false]));
        assert!(!g.matches(&[false, false, true]));
        assert_eq!(g.to_string(), "10X");
        assert!(Guard::parse("2").is_none());
    }
}

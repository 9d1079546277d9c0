//! Internal explicit-table DFA form: one successor per state per full
//! interpretation. Guards are recovered from the table by a reduced
//! decision tree over the atom order; an atom a transition does not depend
//! on prints as `X`, like BDD-path labels.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::VecDeque;

use super::{AutomatonError, Dfa, Guard, GuardBit, StateId};
use crate::temporal::GroundedSymbol;

#[derive(Debug, Clone)]
pub(crate) struct ExplicitDfa {
    pub atom_order: Vec<GroundedSymbol>,
    /// 0-based index of the initial state.
    pub initial: usize,
    pub accepting: Vec<bool>,
    /// `succ[state][interpretation-code]`, bit `j` of the code being the
    /// truth of `atom_order[j]`.
    pub succ: Vec<Vec<usize>>,
}

impl ExplicitDfa {
    pub fn n_atoms(&self) -> usize {
        self.atom_order.len()
    }

    pub fn n_states(&self) -> usize {
        self.succ.len()
    }

    pub fn from_dfa(dfa: &Dfa) -> Result<ExplicitDfa, AutomatonError> {
        dfa.validate()?;
        let n = dfa.atom_order.len();
        let index: BTreeMap<StateId, usize> = dfa
            .states
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect();
        let mut succ = Vec::with_capacity(dfa.states.len());
        for &state in &dfa.states {
            let mut row = Vec::with_capacity(1 << n);
            for code in 0..(1usize << n) {
                let interpretation: Vec<bool> = (0..n).map(|j| code & (1 << j) != 0).collect();
                row.push(index[&dfa.step(state, &interpretation)]);
            }
            succ.push(row);
        }
        Ok(ExplicitDfa {
            atom_order: dfa.atom_order.clone(),
            initial: index[&dfa.initial],
            accepting: dfa
                .states
                .iter()
                .map(|s| dfa.accepting.contains(s))
                .collect(),
            succ,
        })
    }

    /// Renumbers states in breadth-first discovery order (initial = 1,
    /// transitions explored in guard emission order), drops unreachable
    /// states and rebuilds ternary guards.
    pub fn into_dfa(self) -> Dfa {
        let n = self.n_atoms();
        let guards: Vec<Vec<(Guard, usize)>> = self
            .succ
            .iter()
            .map(|row| guards_from_row(row, n))
            .collect();

        let mut new_id: Vec<Option<StateId>> = vec![None; self.n_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        new_id[self.initial] = Some(1);
        order.push(self.initial);
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            for (_, dest) in &guards[s] {
                if new_id[*dest].is_none() {
                    new_id[*dest] = Some(order.len() + 1);
                    order.push(*dest);
                    queue.push_back(*dest);
                }
            }
        }

        let mut transitions = BTreeMap::new();
        let mut accepting = BTreeSet::new();
        for (i, &old) in order.iter().enumerate() {
            let id = i + 1;
            if self.accepting[old] {
                accepting.insert(id);
            }
            let outgoing: Vec<(Guard, StateId)> = guards[old]
                .iter()
                .map(|(g, dest)| (g.clone(), new_id[*dest].unwrap()))
                .collect();
            transitions.insert(id, outgoing);
        }

        Dfa {
            atom_order: self.atom_order,
            states: (1..=order.len()).collect(),
            initial: 1,
            accepting,
            transitions,
        }
    }
}

/// Builds the guard list for one successor row. Atoms the row does not
/// depend on (within the current cube) become `X`; 0-branches are emitted
/// before 1-branches.
pub(crate) fn guards_from_row(row: &[usize], n_atoms: usize) -> Vec<(Guard, usize)> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    split(row, n_atoms, 0, 0, &mut prefix, &mut out);
    out
}

fn split(
    row: &[usize],
    n: usize,
    pos: usize,
    base: usize,
    prefix: &mut Vec<GuardBit>,
    out: &mut Vec<(Guard, usize)>,
) {
    if pos == n {
        out.push((Guard(prefix.clone()), row[base]));
        return;
    }
    let suffixes = 1usize << (n - pos - 1);
    let identical = (0..suffixes).all(|s| {
        let tail = s << (pos + 1);
        row[base | tail] == row[base | (1 << pos) | tail]
    });
    if identical {
        prefix.push(GuardBit::Any);
        split(row, n, pos + 1, base, prefix, out);
        prefix.pop();
    } else {
        prefix.push(GuardBit::MustFalse);
        split(row, n, pos + 1, base, prefix, out);
        prefix.pop();
        prefix.push(GuardBit::MustTrue);
        split(row, n, pos + 1, base | (1 << pos), prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_row_yields_all_dont_care() {
        let guards = guards_from_row(&[3, 3, 3, 3], 2);
        assert_eq!(guards.len(), 1);
        assert_eq!(guards[0].0.to_string(), "XX");
        assert_eq!(guards[0].1, 3);
    }

    #[test]
    fn splits_only_where_the_row_depends_on_the_atom() {
        // bit0 = a, bit1 = b; successor depends only on b
        let guards = guards_from_row(&[0, 0, 1, 1], 2);
        let rendered: Vec<(String, usize)> = guards
            .iter()
            .map(|(g, d)| (g.to_string(), *d))
            .collect();
        assert_eq!(rendered, vec![("X0".into(), 0), ("X1".into(), 1)]);
    }

    #[test]
    fn zero_first_path_order() {
        // depends on both atoms; 0-branches come first at every level
        let guards = guards_from_row(&[0, 1, 2, 3], 2);
        let rendered: Vec<(String, usize)> = guards
            .iter()
            .map(|(g, d)| (g.to_string(), *d))
            .collect();
        assert_eq!(
            rendered,
            vec![
                ("00".into(), 0),
                ("01".into(), 2),
                ("10".into(), 1),
                ("11".into(), 3)
            ]
        );
    }
}

//! Moore partition refinement over the explicit successor tables, with one
//! extra rule: an initial state without incoming transitions can only ever
//! be observed through its outgoing behavior (no trace ends in it), so its
//! acceptance flag is a don't-care and it may join a behaviorally identical
//! block. That is what lets the PLTLf pre-initial state merge into q1.

use super::explicit::ExplicitDfa;
use super::{AutomatonError, Dfa};

/// Returns a language-equivalent DFA (over nonempty traces) with the
/// minimum number of states, renumbered breadth-first from the initial
/// state.
pub fn minimize(dfa: &Dfa) -> Result<Dfa, AutomatonError> {
    let explicit = ExplicitDfa::from_dfa(dfa)?;
    Ok(minimize_explicit(trim(explicit)).into_dfa())
}

fn trim(e: ExplicitDfa) -> ExplicitDfa {
    let mut reachable = vec![false; e.n_states()];
    let mut stack = vec![e.initial];
    reachable[e.initial] = true;
    while let Some(state) = stack.pop() {
        for &d in &e.succ[state] {
            if !reachable[d] {
                reachable[d] = true;
                stack.push(d);
            }
        }
    }
    if reachable.iter().all(|&r| r) {
        return e;
    }
    let mut remap = vec![usize::MAX; e.n_states()];
    let mut kept = 0;
    for (s, &r) in reachable.iter().enumerate() {
        if r {
            remap[s] = kept;
            kept += 1;
        }
    }
    let mut succ = Vec::with_capacity(kept);
    let mut accepting = Vec::with_capacity(kept);
    for (s, &alive) in reachable.iter().enumerate() {
        if alive {
            succ.push(e.succ[s].iter().map(|&d| remap[d]).collect());
            accepting.push(e.accepting[s]);
        }
    }
    ExplicitDfa {
        atom_order: e.atom_order,
        initial: remap[e.initial],
        accepting,
        succ,
    }
}

fn minimize_explicit(e: ExplicitDfa) -> ExplicitDfa {
    let n_states = e.n_states();

    // Initial partition by acceptance, block ids by first occurrence.
    let mut block: Vec<usize> = Vec::with_capacity(n_states);
    {
        let mut seen: Vec<(bool, usize)> = Vec::new();
        for s in 0..n_states {
            let id = match seen.iter().find(|(a, _)| *a == e.accepting[s]) {
                Some((_, id)) => *id,
                None => {
                    let id = seen.len();
                    seen.push((e.accepting[s], id));
                    id
                }
            };
            block.push(id);
        }
    }

    loop {
        let mut signatures: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n_states);
        for s in 0..n_states {
            signatures.push((block[s], e.succ[s].iter().map(|&d| block[d]).collect()));
        }
        let mut seen: Vec<(&(usize, Vec<usize>), usize)> = Vec::new();
        let mut next: Vec<usize> = Vec::with_capacity(n_states);
        for sig in &signatures {
            let id = match seen.iter().find(|(k, _)| *k == sig) {
                Some((_, id)) => *id,
                None => {
                    let id = seen.len();
                    seen.push((sig, id));
                    id
                }
            };
            next.push(id);
        }
        let stable = next == block;
        block = next;
        if stable {
            break;
        }
    }

    // Don't-care acceptance for an initial state nothing transitions into.
    let has_incoming = (0..n_states).any(|s| e.succ[s].contains(&e.initial));
    if !has_incoming && block.iter().filter(|&&b| b == block[e.initial]).count() == 1 {
        let init_row: Vec<usize> = e.succ[e.initial].iter().map(|&d| block[d]).collect();
        let twin = (0..n_states)
            .filter(|&s| s != e.initial)
            .find(|&s| e.succ[s].iter().map(|&d| block[d]).collect::<Vec<_>>() == init_row);
        if let Some(twin) = twin {
            block[e.initial] = block[twin];
        }
    }

    // Quotient. Block acceptance comes from members with definite flags,
    // i.e. anything except a merged-in no-incoming initial.
    let mut order: Vec<usize> = Vec::new(); // block ids by first occurrence
    for &b in &block {
        if !order.contains(&b) {
            order.push(b);
        }
    }
    let compact = |b: usize| order.iter().position(|&x| x == b).unwrap();

    let mut succ = vec![Vec::new(); order.len()];
    let mut accepting = vec![false; order.len()];
    let mut have_row = vec![false; order.len()];
    let mut have_acc = vec![false; order.len()];
    for s in 0..n_states {
        let b = compact(block[s]);
        if !have_row[b] {
            succ[b] = e.succ[s].iter().map(|&d| compact(block[d])).collect();
            have_row[b] = true;
        }
        let definite = has_incoming || s != e.initial;
        if definite && !have_acc[b] {
            accepting[b] = e.accepting[s];
            have_acc[b] = true;
        }
    }
    // A block whose only member is the no-incoming initial keeps its flag.
    for b in 0..order.len() {
        if !have_acc[b] {
            accepting[b] = e.accepting[e.initial];
        }
    }

    ExplicitDfa {
        atom_order: e.atom_order,
        initial: compact(block[e.initial]),
        accepting,
        succ,
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::assert_oracle_equivalence;
    use super::*;
    use crate::automaton::{ltlf_to_dfa, pltlf_to_dfa};
    use crate::temporal::parse_formula;

    /// Independent table-filling check: counts Myhill-Nerode classes of the
    /// trimmed DFA by marking distinguishable pairs until fixpoint.
    fn table_filling_class_count(d: &Dfa) -> usize {
        let e = ExplicitDfa::from_dfa(d).unwrap();
        let n = e.n_states();
        let mut marked = vec![vec![false; n]; n];
        for (p, row) in marked.iter_mut().enumerate() {
            for (q, cell) in row.iter_mut().enumerate() {
                if e.accepting[p] != e.accepting[q] {
                    *cell = true;
                }
            }
        }
        loop {
            let mut changed = false;
            for p in 0..n {
                for q in 0..n {
                    if !marked[p][q] {
                        let distinguishable = e.succ[p]
                            .iter()
                            .zip(&e.succ[q])
                            .any(|(&a, &b)| marked[a][b]);
                        if distinguishable {
                            marked[p][q] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes = 0;
        for p in 0..n {
            if class_of[p] == usize::MAX {
                class_of[p] = classes;
                for q in p + 1..n {
                    if !marked[p][q] {
                        class_of[q] = classes;
                    }
                }
                classes += 1;
            }
        }
        classes
    }

    #[test]
    fn idempotent_on_minimal_dfas() {
        for text in ["F(a)", "G(a | b)", "a U b"] {
            let d = minimize(&ltlf_to_dfa(&parse_formula(text).unwrap()).unwrap()).unwrap();
            let again = minimize(&d).unwrap();
            assert_eq!(d, again, "minimize not idempotent on {text}");
        }
    }

    #[test]
    fn duplicate_disjunct_progression_has_two_states() {
        let d = ltlf_to_dfa(&parse_formula("F(a) | F(a)").unwrap()).unwrap();
        let m = minimize(&d).unwrap();
        assert_eq!(m.state_count(), 2);
        assert_eq!(m.state_count(), table_filling_class_count(&m));
    }

    #[test]
    fn matches_table_filling_oracle() {
        for text in ["F(a)", "G(a)", "a U b", "F(a & b)", "G(F(a))", "(a U b) R c"] {
            let d = ltlf_to_dfa(&parse_formula(text).unwrap()).unwrap();
            let m = minimize(&d).unwrap();
            assert!(m.state_count() <= d.state_count());
            assert_eq!(
                m.state_count(),
                table_filling_class_count(&m),
                "{text} not minimal"
            );
            assert_oracle_equivalence(&m, text, 4);
        }
    }

    #[test]
    fn pltlf_pre_initial_state_merges() {
        let f = parse_formula("vehicleat(l13) & O(vehicleat(l23))").unwrap();
        let raw = pltlf_to_dfa(&f).unwrap();
        let m = minimize(&raw).unwrap();
        assert_eq!(m.state_count(), 3);
        assert!(m.state_count() <= raw.state_count());
    }

    #[test]
    fn no_incoming_initial_merges_into_a_behavioral_twin() {
        // a | !a: the progression automaton has a tautological initial
        // state that nothing re-enters; its row equals the accepting
        // sink's, so minimization folds them into one state.
        let raw = ltlf_to_dfa(&parse_formula("a | !a").unwrap()).unwrap();
        assert_eq!(raw.state_count(), 2);
        let m = minimize(&raw).unwrap();
        assert_eq!(m.state_count(), 1);
        assert!(m.accepting.contains(&1));
        assert_oracle_equivalence(&m, "a | !a", 4);
    }

    #[test]
    fn never_increases_state_count_and_preserves_language() {
        for text in ["O(a)", "H(a | b)", "Y(a)", "a S b"] {
            let d = pltlf_to_dfa(&parse_formula(text).unwrap()).unwrap();
            let m = minimize(&d).unwrap();
            assert!(m.state_count() <= d.state_count());
            assert_oracle_equivalence(&m, text, 4);
        }
    }
}

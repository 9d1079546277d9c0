//! MONA-convention DOT rendering of DFAs: states labelled by id,
//! `doublecircle` for accepting states, a dangling `init` arrow, and edge
//! labels that spell the ternary guard over the atom order. The atom order
//! itself travels in a graph attribute so a file round-trips exactly.

use std::collections::{BTreeMap, BTreeSet};

use super::{AutomatonError, Dfa, Guard, StateId};
use crate::temporal::parse_symbol;

pub fn to_dot(dfa: &Dfa) -> String {
    let mut out = String::new();
    out.push_str("digraph dfa {\n");
    out.push_str(" rankdir = LR;\n");
    out.push_str(" center = true;\n");
    out.push_str(" edge [fontname = Courier];\n");
    out.push_str(" node [height = .5, width = .5];\n");
    let atoms: Vec<String> = dfa.atom_order.iter().map(|a| a.to_string()).collect();
    out.push_str(&format!(" atoms = \"{}\";\n", atoms.join(" ")));
    if !dfa.accepting.is_empty() {
        let ids: Vec<String> = dfa.accepting.iter().map(|s| format!(" {s};")).collect();
        out.push_str(&format!(" node [shape = doublecircle];{}\n", ids.concat()));
    }
    let plain: Vec<String> = dfa
        .states
        .iter()
        .filter(|s| !dfa.accepting.contains(s))
        .map(|s| format!(" {s};"))
        .collect();
    if !plain.is_empty() {
        out.push_str(&format!(" node [shape = circle];{}\n", plain.concat()));
    }
    out.push_str(" init [shape = plaintext, label = \"\"];\n");
    out.push_str(&format!(" init -> {};\n", dfa.initial));
    for &state in &dfa.states {
        for (guard, dest) in &dfa.transitions[&state] {
            out.push_str(&format!(" {state} -> {dest} [label=\"{guard}\"];\n"));
        }
    }
    out.push_str("}\n");
    out
}

pub fn from_dot(text: &str) -> Result<Dfa, AutomatonError> {
    let mut atom_order = None;
    let mut accepting: BTreeSet<StateId> = BTreeSet::new();
    let mut plain: BTreeSet<StateId> = BTreeSet::new();
    let mut initial = None;
    let mut transitions: BTreeMap<StateId, Vec<(Guard, StateId)>> = BTreeMap::new();

    let err = |line: usize, message: &str| AutomatonError::Dot {
        line,
        message: message.to_string(),
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim().trim_end_matches(';').trim();
        if line.is_empty()
            || line.starts_with("digraph")
            || line == "}"
            || line.starts_with("rankdir")
            || line.starts_with("center")
            || line.starts_with("edge ")
            || line.starts_with("size")
            || line.starts_with("init [")
            || line == "node [height = .5, width = .5]"
        {
            continue;
        }
        if let Some(rest) = line.strip_prefix("atoms = \"") {
            let inner = rest
                .strip_suffix('"')
                .ok_or_else(|| err(lineno, "unterminated atoms attribute"))?;
            let mut atoms = Vec::new();
            for word in inner.split_whitespace() {
                let sym = parse_symbol(word)
                    .map_err(|e| err(lineno, &format!("bad atom `{word}`: {e}")))?;
                atoms.push(sym);
            }
            atom_order = Some(atoms);
            continue;
        }
        if let Some(rest) = line.strip_prefix("node [shape = doublecircle];") {
            for id in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let id: StateId = id.parse().map_err(|_| err(lineno, "bad state id"))?;
                accepting.insert(id);
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("node [shape = circle];") {
            for id in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let id: StateId = id.parse().map_err(|_| err(lineno, "bad state id"))?;
                plain.insert(id);
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("init -> ") {
            initial = Some(
                rest.trim()
                    .parse::<StateId>()
                    .map_err(|_| err(lineno, "bad initial state id"))?,
            );
            continue;
        }
        if let Some(arrow) = line.find(" -> ") {
            let src: StateId = line[..arrow]
                .trim()
                .parse()
                .map_err(|_| err(lineno, "bad source state id"))?;
            let rest = &line[arrow + 4..];
            let bracket = rest
                .find(" [label=\"")
                .ok_or_else(|| err(lineno, "edge without label"))?;
            let dest: StateId = rest[..bracket]
                .trim()
                .parse()
                .map_err(|_| err(lineno, "bad destination state id"))?;
            let label = &rest[bracket + 9..];
            let label = label
                .strip_suffix("\"]")
                .ok_or_else(|| err(lineno, "unterminated edge label"))?;
            let guard =
                Guard::parse(label).ok_or_else(|| err(lineno, "edge label must be over 1/0/X"))?;
            transitions.entry(src).or_default().push((guard, dest));
            continue;
        }
        return Err(err(lineno, &format!("unrecognized line `{line}`")));
    }

    let atom_order = atom_order.ok_or_else(|| err(0, "missing atoms attribute"))?;
    let initial = initial.ok_or_else(|| err(0, "missing init arrow"))?;
    let mut states: Vec<StateId> = accepting.union(&plain).copied().collect();
    states.sort_unstable();
    if states.is_empty() {
        return Err(err(0, "no states declared"));
    }
    for src in transitions.keys() {
        if !states.contains(src) {
            return Err(AutomatonError::UnknownState(*src));
        }
    }
    for state in &states {
        transitions.entry(*state).or_default();
    }
    for outgoing in transitions.values() {
        for (guard, _) in outgoing {
            if guard.0.len() != atom_order.len() {
                return Err(AutomatonError::GuardLength {
                    guard: guard.to_string(),
                    found: guard.0.len(),
                    expected: atom_order.len(),
                });
            }
        }
    }
    let dfa = Dfa {
        atom_order,
        states,
        initial,
        accepting,
        transitions,
    };
    dfa.validate()?;
    Ok(dfa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{ltlf_to_dfa, minimize, pltlf_to_dfa};
    use crate::temporal::parse_formula;

    #[test]
    fn eventually_dot_is_the_expected_text() {
        let dfa = ltlf_to_dfa(&parse_formula("F(a)").unwrap()).unwrap();
        let dot = to_dot(&dfa);
        let expected = "digraph dfa {\n rankdir = LR;\n center = true;\n edge [fontname = Courier];\n node [height = .5, width = .5];\n atoms = \"a\";\n node [shape = doublecircle]; 2;\n node [shape = circle]; 1;\n init [shape = plaintext, label = \"\"];\n init -> 1;\n 1 -> 1 [label=\"0\"];\n 1 -> 2 [label=\"1\"];\n 2 -> 2 [label=\"X\"];\n}\n";
        assert_eq!(dot, expected);
    }

    #[test]
    fn round_trips_paper_dfa() {
        let f = parse_formula("vehicleat(l13) & O(vehicleat(l23))").unwrap();
        let dfa = minimize(&pltlf_to_dfa(&f).unwrap()).unwrap();
        let back = from_dot(&to_dot(&dfa)).unwrap();
        assert_eq!(dfa, back);
    }

    #[test]
    fn wrong_guard_length_is_rejected() {
        let f = parse_formula("vehicleat(l13) & O(vehicleat(l23))").unwrap();
        let dfa = minimize(&pltlf_to_dfa(&f).unwrap()).unwrap();
        let dot = to_dot(&dfa).replace("[label=\"0X\"]", "[label=\"0\"]");
        assert!(matches!(
            from_dot(&dot),
            Err(AutomatonError::GuardLength { .. })
        ));
    }

    #[test]
    fn malformed_dot_is_rejected() {
        assert!(from_dot("digraph dfa { nonsense }").is_err());
        assert!(from_dot("digraph dfa {\n}\n").is_err());
    }
}

//! Randomized property checks over the temporal semantics and the DFA
//! constructions: NNF and negation preserve meaning, one-instant traces
//! behave as defined, and every constructed automaton agrees with direct
//! evaluation on exhaustively enumerated short traces.

mod common;

use proptest::prelude::*;

use common::all_words;
use tfond::automaton::{ltlf_to_dfa, minimize, pltlf_to_dfa};
use tfond::temporal::{
    classify, evaluate, satisfies, to_nnf, FormulaClass, GroundedSymbol, TemporalFormula, Trace,
};

const ATOMS: [&str; 3] = ["a", "b", "c"];

fn atom_syms() -> Vec<GroundedSymbol> {
    ATOMS.iter().map(|a| GroundedSymbol::nullary(*a)).collect()
}

fn leaf() -> impl Strategy<Value = TemporalFormula> {
    prop_oneof![
        Just(TemporalFormula::True),
        Just(TemporalFormula::False),
        prop::sample::select(ATOMS.to_vec()).prop_map(TemporalFormula::atom),
    ]
}

fn future_formula() -> impl Strategy<Value = TemporalFormula> {
    leaf().prop_recursive(2, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(TemporalFormula::negated),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::And(vec![a, b])),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::Or(vec![a, b])),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::Implies(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::Iff(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|f| TemporalFormula::Next(Box::new(f))),
            inner
                .clone()
                .prop_map(|f| TemporalFormula::WeakNext(Box::new(f))),
            inner
                .clone()
                .prop_map(|f| TemporalFormula::Eventually(Box::new(f))),
            inner
                .clone()
                .prop_map(|f| TemporalFormula::Always(Box::new(f))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::Until(Box::new(a), Box::new(b))),
            (inner.clone(), inner)
                .prop_map(|(a, b)| TemporalFormula::Release(Box::new(a), Box::new(b))),
        ]
    })
}

fn past_formula() -> impl Strategy<Value = TemporalFormula> {
    leaf().prop_recursive(2, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(TemporalFormula::negated),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::And(vec![a, b])),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::Or(vec![a, b])),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| TemporalFormula::Implies(Box::new(a), Box::new(b))),
            inner
                .clone()
                .prop_map(|f| TemporalFormula::Yesterday(Box::new(f))),
            inner.clone().prop_map(|f| TemporalFormula::Once(Box::new(f))),
            inner
                .clone()
                .prop_map(|f| TemporalFormula::Historically(Box::new(f))),
            (inner.clone(), inner)
                .prop_map(|(a, b)| TemporalFormula::Since(Box::new(a), Box::new(b))),
        ]
    })
}

fn traces_up_to(len: usize) -> Vec<Trace> {
    let atoms = atom_syms();
    let mut out = Vec::new();
    for l in 1..=len {
        for word in all_words(atoms.len(), l) {
            out.push(Trace::new(atoms.clone(), word));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nnf_and_negation_preserve_semantics(f in prop_oneof![future_formula(), past_formula()]) {
        let nnf = to_nnf(&f);
        let negated = TemporalFormula::negated(f.clone());
        for trace in traces_up_to(3) {
            for i in 0..trace.len() {
                prop_assert_eq!(evaluate(&f, &trace, i), evaluate(&nnf, &trace, i));
                prop_assert_eq!(evaluate(&negated, &trace, i), !evaluate(&f, &trace, i));
            }
        }
    }

    #[test]
    fn one_instant_trace_identities(f in prop_oneof![future_formula(), past_formula()]) {
        let atoms = atom_syms();
        for word in all_words(atoms.len(), 1) {
            let t = Trace::new(atoms.clone(), word);
            let g = Box::new(f.clone());
            prop_assert!(!evaluate(&TemporalFormula::Next(g.clone()), &t, 0));
            prop_assert!(evaluate(&TemporalFormula::WeakNext(g.clone()), &t, 0));
            prop_assert!(!evaluate(&TemporalFormula::Yesterday(g.clone()), &t, 0));
            let now = evaluate(&f, &t, 0);
            prop_assert_eq!(evaluate(&TemporalFormula::Once(g.clone()), &t, 0), now);
            prop_assert_eq!(evaluate(&TemporalFormula::Eventually(g), &t, 0), now);
        }
    }

    #[test]
    fn ltlf_construction_matches_semantics(f in future_formula()) {
        let dfa = ltlf_to_dfa(&f).unwrap();
        let minimized = minimize(&dfa).unwrap();
        prop_assert!(minimized.state_count() <= dfa.state_count());
        for trace in traces_up_to(3) {
            let expected = satisfies(&f, &trace).unwrap();
            let word: Vec<Vec<bool>> = (0..trace.len())
                .map(|i| trace.interpretation(i, &dfa.atom_order))
                .collect();
            prop_assert_eq!(dfa.accepts(&word), expected);
            prop_assert_eq!(minimized.accepts(&word), expected);
        }
    }

    #[test]
    fn pltlf_construction_matches_semantics(f in past_formula()) {
        // generated formulas may degenerate to propositional; both are in
        // the construction's domain
        prop_assume!(classify(&f) != FormulaClass::Mixed);
        let dfa = pltlf_to_dfa(&f).unwrap();
        let minimized = minimize(&dfa).unwrap();
        for trace in traces_up_to(3) {
            let expected = satisfies(&f, &trace).unwrap();
            let word: Vec<Vec<bool>> = (0..trace.len())
                .map(|i| trace.interpretation(i, &dfa.atom_order))
                .collect();
            prop_assert_eq!(dfa.accepts(&word), expected);
            prop_assert_eq!(minimized.accepts(&word), expected);
        }
    }
}

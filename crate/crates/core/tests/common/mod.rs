//! Shared helpers for the integration and acceptance suites.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::BTreeSet;

use tfond::pddl::{Formula, PlanningDomain, PlanningProblem};

/// Structural domain equality up to and/or conjunct order and the order of
/// declarations; action parameter order and `oneof` alternative order stay
/// significant.
pub fn assert_domains_equivalent(actual: &PlanningDomain, expected: &PlanningDomain) {
    assert_eq!(actual.name, expected.name, "domain name differs");
    assert_eq!(
        as_set(&actual.requirements),
        as_set(&expected.requirements),
        "requirements differ"
    );
    assert_eq!(as_set(&actual.types), as_set(&expected.types), "types differ");
    assert_eq!(
        actual.constants.iter().collect::<BTreeSet<_>>(),
        expected.constants.iter().collect::<BTreeSet<_>>(),
        "constants differ"
    );
    assert_eq!(
        actual.predicates.iter().collect::<BTreeSet<_>>(),
        expected.predicates.iter().collect::<BTreeSet<_>>(),
        "predicate declarations differ"
    );
    let actual_names: BTreeSet<&str> = actual.actions.iter().map(|a| a.name.as_str()).collect();
    let expected_names: BTreeSet<&str> =
        expected.actions.iter().map(|a| a.name.as_str()).collect();
    assert_eq!(actual_names, expected_names, "action names differ");
    for expected_action in &expected.actions {
        let actual_action = actual.action(&expected_action.name).unwrap();
        assert_eq!(
            actual_action.parameters, expected_action.parameters,
            "parameters of `{}` differ",
            expected_action.name
        );
        assert_formulas_equivalent(
            &actual_action.precondition,
            &expected_action.precondition,
            &format!("precondition of `{}`", expected_action.name),
        );
        assert_formulas_equivalent(
            &actual_action.effect,
            &expected_action.effect,
            &format!("effect of `{}`", expected_action.name),
        );
    }
}

pub fn assert_problems_equivalent(actual: &PlanningProblem, expected: &PlanningProblem) {
    assert_eq!(actual.name, expected.name, "problem name differs");
    assert_eq!(
        actual.domain_name, expected.domain_name,
        "domain reference differs"
    );
    assert_eq!(actual.objects, expected.objects, "objects differ");
    assert_eq!(actual.init, expected.init, "init atoms differ");
    assert_formulas_equivalent(&actual.goal, &expected.goal, "goal");
}

pub fn assert_formulas_equivalent(actual: &Formula, expected: &Formula, what: &str) {
    assert_eq!(
        actual.normalized(),
        expected.normalized(),
        "{what} differs:\n  actual:   {actual}\n  expected: {expected}"
    );
}

fn as_set(items: &[String]) -> BTreeSet<&str> {
    items.iter().map(|s| s.as_str()).collect()
}

/// Every interpretation word of the given length over `n_atoms` atoms; bit
/// `j` of a letter code is the truth of atom `j`.
pub fn all_words(n_atoms: usize, len: usize) -> Vec<Vec<Vec<bool>>> {
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

//! The four domain changes and the init/goal rewriting: original actions
//! gain `(turndomain)` in their precondition and `(not (turndomain))` in
//! their effect, the trans operators and the q-state predicates are added,
//! the init gains `(turndomain)` and the instantiated start state, and the
//! goal becomes `turndomain ∧ (disjunction of accepting q-atoms)`.

use super::adl::{conjoin, is_reserved_predicate};
use super::{CompileError, ObjectVarMap, TURN_DOMAIN};
use crate::automaton::{Dfa, StateId};
use crate::pddl::{ActionSchema, Formula, PlanningDomain, PlanningProblem, Predicate, Term};

pub fn rewrite_domain(
    domain: &PlanningDomain,
    trans_ops: Vec<ActionSchema>,
    dfa_states: &[StateId],
    map: &ObjectVarMap,
) -> Result<PlanningDomain, CompileError> {
    for predicate in &domain.predicates {
        if is_reserved_predicate(&predicate.name) {
            return Err(CompileError::NameClash {
                name: predicate.name.clone(),
            });
        }
    }
    for trans in &trans_ops {
        if domain.action(&trans.name).is_some() {
            return Err(CompileError::NameClash {
                name: trans.name.clone(),
            });
        }
    }

    let turn_atom = Formula::atom(Predicate::nullary(TURN_DOMAIN));
    let not_turn = Formula::neg_atom(Predicate::nullary(TURN_DOMAIN));

    let mut actions = Vec::with_capacity(domain.actions.len() + trans_ops.len());
    for action in &domain.actions {
        actions.push(ActionSchema {
            name: action.name.clone(),
            parameters: action.parameters.clone(),
            precondition: conjoin(action.precondition.clone(), turn_atom.clone()),
            effect: conjoin(action.effect.clone(), not_turn.clone()),
        });
    }
    actions.extend(trans_ops);

    let mut predicates = domain.predicates.clone();
    predicates.push(Predicate::nullary(TURN_DOMAIN));
    for &state in dfa_states {
        predicates.push(Predicate::new(format!("q{state}"), map.parameters()));
    }

    Ok(PlanningDomain {
        name: domain.name.clone(),
        requirements: domain.requirements.clone(),
        types: domain.types.clone(),
        constants: domain.constants.clone(),
        predicates,
        actions,
    })
}

/// Rewrites the problem against the automaton's own initial state.
pub fn rewrite_problem(
    problem: &PlanningProblem,
    dfa: &Dfa,
    map: &ObjectVarMap,
) -> Result<PlanningProblem, CompileError> {
    rewrite_problem_with_start(problem, dfa, map, dfa.initial)
}

/// Rewrites the problem, seeding the automaton in `start` (used by the
/// eval-initial-state convention).
pub fn rewrite_problem_with_start(
    problem: &PlanningProblem,
    dfa: &Dfa,
    map: &ObjectVarMap,
    start: StateId,
) -> Result<PlanningProblem, CompileError> {
    for object in map.objects() {
        if !problem.has_object(&object) {
            return Err(CompileError::UndeclaredObject { object });
        }
    }

    let object_args: Vec<Term> = map
        .objects()
        .iter()
        .map(|o| Term::constant(o.clone(), None))
        .collect();
    let q_atom = |state: StateId| Predicate::new(format!("q{state}"), object_args.clone());

    let mut init = problem.init.clone();
    init.insert(Predicate::nullary(TURN_DOMAIN));
    init.insert(q_atom(start));

    let accepting: Vec<Formula> = dfa
        .accepting
        .iter()
        .map(|&s| Formula::atom(q_atom(s)))
        .collect();
    let goal_state = if accepting.len() == 1 {
        accepting.into_iter().next().unwrap()
    } else {
        // an empty disjunction is unsatisfiable, matching an automaton
        // with no accepting state
        Formula::Or(accepting)
    };
    let goal = Formula::And(vec![
        Formula::atom(Predicate::nullary(TURN_DOMAIN)),
        goal_state,
    ]);

    Ok(PlanningProblem {
        name: problem.name.clone(),
        domain_name: problem.domain_name.clone(),
        objects: problem.objects.clone(),
        init,
        goal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{ltlf_to_dfa, minimize};
    use crate::compiler::{derive_parameters, synthesize_trans};
    use crate::pddl::{parse_domain, parse_problem};
    use crate::temporal::parse_formula;

    use std::collections::{BTreeMap, BTreeSet};

    const TTIRE: &str = include_str!("../../tests/fixtures/triangle-tire.pddl");
    const TTIRE_P1: &str = include_str!("../../tests/fixtures/triangle-tire-p1.pddl");

    fn eventually_setup() -> (PlanningDomain, Dfa, ObjectVarMap) {
        let domain = parse_domain(TTIRE).unwrap();
        let f = parse_formula("F(vehicleat(l13))").unwrap();
        let dfa = minimize(&ltlf_to_dfa(&f).unwrap()).unwrap();
        let map = derive_parameters(&domain, &dfa.atom_order).unwrap();
        (domain, dfa, map)
    }

    #[test]
    fn domain_gains_turndomain_everywhere() {
        let (domain, dfa, map) = eventually_setup();
        let trans = synthesize_trans(&dfa, &map);
        let new_domain = rewrite_domain(&domain, trans, &dfa.states, &map).unwrap();

        let move_car = new_domain.action("move-car").unwrap();
        assert_eq!(
            move_car.precondition.to_string(),
            "(and (vehicleat ?from) (road ?from ?to) (not-flattire) (turndomain))"
        );
        // the oneof alternatives stay intact, the deletion sits outside
        assert_eq!(
            move_car.effect.to_string(),
            "(and (oneof (and (vehicleat ?to) (not (vehicleat ?from))) \
             (and (vehicleat ?to) (not (vehicleat ?from)) (not (not-flattire)))) \
             (not (turndomain)))"
        );

        let changetire = new_domain.action("changetire").unwrap();
        assert_eq!(
            changetire.effect.to_string(),
            "(and (not (spare-in ?loc)) (not-flattire) (not (turndomain)))"
        );

        let names: Vec<&str> = new_domain
            .predicates
            .iter()
            .map(|p| p.name.as_str())
            .collect();
        assert_eq!(
            names,
            vec![
                "vehicleat",
                "spare-in",
                "road",
                "not-flattire",
                "turndomain",
                "q1",
                "q2"
            ]
        );
        let q1 = new_domain.predicate("q1").unwrap();
        assert_eq!(
            q1.args,
            vec![Term::variable("loc0", Some("location".into()))]
        );
    }

    #[test]
    fn reserved_predicates_clash() {
        let text = "(define (domain d) (:predicates (turndomain) (p))
            (:action a :parameters () :precondition (p) :effect (p)))";
        let domain = parse_domain(text).unwrap();
        let map = ObjectVarMap { entries: vec![] };
        assert!(matches!(
            rewrite_domain(&domain, vec![], &[1], &map),
            Err(CompileError::NameClash { .. })
        ));

        let text = "(define (domain d) (:predicates (q1 ?x) (p))
            (:action a :parameters () :precondition (p) :effect (p)))";
        let domain = parse_domain(text).unwrap();
        assert!(matches!(
            rewrite_domain(&domain, vec![], &[1], &map),
            Err(CompileError::NameClash { .. })
        ));
    }

    #[test]
    fn problem_gains_start_atom_and_goal() {
        let (domain, dfa, map) = eventually_setup();
        let _ = domain;
        let problem = parse_problem(TTIRE_P1).unwrap();
        let rewritten = rewrite_problem(&problem, &dfa, &map).unwrap();

        assert!(rewritten.init.contains(&Predicate::nullary(TURN_DOMAIN)));
        assert!(rewritten
            .init
            .contains(&Predicate::new("q1", vec![Term::constant("l13", None)])));
        assert_eq!(
            rewritten.goal.to_string(),
            "(and (turndomain) (q2 l13))"
        );
        assert_eq!(rewritten.init.len(), problem.init.len() + 2);
        assert_eq!(rewritten.objects, problem.objects);
    }

    #[test]
    fn multiple_accepting_states_disjoin() {
        let problem = parse_problem(TTIRE_P1).unwrap();
        let map = ObjectVarMap {
            entries: vec![(
                "l13".to_string(),
                Term::variable("loc0", Some("location".into())),
            )],
        };
        // hand-built DFA with accepting = {2, 3}
        let guard1 = crate::automaton::Guard::parse("1").unwrap();
        let guard0 = crate::automaton::Guard::parse("0").unwrap();
        let mut transitions = BTreeMap::new();
        transitions.insert(1, vec![(guard0.clone(), 2), (guard1.clone(), 3)]);
        transitions.insert(2, vec![(guard0.clone(), 2), (guard1.clone(), 3)]);
        transitions.insert(3, vec![(guard0, 2), (guard1, 3)]);
        let dfa = Dfa {
            atom_order: vec![crate::temporal::GroundedSymbol::new(
                "vehicleat",
                vec!["l13".into()],
            )],
            states: vec![1, 2, 3],
            initial: 1,
            accepting: BTreeSet::from([2, 3]),
            transitions,
        };
        dfa.validate().unwrap();
        let rewritten = rewrite_problem(&problem, &dfa, &map).unwrap();
        assert_eq!(
            rewritten.goal.to_string(),
            "(and (turndomain) (or (q2 l13) (q3 l13)))"
        );
    }

    #[test]
    fn unknown_formula_object_is_rejected() {
        let (_, dfa, _) = eventually_setup();
        let problem = parse_problem(TTIRE_P1).unwrap();
        let map = ObjectVarMap {
            entries: vec![(
                "l99".to_string(),
                Term::variable("loc0", Some("location".into())),
            )],
        };
        assert!(matches!(
            rewrite_problem(&problem, &dfa, &map),
            Err(CompileError::UndeclaredObject { .. })
        ));
    }
}

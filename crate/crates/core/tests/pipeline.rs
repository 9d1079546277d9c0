//! Whole-pipeline integration: compile → ground → solve → enumerate →
//! validate on tasks beyond the tireworld pair, plus the static shape
//! invariants of compiled domains.

mod common;

use tfond::automaton::{from_dot, to_dot};
use tfond::compiler::{compile, is_trans_action, CompileOptions, InitialStateConvention};
use tfond::fond::{
    controller_graph, enumerate_traces, strong_solve_task, validate_compiled, GroundTask,
};
use tfond::pddl::{parse_domain, parse_problem, Formula, Predicate, Term};
use tfond::temporal::parse_formula;

const TTIRE: &str = include_str!("fixtures/triangle-tire.pddl");
const TTIRE_P2: &str = include_str!("fixtures/triangle-tire-p2.pddl");
const HANOI: &str = include_str!("fixtures/hanoi.pddl");
const HANOI_PROB: &str = include_str!("fixtures/hanoi-prob.pddl");

fn run_pipeline(
    domain: &str,
    problem: &str,
    formula: &str,
    options: CompileOptions,
) -> (tfond::compiler::CompilationResult, GroundTask) {
    let domain = parse_domain(domain).unwrap();
    let problem = parse_problem(problem).unwrap();
    let f = parse_formula(formula).unwrap();
    let result = compile(&domain, &problem, &f, options).unwrap();
    let task = GroundTask::new(&result.new_domain, &result.new_problem).unwrap();
    (result, task)
}

#[test]
fn hanoi_theorem_check() {
    let (result, task) = run_pipeline(
        HANOI,
        HANOI_PROB,
        "F(on(d3,rod3))",
        CompileOptions::default(),
    );
    assert_eq!(
        result
            .new_domain
            .actions
            .iter()
            .filter(|a| is_trans_action(&a.name))
            .count(),
        2
    );
    let policy = strong_solve_task(&task).policy().expect("solvable").clone();
    let report = validate_compiled(&result, &task, &policy);
    assert!(report.pass, "{report}");
    // deterministic domain: a single trace reaching (q2 d3 rod3)
    let traces = enumerate_traces(&task, &policy).unwrap();
    assert_eq!(traces.len(), 1);
    let q2 = task.atom_id("(q2 d3 rod3)").unwrap();
    assert!(traces[0].final_state().contains(q2));
}

#[test]
fn multi_accepting_goal_run() {
    // Y(vehicleat(l23)) has two accepting state classes, so the compiled
    // goal is a disjunction; the task is still strongly solvable.
    let (result, task) = run_pipeline(
        TTIRE,
        TTIRE_P2,
        "Y(vehicleat(l23))",
        CompileOptions::default(),
    );
    assert!(result.dfa.accepting.len() >= 2);
    match &result.new_problem.goal {
        Formula::And(items) => {
            assert!(items
                .iter()
                .any(|f| matches!(f, Formula::Or(disjuncts) if disjuncts.len() >= 2)));
        }
        other => panic!("expected conjunction, got {other}"),
    }
    let policy = strong_solve_task(&task).policy().expect("solvable").clone();
    let report = validate_compiled(&result, &task, &policy);
    assert!(report.pass, "{report}");
}

#[test]
fn compiled_domain_alternates_statically() {
    let (result, _) = run_pipeline(
        TTIRE,
        TTIRE_P2,
        "vehicleat(l13) & O(vehicleat(l23))",
        CompileOptions::default(),
    );
    let turn = Predicate::nullary("turndomain");
    for action in &result.new_domain.actions {
        let wants_turn = contains_literal(&action.precondition, &turn, !is_trans_action(&action.name));
        let flips_turn = contains_literal(&action.effect, &turn, is_trans_action(&action.name));
        assert!(
            wants_turn && flips_turn,
            "`{}` does not alternate the turn",
            action.name
        );
    }
}

fn contains_literal(formula: &Formula, predicate: &Predicate, positive: bool) -> bool {
    let mut found = false;
    formula.visit_structure(&mut |f| {
        if let Formula::Literal(lit) = f {
            if lit.predicate == *predicate && lit.positive == positive {
                found = true;
            }
        }
    });
    found
}

#[test]
fn trans_effects_keep_exactly_one_q_atom() {
    let (result, _) = run_pipeline(
        TTIRE,
        TTIRE_P2,
        "vehicleat(l13) & O(vehicleat(l23))",
        CompileOptions::default(),
    );
    let states = &result.dfa.states;
    for action in &result.new_domain.actions {
        if !is_trans_action(&action.name) {
            continue;
        }
        let Formula::And(items) = &action.effect else {
            panic!("trans effect is a conjunction");
        };
        let added: Vec<&Predicate> = items
            .iter()
            .filter_map(|f| match f {
                Formula::Literal(l) if l.positive && l.predicate.name.starts_with('q') => {
                    Some(&l.predicate)
                }
                _ => None,
            })
            .collect();
        let deleted: Vec<&Predicate> = items
            .iter()
            .filter_map(|f| match f {
                Formula::Literal(l) if !l.positive && l.predicate.name.starts_with('q') => {
                    Some(&l.predicate)
                }
                _ => None,
            })
            .collect();
        assert_eq!(added.len(), 1, "{} adds one q-atom", action.name);
        assert_eq!(
            deleted.len(),
            states.len() - 1,
            "{} deletes every other q-atom",
            action.name
        );
    }
    // and the number of trans actions equals the number of destination
    // states with at least one incoming transition
    let mut has_incoming: std::collections::BTreeSet<usize> = Default::default();
    for s in states {
        for (_, dest) in &result.dfa.transitions[s] {
            has_incoming.insert(*dest);
        }
    }
    let trans_count = result
        .new_domain
        .actions
        .iter()
        .filter(|a| is_trans_action(&a.name))
        .count();
    assert_eq!(trans_count, has_incoming.len());
}

#[test]
fn compilation_result_invariants_hold() {
    let (result, _) = run_pipeline(
        TTIRE,
        TTIRE_P2,
        "vehicleat(l13) & O(vehicleat(l23))",
        CompileOptions::default(),
    );
    assert_eq!(result.new_problem.domain_name, result.new_domain.name);
    // every q-predicate used in the problem is declared in the domain
    for atom in &result.new_problem.init {
        if atom.name.starts_with('q') {
            let declared = result.new_domain.predicate(&atom.name).unwrap();
            assert_eq!(declared.arity(), atom.arity());
        }
    }
}

#[test]
fn dfa_artifacts_round_trip_through_dot() {
    for formula in ["F(vehicleat(l13))", "vehicleat(l13) & O(vehicleat(l23))"] {
        let (result, _) = run_pipeline(TTIRE, TTIRE_P2, formula, CompileOptions::default());
        let reloaded = from_dot(&to_dot(&result.dfa)).unwrap();
        assert_eq!(result.dfa, reloaded);
    }
}

#[test]
fn eval_initial_state_convention_validates_too() {
    let options = CompileOptions {
        convention: InitialStateConvention::EvalInitialState,
        ..CompileOptions::default()
    };
    let (result, task) = run_pipeline(TTIRE, TTIRE_P2, "vehicleat(l13) & O(vehicleat(l23))", options);
    let policy = strong_solve_task(&task).policy().expect("solvable").clone();
    let report = validate_compiled(&result, &task, &policy);
    assert!(report.pass, "{report}");
}

#[test]
fn controller_graphs_have_the_published_shapes() {
    let (_, task) = run_pipeline(
        TTIRE,
        TTIRE_P2,
        "vehicleat(l13) & O(vehicleat(l23))",
        CompileOptions::default(),
    );
    let policy = strong_solve_task(&task).policy().unwrap().clone();
    let traces = enumerate_traces(&task, &policy).unwrap();

    let full = controller_graph(&task, &traces, false).unwrap();
    let collapsed = controller_graph(&task, &traces, true).unwrap();
    // collapsing halves the path lengths: every remaining edge is a domain
    // action between domain-turn states
    assert!(collapsed.nodes.len() < full.nodes.len());
    assert!(collapsed
        .edges
        .iter()
        .all(|(_, label, _)| !label.starts_with("trans-")));
    // both graphs reach a goal node
    assert!(!full.goal_nodes.is_empty());
    assert!(!collapsed.goal_nodes.is_empty());
}

#[test]
fn unsolvable_compiled_task_is_reported() {
    // spare-in l11 never becomes true, so the accepting q-state is
    // unreachable
    let (_, task) = run_pipeline(
        TTIRE,
        TTIRE_P2,
        "F(spare-in(l11))",
        CompileOptions::default(),
    );
    assert!(strong_solve_task(&task).policy().is_none());
}

#[test]
fn untyped_domain_pipeline() {
    // hanoi is untyped end to end: q-predicates and trans parameters stay
    // untyped, grounding binds any object
    let (result, task) = run_pipeline(
        HANOI,
        HANOI_PROB,
        "F(on(d1,rod2))",
        CompileOptions::default(),
    );
    let trans0 = result.new_domain.action("trans-0").unwrap();
    assert!(trans0.parameters.iter().all(|t| t.type_name().is_none()));
    assert_eq!(
        trans0.parameters,
        vec![Term::variable("x0", None), Term::variable("y1", None)]
    );
    let policy = strong_solve_task(&task).policy().expect("solvable").clone();
    let report = validate_compiled(&result, &task, &policy);
    assert!(report.pass, "{report}");
}

//! Replays a policy for the compiled task and checks, trace by trace, that
//! the projected domain-state sequence satisfies the temporal goal both by
//! direct semantics and by re-running the DFA. Any execution anomaly
//! (undefined entry, inapplicable action, cycle) is a FAIL with the
//! anomaly as counterexample, never a crash.

use crate::compiler::{
    compile, CompilationResult, CompileError, CompileOptions, InitialStateConvention,
};
use crate::pddl::{PlanningDomain, PlanningProblem};
use crate::temporal::{satisfies, TemporalFormula, Trace};

use super::{enumerate_traces, AtomId, GroundTask, PlanTrace, Policy, WorldState};

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub pass: bool,
    pub convention: InitialStateConvention,
    pub traces_checked: usize,
    pub counterexample: Option<String>,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let convention = match self.convention {
            InitialStateConvention::PostAction => "post-action states",
            InitialStateConvention::EvalInitialState => "initial state included",
        };
        if self.pass {
            write!(
                f,
                "PASS ({} traces, dfa verdict == direct semantics on each; convention: {})",
                self.traces_checked, convention
            )
        } else {
            write!(
                f,
                "FAIL: {}",
                self.counterexample.as_deref().unwrap_or("unknown")
            )
        }
    }
}

/// Validates a policy against freshly compiled inputs.
pub fn validate(
    domain: &PlanningDomain,
    problem: &PlanningProblem,
    formula: &TemporalFormula,
    policy: &Policy,
    options: CompileOptions,
) -> Result<ValidationReport, CompileError> {
    let result = compile(domain, problem, formula, options)?;
    let task = GroundTask::new(&result.new_domain, &result.new_problem)
        .expect("compiled tasks always ground");
    Ok(validate_compiled(&result, &task, policy))
}

/// Validates a policy against an existing compilation result and its
/// grounded task.
pub fn validate_compiled(
    result: &CompilationResult,
    task: &GroundTask,
    policy: &Policy,
) -> ValidationReport {
    let fail = |counterexample: String, traces_checked: usize| ValidationReport {
        pass: false,
        convention: result.convention,
        traces_checked,
        counterexample: Some(counterexample),
    };

    let traces = match enumerate_traces(task, policy) {
        Ok(traces) => traces,
        Err(e) => return fail(format!("policy execution failed: {e}"), 0),
    };

    // how each formula atom reads off a world state
    let atom_ids: Vec<Option<AtomId>> = result
        .dfa
        .atom_order
        .iter()
        .map(|sym| {
            let rendered = if sym.objects.is_empty() {
                format!("({})", sym.name)
            } else {
                format!("({} {})", sym.name, sym.objects.join(" "))
            };
            task.atom_id(&rendered)
        })
        .collect();
    let project = |state: &WorldState| -> Vec<bool> {
        atom_ids
            .iter()
            .map(|id| id.map(|id| state.contains(id)).unwrap_or(false))
            .collect()
    };

    for (checked, trace) in traces.iter().enumerate() {
        let word = match projected_word(result, task, trace, &project) {
            Ok(word) => word,
            Err(why) => return fail(format!("{why}: {}", render(task, trace)), checked),
        };

        let dfa_verdict = result.dfa.accepts(&word);
        let semantics_verdict = if word.is_empty() {
            // no domain action ran, so the automaton read nothing; the only
            // evidence is its start state
            dfa_verdict
        } else {
            let t = Trace::new(result.dfa.atom_order.clone(), word.clone());
            match satisfies(&result.formula, &t) {
                Ok(v) => v,
                Err(e) => return fail(format!("semantics rejected the trace: {e}"), checked),
            }
        };

        if !(dfa_verdict && semantics_verdict) || dfa_verdict != semantics_verdict {
            return fail(
                format!(
                    "dfa verdict {dfa_verdict}, direct semantics {semantics_verdict} on {}",
                    render(task, trace)
                ),
                checked,
            );
        }
    }

    ValidationReport {
        pass: true,
        convention: result.convention,
        traces_checked: traces.len(),
        counterexample: None,
    }
}

/// Drops the trans steps and projects the remaining domain-state sequence
/// (the post-action states the automaton actually reads; with the
/// eval-initial-state convention the initial state is read first as well).
fn projected_word(
    result: &CompilationResult,
    task: &GroundTask,
    trace: &PlanTrace,
    project: &impl Fn(&WorldState) -> Vec<bool>,
) -> Result<Vec<Vec<bool>>, String> {
    let mut word = Vec::new();
    if result.convention == InitialStateConvention::EvalInitialState {
        word.push(project(&trace.states[0]));
    }
    for (i, action_name) in trace.actions.iter().enumerate() {
        let action = task
            .action_by_name(action_name)
            .ok_or_else(|| format!("unknown action `{action_name}`"))?;
        let is_trans = crate::compiler::is_trans_action(&action.schema);
        let expected_trans = i % 2 == 1;
        if is_trans != expected_trans {
            return Err(format!(
                "alternation violated at step {i} (`{action_name}`)"
            ));
        }
        if !is_trans {
            word.push(project(&trace.states[i + 1]));
        }
    }
    if trace.actions.len() % 2 == 1 {
        return Err("trace does not end with a trans step".to_string());
    }
    Ok(word)
}

fn render(task: &GroundTask, trace: &PlanTrace) -> String {
    let mut parts = Vec::new();
    for (i, state) in trace.states.iter().enumerate() {
        parts.push(format!("{{{}}}", state.display(task)));
        if let Some(action) = trace.actions.get(i) {
            parts.push(format!("--{action}-->"));
        }
    }
    parts.join(" ")
}

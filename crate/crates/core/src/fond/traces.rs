//! Exhaustive execution of a policy: every outcome of every applied action
//! is branched over, so the result is the full set of π-traces.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{applicable, GroundTask, Policy, WorldState};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("policy revisits state {{{state}}}; execution would be infinite")]
    Cycle { state: String },
    #[error("policy is undefined on reachable non-goal state {{{state}}}")]
    Undefined { state: String },
    #[error("policy action `{action}` is not applicable in state {{{state}}}")]
    Inapplicable { state: String, action: String },
    #[error("policy action `{action}` does not exist in the task")]
    UnknownAction { action: String },
}

/// One execution: `states` has one more entry than `actions`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanTrace {
    pub states: Vec<WorldState>,
    pub actions: Vec<String>,
}

impl PlanTrace {
    pub fn final_state(&self) -> &WorldState {
        self.states.last().unwrap()
    }
}

/// Branches over every outcome of every policy action, starting from the
/// task's initial state. Errors if an execution revisits a state on its own
/// path, or reaches a non-goal state the policy does not cover.
pub fn enumerate_traces(task: &GroundTask, policy: &Policy) -> Result<Vec<PlanTrace>, TraceError> {
    let mut traces = BTreeSet::new();
    let mut states = vec![task.init.clone()];
    let mut actions = Vec::new();
    walk(task, policy, &mut states, &mut actions, &mut traces)?;
    Ok(traces.into_iter().collect())
}

fn walk(
    task: &GroundTask,
    policy: &Policy,
    states: &mut Vec<WorldState>,
    actions: &mut Vec<String>,
    traces: &mut BTreeSet<PlanTrace>,
) -> Result<(), TraceError> {
    let state = states.last().unwrap().clone();
    match policy.action_for(&state) {
        None => {
            if task.goal_holds(&state) {
                traces.insert(PlanTrace {
                    states: states.clone(),
                    actions: actions.clone(),
                });
                Ok(())
            } else {
                Err(TraceError::Undefined {
                    state: state.display(task),
                })
            }
        }
        Some(name) => {
            let action = task
                .action_by_name(name)
                .ok_or_else(|| TraceError::UnknownAction {
                    action: name.to_string(),
                })?;
            if !applicable(&state, action) {
                return Err(TraceError::Inapplicable {
                    state: state.display(task),
                    action: name.to_string(),
                });
            }
            for outcome in &action.outcomes {
                let successor = state.apply(outcome);
                if states.contains(&successor) {
                    return Err(TraceError::Cycle {
                        state: successor.display(task),
                    });
                }
                states.push(successor);
                actions.push(name.to_string());
                walk(task, policy, states, actions, traces)?;
                states.pop();
                actions.pop();
            }
            Ok(())
        }
    }
}

//! AND-OR depth-first proof search for strong (acyclic) solutions: a state
//! is proven if it satisfies the goal or some applicable action has every
//! outcome proven without revisiting the current path. Proven states are
//! memoized with their chosen action; failed states are memoized only when
//! the failure did not depend on the path above them, which keeps the
//! search complete.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{applicable, GroundTask, PlanningDomain, PlanningProblem, WorldState};

/// State-based policy; entries map each reachable non-goal state to the
/// ground action chosen there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    pub entries: BTreeMap<WorldState, String>,
}

impl Policy {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn action_for(&self, state: &WorldState) -> Option<&str> {
        self.entries.get(state).map(|s| s.as_str())
    }
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Solved(Policy),
    Unsolvable,
}

impl SolveOutcome {
    pub fn policy(&self) -> Option<&Policy> {
        match self {
            SolveOutcome::Solved(p) => Some(p),
            SolveOutcome::Unsolvable => None,
        }
    }
}

enum Memo {
    Proven(usize),
    Disproven,
}

struct Failure {
    path_dependent: bool,
}

/// Grounds and solves in one call.
pub fn strong_solve(
    domain: &PlanningDomain,
    problem: &PlanningProblem,
) -> Result<SolveOutcome, super::FondError> {
    Ok(strong_solve_task(&GroundTask::new(domain, problem)?))
}

pub fn strong_solve_task(task: &GroundTask) -> SolveOutcome {
    let mut memo: HashMap<WorldState, Memo> = HashMap::new();
    let mut path: Vec<WorldState> = Vec::new();
    match prove(task, task.init.clone(), &mut path, &mut memo) {
        Ok(()) => SolveOutcome::Solved(extract_policy(task, &memo)),
        Err(_) => SolveOutcome::Unsolvable,
    }
}

fn prove(
    task: &GroundTask,
    state: WorldState,
    path: &mut Vec<WorldState>,
    memo: &mut HashMap<WorldState, Memo>,
) -> Result<(), Failure> {
    if task.goal_holds(&state) {
        return Ok(());
    }
    match memo.get(&state) {
        Some(Memo::Proven(_)) => return Ok(()),
        Some(Memo::Disproven) => {
            return Err(Failure {
                path_dependent: false,
            })
        }
        None => {}
    }

    path.push(state.clone());
    let mut path_dependent = false;
    let mut chosen = None;
    // actions are sorted by name, so this is the lexicographic tie-break
    for (index, action) in task.actions.iter().enumerate() {
        if !applicable(&state, action) {
            continue;
        }
        let mut all_proven = true;
        for outcome in &action.outcomes {
            let successor = state.apply(outcome);
            if path.contains(&successor) {
                all_proven = false;
                path_dependent = true;
                break;
            }
            match prove(task, successor, path, memo) {
                Ok(()) => {}
                Err(failure) => {
                    all_proven = false;
                    path_dependent |= failure.path_dependent;
                    break;
                }
            }
        }
        if all_proven {
            chosen = Some(index);
            break;
        }
    }
    path.pop();

    match chosen {
        Some(index) => {
            memo.insert(state, Memo::Proven(index));
            Ok(())
        }
        None => {
            if !path_dependent {
                memo.insert(state, Memo::Disproven);
            }
            Err(Failure { path_dependent })
        }
    }
}

/// Restricts the memoized choices to the states actually reachable under
/// the policy from the initial state.
fn extract_policy(task: &GroundTask, memo: &HashMap<WorldState, Memo>) -> Policy {
    let mut entries = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(task.init.clone());
    let mut seen = std::collections::HashSet::new();
    seen.insert(task.init.clone());
    while let Some(state) = queue.pop_front() {
        if task.goal_holds(&state) {
            continue;
        }
        let index = match memo.get(&state) {
            Some(Memo::Proven(index)) => *index,
            _ => unreachable!("reachable non-goal state without a proven choice"),
        };
        let action = &task.actions[index];
        entries.insert(state.clone(), action.name.clone());
        for outcome in &action.outcomes {
            let successor = state.apply(outcome);
            if seen.insert(successor.clone()) {
                queue.push_back(successor);
            }
        }
    }
    Policy { entries }
}

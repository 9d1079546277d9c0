//! Compiling away simple conditional effects: an action whose effect is a
//! single `when` folds the condition into its precondition; an action whose
//! effect conjoins n `when`s splits into n actions, each keeping the shared
//! non-conditional conjuncts.

use super::{CompileError, TURN_DOMAIN};
use crate::pddl::{ActionSchema, Formula, PlanningDomain};

pub fn compile_conditional_effects(
    domain: &PlanningDomain,
) -> Result<PlanningDomain, CompileError> {
    let mut actions = Vec::new();
    for action in &domain.actions {
        match &action.effect {
            Formula::When(condition, body) => {
                check_simple(condition, &action.name)?;
                check_simple(body, &action.name)?;
                actions.push(ActionSchema {
                    name: action.name.clone(),
                    parameters: action.parameters.clone(),
                    precondition: conjoin(action.precondition.clone(), (**condition).clone()),
                    effect: (**body).clone(),
                });
            }
            Formula::And(items) if items.iter().any(|i| matches!(i, Formula::When(_, _))) => {
                let mut pairs = Vec::new();
                let mut shared = Vec::new();
                for item in items {
                    match item {
                        Formula::When(condition, body) => {
                            check_simple(condition, &action.name)?;
                            check_simple(body, &action.name)?;
                            pairs.push((condition.clone(), body.clone()));
                        }
                        other => {
                            if other.contains_when() {
                                return Err(CompileError::UnsupportedAdl {
                                    action: action.name.clone(),
                                });
                            }
                            shared.push(other.clone());
                        }
                    }
                }
                for (i, (condition, body)) in pairs.into_iter().enumerate() {
                    let effect = if shared.is_empty() {
                        *body
                    } else {
                        let mut parts = vec![*body];
                        parts.extend(shared.iter().cloned());
                        Formula::And(parts)
                    };
                    actions.push(ActionSchema {
                        name: format!("{}-{}", action.name, i),
                        parameters: action.parameters.clone(),
                        precondition: Formula::And(vec![
                            action.precondition.clone(),
                            *condition,
                        ]),
                        effect,
                    });
                }
            }
            other => {
                if other.contains_when() {
                    return Err(CompileError::UnsupportedAdl {
                        action: action.name.clone(),
                    });
                }
                actions.push(action.clone());
            }
        }
    }
    Ok(PlanningDomain {
        name: domain.name.clone(),
        requirements: domain.requirements.clone(),
        types: domain.types.clone(),
        constants: domain.constants.clone(),
        predicates: domain.predicates.clone(),
        actions,
    })
}

/// A simple conditional effect has no nested when/forall/oneof on either
/// side.
fn check_simple(formula: &Formula, action: &str) -> Result<(), CompileError> {
    let mut bad = false;
    formula.visit_structure(&mut |f| {
        if matches!(
            f,
            Formula::When(_, _) | Formula::Forall(_, _) | Formula::Oneof(_)
        ) {
            bad = true;
        }
    });
    if bad {
        Err(CompileError::UnsupportedAdl {
            action: action.to_string(),
        })
    } else {
        Ok(())
    }
}

/// Conjoins into an existing top-level `and`, or wraps both sides.
pub(crate) fn conjoin(formula: Formula, extra: Formula) -> Formula {
    match formula {
        Formula::And(mut items) => {
            items.push(extra);
            Formula::And(items)
        }
        other => Formula::And(vec![other, extra]),
    }
}

/// Marks synthesized automaton-step actions; used when rewriting the domain
/// and when checking the alternation invariant.
pub fn is_trans_action(name: &str) -> bool {
    name.strip_prefix("trans-")
        .map(|suffix| !suffix.is_empty() && suffix.chars().all(|c| c.is_ascii_digit()))
        .unwrap_or(false)
}

/// Reserved predicate names that the compilation introduces.
pub fn is_reserved_predicate(name: &str) -> bool {
    if name == TURN_DOMAIN {
        return true;
    }
    name.strip_prefix('q')
        .map(|suffix| !suffix.is_empty() && suffix.chars().all(|c| c.is_ascii_digit()))
        .unwrap_or(false)
}

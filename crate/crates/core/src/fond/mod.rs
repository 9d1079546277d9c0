//! Grounding of compiled tasks, strong-plan search, policy-trace
//! enumeration, end-to-end validation against the temporal semantics, and
//! controller-graph emission.

mod graph;
mod policy_io;
mod search;
mod traces;
mod validate;

pub use graph::{controller_graph, graph_to_dot, ControllerGraph, GraphError};
pub use policy_io::{policy_from_text, policy_to_text, PolicyIoError};
pub use search::{strong_solve, strong_solve_task, Policy, SolveOutcome};
pub use traces::{enumerate_traces, PlanTrace, TraceError};
pub use validate::{validate, validate_compiled, ValidationReport};

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::pddl::{Formula, PlanningDomain, PlanningProblem, Predicate, Term};

pub type AtomId = u32;

#[derive(Debug, Error)]
pub enum FondError {
    #[error("action `{action}` still contains `{construct}` in its effect; compile conditional effects first")]
    NotCompiled { action: String, construct: String },
    #[error("object `{object}` referenced in init is not declared")]
    UnknownObject { object: String },
}

/// A set of true ground atoms under the closed-world assumption.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldState(pub BTreeSet<AtomId>);

impl WorldState {
    pub fn contains(&self, atom: AtomId) -> bool {
        self.0.contains(&atom)
    }

    pub fn apply(&self, outcome: &GroundOutcome) -> WorldState {
        let mut next = self.0.clone();
        for atom in &outcome.delete {
            next.remove(atom);
        }
        for atom in &outcome.add {
            next.insert(*atom);
        }
        WorldState(next)
    }

    /// Sorted atom rendering, used by policy files and graph comments.
    pub fn display(&self, task: &GroundTask) -> String {
        let mut names: Vec<&str> = self
            .0
            .iter()
            .map(|&id| task.atom_names[id as usize].as_str())
            .collect();
        names.sort_unstable();
        names.join(" ")
    }
}

/// Fully instantiated condition over atom ids; equalities and quantifiers
/// are folded away during grounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundCondition {
    Const(bool),
    Literal(AtomId, bool),
    And(Vec<GroundCondition>),
    Or(Vec<GroundCondition>),
    Not(Box<GroundCondition>),
    Imply(Box<GroundCondition>, Box<GroundCondition>),
}

impl GroundCondition {
    pub fn eval(&self, state: &WorldState) -> bool {
        match self {
            GroundCondition::Const(b) => *b,
            GroundCondition::Literal(atom, positive) => state.contains(*atom) == *positive,
            GroundCondition::And(items) => items.iter().all(|c| c.eval(state)),
            GroundCondition::Or(items) => items.iter().any(|c| c.eval(state)),
            GroundCondition::Not(inner) => !inner.eval(state),
            GroundCondition::Imply(a, b) => !a.eval(state) || b.eval(state),
        }
    }

    fn simplify(self) -> GroundCondition {
        match self {
            GroundCondition::And(items) => {
                let mut out = Vec::new();
                for item in items {
                    match item.simplify() {
                        GroundCondition::Const(true) => {}
                        GroundCondition::Const(false) => return GroundCondition::Const(false),
                        other => out.push(other),
                    }
                }
                match out.len() {
                    0 => GroundCondition::Const(true),
                    1 => out.pop().unwrap(),
                    _ => GroundCondition::And(out),
                }
            }
            GroundCondition::Or(items) => {
                let mut out = Vec::new();
                for item in items {
                    match item.simplify() {
                        GroundCondition::Const(false) => {}
                        GroundCondition::Const(true) => return GroundCondition::Const(true),
                        other => out.push(other),
                    }
                }
                match out.len() {
                    0 => GroundCondition::Const(false),
                    1 => out.pop().unwrap(),
                    _ => GroundCondition::Or(out),
                }
            }
            GroundCondition::Not(inner) => match inner.simplify() {
                GroundCondition::Const(b) => GroundCondition::Const(!b),
                other => GroundCondition::Not(Box::new(other)),
            },
            GroundCondition::Imply(a, b) => {
                let a = a.simplify();
                let b = b.simplify();
                match (&a, &b) {
                    (GroundCondition::Const(false), _) => GroundCondition::Const(true),
                    (GroundCondition::Const(true), _) => b,
                    (_, GroundCondition::Const(true)) => GroundCondition::Const(true),
                    _ => GroundCondition::Imply(Box::new(a), Box::new(b)),
                }
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundOutcome {
    pub add: Vec<AtomId>,
    pub delete: Vec<AtomId>,
}

/// A fully bound action. `outcomes` has one entry per nondeterministic
/// alternative (exactly one for deterministic actions).
#[derive(Debug, Clone)]
pub struct GroundAction {
    pub name: String,
    pub schema: String,
    pub precondition: GroundCondition,
    pub outcomes: Vec<GroundOutcome>,
}

/// Closed-world precondition test.
pub fn applicable(state: &WorldState, action: &GroundAction) -> bool {
    action.precondition.eval(state)
}

/// The grounded planning task: interned atoms, ground actions sorted by
/// name, initial state and goal condition.
#[derive(Debug, Clone)]
pub struct GroundTask {
    pub atom_names: Vec<String>,
    pub actions: Vec<GroundAction>,
    pub init: WorldState,
    pub goal: GroundCondition,
    atom_index: HashMap<String, AtomId>,
    action_index: HashMap<String, usize>,
}

impl GroundTask {
    pub fn new(
        domain: &PlanningDomain,
        problem: &PlanningProblem,
    ) -> Result<GroundTask, FondError> {
        let mut interner = Interner::default();
        let objects = collect_objects(domain, problem);
        let object_names: BTreeSet<&str> = objects.iter().map(|(n, _)| n.as_str()).collect();

        for atom in &problem.init {
            for arg in &atom.args {
                if !object_names.contains(arg.name()) {
                    return Err(FondError::UnknownObject {
                        object: arg.name().to_string(),
                    });
                }
            }
        }

        let mut actions = ground_with(&mut interner, domain, &objects)?;
        actions.sort_by(|a, b| a.name.cmp(&b.name));

        let init = WorldState(problem.init.iter().map(|a| interner.intern(a)).collect());
        let goal = ground_condition(
            &mut interner,
            &problem.goal,
            &HashMap::new(),
            &objects,
        )
        .simplify();

        let action_index = actions
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.clone(), i))
            .collect();
        Ok(GroundTask {
            atom_names: interner.names,
            actions,
            init,
            goal,
            atom_index: interner.index,
            action_index,
        })
    }

    pub fn goal_holds(&self, state: &WorldState) -> bool {
        self.goal.eval(state)
    }

    pub fn action_by_name(&self, name: &str) -> Option<&GroundAction> {
        self.action_index.get(name).map(|&i| &self.actions[i])
    }

    /// Looks up the id of a ground atom given its display rendering, e.g.
    /// `(vehicleat l11)`.
    pub fn atom_id(&self, display: &str) -> Option<AtomId> {
        self.atom_index.get(display).copied()
    }
}

/// Grounds every action schema over the declared objects. This is the
/// spec-level entry point; `GroundTask::new` also wires up init and goal.
pub fn ground(
    domain: &PlanningDomain,
    problem: &PlanningProblem,
) -> Result<Vec<GroundAction>, FondError> {
    GroundTask::new(domain, problem).map(|t| t.actions)
}

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, AtomId>,
}

impl Interner {
    fn intern(&mut self, atom: &Predicate) -> AtomId {
        let key = atom.to_string();
        match self.index.get(&key) {
            Some(&id) => id,
            None => {
                let id = self.names.len() as AtomId;
                self.names.push(key.clone());
                self.index.insert(key, id);
                id
            }
        }
    }
}

type Binding = HashMap<String, String>;

fn collect_objects(
    domain: &PlanningDomain,
    problem: &PlanningProblem,
) -> Vec<(String, Option<String>)> {
    let mut out: Vec<(String, Option<String>)> = Vec::new();
    for constant in &domain.constants {
        out.push((
            constant.name().to_string(),
            constant.type_name().map(String::from),
        ));
    }
    for (name, ty) in problem.all_objects() {
        if !out.iter().any(|(n, _)| n == name) {
            out.push((name.to_string(), ty.map(String::from)));
        }
    }
    out
}

fn candidates<'a>(
    objects: &'a [(String, Option<String>)],
    wanted: Option<&str>,
) -> Vec<&'a str> {
    objects
        .iter()
        .filter(|(_, ty)| match wanted {
            None => true,
            Some(w) => ty.as_deref() == Some(w),
        })
        .map(|(n, _)| n.as_str())
        .collect()
}

fn ground_with(
    interner: &mut Interner,
    domain: &PlanningDomain,
    objects: &[(String, Option<String>)],
) -> Result<Vec<GroundAction>, FondError> {
    let mut actions = Vec::new();
    for schema in &domain.actions {
        let pools: Vec<Vec<&str>> = schema
            .parameters
            .iter()
            .map(|p| candidates(objects, p.type_name()))
            .collect();
        let mut binding = Binding::new();
        enumerate_bindings(interner, objects, schema, &pools, 0, &mut binding, &mut actions)?;
    }
    Ok(actions)
}

fn enumerate_bindings(
    interner: &mut Interner,
    objects: &[(String, Option<String>)],
    schema: &crate::pddl::ActionSchema,
    pools: &[Vec<&str>],
    depth: usize,
    binding: &mut Binding,
    out: &mut Vec<GroundAction>,
) -> Result<(), FondError> {
    if depth == pools.len() {
        let precondition = ground_condition(interner, &schema.precondition, binding, objects)
            .simplify();
        if precondition == GroundCondition::Const(false) {
            return Ok(()); // equality-pruned binding
        }
        let outcomes = ground_effect(interner, &schema.effect, binding, &schema.name)?;
        let args: Vec<&str> = schema
            .parameters
            .iter()
            .map(|p| binding[p.name()].as_str())
            .collect();
        let name = if args.is_empty() {
            schema.name.clone()
        } else {
            format!("{}({})", schema.name, args.join(","))
        };
        out.push(GroundAction {
            name,
            schema: schema.name.clone(),
            precondition,
            outcomes,
        });
        return Ok(());
    }
    for object in &pools[depth] {
        binding.insert(schema.parameters[depth].name().to_string(), object.to_string());
        enumerate_bindings(interner, objects, schema, pools, depth + 1, binding, out)?;
    }
    binding.remove(schema.parameters[depth].name());
    Ok(())
}

fn bind_atom(atom: &Predicate, binding: &Binding) -> Predicate {
    let args = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Variable { name, .. } => Term::constant(
                binding
                    .get(name)
                    .cloned()
                    .unwrap_or_else(|| name.clone()),
                None,
            ),
            Term::Constant { name, .. } => Term::constant(name.clone(), None),
        })
        .collect();
    Predicate::new(atom.name.clone(), args)
}

fn ground_condition(
    interner: &mut Interner,
    formula: &Formula,
    binding: &Binding,
    objects: &[(String, Option<String>)],
) -> GroundCondition {
    match formula {
        Formula::Literal(lit) => {
            let atom = bind_atom(&lit.predicate, binding);
            if atom.is_equality() {
                let equal = atom.args[0].name() == atom.args[1].name();
                GroundCondition::Const(equal == lit.positive)
            } else {
                GroundCondition::Literal(interner.intern(&atom), lit.positive)
            }
        }
        Formula::And(items) => GroundCondition::And(
            items
                .iter()
                .map(|f| ground_condition(interner, f, binding, objects))
                .collect(),
        ),
        Formula::Or(items) => GroundCondition::Or(
            items
                .iter()
                .map(|f| ground_condition(interner, f, binding, objects))
                .collect(),
        ),
        Formula::Not(inner) => GroundCondition::Not(Box::new(ground_condition(
            interner, inner, binding, objects,
        ))),
        Formula::Imply(a, b) => GroundCondition::Imply(
            Box::new(ground_condition(interner, a, binding, objects)),
            Box::new(ground_condition(interner, b, binding, objects)),
        ),
        Formula::Forall(vars, body) => GroundCondition::And(expand_quantifier(
            interner, vars, body, binding, objects,
        )),
        Formula::Exists(vars, body) => GroundCondition::Or(expand_quantifier(
            interner, vars, body, binding, objects,
        )),
        Formula::When(_, _) | Formula::Oneof(_) => {
            unreachable!("effect connective in condition position")
        }
    }
}

fn expand_quantifier(
    interner: &mut Interner,
    vars: &[Term],
    body: &Formula,
    binding: &Binding,
    objects: &[(String, Option<String>)],
) -> Vec<GroundCondition> {
    match vars.split_first() {
        None => vec![ground_condition(interner, body, binding, objects)],
        Some((var, rest)) => {
            let mut out = Vec::new();
            for object in candidates(objects, var.type_name()) {
                let mut extended = binding.clone();
                extended.insert(var.name().to_string(), object.to_string());
                out.extend(expand_quantifier(interner, rest, body, &extended, objects));
            }
            out
        }
    }
}

/// Normalizes a bound effect into outcome alternatives: a `oneof` conjunct
/// multiplies alternatives, everything else contributes to each of them.
fn ground_effect(
    interner: &mut Interner,
    effect: &Formula,
    binding: &Binding,
    action: &str,
) -> Result<Vec<GroundOutcome>, FondError> {
    let literal_sets = effect_alternatives(interner, effect, binding, action)?;
    let mut outcomes = Vec::with_capacity(literal_sets.len());
    for literals in literal_sets {
        let mut add = Vec::new();
        let mut delete = Vec::new();
        for (atom, positive) in literals {
            let target = if positive { &mut add } else { &mut delete };
            if !target.contains(&atom) {
                target.push(atom);
            }
        }
        // delete-then-add semantics: an atom in both sets is a pure add
        delete.retain(|a| !add.contains(a));
        outcomes.push(GroundOutcome { add, delete });
    }
    Ok(outcomes)
}

fn effect_alternatives(
    interner: &mut Interner,
    effect: &Formula,
    binding: &Binding,
    action: &str,
) -> Result<Vec<Vec<(AtomId, bool)>>, FondError> {
    match effect {
        Formula::Literal(lit) => {
            let atom = bind_atom(&lit.predicate, binding);
            Ok(vec![vec![(interner.intern(&atom), lit.positive)]])
        }
        Formula::And(items) => {
            let mut acc: Vec<Vec<(AtomId, bool)>> = vec![Vec::new()];
            for item in items {
                let alternatives = effect_alternatives(interner, item, binding, action)?;
                let mut next = Vec::with_capacity(acc.len() * alternatives.len());
                for prefix in &acc {
                    for alt in &alternatives {
                        let mut combined = prefix.clone();
                        combined.extend(alt.iter().copied());
                        next.push(combined);
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        Formula::Oneof(alternatives) => {
            let mut out = Vec::new();
            for alt in alternatives {
                out.extend(effect_alternatives(interner, alt, binding, action)?);
            }
            Ok(out)
        }
        Formula::When(_, _) => Err(FondError::NotCompiled {
            action: action.to_string(),
            construct: "when".to_string(),
        }),
        Formula::Forall(_, _) => Err(FondError::NotCompiled {
            action: action.to_string(),
            construct: "forall".to_string(),
        }),
        other => unreachable!("condition connective in effect position: {other:?}"),
    }
}

//! Encodes the goal formula's DFA into the planning task: the formula's
//! objects are lifted to fresh typed variables, every DFA step becomes a
//! `trans-<k>` action guarded by `(not (turndomain))`, original actions are
//! interleaved with them through the `turndomain` predicate, and the
//! problem's init/goal are rewritten over the automaton-state predicates.

mod adl;
mod rewrite;
mod trans;

pub use adl::{compile_conditional_effects, is_reserved_predicate, is_trans_action};
pub use rewrite::{rewrite_domain, rewrite_problem, rewrite_problem_with_start};
pub use trans::synthesize_trans;

use thiserror::Error;

use crate::automaton::{ltlf_to_dfa, minimize, pltlf_to_dfa, AutomatonError, Dfa, StateId};
use crate::pddl::{PlanningDomain, PlanningProblem, Term};
use crate::temporal::{classify, FormulaClass, GroundedSymbol, TemporalFormula};

pub const TURN_DOMAIN: &str = "turndomain";

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("formula predicate `{name}` is not declared in the domain; please check the formula")]
    UnknownPredicate { name: String },
    #[error("formula atom `{name}` has {used} objects but the predicate is declared with arity {declared}")]
    ArityMismatch {
        name: String,
        declared: usize,
        used: usize,
    },
    #[error("object `{object}` occurs at positions with conflicting types `{first}` and `{second}`")]
    TypeConflict {
        object: String,
        first: String,
        second: String,
    },
    #[error("action `{action}` has an unsupported ADL effect (nested when/forall/oneof inside a conditional effect)")]
    UnsupportedAdl { action: String },
    #[error("domain already declares `{name}`, which the compilation reserves")]
    NameClash { name: String },
    #[error("formula object `{object}` is not declared in the problem")]
    UndeclaredObject { object: String },
    #[error("problem is for domain `{expected}` but the domain is named `{found}`")]
    DomainMismatch { expected: String, found: String },
    #[error("temporal goal mixes past and future operators")]
    MixedFormula,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Maps each distinct object of the goal formula to one fresh typed
/// variable, in order of first occurrence across the formula's atoms,
/// scanning each atom's objects left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectVarMap {
    entries: Vec<(String, Term)>,
}

impl ObjectVarMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The induced parameter sequence (x0, ..., xk) with declared types.
    pub fn parameters(&self) -> Vec<Term> {
        self.entries.iter().map(|(_, v)| v.clone()).collect()
    }

    /// Parameter variables as argument terms (types are not repeated at
    /// use sites).
    pub fn argument_variables(&self) -> Vec<Term> {
        self.entries
            .iter()
            .map(|(_, v)| Term::variable(v.name(), None))
            .collect()
    }

    /// The inverse map: the original objects, in mapping order.
    pub fn objects(&self) -> Vec<String> {
        self.entries.iter().map(|(o, _)| o.clone()).collect()
    }

    pub fn variable_for(&self, object: &str) -> Option<&Term> {
        self.entries
            .iter()
            .find(|(o, _)| o == object)
            .map(|(_, v)| v)
    }

    /// An atom's objects rewritten through the map, as argument terms.
    pub fn symbol_arguments(&self, symbol: &GroundedSymbol) -> Vec<Term> {
        symbol
            .objects
            .iter()
            .map(|o| {
                let var = self
                    .variable_for(o)
                    .expect("every formula object is mapped");
                Term::variable(var.name(), None)
            })
            .collect()
    }
}

/// Derives the object-to-variable map from the formula atoms against the
/// domain's predicate declarations. Variable names are deterministic:
/// `<declared argument name><occurrence rank>`.
pub fn derive_parameters(
    domain: &PlanningDomain,
    atoms: &[GroundedSymbol],
) -> Result<ObjectVarMap, CompileError> {
    let mut entries: Vec<(String, Term)> = Vec::new();
    for symbol in atoms {
        let decl = domain
            .predicate(&symbol.name)
            .ok_or_else(|| CompileError::UnknownPredicate {
                name: symbol.name.clone(),
            })?;
        if decl.arity() != symbol.objects.len() {
            return Err(CompileError::ArityMismatch {
                name: symbol.name.clone(),
                declared: decl.arity(),
                used: symbol.objects.len(),
            });
        }
        for (pos, object) in symbol.objects.iter().enumerate() {
            let declared = &decl.args[pos];
            match entries.iter().find(|(o, _)| o == object) {
                Some((_, existing)) => {
                    if existing.type_name() != declared.type_name() {
                        return Err(CompileError::TypeConflict {
                            object: object.clone(),
                            first: existing.type_name().unwrap_or("<untyped>").to_string(),
                            second: declared.type_name().unwrap_or("<untyped>").to_string(),
                        });
                    }
                }
                None => {
                    let rank = entries.len();
                    let name = format!("{}{}", declared.name(), rank);
                    entries.push((
                        object.clone(),
                        Term::variable(name, declared.type_name().map(String::from)),
                    ));
                }
            }
        }
    }
    Ok(ObjectVarMap { entries })
}

/// Which world state first feeds the automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialStateConvention {
    /// The automaton starts in q0 un-progressed; the first state it reads
    /// is the one produced by the first domain action.
    #[default]
    PostAction,
    /// The automaton's start is advanced over the problem's initial state
    /// before planning begins.
    EvalInitialState,
}

#[derive(Debug, Clone, Copy)]
pub struct CompileOptions {
    pub minimize: bool,
    pub convention: InitialStateConvention,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            minimize: true,
            convention: InitialStateConvention::PostAction,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompilationResult {
    pub new_domain: PlanningDomain,
    pub new_problem: PlanningProblem,
    pub dfa: Dfa,
    pub map: ObjectVarMap,
    pub formula: TemporalFormula,
    pub convention: InitialStateConvention,
}

/// Full pipeline: classify, build and minimize the DFA, derive parameters,
/// compile away conditional effects, synthesize the trans operators, then
/// rewrite domain and problem.
pub fn compile(
    domain: &PlanningDomain,
    problem: &PlanningProblem,
    formula: &TemporalFormula,
    options: CompileOptions,
) -> Result<CompilationResult, CompileError> {
    if problem.domain_name != domain.name {
        return Err(CompileError::DomainMismatch {
            expected: problem.domain_name.clone(),
            found: domain.name.clone(),
        });
    }
    let dfa = match classify(formula) {
        FormulaClass::Future | FormulaClass::Propositional => ltlf_to_dfa(formula)?,
        FormulaClass::Past => pltlf_to_dfa(formula)?,
        FormulaClass::Mixed => return Err(CompileError::MixedFormula),
    };
    let dfa = if options.minimize {
        minimize(&dfa)?
    } else {
        dfa
    };
    let map = derive_parameters(domain, &dfa.atom_order)?;
    let compiled = compile_conditional_effects(domain)?;
    let trans_ops = synthesize_trans(&dfa, &map);
    let new_domain = rewrite_domain(&compiled, trans_ops, &dfa.states, &map)?;
    let start = initial_automaton_state(&dfa, problem, options.convention);
    let new_problem = rewrite_problem_with_start(problem, &dfa, &map, start)?;
    Ok(CompilationResult {
        new_domain,
        new_problem,
        dfa,
        map,
        formula: formula.clone(),
        convention: options.convention,
    })
}

fn initial_automaton_state(
    dfa: &Dfa,
    problem: &PlanningProblem,
    convention: InitialStateConvention,
) -> StateId {
    match convention {
        InitialStateConvention::PostAction => dfa.initial,
        InitialStateConvention::EvalInitialState => {
            let interpretation: Vec<bool> = dfa
                .atom_order
                .iter()
                .map(|sym| {
                    problem.init.iter().any(|atom| {
                        atom.name == sym.name
                            && atom.args.len() == sym.objects.len()
                            && atom
                                .args
                                .iter()
                                .zip(&sym.objects)
                                .all(|(t, o)| t.name() == o)
                    })
                })
                .collect();
            dfa.step(dfa.initial, &interpretation)
        }
    }
}

//! Rewrites a fully observable nondeterministic (FOND) planning task so that
//! an LTLf or PLTLf temporal goal becomes a classical reachability goal: the
//! formula is turned into a DFA and the DFA is encoded into the planning
//! domain and problem. Also includes a strong-plan solver and a validator
//! that replays every policy trace against the formula semantics.

pub mod automaton;
pub mod compiler;
pub mod fond;
pub mod pddl;
pub mod temporal;

//! Controller graphs over the states a policy visits, with or without the
//! automaton steps. Collapsing composes each domain-action edge with the
//! trans edge that follows it, leaving a domain-actions-only transition
//! system.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use super::{GroundTask, PlanTrace, WorldState};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("cannot collapse trans steps: {0}")]
    Alternation(String),
}

#[derive(Debug, Clone)]
pub struct ControllerGraph {
    /// Visited states in breadth-first discovery order; index is the node id.
    pub nodes: Vec<WorldState>,
    pub initial: usize,
    pub goal_nodes: BTreeSet<usize>,
    /// `(from, action label, to)`, sorted.
    pub edges: Vec<(usize, String, usize)>,
    /// Human-readable atom lists per node, for DOT comments.
    pub node_atoms: Vec<String>,
}

/// Builds the graph of all states the traces visit. With `collapse_trans`,
/// nodes where the automaton has the turn are removed and each domain edge
/// is composed with its following trans edge.
pub fn controller_graph(
    task: &GroundTask,
    traces: &[PlanTrace],
    collapse_trans: bool,
) -> Result<ControllerGraph, GraphError> {
    let mut edges: BTreeSet<(WorldState, String, WorldState)> = BTreeSet::new();
    let mut states: BTreeSet<WorldState> = BTreeSet::new();
    let mut initial = None;
    let mut finals: BTreeSet<WorldState> = BTreeSet::new();
    for trace in traces {
        initial.get_or_insert_with(|| trace.states[0].clone());
        states.extend(trace.states.iter().cloned());
        finals.insert(trace.final_state().clone());
        for (i, action) in trace.actions.iter().enumerate() {
            edges.insert((
                trace.states[i].clone(),
                action.clone(),
                trace.states[i + 1].clone(),
            ));
        }
    }
    let initial = initial.unwrap_or_else(|| task.init.clone());
    states.insert(initial.clone());

    let (states, edges) = if collapse_trans {
        collapse(task, states, edges)?
    } else {
        (states, edges)
    };

    // breadth-first numbering from the initial state, edges in label order
    let mut adjacency: BTreeMap<&WorldState, Vec<(&String, &WorldState)>> = BTreeMap::new();
    for (from, label, to) in &edges {
        adjacency.entry(from).or_default().push((label, to));
    }
    for list in adjacency.values_mut() {
        list.sort();
    }
    let mut order: Vec<WorldState> = Vec::new();
    let mut id: BTreeMap<&WorldState, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    id.insert(&initial, 0);
    order.push(initial.clone());
    queue.push_back(&initial);
    while let Some(state) = queue.pop_front() {
        if let Some(list) = adjacency.get(state) {
            for (_, to) in list {
                if !id.contains_key(to) {
                    id.insert(to, order.len());
                    order.push((*to).clone());
                    queue.push_back(to);
                }
            }
        }
    }
    // unreachable leftovers (shouldn't happen for policy traces) go last
    for state in &states {
        if !id.contains_key(state) {
            id.insert(state, order.len());
            order.push(state.clone());
        }
    }

    let goal_nodes = order
        .iter()
        .enumerate()
        .filter(|(_, s)| task.goal_holds(s))
        .map(|(i, _)| i)
        .collect();
    let mut edge_ids: Vec<(usize, String, usize)> = edges
        .iter()
        .map(|(f, l, t)| (id[f], l.clone(), id[t]))
        .collect();
    edge_ids.sort();
    let node_atoms = order.iter().map(|s| s.display(task)).collect();
    Ok(ControllerGraph {
        initial: 0,
        goal_nodes,
        edges: edge_ids,
        node_atoms,
        nodes: order,
    })
}

type EdgeSet = BTreeSet<(WorldState, String, WorldState)>;

fn collapse(
    task: &GroundTask,
    states: BTreeSet<WorldState>,
    edges: EdgeSet,
) -> Result<(BTreeSet<WorldState>, EdgeSet), GraphError> {
    let turn = task
        .atom_id("(turndomain)")
        .ok_or_else(|| GraphError::Alternation("task has no (turndomain) atom".to_string()))?;

    let mut outgoing: BTreeMap<&WorldState, Vec<(&String, &WorldState)>> = BTreeMap::new();
    for (from, label, to) in &edges {
        outgoing.entry(from).or_default().push((label, to));
    }

    let mut collapsed: EdgeSet = BTreeSet::new();
    for (from, label, mid) in &edges {
        if !from.contains(turn) {
            continue; // trans edges are consumed below
        }
        if mid.contains(turn) {
            return Err(GraphError::Alternation(format!(
                "domain action `{label}` leads to a state where the domain still has the turn"
            )));
        }
        let followers = outgoing.get(mid).map(Vec::as_slice).unwrap_or(&[]);
        if followers.is_empty() {
            return Err(GraphError::Alternation(format!(
                "no trans step follows `{label}`"
            )));
        }
        for (trans_label, target) in followers {
            if !target.contains(turn) {
                return Err(GraphError::Alternation(format!(
                    "`{trans_label}` does not hand the turn back to the domain"
                )));
            }
            collapsed.insert((from.clone(), label.clone(), (*target).clone()));
        }
    }
    let kept = states.into_iter().filter(|s| s.contains(turn)).collect();
    Ok((kept, collapsed))
}

/// DOT rendering: `n0` is the initial node, goal nodes are double circles
/// named `ng…`, and a comment block lists each node's atoms.
pub fn graph_to_dot(graph: &ControllerGraph) -> String {
    let name = |i: usize| -> String {
        if graph.goal_nodes.contains(&i) && i != graph.initial {
            if graph.goal_nodes.len() == 1 {
                "ng".to_string()
            } else {
                let rank = graph.goal_nodes.iter().position(|&g| g == i).unwrap();
                format!("ng{rank}")
            }
        } else {
            format!("n{i}")
        }
    };
    let mut out = String::new();
    out.push_str("digraph controller {\n");
    out.push_str(" rankdir = LR;\n");
    for (i, atoms) in graph.node_atoms.iter().enumerate() {
        out.push_str(&format!(" // {}: {}\n", name(i), atoms));
    }
    for i in 0..graph.nodes.len() {
        let shape = if graph.goal_nodes.contains(&i) {
            "doublecircle"
        } else {
            "circle"
        };
        out.push_str(&format!(" {} [shape = {shape}];\n", name(i)));
    }
    out.push_str(" init [shape = plaintext, label = \"\"];\n");
    out.push_str(&format!(" init -> {};\n", name(graph.initial)));
    for (from, label, to) in &graph.edges {
        out.push_str(&format!(
            " {} -> {} [label=\"{label}\"];\n",
            name(*from),
            name(*to)
        ));
    }
    out.push_str("}\n");
    out
}

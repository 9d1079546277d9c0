//! Policy text format: one line per entry,
//! `state-hash<TAB>sorted-atom-list<TAB>action`. The hash is FNV-1a over
//! the sorted atom list, acting as an integrity check on load.

use thiserror::Error;

use super::{GroundTask, Policy, WorldState};

#[derive(Debug, Error)]
pub enum PolicyIoError {
    #[error("policy line {line} is malformed: {message}")]
    Malformed { line: usize, message: String },
    #[error("policy line {line} references atom `{atom}` unknown to the task")]
    UnknownAtom { line: usize, atom: String },
    #[error("policy line {line} references action `{action}` unknown to the task")]
    UnknownAction { line: usize, action: String },
    #[error("policy line {line} hash mismatch (file {found}, computed {computed})")]
    HashMismatch {
        line: usize,
        found: String,
        computed: String,
    },
}

fn fnv1a64(text: &str) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for byte in text.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

pub fn policy_to_text(task: &GroundTask, policy: &Policy) -> String {
    let mut out = String::new();
    for (state, action) in &policy.entries {
        let atoms = state.display(task);
        out.push_str(&format!("{:016x}\t{}\t{}\n", fnv1a64(&atoms), atoms, action));
    }
    out
}

pub fn policy_from_text(task: &GroundTask, text: &str) -> Result<Policy, PolicyIoError> {
    let mut entries = std::collections::BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut parts = raw.splitn(3, '\t');
        let (hash, atoms, action) = match (parts.next(), parts.next(), parts.next()) {
            (Some(h), Some(s), Some(a)) => (h, s, a),
            _ => {
                return Err(PolicyIoError::Malformed {
                    line: lineno,
                    message: "expected hash<TAB>atoms<TAB>action".to_string(),
                })
            }
        };
        let computed = format!("{:016x}", fnv1a64(atoms));
        if computed != hash {
            return Err(PolicyIoError::HashMismatch {
                line: lineno,
                found: hash.to_string(),
                computed,
            });
        }
        let mut ids = std::collections::BTreeSet::new();
        for atom in split_atoms(atoms).map_err(|message| PolicyIoError::Malformed {
            line: lineno,
            message,
        })? {
            match task.atom_id(&atom) {
                Some(id) => {
                    ids.insert(id);
                }
                None => return Err(PolicyIoError::UnknownAtom { line: lineno, atom }),
            }
        }
        if task.action_by_name(action).is_none() {
            return Err(PolicyIoError::UnknownAction {
                line: lineno,
                action: action.to_string(),
            });
        }
        entries.insert(WorldState(ids), action.to_string());
    }
    Ok(Policy { entries })
}

/// Splits `(a b) (c) (d e)` into the individual atom renderings.
fn split_atoms(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                if depth == 0 {
                    return Err("unbalanced `)`".to_string());
                }
                depth -= 1;
                current.push(c);
                if depth == 0 {
                    out.push(std::mem::take(&mut current));
                }
            }
            c if c.is_whitespace() && depth == 0 => {}
            c => {
                if depth == 0 {
                    return Err(format!("unexpected `{c}` outside an atom"));
                }
                current.push(c);
            }
        }
    }
    if depth != 0 {
        return Err("unbalanced `(`".to_string());
    }
    Ok(out)
}

//! Concurrent game structures with observation interpretations.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position index within a [`Cgsi`].
pub type PosId = usize;
/// Action index within a [`Cgsi`].
pub type ActId = usize;
/// Agent index within a [`Cgsi`].
pub type AgentId = usize;

/// An equivalence relation over positions, stored as a partition with a
/// canonical class map: `class_of[v]` is the block id of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub class_of: Vec<usize>,
    pub blocks: Vec<Vec<PosId>>,
}

impl Partition {
    /// Builds the identity partition over `n` elements.
    pub fn identity(n: usize) -> Self {
        Partition { class_of: (0..n).collect(), blocks: (0..n).map(|v| vec![v]).collect() }
    }

    /// Builds a partition from blocks; every element in `0..n` must occur
    /// exactly once.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<PosId>>) -> Result<Self, String> {
        let mut class_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                if v >= n {
                    return Err(format!("element {v} out of range"));
                }
                if class_of[v] != usize::MAX {
                    return Err(format!("element {v} occurs in two blocks"));
                }
                class_of[v] = b;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(format!("element {v} missing from partition"));
        }
        Ok(Partition { class_of, blocks })
    }

    pub fn equivalent(&self, a: PosId, b: PosId) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Relation inclusion: `self ⊆ other`, i.e. `self` is finer.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|block| block.iter().all(|&v| other.class_of[v] == other.class_of[block[0]]))
    }

    pub fn class_count(&self) -> usize {
        self.blocks.len()
    }
}

/// A concurrent game structure with imperfect information: positions, a
/// total joint-action transition function, a labelling, and one
/// equivalence relation per observation symbol.
#[derive(Debug, Clone)]
pub struct Cgsi {
    pub actions: Vec<String>,
    pub agents: Vec<String>,
    pub positions: Vec<String>,
    pub atoms: Vec<String>,
    /// Declared strategy variables; `None` leaves the variable set open.
    pub variables: Option<Vec<String>>,
    pub init: PosId,
    /// `delta[v][j]` with `j` the mixed-radix joint action index.
    pub delta: Vec<Vec<PosId>>,
    pub labels: Vec<Vec<usize>>,
    /// Observation symbol -> partition, iterated in name order.
    pub obs: BTreeMap<String, Partition>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("missing transition from `{position}` on joint action {joint}")]
    MissingTransition { position: String, joint: String },
    #[error("duplicate transition from `{position}` on joint action {joint}")]
    DuplicateTransition { position: String, joint: String },
    #[error("observation `{obs}` is not an equivalence relation: blocks overlap on `{witness}` (broken triple {a},{witness},{b})")]
    NotEquivalence { obs: String, witness: String, a: String, b: String },
    #[error("observation `{obs}` does not cover position `{position}`")]
    ObsMissingPosition { obs: String, position: String },
    #[error("{0}")]
    Other(String),
}

impl Cgsi {
    pub fn joint_count(&self) -> usize {
        self.actions.len().pow(self.agents.len() as u32)
    }

    /// Encodes per-agent actions into the mixed-radix joint index.
    pub fn joint_index(&self, acts: &[ActId]) -> usize {
        debug_assert_eq!(acts.len(), self.agents.len());
        acts.iter().fold(0, |j, &a| j * self.actions.len() + a)
    }

    /// Decodes a joint index back into per-agent actions.
    pub fn joint_actions(&self, mut j: usize) -> Vec<ActId> {
        let mut acts = vec![0; self.agents.len()];
        for slot in acts.iter_mut().rev() {
            *slot = j % self.actions.len();
            j /= self.actions.len();
        }
        acts
    }

    pub fn step(&self, v: PosId, joint: usize) -> PosId {
        self.delta[v][joint]
    }

    pub fn position_id(&self, name: &str) -> Option<PosId> {
        self.positions.iter().position(|p| p == name)
    }

    pub fn atom_id(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|p| p == name)
    }

    /// Successor set of `v` under any joint action.
    pub fn successors(&self, v: PosId) -> Vec<PosId> {
        let mut out: Vec<PosId> = self.delta[v].clone();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Positions reachable from the initial position.
    pub fn reachable(&self) -> Vec<PosId> {
        let mut seen = vec![false; self.positions.len()];
        let mut stack = vec![self.init];
        seen[self.init] = true;
        while let Some(v) = stack.pop() {
            for w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.positions.len()).filter(|&v| seen[v]).collect()
    }

    /// Relation inclusion `O(o1) ⊆ O(o2)`.
    pub fn finer(&self, o1: &str, o2: &str) -> Result<bool, ModelError> {
        let p1 = self.obs.get(o1).ok_or(ModelError::Unknown { kind: "observation", name: o1.into() })?;
        let p2 = self.obs.get(o2).ok_or(ModelError::Unknown { kind: "observation", name: o2.into() })?;
        Ok(p1.refines(p2))
    }

    /// True iff the finer-than relation totally orders the observations.
    pub fn yields_hierarchical_observation(&self) -> bool {
        let names: Vec<&String> = self.obs.keys().collect();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                let a = &self.obs[names[i]];
                let b = &self.obs[names[j]];
                if !a.refines(b) && !b.refines(a) {
                    return false;
                }
            }
        }
        true
    }
}

/// A finite play: a nonempty position sequence from the initial position
/// in which every step is justified by some joint action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play(pub Vec<PosId>);

impl Play {
    pub fn validate(&self, g: &Cgsi) -> Result<(), ModelError> {
        if self.0.is_empty() {
            return Err(ModelError::Other("empty play".into()));
        }
        if self.0[0] != g.init {
            return Err(ModelError::Other("play does not start at the initial position".into()));
        }
        for w in self.0.windows(2) {
            if !g.successors(w[0]).contains(&w[1]) {
                return Err(ModelError::Other(format!(
                    "no joint action leads from `{}` to `{}`",
                    g.positions[w[0]], g.positions[w[1]]
                )));
            }
        }
        Ok(())
    }

    pub fn last(&self) -> PosId {
        *self.0.last().expect("plays are nonempty")
    }
}

/// Synchronous perfect recall equivalence of two finite plays: equal
/// length and pointwise observation equivalence.
pub fn play_obs_equiv(a: &Play, b: &Play, obs: &str, g: &Cgsi) -> Result<bool, ModelError> {
    let part = g.obs.get(obs).ok_or(ModelError::Unknown { kind: "observation", name: obs.into() })?;
    Ok(a.0.len() == b.0.len() && a.0.iter().zip(&b.0).all(|(&x, &y)| part.equivalent(x, y)))
}

// ---------------------------------------------------------------------------
// JSON model format
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct CgsiFile {
    actions: Vec<String>,
    agents: Vec<String>,
    positions: Vec<String>,
    initial: String,
    transitions: BTreeMap<String, Vec<TransitionEntry>>,
    #[serde(default)]
    labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    observations: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    atoms: Option<Vec<String>>,
    #[serde(default)]
    variables: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TransitionEntry {
    act: BTreeMap<String, String>,
    to: String,
}

fn fmt_joint(g: &Cgsi, joint: usize) -> String {
    let acts = g.joint_actions(joint);
    let parts: Vec<String> = g
        .agents
        .iter()
        .zip(acts)
        .map(|(ag, a)| format!("{ag}:{}", g.actions[a]))
        .collect();
    format!("({})", parts.join(","))
}

impl Cgsi {
    /// Parses and validates the JSON model format.
    pub fn from_json(text: &str) -> Result<Cgsi, Vec<ModelError>> {
        let file: CgsiFile =
            serde_json::from_str(text).map_err(|e| vec![ModelError::Other(format!("model JSON: {e}"))])?;
        Cgsi::from_file(file)
    }

    fn from_file(file: CgsiFile) -> Result<Cgsi, Vec<ModelError>> {
        let mut errors = Vec::new();
        let pos_id: HashMap<&String, usize> =
            file.positions.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let act_id: HashMap<&String, usize> =
            file.actions.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let agent_id: HashMap<&String, usize> =
            file.agents.iter().enumerate().map(|(i, a)| (a, i)).collect();
        if file.actions.is_empty() {
            errors.push(ModelError::Other("action set must be nonempty".into()));
        }
        if file.positions.is_empty() {
            errors.push(ModelError::Other("position set must be nonempty".into()));
        }
        let init = match pos_id.get(&file.initial) {
            Some(&v) => v,
            None => {
                errors.push(ModelError::Unknown { kind: "position", name: file.initial.clone() });
                0
            }
        };

        // atoms: declared, or inferred from the labelling
        let atoms: Vec<String> = match &file.atoms {
            Some(a) => a.clone(),
            None => {
                let mut set: Vec<String> = file.labels.values().flatten().cloned().collect();
                set.sort();
                set.dedup();
                set
            }
        };
        let atom_id: HashMap<&String, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();

        let mut labels = vec![Vec::new(); file.positions.len()];
        for (p, aps) in &file.labels {
            let Some(&v) = pos_id.get(p) else {
                errors.push(ModelError::Unknown { kind: "position", name: p.clone() });
                continue;
            };
            for ap in aps {
                match atom_id.get(ap) {
                    Some(&i) => labels[v].push(i),
                    None => errors.push(ModelError::Unknown { kind: "atom", name: ap.clone() }),
                }
            }
            labels[v].sort_unstable();
            labels[v].dedup();
        }

        // transitions: require totality over positions × joint actions
        let n_joint = file.actions.len().pow(file.agents.len() as u32);
        let mut delta = vec![vec![usize::MAX; n_joint]; file.positions.len()];
        for (p, entries) in &file.transitions {
            let Some(&v) = pos_id.get(p) else {
                errors.push(ModelError::Unknown { kind: "position", name: p.clone() });
                continue;
            };
            for entry in entries {
                let Some(&to) = pos_id.get(&entry.to) else {
                    errors.push(ModelError::Unknown { kind: "position", name: entry.to.clone() });
                    continue;
                };
                // expand the (possibly partial) action record: unmentioned
                // agents range over all actions
                let mut slots: Vec<Vec<usize>> = Vec::new();
                let mut bad = false;
                for agent in &file.agents {
                    match entry.act.get(agent) {
                        Some(a) => match act_id.get(a) {
                            Some(&ai) => slots.push(vec![ai]),
                            None => {
                                errors.push(ModelError::Unknown { kind: "action", name: a.clone() });
                                bad = true;
                            }
                        },
                        None => slots.push((0..file.actions.len()).collect()),
                    }
                }
                for (agent, _) in &entry.act {
                    if !agent_id.contains_key(agent) {
                        errors.push(ModelError::Unknown { kind: "agent", name: agent.clone() });
                        bad = true;
                    }
                }
                if bad {
                    continue;
                }
                let mut stack = vec![(0usize, 0usize)]; // (agent idx, joint prefix)
                while let Some((k, j)) = stack.pop() {
                    if k == slots.len() {
                        if delta[v][j] != usize::MAX && delta[v][j] != to {
                            errors.push(ModelError::DuplicateTransition {
                                position: p.clone(),
                                joint: format!("#{j}"),
                            });
                        }
                        delta[v][j] = to;
                        continue;
                    }
                    for &a in &slots[k] {
                        stack.push((k + 1, j * file.actions.len() + a));
                    }
                }
            }
        }

        let mut obs = BTreeMap::new();
        for (name, blocks) in &file.observations {
            let mut ids: Vec<Vec<usize>> = Vec::new();
            let mut seen: HashMap<usize, usize> = HashMap::new();
            let mut ok = true;
            for block in blocks {
                let mut b = Vec::new();
                for p in block {
                    match pos_id.get(p) {
                        Some(&v) => {
                            if let Some(&other_block) = seen.get(&v) {
                                // overlapping blocks: report the broken triple
                                let a = ids[other_block]
                                    .iter()
                                    .find(|&&w| w != v)
                                    .map(|&w| file.positions[w].clone())
                                    .unwrap_or_else(|| p.clone());
                                let c = block.iter().find(|q| *q != p).cloned().unwrap_or_else(|| p.clone());
                                errors.push(ModelError::NotEquivalence {
                                    obs: name.clone(),
                                    witness: p.clone(),
                                    a,
                                    b: c,
                                });
                                ok = false;
                            }
                            seen.insert(v, ids.len());
                            b.push(v);
                        }
                        None => {
                            errors.push(ModelError::Unknown { kind: "position", name: p.clone() });
                            ok = false;
                        }
                    }
                }
                ids.push(b);
            }
            for (v, p) in file.positions.iter().enumerate() {
                if !seen.contains_key(&v) {
                    errors.push(ModelError::ObsMissingPosition { obs: name.clone(), position: p.clone() });
                    ok = false;
                }
            }
            if ok {
                match Partition::from_blocks(file.positions.len(), ids) {
                    Ok(part) => {
                        obs.insert(name.clone(), part);
                    }
                    Err(e) => errors.push(ModelError::Other(format!("observation `{name}`: {e}"))),
                }
            }
        }

        let g = Cgsi {
            actions: file.actions,
            agents: file.agents,
            positions: file.positions,
            atoms,
            variables: file.variables,
            init,
            delta,
            labels,
            obs,
        };
        // totality check, after the fact so every gap is reported
        for (v, row) in g.delta.iter().enumerate() {
            for (j, &to) in row.iter().enumerate() {
                if to == usize::MAX {
                    errors.push(ModelError::MissingTransition {
                        position: g.positions[v].clone(),
                        joint: fmt_joint(&g, j),
                    });
                }
            }
        }
        if errors.is_empty() {
            Ok(g)
        } else {
            Err(errors)
        }
    }

    /// Re-validates the structural invariants of an in-memory structure.
    pub fn validate(&self) -> Result<(), Vec<ModelError>> {
        let mut errors = Vec::new();
        for (v, row) in self.delta.iter().enumerate() {
            if row.len() != self.joint_count() {
                errors.push(ModelError::MissingTransition {
                    position: self.positions[v].clone(),
                    joint: "<arity>".into(),
                });
            }
            for &to in row {
                if to >= self.positions.len() {
                    errors.push(ModelError::Other(format!("transition target out of range from {v}")));
                }
            }
        }
        for (name, part) in &self.obs {
            let mut covered: HashSet<usize> = HashSet::new();
            for block in &part.blocks {
                covered.extend(block.iter().copied());
            }
            for v in 0..self.positions.len() {
                if !covered.contains(&v) {
                    errors.push(ModelError::ObsMissingPosition {
                        obs: name.clone(),
                        position: self.positions[v].clone(),
                    });
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

impl fmt::Display for Cgsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "positions: {}", self.positions.join(" "))?;
        writeln!(f, "agents: {}", self.agents.join(" "))?;
        writeln!(f, "actions: {}", self.actions.join(" "))?;
        write!(f, "initial: {}", self.positions[self.init])
    }
}

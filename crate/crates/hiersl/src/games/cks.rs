//! Compound Kripke structures: states are tuples of local states.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cgs::ModelError;
use super::dirs::{Components, DirAlphabet, IndexSet, Tuple};
use super::tree::RegularTree;

pub type CksStateId = usize;

/// A compound Kripke structure over `n` disjoint local-state components:
/// states are distinct tuples, the transition relation is left-total, and
/// each state carries a set of atoms.
#[derive(Debug, Clone)]
pub struct Cks {
    pub components: Arc<Components>,
    pub atoms: Vec<String>,
    pub states: Vec<Tuple>,
    pub edges: Vec<Vec<CksStateId>>,
    pub init: CksStateId,
    pub labels: Vec<Vec<usize>>,
}

impl Cks {
    pub fn component_count(&self) -> usize {
        self.components.count()
    }

    pub fn full_index_set(&self) -> IndexSet {
        self.components.full_set()
    }

    pub fn atom_id(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn validate(&self) -> Result<(), Vec<ModelError>> {
        let mut errors = Vec::new();
        let mut seen: HashMap<&Tuple, usize> = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if s.len() != self.component_count() {
                errors.push(ModelError::Other(format!("state {i} has arity {}", s.len())));
            }
            for (c, &v) in s.iter().enumerate() {
                if (v as usize) >= self.components.size(c + 1) {
                    errors.push(ModelError::Other(format!("state {i}: component {} value out of range", c + 1)));
                }
            }
            if let Some(j) = seen.insert(s, i) {
                errors.push(ModelError::Other(format!("states {j} and {i} share the same tuple")));
            }
        }
        for (i, succs) in self.edges.iter().enumerate() {
            if succs.is_empty() {
                errors.push(ModelError::Other(format!("state {i} has no successor (relation must be left-total)")));
            }
            for &t in succs {
                if t >= self.states.len() {
                    errors.push(ModelError::Other(format!("state {i}: edge target {t} out of range")));
                }
            }
        }
        if self.init >= self.states.len() {
            errors.push(ModelError::Other("initial state out of range".into()));
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// States reachable from `s`.
    pub fn reachable(&self, s: CksStateId) -> Vec<CksStateId> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.edges[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.states.len()).filter(|&v| seen[v]).collect()
    }

    /// The tree unfolding from `s`, as a regular-tree generator over the
    /// full direction alphabet: vertices are the reachable states, the
    /// direction of a vertex is its own tuple.
    pub fn unfold(&self, s: CksStateId, aps: &[String]) -> RegularTree {
        let dirs = DirAlphabet::new(self.components.clone(), self.full_index_set());
        let reach = self.reachable(s);
        let index: HashMap<CksStateId, usize> = reach.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let ap_of: Vec<Option<usize>> = self.atoms.iter().map(|a| aps.iter().position(|x| x == a)).collect();
        let verts = reach
            .iter()
            .map(|&v| {
                let mut label = 0u64;
                for &ap in &self.labels[v] {
                    if let Some(i) = ap_of[ap] {
                        label |= 1 << i;
                    }
                }
                super::tree::TreeVertex {
                    dir: dirs.dir_of(&self.states[v]),
                    label,
                    succs: self.edges[v].iter().map(|t| index[t]).collect(),
                }
            })
            .collect();
        RegularTree::new(dirs, aps.to_vec(), verts, index[&s])
    }
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct CksFile {
    components: Vec<Vec<String>>,
    states: BTreeMap<String, Vec<String>>,
    initial: String,
    edges: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    atoms: Option<Vec<String>>,
}

impl Cks {
    pub fn from_json(text: &str) -> Result<Cks, Vec<ModelError>> {
        let file: CksFile =
            serde_json::from_str(text).map_err(|e| vec![ModelError::Other(format!("model JSON: {e}"))])?;
        let mut errors = Vec::new();
        let components = Arc::new(Components::new(file.components.clone()));
        let mut names: Vec<&String> = file.states.keys().collect();
        names.sort();
        let id_of: HashMap<&String, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut states = Vec::new();
        for n in &names {
            let tuple_names = &file.states[*n];
            let mut tuple = Vec::new();
            if tuple_names.len() != components.count() {
                errors.push(ModelError::Other(format!("state `{n}` has arity {}", tuple_names.len())));
                states.push(Vec::new());
                continue;
            }
            for (c, vname) in tuple_names.iter().enumerate() {
                match components.names[c].iter().position(|x| x == vname) {
                    Some(v) => tuple.push(v as u32),
                    None => {
                        errors.push(ModelError::Unknown { kind: "local state", name: vname.clone() });
                        tuple.push(0);
                    }
                }
            }
            states.push(tuple);
        }
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
        let mut labels = vec![Vec::new(); states.len()];
        let mut edges = vec![Vec::new(); states.len()];
        for (n, aps) in &file.labels {
            match id_of.get(n) {
                Some(&i) => {
                    for ap in aps {
                        match atom_id.get(ap) {
                            Some(&a) => labels[i].push(a),
                            None => errors.push(ModelError::Unknown { kind: "atom", name: ap.clone() }),
                        }
                    }
                    labels[i].sort_unstable();
                    labels[i].dedup();
                }
                None => errors.push(ModelError::Unknown { kind: "state", name: n.clone() }),
            }
        }
        for (n, succs) in &file.edges {
            match id_of.get(n) {
                Some(&i) => {
                    for t in succs {
                        match id_of.get(t) {
                            Some(&j) => edges[i].push(j),
                            None => errors.push(ModelError::Unknown { kind: "state", name: t.clone() }),
                        }
                    }
                    edges[i].sort_unstable();
                    edges[i].dedup();
                }
                None => errors.push(ModelError::Unknown { kind: "state", name: n.clone() }),
            }
        }
        let init = match id_of.get(&file.initial) {
            Some(&i) => i,
            None => {
                errors.push(ModelError::Unknown { kind: "state", name: file.initial.clone() });
                0
            }
        };
        let cks = Cks { components, atoms, states, edges, init, labels };
        if let Err(mut es) = cks.validate() {
            errors.append(&mut es);
        }
        if errors.is_empty() {
            Ok(cks)
        } else {
            Err(errors)
        }
    }

    /// Serialises into the documented JSON format.
    pub fn to_json(&self) -> String {
        let name_of = |i: usize| format!("s{i}");
        let file = CksFile {
            components: self.components.names.clone(),
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let tuple = t
                        .iter()
                        .enumerate()
                        .map(|(c, &v)| self.components.names[c][v as usize].clone())
                        .collect();
                    (name_of(i), tuple)
                })
                .collect(),
            initial: name_of(self.init),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, succs)| (name_of(i), succs.iter().map(|&j| name_of(j)).collect()))
                .collect(),
            labels: self
                .labels
                .iter()
                .enumerate()
                .filter(|(_, aps)| !aps.is_empty())
                .map(|(i, aps)| (name_of(i), aps.iter().map(|&a| self.atoms[a].clone()).collect()))
                .collect(),
            atoms: Some(self.atoms.clone()),
        };
        serde_json::to_string_pretty(&file).expect("CKS serialisation")
    }
}

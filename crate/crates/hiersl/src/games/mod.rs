//! Game-structure and tree data models: concurrent game structures with
//! observations, compound Kripke structures, and regular trees.

mod cgs;
mod cks;
mod dirs;
mod tree;

pub use cgs::{play_obs_equiv, ActId, AgentId, Cgsi, ModelError, Partition, Play, PosId};
pub use cks::{Cks, CksStateId};
pub use dirs::{narrow_tuple, narrow_word, Components, DirAlphabet, DirId, IndexSet, Tuple};
pub use tree::{Label, RegularTree, TreeVertex};

#[cfg(test)]
mod tests;

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    /// A small deterministic game for tests: position `n-1` is labelled
    /// `p`, position `0` is labelled `q`, and joint action `j` from
    /// position `v` moves to `(v + j) mod n`.
    pub(crate) fn tiny_game(positions: usize, actions: usize, agents: usize) -> Cgsi {
        let n_joint = actions.pow(agents as u32);
        Cgsi {
            actions: (0..actions).map(|i| format!("m{i}")).collect(),
            agents: (1..=agents).map(|i| format!("a{i}")).collect(),
            positions: (0..positions).map(|i| format!("v{i}")).collect(),
            atoms: vec!["p".into(), "q".into()],
            variables: None,
            init: 0,
            delta: (0..positions)
                .map(|v| (0..n_joint).map(|j| (v + j) % positions).collect())
                .collect(),
            labels: (0..positions)
                .map(|v| {
                    let mut l = Vec::new();
                    if v == positions - 1 {
                        l.push(0);
                    }
                    if v == 0 {
                        l.push(1);
                    }
                    l
                })
                .collect(),
            obs: Default::default(),
        }
    }
}

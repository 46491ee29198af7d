//! Finite-memory strategies, assignments, and outcome computation.

use std::collections::{BTreeMap, HashMap};

use crate::games::{ActId, Cgsi, Play, PosId};

/// A finite-memory uniform strategy: a Mealy machine reading observation
/// classes. Strategies read only the class sequence of a play, so they
/// are uniform for their observation by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyStrategy {
    pub obs: String,
    /// number of memory states; state 0 is initial
    pub memory: usize,
    /// `output[m][class]` — action advised when in memory `m` seeing `class`
    pub output: Vec<Vec<ActId>>,
    /// `update[m][class]` — next memory state
    pub update: Vec<Vec<usize>>,
}

impl MealyStrategy {
    /// The memoryless strategy given by one action per class.
    pub fn memoryless(obs: impl Into<String>, per_class: Vec<ActId>) -> Self {
        MealyStrategy {
            obs: obs.into(),
            memory: 1,
            output: vec![per_class.clone()],
            update: vec![vec![0; per_class.len()]],
        }
    }

    /// Action advised after the given play.
    pub fn advise(&self, play: &[PosId], g: &Cgsi) -> ActId {
        let classes = &g.obs[&self.obs].class_of;
        let mut m = 0usize;
        for &v in &play[..play.len() - 1] {
            m = self.update[m][classes[v]];
        }
        self.output[m][classes[*play.last().expect("nonempty play")]]
    }
}

/// Total assignment of strategies to agents and variables.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    pub agents: BTreeMap<String, MealyStrategy>,
    pub variables: BTreeMap<String, MealyStrategy>,
}

/// An ultimately periodic play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<PosId>,
    pub cycle: Vec<PosId>,
}

impl Lasso {
    pub fn position(&self, i: usize) -> PosId {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }
}

/// Extends the finite play under the assignment: the unique infinite
/// continuation, which is ultimately periodic because all strategies are
/// finite-memory. Panics if some agent has no strategy.
pub fn outcome(chi: &Assignment, play: &Play, g: &Cgsi) -> Lasso {
    let strategies: Vec<&MealyStrategy> = g
        .agents
        .iter()
        .map(|a| chi.agents.get(a).unwrap_or_else(|| panic!("agent `{a}` has no strategy")))
        .collect();
    // memory vector after consuming the prefix (all but the last position)
    let mut mems: Vec<usize> = vec![0; strategies.len()];
    for (ai, s) in strategies.iter().enumerate() {
        let classes = &g.obs[&s.obs].class_of;
        let mut m = 0;
        for &v in &play.0[..play.0.len() - 1] {
            m = s.update[m][classes[v]];
        }
        mems[ai] = m;
    }
    let mut trace: Vec<PosId> = play.0.clone();
    let mut seen: HashMap<(PosId, Vec<usize>), usize> = HashMap::new();
    let mut v = *play.0.last().expect("nonempty play");
    loop {
        let key = (v, mems.clone());
        if let Some(&k) = seen.get(&key) {
            // the configuration repeats: positions from index k form the cycle
            let cycle = trace[k..trace.len() - 1].to_vec();
            let stem = trace[..k].to_vec();
            return Lasso { stem, cycle };
        }
        seen.insert(key, trace.len() - 1);
        let acts: Vec<ActId> = strategies
            .iter()
            .zip(&mems)
            .map(|(s, &m)| s.output[m][g.obs[&s.obs].class_of[v]])
            .collect();
        for (ai, s) in strategies.iter().enumerate() {
            mems[ai] = s.update[mems[ai]][g.obs[&s.obs].class_of[v]];
        }
        v = g.step(v, g.joint_index(&acts));
        trace.push(v);
    }
}

/// Enumerates every uniform Mealy strategy with the given memory bound
/// over the classes of `obs`; the closure returns `true` to stop early.
pub fn for_each_strategy(
    g: &Cgsi,
    obs: &str,
    memory: usize,
    cap: usize,
    mut f: impl FnMut(&MealyStrategy) -> bool,
) -> Option<bool> {
    let classes = g.obs[obs].class_count();
    let acts = g.actions.len();
    let cells = memory * classes;
    // outputs: acts^cells, updates: memory^cells
    let total_outputs = (acts as u128).checked_pow(cells as u32)?;
    let total_updates = (memory as u128).checked_pow(cells as u32)?;
    let total = total_outputs.checked_mul(total_updates)?;
    if total > cap as u128 {
        return None;
    }
    let mut out_counter = vec![0usize; cells];
    loop {
        let mut up_counter = vec![0usize; cells];
        loop {
            let strat = MealyStrategy {
                obs: obs.to_string(),
                memory,
                output: (0..memory).map(|m| out_counter[m * classes..(m + 1) * classes].to_vec()).collect(),
                update: (0..memory).map(|m| up_counter[m * classes..(m + 1) * classes].to_vec()).collect(),
            };
            if f(&strat) {
                return Some(true);
            }
            if !bump(&mut up_counter, memory) {
                break;
            }
        }
        if !bump(&mut out_counter, acts) {
            return Some(false);
        }
    }
}

fn bump(counter: &mut [usize], radix: usize) -> bool {
    for c in counter.iter_mut() {
        *c += 1;
        if *c < radix {
            return true;
        }
        *c = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Partition;

    #[test]
    fn self_loop_outcome_is_immediate_cycle() {
        let mut g = crate::games::tests_support::tiny_game(1, 1, 1);
        g.obs.insert("o".into(), Partition::identity(1));
        let chi = Assignment {
            agents: BTreeMap::from([("a1".to_string(), MealyStrategy::memoryless("o", vec![0]))]),
            variables: BTreeMap::new(),
        };
        let lasso = outcome(&chi, &Play(vec![0]), &g);
        assert_eq!(lasso.cycle, vec![0]);
    }

    #[test]
    fn deterministic_two_cycle() {
        // v0 -> v1 -> v0 under constant action m1
        let mut g = crate::games::tests_support::tiny_game(2, 2, 1);
        g.obs.insert("o".into(), Partition::identity(2));
        let chi = Assignment {
            agents: BTreeMap::from([("a1".to_string(), MealyStrategy::memoryless("o", vec![1, 1]))]),
            variables: BTreeMap::new(),
        };
        let lasso = outcome(&chi, &Play(vec![0]), &g);
        assert_eq!(lasso.stem, Vec::<usize>::new());
        assert_eq!(lasso.cycle, vec![0, 1]);
    }

    #[test]
    fn memory_one_alternation_matches_step_simulation() {
        // strategy with two memory states alternating actions on a
        // one-position game with identity observation
        let mut g = crate::games::tests_support::tiny_game(2, 2, 1);
        g.obs.insert("o".into(), Partition::from_blocks(2, vec![vec![0, 1]]).unwrap());
        let strat = MealyStrategy {
            obs: "o".into(),
            memory: 2,
            output: vec![vec![0], vec![1]],
            update: vec![vec![1], vec![0]],
        };
        let chi = Assignment {
            agents: BTreeMap::from([("a1".to_string(), strat.clone())]),
            variables: BTreeMap::new(),
        };
        let lasso = outcome(&chi, &Play(vec![0]), &g);
        // step-by-step simulation for 20 steps
        let mut v = 0usize;
        let mut m = 0usize;
        for i in 0..20 {
            assert_eq!(lasso.position(i), v, "step {i}");
            let a = strat.output[m][0];
            m = strat.update[m][0];
            v = g.step(v, g.joint_index(&[a]));
        }
    }
}

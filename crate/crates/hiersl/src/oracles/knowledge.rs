//! Knowledge-subset game for one imperfectly informed player against a
//! perfectly informed adversary coalition.

use std::collections::{BTreeSet, HashMap};

use crate::games::{AgentId, Cgsi, PosId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Reach,
    Safe,
}

/// Decides sentences of the shape "there is an `obs`-uniform strategy
/// for `agent` such that against every adversary strategy the outcome
/// reaches (resp. stays in) `target`", by solving the belief-set game:
/// beliefs track the positions consistent with the observation history
/// and the player's own actions. For reachability, positions whose play
/// already visited the target are discharged and the player wins by
/// emptying the belief; for safety the belief must stay inside the
/// target forever.
pub fn knowledge_solve(g: &Cgsi, obs: &str, agent: AgentId, target: &[PosId], goal: Goal) -> bool {
    let part = &g.obs[obs];
    let in_target = {
        let mut t = vec![false; g.positions.len()];
        for &v in target {
            t[v] = true;
        }
        t
    };
    let adversaries: Vec<AgentId> = (0..g.agents.len()).filter(|&a| a != agent).collect();
    let adv_choices: Vec<Vec<usize>> = tuples(g.actions.len(), adversaries.len());
    let joint = |mine: usize, ad: &[usize]| -> usize {
        let mut per_agent = vec![0usize; g.agents.len()];
        per_agent[agent] = mine;
        for (k, &a) in adversaries.iter().enumerate() {
            per_agent[a] = ad[k];
        }
        g.joint_index(&per_agent)
    };

    type Belief = BTreeSet<PosId>;
    // successor beliefs for one action: group images by observation class
    let successors = |b: &Belief, mine: usize| -> Vec<Belief> {
        let mut by_class: HashMap<usize, Belief> = HashMap::new();
        for &v in b {
            for ad in &adv_choices {
                let w = g.step(v, joint(mine, ad));
                by_class.entry(part.class_of[w]).or_default().insert(w);
            }
        }
        let mut out: Vec<Belief> = by_class
            .into_values()
            .map(|mut next| {
                if goal == Goal::Reach {
                    next.retain(|&w| !in_target[w]);
                }
                next
            })
            .collect();
        out.sort();
        out.dedup();
        out
    };

    let init: Belief = match goal {
        Goal::Reach => [g.init].iter().copied().filter(|&v| !in_target[v]).collect(),
        Goal::Safe => BTreeSet::from([g.init]),
    };
    if goal == Goal::Safe && !in_target[g.init] {
        return false;
    }
    if init.is_empty() {
        return true; // reach goal already met at the start
    }

    // explore the reachable belief graph
    let mut ids: HashMap<Belief, usize> = HashMap::new();
    let mut beliefs: Vec<Belief> = Vec::new();
    let mut moves: Vec<Vec<Vec<usize>>> = Vec::new(); // [belief][action] -> successor ids
    let mut stack = vec![init.clone()];
    ids.insert(init.clone(), 0);
    beliefs.push(init);
    while let Some(b) = stack.pop() {
        let id = ids[&b];
        while moves.len() <= id {
            moves.push(Vec::new());
        }
        let mut rows = Vec::new();
        for mine in 0..g.actions.len() {
            let mut row = Vec::new();
            for next in successors(&b, mine) {
                if next.is_empty() {
                    row.push(usize::MAX); // winning sink for reach
                    continue;
                }
                let nid = *ids.entry(next.clone()).or_insert_with(|| {
                    beliefs.push(next.clone());
                    stack.push(next);
                    beliefs.len() - 1
                });
                row.push(nid);
            }
            rows.push(row);
        }
        moves[id] = rows;
    }

    match goal {
        Goal::Reach => {
            // least fixpoint: a belief is winning if some action leads
            // only to winning (or empty) beliefs
            let mut win = vec![false; beliefs.len()];
            loop {
                let mut changed = false;
                for i in 0..beliefs.len() {
                    if win[i] {
                        continue;
                    }
                    let good = moves[i]
                        .iter()
                        .any(|row| row.iter().all(|&t| t == usize::MAX || win[t]));
                    if good {
                        win[i] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            win[0]
        }
        Goal::Safe => {
            // greatest fixpoint: prune beliefs leaving the target or with
            // no action keeping all successors safe
            let mut alive: Vec<bool> = beliefs
                .iter()
                .map(|b| b.iter().all(|&v| in_target[v]))
                .collect();
            loop {
                let mut changed = false;
                for i in 0..beliefs.len() {
                    if !alive[i] {
                        continue;
                    }
                    let ok = moves[i].iter().any(|row| row.iter().all(|&t| t != usize::MAX && alive[t]));
                    if !ok {
                        alive[i] = false;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            alive[0]
        }
    }
}

fn tuples(radix: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * radix);
        for t in &out {
            for a in 0..radix {
                let mut t2 = t.clone();
                t2.push(a);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Partition;
    use crate::oracles::attractor::{attractor_solve, Objective};

    /// Two indistinguishable branches needing different actions. The
    /// wrong action sends the play back to the start, where the
    /// adversary picks a fresh branch, so a blind player can never
    /// guarantee the goal; with identity observation one round suffices.
    pub(crate) fn blind_choice_game() -> Cgsi {
        Cgsi {
            actions: vec!["m0".into(), "m1".into()],
            agents: vec!["a1".into(), "a2".into()],
            positions: vec!["v0".into(), "va".into(), "vb".into(), "goal".into()],
            atoms: vec!["win".into()],
            variables: None,
            init: 0,
            // joint index = a1_action * 2 + a2_action
            delta: vec![
                vec![1, 2, 1, 2], // a2 routes to va or vb
                vec![3, 3, 0, 0], // va: m0 reaches goal, m1 restarts
                vec![0, 0, 3, 3], // vb: m1 reaches goal, m0 restarts
                vec![3, 3, 3, 3],
            ],
            labels: vec![vec![], vec![], vec![], vec![0]],
            obs: [
                ("blur".to_string(), Partition::from_blocks(4, vec![vec![0], vec![1, 2], vec![3]]).unwrap()),
                ("id".to_string(), Partition::identity(4)),
            ]
            .into_iter()
            .collect(),
        }
    }

    #[test]
    fn blind_choice_false_blind_true_with_identity() {
        let g = blind_choice_game();
        assert!(!knowledge_solve(&g, "blur", 0, &[3], Goal::Reach));
        assert!(knowledge_solve(&g, "id", 0, &[3], Goal::Reach));
    }

    #[test]
    fn identity_observation_reduces_to_attractor() {
        for positions in 2..5 {
            for seed in 0..8u64 {
                let g = crate::gen::random_game(positions, 2, 2, seed);
                let target = vec![positions - 1];
                let a = attractor_solve(&g, &[0], &target, Objective::Reach);
                let k = knowledge_solve(&g, "id", 0, &target, Goal::Reach);
                assert_eq!(a, k, "positions {positions} seed {seed}");
                let a = attractor_solve(&g, &[0], &target, Objective::Safe);
                let k = knowledge_solve(&g, "id", 0, &target, Goal::Safe);
                assert_eq!(a, k, "safe: positions {positions} seed {seed}");
            }
        }
    }
}

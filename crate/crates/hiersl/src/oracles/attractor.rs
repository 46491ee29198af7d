//! Classical perfect-information controllability via attractor
//! fixpoints.

use crate::games::{AgentId, Cgsi, PosId};

/// Reach: can the controllers force a visit to `target`?
/// Safe: can they keep the play inside `target` forever?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Reach,
    Safe,
}

/// Decides whether the coalition `controllers` (choosing their action
/// components first, against all adversary components) can enforce the
/// objective from the initial position. With identity observations this
/// equals the truth of the corresponding all-exists sentence.
pub fn attractor_solve(g: &Cgsi, controllers: &[AgentId], target: &[PosId], objective: Objective) -> bool {
    let n = g.positions.len();
    let in_target = {
        let mut t = vec![false; n];
        for &v in target {
            t[v] = true;
        }
        t
    };
    let adversaries: Vec<AgentId> =
        (0..g.agents.len()).filter(|a| !controllers.contains(a)).collect();
    let acts = g.actions.len();
    // enumerate coalition choices and adversary completions
    let coalition_choices: Vec<Vec<usize>> = tuples(acts, controllers.len());
    let adversary_choices: Vec<Vec<usize>> = tuples(acts, adversaries.len());
    let joint = |co: &[usize], ad: &[usize]| -> usize {
        let mut per_agent = vec![0usize; g.agents.len()];
        for (k, &a) in controllers.iter().enumerate() {
            per_agent[a] = co[k];
        }
        for (k, &a) in adversaries.iter().enumerate() {
            per_agent[a] = ad[k];
        }
        g.joint_index(&per_agent)
    };
    let controllable_into = |v: PosId, w: &[bool]| -> bool {
        coalition_choices.iter().any(|co| {
            adversary_choices.iter().all(|ad| w[g.step(v, joint(co, ad))])
        })
    };
    match objective {
        Objective::Reach => {
            let mut win = in_target;
            loop {
                let mut changed = false;
                for v in 0..n {
                    if !win[v] && controllable_into(v, &win) {
                        win[v] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            win[g.init]
        }
        Objective::Safe => {
            let mut win = in_target;
            loop {
                let mut changed = false;
                for v in 0..n {
                    if win[v] && !controllable_into(v, &win) {
                        win[v] = false;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            win[g.init]
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

    #[test]
    fn initial_position_in_target_is_reachable() {
        let g = crate::games::tests_support::tiny_game(3, 2, 2);
        assert!(attractor_solve(&g, &[0], &[g.init], Objective::Reach));
    }

    #[test]
    fn unreachable_target_is_not_controllable() {
        // all transitions self-loop: only position 0 is ever visited
        let mut g = crate::games::tests_support::tiny_game(2, 2, 1);
        g.delta = vec![vec![0, 0], vec![1, 1]];
        assert!(!attractor_solve(&g, &[0], &[1], Objective::Reach));
        assert!(attractor_solve(&g, &[0], &[0], Objective::Safe));
    }
}

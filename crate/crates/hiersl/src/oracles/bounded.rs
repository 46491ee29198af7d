//! Bounded strategy-logic evaluation: quantifiers range over uniform
//! finite-memory strategies up to a memory bound, temporal truth is
//! decided on the resulting ultimately periodic plays. Exact whenever
//! quantifier truth is witnessed or refuted within the bound; otherwise
//! honestly `Unknown`.

use crate::games::{Cgsi, Play};
use crate::logic::{Sli, SliNode};

use super::plays::{for_each_strategy, outcome, Assignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedAnswer {
    True,
    False,
    Unknown,
}

impl BoundedAnswer {
    fn not(self) -> Self {
        match self {
            BoundedAnswer::True => BoundedAnswer::False,
            BoundedAnswer::False => BoundedAnswer::True,
            BoundedAnswer::Unknown => BoundedAnswer::Unknown,
        }
    }

    fn or(self, other: Self) -> Self {
        match (self, other) {
            (BoundedAnswer::True, _) | (_, BoundedAnswer::True) => BoundedAnswer::True,
            (BoundedAnswer::False, BoundedAnswer::False) => BoundedAnswer::False,
            _ => BoundedAnswer::Unknown,
        }
    }
}

/// Evaluates a sentence from the initial position.
///
/// `memory` bounds the Mealy memory of quantified strategies; `depth`
/// bounds recursion and unrolling; `assume_determined` lets an exhausted
/// existential enumeration conclude `False` (only sound on instances
/// known to be determined within the memory bound).
pub fn bounded_sli_eval(
    phi: &Sli,
    g: &Cgsi,
    memory: usize,
    depth: usize,
    assume_determined: bool,
) -> BoundedAnswer {
    let chi = Assignment::default();
    eval(phi, g, &chi, &Play(vec![g.init]), memory, depth, assume_determined)
}

fn eval(
    phi: &Sli,
    g: &Cgsi,
    chi: &Assignment,
    play: &Play,
    memory: usize,
    depth: usize,
    determined: bool,
) -> BoundedAnswer {
    if depth == 0 {
        return BoundedAnswer::Unknown;
    }
    match &phi.node {
        SliNode::True => BoundedAnswer::True,
        SliNode::Atom(p) => match g.atom_id(p) {
            Some(ap) => {
                if g.labels[play.last()].contains(&ap) {
                    BoundedAnswer::True
                } else {
                    BoundedAnswer::False
                }
            }
            None => BoundedAnswer::Unknown,
        },
        SliNode::Not(a) => eval(a, g, chi, play, memory, depth, determined).not(),
        SliNode::Or(a, b) => eval(a, g, chi, play, memory, depth, determined)
            .or(eval(b, g, chi, play, memory, depth, determined)),
        SliNode::Bind { agent, var, body } => {
            let Some(strat) = chi.variables.get(var) else {
                return BoundedAnswer::Unknown;
            };
            let mut chi2 = chi.clone();
            chi2.agents.insert(agent.clone(), strat.clone());
            eval(body, g, &chi2, play, memory, depth, determined)
        }
        SliNode::Exists { var, obs, body } => {
            if !g.obs.contains_key(obs) {
                return BoundedAnswer::Unknown;
            }
            let mut saw_unknown = false;
            let stopped = for_each_strategy(g, obs, memory, 2_000_000, |strat| {
                let mut chi2 = chi.clone();
                chi2.variables.insert(var.clone(), strat.clone());
                match eval(body, g, &chi2, play, memory, depth - 1, determined) {
                    BoundedAnswer::True => true,
                    BoundedAnswer::False => false,
                    BoundedAnswer::Unknown => {
                        saw_unknown = true;
                        false
                    }
                }
            });
            match stopped {
                None => BoundedAnswer::Unknown, // enumeration too large
                Some(true) => BoundedAnswer::True,
                Some(false) => {
                    if saw_unknown || !determined {
                        BoundedAnswer::Unknown
                    } else {
                        BoundedAnswer::False
                    }
                }
            }
        }
        SliNode::Next(a) => {
            if !total_on_agents(chi, g) {
                return BoundedAnswer::Unknown;
            }
            let lasso = outcome(chi, play, g);
            let mut next = play.0.clone();
            next.push(lasso.position(play.0.len()));
            eval(a, g, chi, &Play(next), memory, depth - 1, determined)
        }
        SliNode::Until(a, b) => {
            if !total_on_agents(chi, g) {
                return BoundedAnswer::Unknown;
            }
            let lasso = outcome(chi, play, g);
            // prefixes of the outcome repeat once the configuration
            // (position, memories) repeats; the lasso already carries
            // that structure, so evaluate on one unrolling of the cycle
            // plus the stem, with a pessimistic and an optimistic pass
            let horizon = (lasso.stem.len() + 2 * lasso.cycle.len()).max(play.0.len()) - play.0.len();
            if horizon + 1 > depth {
                return BoundedAnswer::Unknown;
            }
            let mut prefixes = Vec::with_capacity(horizon + 1);
            let mut current = play.0.clone();
            for i in 0..=horizon {
                if i > 0 {
                    current.push(lasso.position(play.0.len() + i - 1));
                }
                prefixes.push(Play(current.clone()));
            }
            let va: Vec<BoundedAnswer> = prefixes
                .iter()
                .map(|p| eval(a, g, chi, p, memory, depth - 1, determined))
                .collect();
            let vb: Vec<BoundedAnswer> = prefixes
                .iter()
                .map(|p| eval(b, g, chi, p, memory, depth - 1, determined))
                .collect();
            // positions beyond the first cycle unrolling wrap around
            let total = va.len();
            let wrap = if lasso.cycle.len() <= total {
                total - lasso.cycle.len()
            } else {
                0
            };
            let fix = |optimistic: bool| -> bool {
                let truth = |x: BoundedAnswer| match x {
                    BoundedAnswer::True => true,
                    BoundedAnswer::False => false,
                    BoundedAnswer::Unknown => optimistic,
                };
                let mut v = vec![false; total];
                for _ in 0..=total {
                    let mut changed = false;
                    for i in (0..total).rev() {
                        let succ = if i + 1 < total { i + 1 } else { wrap };
                        let nv = truth(vb[i]) || (truth(va[i]) && v[succ]);
                        if nv != v[i] {
                            v[i] = nv;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                v[0]
            };
            match (fix(false), fix(true)) {
                (true, _) => BoundedAnswer::True,
                (false, false) => BoundedAnswer::False,
                _ => BoundedAnswer::Unknown,
            }
        }
    }
}

fn total_on_agents(chi: &Assignment, g: &Cgsi) -> bool {
    g.agents.iter().all(|a| chi.agents.contains_key(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Partition;
    use crate::logic::{parse_sli, Signature};
    use crate::oracles::attractor::{attractor_solve, Objective};

    fn with_id_obs(mut g: Cgsi) -> Cgsi {
        g.obs.insert("id".into(), Partition::identity(g.positions.len()));
        g
    }

    #[test]
    fn quantifier_free_fully_bound_equals_lasso_evaluation() {
        let g = with_id_obs(crate::games::tests_support::tiny_game(2, 2, 1));
        // strategy quantified then bound; the temporal core is then pure
        // lasso evaluation
        let phi = parse_sli("<<x:id>> (a1,x) F p", &Signature::open()).unwrap();
        assert_eq!(bounded_sli_eval(&phi, &g, 1, 16, true), BoundedAnswer::True);
        let never = parse_sli("<<x:id>> (a1,x) G p", &Signature::open()).unwrap();
        assert_eq!(bounded_sli_eval(&never, &g, 1, 16, true), BoundedAnswer::False);
    }

    #[test]
    fn memoryless_reachability_agrees_with_attractor() {
        for seed in 0..10 {
            let g = crate::gen::random_game(3, 2, 2, seed);
            let phi = parse_sli("<<x:id>> [[y:id]] (a1,x) (a2,y) F p", &Signature::open()).unwrap();
            let expected = {
                let target: Vec<usize> = (0..g.positions.len())
                    .filter(|&v| g.labels[v].contains(&0))
                    .collect();
                attractor_solve(&g, &[0], &target, Objective::Reach)
            };
            match bounded_sli_eval(&phi, &g, 1, 24, true) {
                BoundedAnswer::Unknown => {} // bound too small to conclude; fine
                BoundedAnswer::True => assert!(expected, "seed {seed}"),
                BoundedAnswer::False => assert!(!expected, "seed {seed}"),
            }
        }
    }
}

//! Classical CTL* model checking on a finite compound Kripke structure,
//! by closure-set tableaux and SCC analysis on the product graph. For
//! quantifier-free formulas the tree semantics and the structure
//! semantics coincide, so this serves as an exact reference for the
//! automata pipeline.

use std::collections::{BTreeSet, HashMap};

use crate::games::Cks;
use crate::logic::{QPath, QPathNode, QState, QStateNode};

/// Checks a quantifier-free state formula on the structure from its
/// initial state. Errors on propositional quantifiers.
pub fn ctl_star_check(k: &Cks, phi: &QState) -> Result<bool, String> {
    Ok(sat_states(k, phi)?[k.init])
}

fn sat_states(k: &Cks, phi: &QState) -> Result<Vec<bool>, String> {
    match &phi.node {
        QStateNode::True => Ok(vec![true; k.states.len()]),
        QStateNode::Atom(p) => {
            let ap = k.atom_id(p).ok_or_else(|| format!("unknown atom `{p}`"))?;
            Ok((0..k.states.len()).map(|s| k.labels[s].contains(&ap)).collect())
        }
        QStateNode::Not(a) => Ok(sat_states(k, a)?.into_iter().map(|b| !b).collect()),
        QStateNode::Or(a, b) => {
            let (x, y) = (sat_states(k, a)?, sat_states(k, b)?);
            Ok(x.into_iter().zip(y).map(|(p, q)| p || q).collect())
        }
        QStateNode::Exists(psi) => exists_path(k, psi),
        QStateNode::Quant { .. } => Err("propositional quantifier outside the quantifier-free fragment".into()),
    }
}

/// Path subformulas, indexed; embedded state formulas become
/// pseudo-atoms whose truth per structure state is precomputed.
struct PathArena {
    nodes: Vec<PNode>,
}

#[derive(Clone)]
enum PNode {
    Pseudo(usize), // index into the pseudo-atom table
    Not(usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize),
}

fn exists_path(k: &Cks, psi: &QPath) -> Result<Vec<bool>, String> {
    let mut arena = PathArena { nodes: Vec::new() };
    let mut pseudo: Vec<Vec<bool>> = Vec::new();
    let root = lower(k, psi, &mut arena, &mut pseudo)?;
    let n = arena.nodes.len();
    // only temporal bits are free; boolean bits are derived, so the set
    // enumeration stays exponential in the temporal operators alone
    let free: Vec<usize> = arena
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, x)| matches!(x, PNode::Next(_) | PNode::Until(_, _)).then_some(i))
        .collect();
    if free.len() > 20 {
        return Err(format!("path closure too large ({} temporal operators)", free.len()));
    }

    // locally consistent truth sets for one structure state
    let consistent_sets = |s: usize| -> Vec<usize> {
        let mut out = Vec::new();
        'next: for m in 0..(1usize << free.len()) {
            let mut set = 0usize;
            for (bit, &i) in free.iter().enumerate() {
                if m & (1 << bit) != 0 {
                    set |= 1 << i;
                }
            }
            // derived bits, children first (post-order indices)
            for (i, node) in arena.nodes.iter().enumerate() {
                match node {
                    PNode::Pseudo(p) => {
                        if pseudo[*p][s] {
                            set |= 1 << i;
                        }
                    }
                    PNode::Not(a) => {
                        if set & (1 << a) == 0 {
                            set |= 1 << i;
                        }
                    }
                    PNode::Or(a, b) => {
                        if set & (1 << a) != 0 || set & (1 << b) != 0 {
                            set |= 1 << i;
                        }
                    }
                    PNode::Next(_) => {}
                    PNode::Until(a, b) => {
                        let has = set & (1 << i) != 0;
                        let fa = set & (1 << a) != 0;
                        let fb = set & (1 << b) != 0;
                        if fb && !has {
                            continue 'next;
                        }
                        if has && !fb && !fa {
                            continue 'next;
                        }
                    }
                }
            }
            out.push(set);
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    let step_ok = |set: usize, next: usize| -> bool {
        for (i, node) in arena.nodes.iter().enumerate() {
            let has = set & (1 << i) != 0;
            match node {
                PNode::Next(a) => {
                    if has != (next & (1 << a) != 0) {
                        return false;
                    }
                }
                PNode::Until(a, b) => {
                    let fa = set & (1 << a) != 0;
                    let fb = set & (1 << b) != 0;
                    let hn = next & (1 << i) != 0;
                    if has != (fb || (fa && hn)) {
                        return false;
                    }
                }
                _ => {}
            }
        }
        true
    };

    let per_state: Vec<Vec<usize>> = (0..k.states.len()).map(consistent_sets).collect();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut id: HashMap<(usize, usize), usize> = HashMap::new();
    for s in 0..k.states.len() {
        for &set in &per_state[s] {
            id.insert((s, set), nodes.len());
            nodes.push((s, set));
        }
    }
    let succs: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&(s, set)| {
            let mut out = Vec::new();
            for &t in &k.edges[s] {
                for &next in &per_state[t] {
                    if step_ok(set, next) {
                        out.push(id[&(t, next)]);
                    }
                }
            }
            out
        })
        .collect();

    // fair SCCs: every until is either absent or fulfilled somewhere in
    // the component
    let untils: Vec<usize> = arena
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, x)| matches!(x, PNode::Until(_, _)).then_some(i))
        .collect();
    let comps = tarjan(nodes.len(), &succs);
    let mut good = vec![false; nodes.len()];
    for comp in &comps {
        let nontrivial = comp.len() > 1 || succs[comp[0]].contains(&comp[0]);
        if !nontrivial {
            continue;
        }
        let fair = untils.iter().all(|&u| {
            comp.iter().any(|&x| {
                let (_, set) = nodes[x];
                let has_u = set & (1 << u) != 0;
                let PNode::Until(_, b) = arena.nodes[u] else { unreachable!() };
                !has_u || set & (1 << b) != 0
            })
        });
        if fair {
            for &x in comp {
                good[x] = true;
            }
        }
    }
    // backward closure: nodes that can reach a fair SCC
    let mut can = good.clone();
    loop {
        let mut changed = false;
        for (x, row) in succs.iter().enumerate() {
            if !can[x] && row.iter().any(|&y| can[y]) {
                can[x] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = vec![false; k.states.len()];
    for (x, &(s, set)) in nodes.iter().enumerate() {
        if set & (1 << root) != 0 && can[x] {
            out[s] = true;
        }
    }
    Ok(out)
}

fn lower(k: &Cks, psi: &QPath, arena: &mut PathArena, pseudo: &mut Vec<Vec<bool>>) -> Result<usize, String> {
    let node = match &psi.node {
        QPathNode::State(s) => {
            let sat = sat_states(k, s)?;
            pseudo.push(sat);
            PNode::Pseudo(pseudo.len() - 1)
        }
        QPathNode::Not(a) => PNode::Not(lower(k, a, arena, pseudo)?),
        QPathNode::Or(a, b) => {
            let (x, y) = (lower(k, a, arena, pseudo)?, lower(k, b, arena, pseudo)?);
            PNode::Or(x, y)
        }
        QPathNode::Next(a) => PNode::Next(lower(k, a, arena, pseudo)?),
        QPathNode::Until(a, b) => {
            let (x, y) = (lower(k, a, arena, pseudo)?, lower(k, b, arena, pseudo)?);
            PNode::Until(x, y)
        }
    };
    arena.nodes.push(node);
    Ok(arena.nodes.len() - 1)
}

fn tarjan(n: usize, succs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut counter = 0;
    let mut out = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = counter;
        low[start] = counter;
        counter += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succs[v].len() {
                let w = succs[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
                let lv = low[v];
                call.pop();
                if let Some(&mut (p, _)) = call.last_mut() {
                    low[p] = low[p].min(lv);
                }
            }
        }
    }
    out
}

/// Convenience: the set of structure states satisfying a quantifier-free
/// state formula.
pub fn sat_set(k: &Cks, phi: &QState) -> Result<BTreeSet<usize>, String> {
    Ok(sat_states(k, phi)?
        .into_iter()
        .enumerate()
        .filter_map(|(s, b)| b.then_some(s))
        .collect())
}

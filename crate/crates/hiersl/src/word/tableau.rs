//! Tableau translation from path formulas to nondeterministic parity
//! word automata, via a generalised Büchi automaton whose states are
//! locally consistent obligation sets, built on the fly.

use std::collections::{BTreeSet, HashMap};

use super::ltl::{Ltl, Nnf, NnfArena, NnfId};
use super::npw::{Npw, ResourceError};

/// A fully expanded tableau node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    done: BTreeSet<NnfId>,
    next: BTreeSet<NnfId>,
}

struct Builder {
    arena: NnfArena,
    /// expansions keyed by the obligation set they answer
    expansions: HashMap<BTreeSet<NnfId>, Vec<Node>>,
}

impl Builder {
    /// Expands an obligation set into all locally consistent nodes,
    /// splitting on disjunctions and on the until/release fixpoint laws.
    fn expand(&mut self, todo: BTreeSet<NnfId>) -> Vec<Node> {
        if let Some(done) = self.expansions.get(&todo) {
            return done.clone();
        }
        let mut out = Vec::new();
        let mut work = vec![(todo.clone(), BTreeSet::new(), BTreeSet::new())];
        'outer: while let Some((mut todo, mut done, mut next)) = work.pop() {
            while let Some(&f) = todo.iter().next() {
                todo.remove(&f);
                if done.contains(&f) {
                    continue;
                }
                done.insert(f);
                match self.arena.nodes[f].clone() {
                    Nnf::True => {}
                    Nnf::False => continue 'outer,
                    Nnf::Lit { atom, neg } => {
                        let dual = self.arena.intern(Nnf::Lit { atom, neg: !neg });
                        if done.contains(&dual) {
                            continue 'outer;
                        }
                    }
                    Nnf::And(a, b) => {
                        todo.insert(a);
                        todo.insert(b);
                    }
                    Nnf::Or(a, b) => {
                        let mut left = todo.clone();
                        left.insert(a);
                        work.push((left, done.clone(), next.clone()));
                        todo.insert(b);
                    }
                    Nnf::Next(a) => {
                        next.insert(a);
                    }
                    Nnf::Until(a, b) => {
                        // a U b  =  b ∨ (a ∧ X(a U b))
                        let mut now = todo.clone();
                        now.insert(b);
                        work.push((now, done.clone(), next.clone()));
                        todo.insert(a);
                        next.insert(f);
                    }
                    Nnf::Release(a, b) => {
                        // a R b  =  (a ∧ b) ∨ (b ∧ X(a R b))
                        let mut now = todo.clone();
                        now.insert(a);
                        now.insert(b);
                        work.push((now, done.clone(), next.clone()));
                        todo.insert(b);
                        next.insert(f);
                    }
                }
            }
            out.push(Node { done, next });
        }
        out.sort_by(|a, b| (&a.done, &a.next).cmp(&(&b.done, &b.next)));
        out.dedup();
        self.expansions.insert(todo, out.clone());
        out
    }
}

/// Translates a path formula into an NPW over letters `2^atoms`
/// (bitmask-indexed) that accepts exactly its models. Colours are `1`
/// and `2`: Büchi acceptance recoloured as parity.
pub fn ltl_to_npw(phi: &Ltl, atoms: usize, cap: usize) -> Result<Npw, ResourceError> {
    assert!(atoms < usize::BITS as usize - 1, "too many atoms for bitmask letters");
    assert!(phi.atom_count() <= atoms);
    let letters = 1usize << atoms;
    let mut b = Builder { arena: NnfArena::default(), expansions: HashMap::new() };
    let root = b.arena.lower(phi, false);

    // discover all reachable nodes
    let initial = b.expand(BTreeSet::from([root]));
    let mut node_id: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut intern = |n: Node, nodes: &mut Vec<Node>, stack: &mut Vec<usize>, node_id: &mut HashMap<Node, usize>| {
        *node_id.entry(n.clone()).or_insert_with(|| {
            nodes.push(n);
            stack.push(nodes.len() - 1);
            nodes.len() - 1
        })
    };
    for n in &initial {
        intern(n.clone(), &mut nodes, &mut stack, &mut node_id);
    }
    let mut succs_of: Vec<Vec<usize>> = Vec::new();
    while let Some(i) = stack.pop() {
        while succs_of.len() <= i {
            succs_of.push(Vec::new());
        }
        let succ_nodes = b.expand(nodes[i].next.clone());
        let ids: Vec<usize> = succ_nodes
            .into_iter()
            .map(|n| intern(n, &mut nodes, &mut stack, &mut node_id))
            .collect();
        succs_of[i] = ids;
        if nodes.len() > cap {
            return Err(ResourceError { stage: "ltl-to-npw", states: nodes.len(), cap });
        }
    }
    while succs_of.len() < nodes.len() {
        succs_of.push(Vec::new());
    }

    // until formulas present anywhere reachable drive the generalised
    // acceptance; with none, a single vacuous set keeps the counter code
    // uniform
    let mut untils: Vec<NnfId> = b
        .arena
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(id, n)| matches!(n, Nnf::Until(_, _)).then_some(id))
        .collect();
    untils.sort_unstable();
    let k = untils.len().max(1);
    let in_set = |n: &Node, j: usize| -> bool {
        if untils.is_empty() {
            return true;
        }
        let u = untils[j];
        let Nnf::Until(_, rhs) = b.arena.nodes[u] else { unreachable!() };
        !n.done.contains(&u) || n.done.contains(&rhs)
    };

    // compatible letters per node
    let compatible = |n: &Node| -> Vec<usize> {
        let mut must = 0usize;
        let mut forbid = 0usize;
        for &f in &n.done {
            if let Nnf::Lit { atom, neg } = b.arena.nodes[f] {
                if neg {
                    forbid |= 1 << atom;
                } else {
                    must |= 1 << atom;
                }
            }
        }
        (0..letters).filter(|a| a & must == must && a & forbid == 0).collect()
    };

    // assemble the counter product: state (node, j), plus a fresh initial
    let id = |n: usize, j: usize| 1 + n * k + j;
    let count = 1 + nodes.len() * k;
    if count > cap {
        return Err(ResourceError { stage: "ltl-to-npw", states: count, cap });
    }
    let mut delta = vec![vec![Vec::new(); letters]; count];
    let mut colors = vec![1u32; count];
    colors[0] = 1;
    for (ni, n) in nodes.iter().enumerate() {
        for j in 0..k {
            if j == 0 && in_set(n, 0) {
                colors[id(ni, 0)] = 2;
            }
            let j2 = if in_set(n, j) { (j + 1) % k } else { j };
            let row: Vec<usize> = succs_of[ni].iter().map(|&m| id(m, j2)).collect();
            for a in compatible(n) {
                delta[id(ni, j)][a] = row.clone();
            }
        }
    }
    // initial transitions skip over the position-0 node
    for n0 in &initial {
        let n0_id = node_id[n0];
        for a in compatible(n0) {
            for &m in &succs_of[n0_id] {
                if !delta[0][a].contains(&id(m, 0)) {
                    delta[0][a].push(id(m, 0));
                }
            }
        }
    }
    Ok(Npw { letters, delta, init: 0, colors })
}

//! Determinization of parity word automata: the parity automaton becomes
//! a nondeterministic Büchi automaton (polynomial), which is then
//! determinized with compactly named Safra trees. Each transition emits
//! a priority from the smallest name removed (bad) or the smallest name
//! whose node's label became the union of its children (good); names are
//! compacted order-preservingly after every step, which is what makes
//! the name-based parity condition sound.

use std::collections::HashMap;

use super::npw::{Dpw, Npw, ResourceError};

/// Büchi view of a parity automaton: a waiting copy plus one copy per
/// even colour `c` in which all colours stay at most `c` and visiting
/// colour `c` is accepting.
pub struct ParityToBuchi {
    n: usize,
    colors: Vec<u32>,
    even: Vec<u32>,
}

impl ParityToBuchi {
    pub fn new(colors: &[u32]) -> Self {
        let mut even: Vec<u32> = colors.iter().copied().filter(|c| c % 2 == 0).collect();
        even.sort_unstable();
        even.dedup();
        ParityToBuchi { n: colors.len(), colors: colors.to_vec(), even }
    }

    pub fn states(&self) -> usize {
        self.n * (1 + self.even.len())
    }

    pub fn init(&self, npw_init: usize) -> usize {
        npw_init
    }

    pub fn accepting(&self) -> Vec<bool> {
        let mut acc = vec![false; self.states()];
        for (ci, &c) in self.even.iter().enumerate() {
            for q in 0..self.n {
                if self.colors[q] == c {
                    acc[self.n + ci * self.n + q] = true;
                }
            }
        }
        acc
    }

    /// Successors of a Büchi state given the parity automaton's
    /// successors for the current letter.
    pub fn succs(&self, s: usize, npw_succ: &dyn Fn(usize) -> Vec<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        if s < self.n {
            for q2 in npw_succ(s) {
                out.push(q2);
                for (ci, &c) in self.even.iter().enumerate() {
                    if self.colors[q2] <= c {
                        out.push(self.n + ci * self.n + q2);
                    }
                }
            }
        } else {
            let ci = (s - self.n) / self.n;
            let q = (s - self.n) % self.n;
            let c = self.even[ci];
            for q2 in npw_succ(q) {
                if self.colors[q2] <= c {
                    out.push(self.n + ci * self.n + q2);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct SNode {
    name: u32,
    label: Vec<usize>, // sorted Büchi states
    children: Vec<SNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct STree {
    root: Option<SNode>,
}

/// Lazy Safra determinizer over an abstract Büchi automaton. Letters are
/// whatever the caller's successor closure encodes; results are cached
/// by the caller keyed on (state, letter).
pub struct SafraDet {
    accepting: Vec<bool>,
    pub trees: Vec<STree>,
    index: HashMap<STree, usize>,
    /// neutral (no-event) min-parity priority; also bounds all priorities
    neutral: u32,
}

impl SafraDet {
    pub fn new(nba_states: usize, accepting: Vec<bool>, init: usize) -> Self {
        let tree0 = STree { root: Some(SNode { name: 1, label: vec![init], children: Vec::new() }) };
        let mut index = HashMap::new();
        index.insert(tree0.clone(), 0);
        SafraDet {
            accepting,
            trees: vec![tree0],
            index,
            neutral: 4 * nba_states.max(1) as u32 + 1,
        }
    }

    pub fn init(&self) -> usize {
        0
    }

    /// Largest max-even colour this determinizer can emit.
    pub fn color_bound(&self) -> u32 {
        self.neutral
    }

    fn intern(&mut self, t: STree) -> usize {
        if let Some(&i) = self.index.get(&t) {
            return i;
        }
        self.trees.push(t.clone());
        self.index.insert(t, self.trees.len() - 1);
        self.trees.len() - 1
    }

    /// One deterministic step; returns the target tree and the max-even
    /// colour of the transition.
    pub fn step(
        &mut self,
        tree: usize,
        succs: &dyn Fn(usize) -> Vec<usize>,
        cap: usize,
    ) -> Result<(usize, u32), ResourceError> {
        let mut deaths: Option<u32> = None;
        let mut greens: Option<u32> = None;
        let next = match self.trees[tree].root.clone() {
            None => STree::default(),
            Some(mut root) => {
                // powerset move on every label
                map_labels(&mut root, &|label| {
                    let mut out: Vec<usize> = label.iter().flat_map(|&q| succs(q)).collect();
                    out.sort_unstable();
                    out.dedup();
                    out
                });
                // spawn children for accepting states, names above all
                let mut fresh = max_name(&root) + 1;
                spawn(&mut root, &self.accepting, &mut fresh);
                // older (leftward) occurrences claim shared states
                horizontal(&mut root, &mut Vec::new());
                // drop emptied nodes, recording the smallest lost name
                if root.label.is_empty() {
                    record_min(&mut deaths, root.name);
                    STree::default()
                } else {
                    kill_empty(&mut root, &mut deaths);
                    vertical(&mut root, &mut greens, &mut deaths);
                    let mut names: Vec<u32> = Vec::new();
                    collect_names(&root, &mut names);
                    names.sort_unstable();
                    let rank: HashMap<u32, u32> =
                        names.iter().enumerate().map(|(i, &n)| (n, i as u32 + 1)).collect();
                    rename(&mut root, &rank);
                    STree { root: Some(root) }
                }
            }
        };
        let min_parity = match (deaths, greens) {
            (None, None) => self.neutral,
            (Some(e), None) => 2 * e - 1,
            (None, Some(f)) => 2 * f,
            (Some(e), Some(f)) => (2 * e - 1).min(2 * f),
        };
        // convert to the max-even convention: order reversed, parity kept
        let big = self.neutral + 1;
        let color = big - min_parity.min(big - 1);
        let id = self.intern(next);
        if self.trees.len() > cap {
            return Err(ResourceError { stage: "determinize", states: self.trees.len(), cap });
        }
        Ok((id, color))
    }
}

fn map_labels(node: &mut SNode, f: &impl Fn(&[usize]) -> Vec<usize>) {
    node.label = f(&node.label);
    for c in &mut node.children {
        map_labels(c, f);
    }
}

fn max_name(node: &SNode) -> u32 {
    node.children.iter().map(max_name).max().unwrap_or(0).max(node.name)
}

fn spawn(node: &mut SNode, accepting: &[bool], fresh: &mut u32) {
    // children first: the new youngest child must not itself spawn
    for c in &mut node.children {
        spawn(c, accepting, fresh);
    }
    let hit: Vec<usize> = node.label.iter().copied().filter(|&q| accepting[q]).collect();
    if !hit.is_empty() {
        node.children.push(SNode { name: *fresh, label: hit, children: Vec::new() });
        *fresh += 1;
    }
}

fn horizontal(node: &mut SNode, claimed_above: &mut Vec<usize>) {
    remove_states(node, claimed_above);
    let mut claimed: Vec<usize> = Vec::new();
    for c in &mut node.children {
        let mut barrier = claimed.clone();
        horizontal_sub(c, &mut barrier);
        claimed.extend(c.label.iter().copied());
    }
}

fn horizontal_sub(node: &mut SNode, claimed: &mut Vec<usize>) {
    remove_subtree_states(node, claimed);
    let mut local: Vec<usize> = Vec::new();
    for c in &mut node.children {
        let mut barrier = local.clone();
        horizontal_sub(c, &mut barrier);
        local.extend(c.label.iter().copied());
    }
}

fn remove_states(node: &mut SNode, claimed: &[usize]) {
    node.label.retain(|q| !claimed.contains(q));
}

fn remove_subtree_states(node: &mut SNode, claimed: &[usize]) {
    node.label.retain(|q| !claimed.contains(q));
    for c in &mut node.children {
        remove_subtree_states(c, claimed);
    }
}

fn kill_empty(node: &mut SNode, deaths: &mut Option<u32>) {
    node.children.retain(|c| {
        if c.label.is_empty() {
            let mut names = Vec::new();
            collect_names(c, &mut names);
            for n in names {
                record_min(deaths, n);
            }
            false
        } else {
            true
        }
    });
    for c in &mut node.children {
        kill_empty(c, deaths);
    }
}

fn vertical(node: &mut SNode, greens: &mut Option<u32>, deaths: &mut Option<u32>) {
    let mut union: Vec<usize> = node.children.iter().flat_map(|c| c.label.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    if !node.children.is_empty() && union == node.label {
        record_min(greens, node.name);
        for c in &node.children {
            let mut names = Vec::new();
            collect_names(c, &mut names);
            for n in names {
                record_min(deaths, n);
            }
        }
        node.children.clear();
    } else {
        for c in &mut node.children {
            vertical(c, greens, deaths);
        }
    }
}

fn collect_names(node: &SNode, out: &mut Vec<u32>) {
    out.push(node.name);
    for c in &node.children {
        collect_names(c, out);
    }
}

fn rename(node: &mut SNode, rank: &HashMap<u32, u32>) {
    node.name = rank[&node.name];
    for c in &mut node.children {
        rename(c, rank);
    }
}

fn record_min(slot: &mut Option<u32>, v: u32) {
    *slot = Some(slot.map_or(v, |old| old.min(v)));
}

/// Determinizes a parity word automaton into a complete deterministic
/// parity automaton over the same alphabet; the language is preserved.
pub fn determinize(npw: &Npw, cap: usize) -> Result<Dpw, ResourceError> {
    let p2b = ParityToBuchi::new(&npw.colors);
    let accepting = p2b.accepting();
    let init_b = p2b.init(npw.init);
    let mut safra = SafraDet::new(p2b.states(), accepting, init_b);
    let neutral_color = 1u32; // max-even image of the neutral priority
    // DPW states pair a tree with the colour of the transition that
    // entered it
    let mut states: Vec<(usize, u32)> = vec![(safra.init(), neutral_color)];
    let mut index: HashMap<(usize, u32), usize> = HashMap::new();
    index.insert(states[0], 0);
    let mut delta: Vec<Option<Vec<usize>>> = vec![None];
    let mut work = vec![0usize];
    while let Some(s) = work.pop() {
        if delta[s].is_some() {
            continue;
        }
        let (tree, _) = states[s];
        let mut row = Vec::with_capacity(npw.letters);
        for a in 0..npw.letters {
            let succ = |b: usize| p2b.succs(b, &|q| npw.delta[q][a].clone());
            let (t2, color) = safra.step(tree, &succ, cap)?;
            let key = (t2, color);
            let id = *index.entry(key).or_insert_with(|| {
                states.push(key);
                delta.push(None);
                work.push(states.len() - 1);
                states.len() - 1
            });
            if states.len() > cap {
                return Err(ResourceError { stage: "determinize", states: states.len(), cap });
            }
            row.push(id);
        }
        delta[s] = Some(row);
    }
    let colors = states.iter().map(|&(_, c)| c).collect();
    let delta = delta.into_iter().map(|r| r.expect("all reachable states expanded")).collect();
    Ok(Dpw { letters: npw.letters, delta, init: 0, colors })
}

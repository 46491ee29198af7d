//! Nondeterministic and deterministic parity word automata.
//!
//! Acceptance everywhere in this crate: a run is accepting iff the
//! maximum colour seen infinitely often is even.

use thiserror::Error;

pub type WStateId = usize;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{stage}: state budget exceeded ({states} states, cap {cap})")]
pub struct ResourceError {
    pub stage: &'static str,
    pub states: usize,
    pub cap: usize,
}

/// Nondeterministic parity word automaton over an indexed alphabet.
#[derive(Debug, Clone)]
pub struct Npw {
    pub letters: usize,
    /// `delta[q][a]` lists the successors of `q` on letter `a`.
    pub delta: Vec<Vec<Vec<WStateId>>>,
    pub init: WStateId,
    pub colors: Vec<u32>,
}

impl Npw {
    pub fn states(&self) -> usize {
        self.colors.len()
    }

    /// Decides whether the automaton accepts `stem · loop^ω`, by cycle
    /// analysis on the product of the automaton with the lasso.
    pub fn lasso_accepts(&self, stem: &[usize], looping: &[usize]) -> bool {
        assert!(!looping.is_empty(), "loop must be nonempty");
        for &a in stem.iter().chain(looping) {
            assert!(a < self.letters, "letter {a} outside alphabet of size {}", self.letters);
        }
        let total = stem.len() + looping.len();
        let letter = |i: usize| if i < stem.len() { stem[i] } else { looping[i - stem.len()] };
        let succ_pos = |i: usize| if i + 1 < total { i + 1 } else { stem.len() };
        // product nodes: q * total + i
        let node = |q: usize, i: usize| q * total + i;
        let mut reach = vec![false; self.states() * total];
        let mut stack = vec![node(self.init, 0)];
        reach[node(self.init, 0)] = true;
        while let Some(x) = stack.pop() {
            let (q, i) = (x / total, x % total);
            for &q2 in &self.delta[q][letter(i)] {
                let y = node(q2, succ_pos(i));
                if !reach[y] {
                    reach[y] = true;
                    stack.push(y);
                }
            }
        }
        // a reachable cycle whose maximum colour is even witnesses
        // acceptance; check per candidate even colour on the subgraph of
        // colours <= c
        let mut colors: Vec<u32> = self.colors.clone();
        colors.sort_unstable();
        colors.dedup();
        for &c in colors.iter().filter(|&&c| c % 2 == 0) {
            let allowed: Vec<usize> = (0..self.states() * total)
                .filter(|&x| reach[x] && self.colors[x / total] <= c)
                .collect();
            if allowed.is_empty() {
                continue;
            }
            let comp = scc(&allowed, |x| {
                let (q, i) = (x / total, x % total);
                self.delta[q][letter(i)]
                    .iter()
                    .map(|&q2| node(q2, succ_pos(i)))
                    .filter(|&y| reach[y] && self.colors[y / total] <= c)
                    .collect()
            });
            // nontrivial component (or self-loop) containing colour c
            for group in comp {
                let has_c = group.iter().any(|&x| self.colors[x / total] == c);
                if !has_c {
                    continue;
                }
                if group.len() > 1 {
                    return true;
                }
                let x = group[0];
                let (q, i) = (x / total, x % total);
                let selfloop = self.delta[q][letter(i)]
                    .iter()
                    .any(|&q2| node(q2, succ_pos(i)) == x);
                if selfloop {
                    return true;
                }
            }
        }
        false
    }
}

/// Deterministic, complete parity word automaton.
#[derive(Debug, Clone)]
pub struct Dpw {
    pub letters: usize,
    pub delta: Vec<Vec<WStateId>>,
    pub init: WStateId,
    pub colors: Vec<u32>,
}

impl Dpw {
    pub fn states(&self) -> usize {
        self.colors.len()
    }

    pub fn lasso_accepts(&self, stem: &[usize], looping: &[usize]) -> bool {
        assert!(!looping.is_empty());
        // follow the unique run until (state, loop position) repeats,
        // then take the maximum colour on the repeated segment
        let mut q = self.init;
        for &a in stem {
            q = self.delta[q][a];
        }
        let mut seen = std::collections::HashMap::new();
        let mut trace: Vec<(WStateId, usize)> = Vec::new();
        let mut pos = 0usize;
        loop {
            if let Some(&k) = seen.get(&(q, pos)) {
                // states on the repeated segment are exactly those seen
                // infinitely often
                let best = trace[k..].iter().map(|&(qq, _)| self.colors[qq]).max().unwrap();
                return best % 2 == 0;
            }
            seen.insert((q, pos), trace.len());
            trace.push((q, pos));
            q = self.delta[q][looping[pos]];
            pos = (pos + 1) % looping.len();
        }
    }

    pub fn to_npw(&self) -> Npw {
        Npw {
            letters: self.letters,
            delta: self.delta.iter().map(|row| row.iter().map(|&t| vec![t]).collect()).collect(),
            init: self.init,
            colors: self.colors.clone(),
        }
    }
}

/// Tarjan SCC over an implicit graph restricted to `nodes`.
fn scc(nodes: &[usize], succs: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    use std::collections::HashMap;
    #[derive(Default, Clone)]
    struct Info {
        index: usize,
        low: usize,
        on_stack: bool,
        visited: bool,
    }
    let mut info: HashMap<usize, Info> = nodes.iter().map(|&n| (n, Info::default())).collect();
    let mut counter = 0usize;
    let mut stack = Vec::new();
    let mut out = Vec::new();
    // iterative Tarjan
    for &start in nodes {
        if info[&start].visited {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(start, succs(start), 0)];
        {
            let e = info.get_mut(&start).unwrap();
            e.visited = true;
            e.index = counter;
            e.low = counter;
            e.on_stack = true;
        }
        stack.push(start);
        counter += 1;
        while let Some((v, vsuccs, mut i)) = call.pop() {
            let mut descended = false;
            while i < vsuccs.len() {
                let w = vsuccs[i];
                i += 1;
                if !info.contains_key(&w) {
                    continue;
                }
                if !info[&w].visited {
                    call.push((v, vsuccs.clone(), i));
                    let e = info.get_mut(&w).unwrap();
                    e.visited = true;
                    e.index = counter;
                    e.low = counter;
                    e.on_stack = true;
                    stack.push(w);
                    counter += 1;
                    call.push((w, succs(w), 0));
                    descended = true;
                    break;
                } else if info[&w].on_stack {
                    let wl = info[&w].index;
                    let e = info.get_mut(&v).unwrap();
                    e.low = e.low.min(wl);
                }
            }
            if descended {
                continue;
            }
            if info[&v].low == info[&v].index {
                let mut group = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    info.get_mut(&w).unwrap().on_stack = false;
                    group.push(w);
                    if w == v {
                        break;
                    }
                }
                out.push(group);
            }
            if let Some((parent, _, _)) = call.last() {
                let vl = info[&v].low;
                let e = info.get_mut(parent).unwrap();
                e.low = e.low.min(vl);
            }
        }
    }
    out
}

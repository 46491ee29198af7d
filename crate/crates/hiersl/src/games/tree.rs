//! Regular trees as finite generators.
//!
//! Infinite trees are never materialised: a tree is a finite generator
//! (a graph of vertices, each carrying a direction, a label and a
//! left-total successor list) and denotes its unfolding, whose nodes are
//! the finite vertex paths from the root. Well-formedness requires that
//! no vertex has two successors with the same direction, so a node of
//! the unfolding is determined by its direction word.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::dirs::{DirAlphabet, DirId, IndexSet, Tuple};

/// Label bitmask over the tree's atom list (at most 64 atoms).
pub type Label = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeVertex {
    pub dir: DirId,
    pub label: Label,
    pub succs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RegularTree {
    pub dirs: Arc<DirAlphabet>,
    pub atoms: Vec<String>,
    pub verts: Vec<TreeVertex>,
    pub root: usize,
}

impl RegularTree {
    /// Builds a generator, trimming vertices unreachable from the root.
    pub fn new(dirs: Arc<DirAlphabet>, atoms: Vec<String>, verts: Vec<TreeVertex>, root: usize) -> Self {
        assert!(atoms.len() <= 64, "label masks hold at most 64 atoms");
        let mut keep = vec![false; verts.len()];
        let mut queue = VecDeque::from([root]);
        keep[root] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &verts[v].succs {
                if !keep[w] {
                    keep[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut remap = vec![usize::MAX; verts.len()];
        let mut out = Vec::new();
        for (v, vert) in verts.iter().enumerate() {
            if keep[v] {
                remap[v] = out.len();
                out.push(vert.clone());
            }
        }
        for vert in &mut out {
            for s in &mut vert.succs {
                *s = remap[*s];
            }
        }
        RegularTree { dirs, atoms, verts: out, root: remap[root] }
    }

    pub fn root_dir(&self) -> DirId {
        self.verts[self.root].dir
    }

    /// The unique successor of `v` with direction `d`, if any.
    pub fn succ_by_dir(&self, v: usize, d: DirId) -> Option<usize> {
        self.verts[v].succs.iter().copied().find(|&w| self.verts[w].dir == d)
    }

    /// A generator is deterministic if no vertex has two successors with
    /// the same direction; only then does it denote a tree.
    pub fn is_deterministic(&self) -> bool {
        self.verts.iter().all(|vert| {
            let mut seen = HashSet::new();
            vert.succs.iter().all(|&w| seen.insert(self.verts[w].dir))
        })
    }

    /// A tree is complete if every vertex has exactly one successor per
    /// direction of the alphabet.
    pub fn is_complete(&self) -> bool {
        self.verts.iter().all(|vert| {
            vert.succs.len() == self.dirs.len() && {
                let mut seen = HashSet::new();
                vert.succs.iter().all(|&w| seen.insert(self.verts[w].dir))
            }
        })
    }

    /// The complete tree over `dirs` with a constant label.
    pub fn complete_constant(dirs: Arc<DirAlphabet>, atoms: Vec<String>, label: Label, root: DirId) -> Self {
        let all: Vec<usize> = (0..dirs.len()).collect();
        let verts = (0..dirs.len() as u32)
            .map(|d| TreeVertex { dir: d, label, succs: all.clone() })
            .collect();
        RegularTree { dirs, atoms, verts, root: root as usize }
    }

    /// Widens a tree over `L_J` to one over `L_I ⊇ L_J`: the missing root
    /// components are filled from `fill`, every non-root node branches
    /// over all completions, and labels are inherited from the
    /// `L_J`-narrowing.
    pub fn widen(&self, wide: Arc<DirAlphabet>, fill: &[u32]) -> RegularTree {
        let narrow = &self.dirs.indices;
        assert!(narrow.is_subset(&wide.indices), "widening must extend the index set");
        let extra: IndexSet = wide.indices.minus(narrow);
        assert_eq!(fill.len(), extra.len(), "root fill must cover the added components");
        let extra_tuples: Vec<Tuple> = enumerate_tuples(&wide, &extra);
        let combine = |v: usize, e: &Tuple| -> DirId {
            let mut tuple = Vec::with_capacity(wide.indices.len());
            let base = self.dirs.tuple(self.verts[v].dir);
            let mut bi = 0;
            let mut ei = 0;
            for i in wide.indices.iter() {
                if narrow.contains(i) {
                    tuple.push(base[bi]);
                    bi += 1;
                } else {
                    tuple.push(e[ei]);
                    ei += 1;
                }
            }
            wide.dir_of(&tuple)
        };
        // vertices: (source vertex, extra components); successors range
        // over every extra completion
        let idx = |v: usize, e: usize| v * extra_tuples.len() + e;
        let mut verts = Vec::with_capacity(self.verts.len() * extra_tuples.len());
        for (v, vert) in self.verts.iter().enumerate() {
            for e in &extra_tuples {
                let mut succs = Vec::new();
                for &w in &vert.succs {
                    for (k, _) in extra_tuples.iter().enumerate() {
                        succs.push(idx(w, k));
                    }
                }
                verts.push(TreeVertex { dir: combine(v, e), label: vert.label, succs });
            }
        }
        let root_extra = extra_tuples
            .iter()
            .position(|e| e == &fill.to_vec())
            .expect("root fill must be a valid tuple over the added components");
        RegularTree::new(wide, self.atoms.clone(), verts, idx(self.root, root_extra))
    }

    /// Merges a complete tree with another tree over the same direction
    /// alphabet and a disjoint atom set: the result has the domain of
    /// `other` and the union labelling.
    pub fn merge(&self, other: &RegularTree) -> RegularTree {
        assert!(self.is_complete(), "merge requires a complete left argument");
        assert!(self.dirs.same_as(&other.dirs), "merge requires a shared direction alphabet");
        assert!(
            self.atoms.iter().all(|a| !other.atoms.contains(a)),
            "merge requires disjoint atom sets"
        );
        assert_eq!(self.root_dir(), other.root_dir(), "merge requires equal root directions");
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        let shift = self.atoms.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut verts = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |a: usize, b: usize,
                          verts: &mut Vec<TreeVertex>,
                          queue: &mut VecDeque<(usize, usize)>,
                          index: &mut HashMap<(usize, usize), usize>| {
            *index.entry((a, b)).or_insert_with(|| {
                let id = verts.len();
                verts.push(TreeVertex { dir: 0, label: 0, succs: Vec::new() });
                queue.push_back((a, b));
                id
            })
        };
        let root = intern(self.root, other.root, &mut verts, &mut queue, &mut index);
        while let Some((a, b)) = queue.pop_front() {
            let id = index[&(a, b)];
            let dir = other.verts[b].dir;
            let label = self.verts[a].label | (other.verts[b].label << shift);
            let mut succs = Vec::new();
            for &b2 in &other.verts[b].succs {
                let d = other.verts[b2].dir;
                let a2 = self
                    .succ_by_dir(a, d)
                    .expect("complete tree covers every direction");
                succs.push(intern(a2, b2, &mut verts, &mut queue, &mut index));
            }
            verts[id] = TreeVertex { dir, label, succs };
        }
        RegularTree { dirs: other.dirs.clone(), atoms, verts, root }
    }

    /// Narrows the tree onto a sub-product of components. Nodes with the
    /// same narrowing merge, which is only well defined when merged nodes
    /// agree on their labels; returns `None` otherwise. Implemented by a
    /// subset construction on the generator.
    pub fn narrow_tree(&self, onto: Arc<DirAlphabet>) -> Option<RegularTree> {
        assert!(onto.indices.is_subset(&self.dirs.indices));
        let proj: Vec<DirId> = (0..self.dirs.len() as u32)
            .map(|d| self.dirs.project(d, &onto))
            .collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut verts: Vec<TreeVertex> = Vec::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        let root_set = vec![self.root];
        index.insert(root_set.clone(), 0);
        verts.push(TreeVertex { dir: 0, label: 0, succs: Vec::new() });
        queue.push_back(root_set);
        while let Some(set) = queue.pop_front() {
            let id = index[&set];
            let dir = proj[self.verts[set[0]].dir as usize];
            let label = self.verts[set[0]].label;
            if set.iter().any(|&v| self.verts[v].label != label || proj[self.verts[v].dir as usize] != dir) {
                return None;
            }
            let mut by_dir: HashMap<DirId, Vec<usize>> = HashMap::new();
            for &v in &set {
                for &w in &self.verts[v].succs {
                    by_dir.entry(proj[self.verts[w].dir as usize]).or_default().push(w);
                }
            }
            let mut succs = Vec::new();
            let mut dirs: Vec<DirId> = by_dir.keys().copied().collect();
            dirs.sort_unstable();
            for d in dirs {
                let mut next = by_dir.remove(&d).unwrap();
                next.sort_unstable();
                next.dedup();
                let nid = *index.entry(next.clone()).or_insert_with(|| {
                    verts.push(TreeVertex { dir: 0, label: 0, succs: Vec::new() });
                    queue.push_back(next);
                    verts.len() - 1
                });
                succs.push(nid);
            }
            verts[id] = TreeVertex { dir, label, succs };
        }
        Some(RegularTree { dirs: onto, atoms: self.atoms.clone(), verts, root: 0 })
    }

    /// Exact equality of the denoted trees (labels, directions, domains),
    /// decided coinductively on generator vertex pairs.
    pub fn same_tree(&self, other: &RegularTree) -> bool {
        if !self.dirs.same_as(&other.dirs) || self.atoms != other.atoms {
            return false;
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(self.root, other.root)]);
        while let Some((a, b)) = queue.pop_front() {
            if !seen.insert((a, b)) {
                continue;
            }
            let (va, vb) = (&self.verts[a], &other.verts[b]);
            if va.dir != vb.dir || va.label != vb.label {
                return false;
            }
            let mut da: Vec<DirId> = va.succs.iter().map(|&w| self.verts[w].dir).collect();
            let mut db: Vec<DirId> = vb.succs.iter().map(|&w| other.verts[w].dir).collect();
            da.sort_unstable();
            db.sort_unstable();
            if da != db {
                return false;
            }
            for &wa in &va.succs {
                let d = self.verts[wa].dir;
                let wb = other.succ_by_dir(b, d).expect("directions already matched");
                queue.push_back((wa, wb));
            }
        }
        true
    }

    /// Compares unfoldings up to `depth` (root at depth 0); used where a
    /// finite-depth check is the stated test.
    pub fn unroll_equal(&self, other: &RegularTree, depth: usize) -> bool {
        if !self.dirs.same_as(&other.dirs) || self.atoms != other.atoms {
            return false;
        }
        fn walk(a: &RegularTree, b: &RegularTree, va: usize, vb: usize, depth: usize) -> bool {
            let (xa, xb) = (&a.verts[va], &b.verts[vb]);
            if xa.dir != xb.dir || xa.label != xb.label {
                return false;
            }
            if depth == 0 {
                return true;
            }
            let mut da: Vec<DirId> = xa.succs.iter().map(|&w| a.verts[w].dir).collect();
            let mut db: Vec<DirId> = xb.succs.iter().map(|&w| b.verts[w].dir).collect();
            da.sort_unstable();
            db.sort_unstable();
            if da != db {
                return false;
            }
            xa.succs.iter().all(|&wa| {
                let d = a.verts[wa].dir;
                let wb = b.succ_by_dir(vb, d).expect("directions matched");
                walk(a, b, wa, wb, depth - 1)
            })
        }
        walk(self, other, self.root, other.root, depth)
    }

    /// All direction words of unfolding nodes up to `depth`, for
    /// enumeration-style tests.
    pub fn nodes_to_depth(&self, depth: usize) -> Vec<Vec<DirId>> {
        let mut out = Vec::new();
        let mut frontier = vec![(self.root, vec![self.root_dir()])];
        out.push(vec![self.root_dir()]);
        for _ in 0..depth {
            let mut next = Vec::new();
            for (v, word) in frontier {
                for &w in &self.verts[v].succs {
                    let mut word2 = word.clone();
                    word2.push(self.verts[w].dir);
                    out.push(word2.clone());
                    next.push((w, word2));
                }
            }
            frontier = next;
        }
        out
    }
}

fn enumerate_tuples(alphabet: &DirAlphabet, over: &IndexSet) -> Vec<Tuple> {
    let mut tuples = vec![Vec::new()];
    for i in over.iter() {
        let size = alphabet.components.size(i);
        let mut next = Vec::new();
        for t in &tuples {
            for v in 0..size as u32 {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    tuples
}

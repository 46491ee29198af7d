//! Local-state components and direction alphabets.
//!
//! A structure over `n` components has disjoint finite local-state sets,
//! one per component index `1..=n`. A direction over an index set
//! `I ⊆ [n]` is a tuple picking one local value for each `i ∈ I`; the
//! direction alphabet `X_I` enumerates all such tuples. `X_∅` has the
//! single blank direction (the empty tuple).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Sizes (and display names) of the local-state sets, indexed `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// `names[i]` holds the value names of component `i + 1`.
    pub names: Vec<Vec<String>>,
}

impl Components {
    pub fn new(names: Vec<Vec<String>>) -> Self {
        Components { names }
    }

    /// Number of components `n`.
    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn size(&self, index: usize) -> usize {
        self.names[index - 1].len()
    }

    /// The full index set `[n]`.
    pub fn full_set(&self) -> IndexSet {
        IndexSet::full(self.count())
    }
}

/// A subset of component indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet(indices)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }

    pub fn intersect(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|i| other.contains(*i)).collect())
    }

    pub fn minus(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|i| !other.contains(*i)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A tuple of local-state value ids, one per index of some `IndexSet`,
/// in index order. The empty tuple is the blank direction.
pub type Tuple = Vec<u32>;

/// Projects a tuple over `from` onto `onto ⊆ from`.
pub fn narrow_tuple(tuple: &[u32], from: &IndexSet, onto: &IndexSet) -> Tuple {
    debug_assert!(onto.is_subset(from));
    from.iter()
        .zip(tuple)
        .filter(|(i, _)| onto.contains(*i))
        .map(|(_, v)| *v)
        .collect()
}

/// Pointwise projection of a word of tuples; for `onto = ∅` this yields a
/// blank word of the same length.
pub fn narrow_word(word: &[Tuple], from: &IndexSet, onto: &IndexSet) -> Vec<Tuple> {
    word.iter().map(|t| narrow_tuple(t, from, onto)).collect()
}

/// Index of a direction within its alphabet.
pub type DirId = u32;

/// The enumerated direction alphabet `X_I` for one index set.
#[derive(Debug)]
pub struct DirAlphabet {
    pub components: Arc<Components>,
    pub indices: IndexSet,
    tuples: Vec<Tuple>,
    lookup: HashMap<Tuple, DirId>,
}

impl DirAlphabet {
    pub fn new(components: Arc<Components>, indices: IndexSet) -> Arc<Self> {
        let sizes: Vec<usize> = indices.iter().map(|i| components.size(i)).collect();
        let mut tuples = vec![Vec::new()];
        for &s in &sizes {
            let mut next = Vec::with_capacity(tuples.len() * s);
            for t in &tuples {
                for v in 0..s {
                    let mut t2 = t.clone();
                    t2.push(v as u32);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let lookup = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as DirId))
            .collect();
        Arc::new(DirAlphabet { components, indices, tuples, lookup })
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // an alphabet always has at least the blank tuple
    }

    pub fn tuple(&self, d: DirId) -> &Tuple {
        &self.tuples[d as usize]
    }

    pub fn dir_of(&self, tuple: &[u32]) -> DirId {
        *self
            .lookup
            .get(tuple)
            .unwrap_or_else(|| panic!("tuple {tuple:?} outside alphabet over {}", self.indices))
    }

    pub fn dirs(&self) -> impl Iterator<Item = DirId> {
        (0..self.tuples.len() as u32).collect::<Vec<_>>().into_iter()
    }

    /// Projects one of this alphabet's directions into a narrower alphabet.
    pub fn project(&self, d: DirId, onto: &DirAlphabet) -> DirId {
        let t = narrow_tuple(self.tuple(d), &self.indices, &onto.indices);
        onto.dir_of(&t)
    }

    /// Human-readable form of a direction, used by dump formats.
    pub fn describe(&self, d: DirId) -> String {
        if self.indices.is_empty() {
            return "<>".to_string();
        }
        let parts: Vec<String> = self
            .indices
            .iter()
            .zip(self.tuple(d))
            .map(|(i, v)| self.components.names[i - 1][*v as usize].clone())
            .collect();
        format!("<{}>", parts.join(","))
    }

    /// Checks structural equality of two alphabets (same components, same
    /// index set); alphabets constructed from equal inputs enumerate
    /// identically.
    pub fn same_as(&self, other: &DirAlphabet) -> bool {
        self.indices == other.indices && self.components == other.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comps() -> Arc<Components> {
        Arc::new(Components::new(vec![
            vec!["a0".into(), "a1".into()],
            vec!["b0".into(), "b1".into(), "b2".into()],
        ]))
    }

    #[test]
    fn alphabet_enumerates_products() {
        let c = comps();
        let full = DirAlphabet::new(c.clone(), IndexSet::full(2));
        assert_eq!(full.len(), 6);
        let only2 = DirAlphabet::new(c.clone(), IndexSet::new(vec![2]));
        assert_eq!(only2.len(), 3);
        let blank = DirAlphabet::new(c, IndexSet::empty());
        assert_eq!(blank.len(), 1);
        assert_eq!(blank.tuple(0), &Vec::<u32>::new());
    }

    #[test]
    fn narrow_is_component_selection() {
        let from = IndexSet::full(3);
        let onto = IndexSet::new(vec![2]);
        assert_eq!(narrow_tuple(&[7, 8, 9], &from, &onto), vec![8]);
        // composing projections equals the direct projection
        let mid = IndexSet::new(vec![1, 2]);
        let w = vec![vec![1, 2, 3], vec![4, 5, 6]];
        let via = narrow_word(&narrow_word(&w, &from, &mid), &mid, &onto);
        assert_eq!(via, narrow_word(&w, &from, &onto));
    }

    #[test]
    fn narrow_to_empty_is_blank_word() {
        let from = IndexSet::full(2);
        let w = vec![vec![0, 1], vec![1, 2], vec![0, 0]];
        let blanks = narrow_word(&w, &from, &IndexSet::empty());
        assert_eq!(blanks, vec![Vec::<u32>::new(); 3]);
    }

    #[test]
    fn project_between_alphabets() {
        let c = comps();
        let full = DirAlphabet::new(c.clone(), IndexSet::full(2));
        let one = DirAlphabet::new(c, IndexSet::new(vec![1]));
        let d = full.dir_of(&[1, 2]);
        assert_eq!(one.tuple(full.project(d, &one)), &vec![1]);
    }
}

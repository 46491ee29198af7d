//! Linear-time path formulas over indexed atoms, and their negation
//! normal form.

use std::collections::HashMap;

/// Core path-formula syntax. Atoms are indices into whatever alphabet
/// the caller fixes (the engine uses maximal state subformulas).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ltl {
    True,
    Atom(usize),
    Not(Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn atom(i: usize) -> Ltl {
        Ltl::Atom(i)
    }

    pub fn not(a: Ltl) -> Ltl {
        Ltl::Not(Box::new(a))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::not(Ltl::or(Ltl::not(a), Ltl::not(b)))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::or(Ltl::not(a), b)
    }

    pub fn next(a: Ltl) -> Ltl {
        Ltl::Next(Box::new(a))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn eventually(a: Ltl) -> Ltl {
        Ltl::until(Ltl::True, a)
    }

    pub fn always(a: Ltl) -> Ltl {
        Ltl::not(Ltl::eventually(Ltl::not(a)))
    }

    /// Largest atom index plus one.
    pub fn atom_count(&self) -> usize {
        match self {
            Ltl::True => 0,
            Ltl::Atom(i) => i + 1,
            Ltl::Not(a) | Ltl::Next(a) => a.atom_count(),
            Ltl::Or(a, b) | Ltl::Until(a, b) => a.atom_count().max(b.atom_count()),
        }
    }
}

pub type NnfId = usize;

/// Negation normal form; negation survives only on literals. `Release`
/// is the dual of `Until`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Nnf {
    True,
    False,
    Lit { atom: usize, neg: bool },
    And(NnfId, NnfId),
    Or(NnfId, NnfId),
    Next(NnfId),
    Until(NnfId, NnfId),
    Release(NnfId, NnfId),
}

/// Hash-consed NNF nodes.
#[derive(Debug, Default)]
pub struct NnfArena {
    pub nodes: Vec<Nnf>,
    index: HashMap<Nnf, NnfId>,
}

impl NnfArena {
    pub fn intern(&mut self, node: Nnf) -> NnfId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    /// Converts a formula (or its negation) into the arena.
    pub fn lower(&mut self, phi: &Ltl, negated: bool) -> NnfId {
        let node = match (phi, negated) {
            (Ltl::True, false) => Nnf::True,
            (Ltl::True, true) => Nnf::False,
            (Ltl::Atom(i), neg) => Nnf::Lit { atom: *i, neg },
            (Ltl::Not(a), neg) => return self.lower(a, !neg),
            (Ltl::Or(a, b), false) => {
                let (x, y) = (self.lower(a, false), self.lower(b, false));
                Nnf::Or(x, y)
            }
            (Ltl::Or(a, b), true) => {
                let (x, y) = (self.lower(a, true), self.lower(b, true));
                Nnf::And(x, y)
            }
            (Ltl::Next(a), neg) => {
                let x = self.lower(a, neg);
                Nnf::Next(x)
            }
            (Ltl::Until(a, b), false) => {
                let (x, y) = (self.lower(a, false), self.lower(b, false));
                Nnf::Until(x, y)
            }
            (Ltl::Until(a, b), true) => {
                let (x, y) = (self.lower(a, true), self.lower(b, true));
                Nnf::Release(x, y)
            }
        };
        self.intern(node)
    }
}

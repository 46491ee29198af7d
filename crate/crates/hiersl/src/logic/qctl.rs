//! QCTL* formulas with concrete-observation quantifiers, in tree
//! semantics. The state/path stratification is enforced structurally.

use std::collections::BTreeSet;
use std::fmt;

use super::lex::Span;

/// A state formula.
#[derive(Debug, Clone, Eq)]
pub struct QState {
    pub node: QStateNode,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QStateNode {
    True,
    Atom(String),
    Not(Box<QState>),
    Or(Box<QState>, Box<QState>),
    /// `E ψ` — some path from here satisfies the path formula.
    Exists(Box<QPath>),
    /// `exists p : {i,j} . φ` — a labelling for `p`, uniform with respect
    /// to the concrete observation, makes the body true.
    Quant { ap: String, obs: BTreeSet<usize>, body: Box<QState> },
}

/// A path formula; it may only appear under `E` or inside another path
/// formula.
#[derive(Debug, Clone, Eq)]
pub struct QPath {
    pub node: QPathNode,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QPathNode {
    State(Box<QState>),
    Not(Box<QPath>),
    Or(Box<QPath>, Box<QPath>),
    Next(Box<QPath>),
    Until(Box<QPath>, Box<QPath>),
}

impl PartialEq for QState {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl PartialEq for QPath {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl QState {
    pub fn new(node: QStateNode) -> Self {
        QState { node, span: Span::default() }
    }

    pub fn truth() -> Self {
        QState::new(QStateNode::True)
    }

    pub fn atom(name: impl Into<String>) -> Self {
        QState::new(QStateNode::Atom(name.into()))
    }

    pub fn not(a: QState) -> Self {
        QState::new(QStateNode::Not(Box::new(a)))
    }

    pub fn or(a: QState, b: QState) -> Self {
        QState::new(QStateNode::Or(Box::new(a), Box::new(b)))
    }

    pub fn and(a: QState, b: QState) -> Self {
        QState::not(QState::or(QState::not(a), QState::not(b)))
    }

    pub fn implies(a: QState, b: QState) -> Self {
        QState::or(QState::not(a), b)
    }

    pub fn exists_path(psi: QPath) -> Self {
        QState::new(QStateNode::Exists(Box::new(psi)))
    }

    pub fn forall_path(psi: QPath) -> Self {
        QState::not(QState::exists_path(QPath::not(psi)))
    }

    pub fn quant(ap: impl Into<String>, obs: BTreeSet<usize>, body: QState) -> Self {
        QState::new(QStateNode::Quant { ap: ap.into(), obs, body: Box::new(body) })
    }

    pub fn forall_quant(ap: impl Into<String>, obs: BTreeSet<usize>, body: QState) -> Self {
        QState::not(QState::quant(ap, obs, QState::not(body)))
    }
}

impl QPath {
    /// Wraps a state formula; boolean combinations of embedded state
    /// formulas fold back into a single embedded state formula so that
    /// maximal state subformulas are as large as possible.
    pub fn state(phi: QState) -> Self {
        QPath { node: QPathNode::State(Box::new(phi)), span: Span::default() }
    }

    pub fn not(a: QPath) -> Self {
        if let QPathNode::State(s) = a.node {
            return QPath::state(QState::not(*s));
        }
        QPath { node: QPathNode::Not(Box::new(a)), span: Span::default() }
    }

    pub fn or(a: QPath, b: QPath) -> Self {
        if let (QPathNode::State(x), QPathNode::State(y)) = (&a.node, &b.node) {
            return QPath::state(QState::or((**x).clone(), (**y).clone()));
        }
        QPath { node: QPathNode::Or(Box::new(a), Box::new(b)), span: Span::default() }
    }

    pub fn and(a: QPath, b: QPath) -> Self {
        QPath::not(QPath::or(QPath::not(a), QPath::not(b)))
    }

    pub fn implies(a: QPath, b: QPath) -> Self {
        QPath::or(QPath::not(a), b)
    }

    pub fn next(a: QPath) -> Self {
        QPath { node: QPathNode::Next(Box::new(a)), span: Span::default() }
    }

    pub fn until(a: QPath, b: QPath) -> Self {
        QPath { node: QPathNode::Until(Box::new(a), Box::new(b)), span: Span::default() }
    }

    pub fn eventually(a: QPath) -> Self {
        QPath::until(QPath::state(QState::truth()), a)
    }

    pub fn always(a: QPath) -> Self {
        QPath::not(QPath::eventually(QPath::not(a)))
    }
}

// -- static analyses ---------------------------------------------------------

/// Atoms bound by some quantifier in the formula.
pub fn ap_quantified(phi: &QState) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_state(phi, &mut |s| {
        if let QStateNode::Quant { ap, .. } = &s.node {
            out.insert(ap.clone());
        }
    });
    out
}

/// Atoms with at least one free occurrence.
pub fn ap_free(phi: &QState) -> BTreeSet<String> {
    fn state(phi: &QState, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match &phi.node {
            QStateNode::True => {}
            QStateNode::Atom(p) => {
                if !bound.iter().any(|b| b == p) {
                    out.insert(p.clone());
                }
            }
            QStateNode::Not(a) => state(a, bound, out),
            QStateNode::Or(a, b) => {
                state(a, bound, out);
                state(b, bound, out);
            }
            QStateNode::Exists(psi) => path(psi, bound, out),
            QStateNode::Quant { ap, body, .. } => {
                bound.push(ap.clone());
                state(body, bound, out);
                bound.pop();
            }
        }
    }
    fn path(psi: &QPath, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match &psi.node {
            QPathNode::State(s) => state(s, bound, out),
            QPathNode::Not(a) | QPathNode::Next(a) => path(a, bound, out),
            QPathNode::Or(a, b) | QPathNode::Until(a, b) => {
                path(a, bound, out);
                path(b, bound, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    state(phi, &mut Vec::new(), &mut out);
    out
}

/// Renames quantified propositions so that no atom occurs both free and
/// quantified (and shadowed binders get distinct names, resolved
/// innermost-first). The result is equivalent and satisfies
/// `ap_quantified ∩ ap_free = ∅`.
pub fn split_props(phi: &QState, declared: &BTreeSet<String>) -> QState {
    let free_atoms = ap_free(phi);
    let mut taken: BTreeSet<String> = declared.clone();
    taken.extend(free_atoms.iter().cloned());
    taken.extend(ap_quantified(phi));

    // substitution environment: innermost binding for each source atom
    fn state(
        phi: &QState,
        env: &mut Vec<(String, String)>,
        free_atoms: &BTreeSet<String>,
        taken: &mut BTreeSet<String>,
    ) -> QState {
        let node = match &phi.node {
            QStateNode::True => QStateNode::True,
            QStateNode::Atom(p) => {
                let name = env.iter().rev().find(|(from, _)| from == p).map(|(_, to)| to.clone());
                QStateNode::Atom(name.unwrap_or_else(|| p.clone()))
            }
            QStateNode::Not(a) => QStateNode::Not(Box::new(state(a, env, free_atoms, taken))),
            QStateNode::Or(a, b) => QStateNode::Or(
                Box::new(state(a, env, free_atoms, taken)),
                Box::new(state(b, env, free_atoms, taken)),
            ),
            QStateNode::Exists(psi) => QStateNode::Exists(Box::new(path(psi, env, free_atoms, taken))),
            QStateNode::Quant { ap, obs, body } => {
                let shadowed = env.iter().any(|(from, _)| from == ap);
                let needs_rename = free_atoms.contains(ap) || shadowed;
                let fresh = if needs_rename {
                    let mut k = 1;
                    loop {
                        let cand = format!("{ap}_{k}");
                        if !taken.contains(&cand) {
                            taken.insert(cand.clone());
                            break cand;
                        }
                        k += 1;
                    }
                } else {
                    ap.clone()
                };
                env.push((ap.clone(), fresh.clone()));
                let body = state(body, env, free_atoms, taken);
                env.pop();
                QStateNode::Quant { ap: fresh, obs: obs.clone(), body: Box::new(body) }
            }
        };
        QState { node, span: phi.span }
    }
    fn path(
        psi: &QPath,
        env: &mut Vec<(String, String)>,
        free_atoms: &BTreeSet<String>,
        taken: &mut BTreeSet<String>,
    ) -> QPath {
        let node = match &psi.node {
            QPathNode::State(s) => QPathNode::State(Box::new(state(s, env, free_atoms, taken))),
            QPathNode::Not(a) => QPathNode::Not(Box::new(path(a, env, free_atoms, taken))),
            QPathNode::Or(a, b) => QPathNode::Or(
                Box::new(path(a, env, free_atoms, taken)),
                Box::new(path(b, env, free_atoms, taken)),
            ),
            QPathNode::Next(a) => QPathNode::Next(Box::new(path(a, env, free_atoms, taken))),
            QPathNode::Until(a, b) => QPathNode::Until(
                Box::new(path(a, env, free_atoms, taken)),
                Box::new(path(b, env, free_atoms, taken)),
            ),
        };
        QPath { node, span: psi.span }
    }
    state(phi, &mut Vec::new(), &free_atoms, &mut taken)
}

/// A violation of the hierarchy condition on concrete observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QctlHierarchyWitness {
    pub outer_ap: String,
    pub outer_obs: BTreeSet<usize>,
    pub inner_ap: String,
    pub inner_obs: BTreeSet<usize>,
}

impl fmt::Display for QctlHierarchyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "quantifier on `{}` observing {:?} sits under the quantifier on `{}` observing {:?}, which is not a subset",
            self.inner_ap, self.inner_obs, self.outer_ap, self.outer_obs
        )
    }
}

/// True iff along every branch the concrete observations of nested
/// quantifiers only grow: inner quantifiers observe at least as much.
pub fn is_hierarchical_qctl(phi: &QState) -> Result<(), QctlHierarchyWitness> {
    fn state<'a>(phi: &'a QState, stack: &mut Vec<(&'a String, &'a BTreeSet<usize>)>) -> Result<(), QctlHierarchyWitness> {
        match &phi.node {
            QStateNode::True | QStateNode::Atom(_) => Ok(()),
            QStateNode::Not(a) => state(a, stack),
            QStateNode::Or(a, b) => {
                state(a, stack)?;
                state(b, stack)
            }
            QStateNode::Exists(psi) => path(psi, stack),
            QStateNode::Quant { ap, obs, body } => {
                for (outer_ap, outer_obs) in stack.iter() {
                    if !outer_obs.is_subset(obs) {
                        return Err(QctlHierarchyWitness {
                            outer_ap: (*outer_ap).clone(),
                            outer_obs: (*outer_obs).clone(),
                            inner_ap: ap.clone(),
                            inner_obs: obs.clone(),
                        });
                    }
                }
                stack.push((ap, obs));
                let r = state(body, stack);
                stack.pop();
                r
            }
        }
    }
    fn path<'a>(psi: &'a QPath, stack: &mut Vec<(&'a String, &'a BTreeSet<usize>)>) -> Result<(), QctlHierarchyWitness> {
        match &psi.node {
            QPathNode::State(s) => state(s, stack),
            QPathNode::Not(a) | QPathNode::Next(a) => path(a, stack),
            QPathNode::Or(a, b) | QPathNode::Until(a, b) => {
                path(a, stack)?;
                path(b, stack)
            }
        }
    }
    state(phi, &mut Vec::new())
}

fn collect_state(phi: &QState, f: &mut impl FnMut(&QState)) {
    f(phi);
    match &phi.node {
        QStateNode::True | QStateNode::Atom(_) => {}
        QStateNode::Not(a) => collect_state(a, f),
        QStateNode::Or(a, b) => {
            collect_state(a, f);
            collect_state(b, f);
        }
        QStateNode::Exists(psi) => collect_path(psi, f),
        QStateNode::Quant { body, .. } => collect_state(body, f),
    }
}

fn collect_path(psi: &QPath, f: &mut impl FnMut(&QState)) {
    match &psi.node {
        QPathNode::State(s) => collect_state(s, f),
        QPathNode::Not(a) | QPathNode::Next(a) => collect_path(a, f),
        QPathNode::Or(a, b) | QPathNode::Until(a, b) => {
            collect_path(a, f);
            collect_path(b, f);
        }
    }
}

// -- printing ---------------------------------------------------------------

impl fmt::Display for QState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            QStateNode::True => write!(f, "true"),
            QStateNode::Atom(p) => write!(f, "{p}"),
            QStateNode::Not(a) => write!(f, "!{a}"),
            QStateNode::Or(a, b) => write!(f, "({a} | {b})"),
            QStateNode::Exists(psi) => write!(f, "E {psi}"),
            QStateNode::Quant { ap, obs, body } => {
                // parenthesised because the body scope extends maximally
                write!(f, "(exists {ap} : {{")?;
                for (k, i) in obs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{i}")?;
                }
                write!(f, "}} . {body})")
            }
        }
    }
}

impl fmt::Display for QPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            QPathNode::State(s) => write!(f, "{s}"),
            QPathNode::Not(a) => write!(f, "!{a}"),
            QPathNode::Or(a, b) => write!(f, "({a} | {b})"),
            QPathNode::Next(a) => write!(f, "X {a}"),
            QPathNode::Until(a, b) => write!(f, "({a} U {b})"),
        }
    }
}

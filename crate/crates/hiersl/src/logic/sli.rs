//! Strategy-logic formulas with observation-annotated quantifiers.

use std::collections::BTreeSet;
use std::fmt;

use crate::games::Cgsi;

use super::lex::Span;

/// A strategy-logic formula. Derived connectives are desugared at parse
/// time, so only the core constructors appear here.
#[derive(Debug, Clone, Eq)]
pub struct Sli {
    pub node: SliNode,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliNode {
    True,
    Atom(String),
    Not(Box<Sli>),
    Or(Box<Sli>, Box<Sli>),
    Next(Box<Sli>),
    Until(Box<Sli>, Box<Sli>),
    /// `<<var:obs>> body` — there is a strategy with this observation.
    Exists { var: String, obs: String, body: Box<Sli> },
    /// `(agent,var) body` — the agent follows the strategy in `var`.
    Bind { agent: String, var: String, body: Box<Sli> },
}

// spans are diagnostics only; equality is structural
impl PartialEq for Sli {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl Sli {
    pub fn new(node: SliNode) -> Self {
        Sli { node, span: Span::default() }
    }

    pub fn spanned(node: SliNode, span: Span) -> Self {
        Sli { node, span }
    }

    pub fn truth() -> Self {
        Sli::new(SliNode::True)
    }

    pub fn atom(name: impl Into<String>) -> Self {
        Sli::new(SliNode::Atom(name.into()))
    }

    pub fn not(phi: Sli) -> Self {
        Sli::new(SliNode::Not(Box::new(phi)))
    }

    pub fn or(a: Sli, b: Sli) -> Self {
        Sli::new(SliNode::Or(Box::new(a), Box::new(b)))
    }

    pub fn and(a: Sli, b: Sli) -> Self {
        Sli::not(Sli::or(Sli::not(a), Sli::not(b)))
    }

    pub fn implies(a: Sli, b: Sli) -> Self {
        Sli::or(Sli::not(a), b)
    }

    pub fn next(phi: Sli) -> Self {
        Sli::new(SliNode::Next(Box::new(phi)))
    }

    pub fn until(a: Sli, b: Sli) -> Self {
        Sli::new(SliNode::Until(Box::new(a), Box::new(b)))
    }

    pub fn eventually(phi: Sli) -> Self {
        Sli::until(Sli::truth(), phi)
    }

    pub fn always(phi: Sli) -> Self {
        Sli::not(Sli::eventually(Sli::not(phi)))
    }

    pub fn exists(var: impl Into<String>, obs: impl Into<String>, body: Sli) -> Self {
        Sli::new(SliNode::Exists { var: var.into(), obs: obs.into(), body: Box::new(body) })
    }

    pub fn forall(var: impl Into<String>, obs: impl Into<String>, body: Sli) -> Self {
        Sli::not(Sli::exists(var, obs, Sli::not(body)))
    }

    pub fn bind(agent: impl Into<String>, var: impl Into<String>, body: Sli) -> Self {
        Sli::new(SliNode::Bind { agent: agent.into(), var: var.into(), body: Box::new(body) })
    }
}

/// Free variables and free agents of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeSet {
    pub variables: BTreeSet<String>,
    pub agents: BTreeSet<String>,
}

impl FreeSet {
    pub fn is_empty(&self) -> bool {
        self.variables.is_empty() && self.agents.is_empty()
    }
}

/// Computes the free variables and agents: a variable is free if it is
/// used by a binding outside the scope of its quantifier; an agent is
/// free if a temporal operator occurs outside any binding for it.
pub fn free(phi: &Sli, agents: &[String]) -> FreeSet {
    match &phi.node {
        SliNode::True | SliNode::Atom(_) => FreeSet::default(),
        SliNode::Not(a) => free(a, agents),
        SliNode::Or(a, b) => {
            let mut fa = free(a, agents);
            let fb = free(b, agents);
            fa.variables.extend(fb.variables);
            fa.agents.extend(fb.agents);
            fa
        }
        SliNode::Next(a) => {
            let mut fa = free(a, agents);
            fa.agents.extend(agents.iter().cloned());
            fa
        }
        SliNode::Until(a, b) => {
            let mut fa = free(a, agents);
            let fb = free(b, agents);
            fa.variables.extend(fb.variables);
            fa.agents.extend(fb.agents);
            fa.agents.extend(agents.iter().cloned());
            fa
        }
        SliNode::Exists { var, body, .. } => {
            let mut fb = free(body, agents);
            fb.variables.remove(var);
            fb
        }
        SliNode::Bind { agent, var, body } => {
            let mut fb = free(body, agents);
            fb.agents.remove(agent);
            fb.variables.insert(var.clone());
            fb
        }
    }
}

pub fn is_sentence(phi: &Sli, agents: &[String]) -> bool {
    free(phi, agents).is_empty()
}

/// One strategy-quantifier occurrence, for hierarchy diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantOcc {
    pub var: String,
    pub obs: String,
    pub span: Span,
}

/// A violation of the hierarchy condition: an outer quantifier whose
/// observation is not refined by an inner one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyWitness {
    pub outer: QuantOcc,
    pub inner: QuantOcc,
}

impl fmt::Display for HierarchyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "quantifier <<{}:{}>> at {} sits under <<{}:{}>> at {} but O({}) is not included in O({})",
            self.inner.var,
            self.inner.obs,
            self.inner.span,
            self.outer.var,
            self.outer.obs,
            self.outer.span,
            self.inner.obs,
            self.outer.obs,
        )
    }
}

/// Checks the hierarchy condition for an instance: along every branch of
/// the syntax tree, observations tied to quantifications only get finer.
/// Runs in time linear in the formula after precomputing pairwise
/// inclusion of the observation relations.
pub fn is_hierarchical_instance(phi: &Sli, g: &Cgsi) -> Result<Option<HierarchyWitness>, String> {
    let names: Vec<&String> = g.obs.keys().collect();
    let index = |o: &str| -> Result<usize, String> {
        names.iter().position(|n| n.as_str() == o).ok_or_else(|| format!("unknown observation `{o}`"))
    };
    let mut refines = vec![vec![false; names.len()]; names.len()];
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            refines[i][j] = g.obs[*a].refines(&g.obs[*b]);
        }
    }
    // walk with the stack of enclosing quantifiers; each new quantifier
    // must refine all of them
    fn walk(
        phi: &Sli,
        stack: &mut Vec<(usize, QuantOcc)>,
        refines: &[Vec<bool>],
        index: &dyn Fn(&str) -> Result<usize, String>,
    ) -> Result<Option<HierarchyWitness>, String> {
        match &phi.node {
            SliNode::True | SliNode::Atom(_) => Ok(None),
            SliNode::Not(a) | SliNode::Next(a) => walk(a, stack, refines, index),
            SliNode::Or(a, b) | SliNode::Until(a, b) => {
                if let Some(w) = walk(a, stack, refines, index)? {
                    return Ok(Some(w));
                }
                walk(b, stack, refines, index)
            }
            SliNode::Bind { body, .. } => walk(body, stack, refines, index),
            SliNode::Exists { var, obs, body } => {
                let o = index(obs)?;
                let occ = QuantOcc { var: var.clone(), obs: obs.clone(), span: phi.span };
                for (outer, outer_occ) in stack.iter() {
                    if !refines[o][*outer] {
                        return Ok(Some(HierarchyWitness {
                            outer: outer_occ.clone(),
                            inner: occ,
                        }));
                    }
                }
                stack.push((o, occ));
                let r = walk(body, stack, refines, index);
                stack.pop();
                r
            }
        }
    }
    walk(phi, &mut Vec::new(), &refines, &index)
}

/// Builds the equilibrium-existence sentence: each agent gets a uniform
/// strategy, and no agent can improve by deviating to a strategy with the
/// paired deviation observation.
pub fn build_nash_formula(
    goals: &[Sli],
    obs: &[String],
    deviation_obs: &[String],
    agents: &[String],
) -> Result<Sli, String> {
    let n = agents.len();
    if goals.len() != n || obs.len() != n || deviation_obs.len() != n {
        return Err(format!(
            "arity mismatch: {} agents but {} goals, {} observations, {} deviation observations",
            n,
            goals.len(),
            obs.len(),
            deviation_obs.len()
        ));
    }
    if n == 0 {
        return Err("at least one agent is required".into());
    }
    let var = |i: usize| format!("x{}", i + 1);
    let dev_var = |i: usize| format!("y{}", i + 1);
    let mut body: Option<Sli> = None;
    for i in 0..n {
        let deviate = Sli::exists(dev_var(i), deviation_obs[i].clone(), Sli::bind(agents[i].clone(), dev_var(i), goals[i].clone()));
        let clause = Sli::implies(deviate, goals[i].clone());
        body = Some(match body {
            None => clause,
            Some(acc) => Sli::and(acc, clause),
        });
    }
    let mut phi = body.expect("nonempty agent list");
    for i in (0..n).rev() {
        phi = Sli::bind(agents[i].clone(), var(i), phi);
    }
    for i in (0..n).rev() {
        phi = Sli::exists(var(i), obs[i].clone(), phi);
    }
    Ok(phi)
}

// -- printing ---------------------------------------------------------------

impl fmt::Display for Sli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            SliNode::True => write!(f, "true"),
            SliNode::Atom(p) => write!(f, "{p}"),
            SliNode::Not(a) => write!(f, "!{a}"),
            SliNode::Or(a, b) => write!(f, "({a} | {b})"),
            SliNode::Next(a) => write!(f, "X {a}"),
            SliNode::Until(a, b) => write!(f, "({a} U {b})"),
            SliNode::Exists { var, obs, body } => write!(f, "<<{var}:{obs}>> {body}"),
            SliNode::Bind { agent, var, body } => write!(f, "({agent},{var}) {body}"),
        }
    }
}

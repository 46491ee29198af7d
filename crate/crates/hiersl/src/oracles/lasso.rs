//! Direct evaluation of path formulas on ultimately periodic words.

use crate::word::Ltl;

/// Evaluates `phi` on the word `stem · loop^ω` (letters are atom
/// bitmasks), by a least-fixpoint computation on the lasso graph. Exact
/// for all formulas; no automata involved.
pub fn eval_ltl_on_lasso(phi: &Ltl, stem: &[usize], looping: &[usize]) -> bool {
    assert!(!looping.is_empty(), "loop must be nonempty");
    let total = stem.len() + looping.len();
    let letter = |i: usize| if i < stem.len() { stem[i] } else { looping[i - stem.len()] };
    let succ = |i: usize| if i + 1 < total { i + 1 } else { stem.len() };

    // index subformulas in post-order
    enum Node {
        True,
        Atom(usize),
        Not(usize),
        Or(usize, usize),
        Next(usize),
        Until(usize, usize),
    }
    fn index(phi: &Ltl, nodes: &mut Vec<Node>) -> usize {
        let node = match phi {
            Ltl::True => Node::True,
            Ltl::Atom(i) => Node::Atom(*i),
            Ltl::Not(a) => Node::Not(index(a, nodes)),
            Ltl::Or(a, b) => {
                let (x, y) = (index(a, nodes), index(b, nodes));
                Node::Or(x, y)
            }
            Ltl::Next(a) => Node::Next(index(a, nodes)),
            Ltl::Until(a, b) => {
                let (x, y) = (index(a, nodes), index(b, nodes));
                Node::Until(x, y)
            }
        };
        nodes.push(node);
        nodes.len() - 1
    }
    let mut nodes = Vec::new();
    let root = index(phi, &mut nodes);

    let mut table: Vec<Vec<bool>> = Vec::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        let row = match node {
            Node::True => vec![true; total],
            Node::Atom(a) => (0..total).map(|p| letter(p) & (1 << a) != 0).collect(),
            Node::Not(x) => (0..total).map(|p| !table[*x][p]).collect(),
            Node::Or(x, y) => (0..total).map(|p| table[*x][p] || table[*y][p]).collect(),
            Node::Next(x) => (0..total).map(|p| table[*x][succ(p)]).collect(),
            Node::Until(x, y) => {
                // least fixpoint of  v = y ∨ (x ∧ X v)
                let mut v = vec![false; total];
                for _ in 0..=total {
                    let mut changed = false;
                    for p in (0..total).rev() {
                        let nv = table[*y][p] || (table[*x][p] && v[succ(p)]);
                        if nv != v[p] {
                            v[p] = nv;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                v
            }
        };
        debug_assert_eq!(i, table.len());
        table.push(row);
    }
    table[root][0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn globally_on_all_p_loop_holds() {
        let gp = Ltl::always(Ltl::atom(0));
        assert!(eval_ltl_on_lasso(&gp, &[], &[1]));
        assert!(!eval_ltl_on_lasso(&gp, &[1], &[0]));
    }

    #[test]
    fn eventually_satisfied_in_stem() {
        let fp = Ltl::eventually(Ltl::atom(0));
        assert!(eval_ltl_on_lasso(&fp, &[0, 1], &[0]));
        assert!(!eval_ltl_on_lasso(&fp, &[0, 0], &[0]));
    }

    #[test]
    fn until_requires_left_to_hold() {
        let u = Ltl::until(Ltl::atom(0), Ltl::atom(1));
        // p p q ...
        assert!(eval_ltl_on_lasso(&u, &[1, 1], &[2]));
        // p ¬pq q: broken chain
        assert!(!eval_ltl_on_lasso(&u, &[1, 0], &[2]));
    }
}

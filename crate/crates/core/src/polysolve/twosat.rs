//! Majority-closed systems: binary projections, then 2-SAT.

use super::{verified, SolveError};
use crate::encoder::{BooleanSystem, RelationId};

/// A literal: variable `v` positive is `2v`, negative `2v + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit(usize);

impl Lit {
    pub fn new(var: usize, value: bool) -> Self {
        Lit(2 * var + usize::from(!value))
    }

    pub fn var(self) -> usize {
        self.0 / 2
    }

    /// The value making this literal true.
    pub fn value(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn negate(self) -> Self {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone)]
pub struct ImplicationGraph {
    adj: Vec<Vec<usize>>,
}

impl ImplicationGraph {
    pub fn new(num_vars: usize) -> Self {
        Self {
            adj: vec![Vec::new(); 2 * num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.adj.len() / 2
    }

    /// Adds `a ∨ b` as the edges `¬a → b` and `¬b → a`.
    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        self.adj[a.negate().0].push(b.0);
        self.adj[b.negate().0].push(a.0);
    }

    pub fn has_edge(&self, from: Lit, to: Lit) -> bool {
        self.adj[from.0].contains(&to.0)
    }

    /// Tarjan's algorithm, iteratively. Component ids come out in reverse
    /// topological order of the condensation.
    pub fn components(&self) -> Vec<usize> {
        const UNSEEN: usize = usize::MAX;
        let n = self.adj.len();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![UNSEEN; n];
        let mut stack = Vec::new();
        let mut call: Vec<(usize, usize)> = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            call.push((root, 0));
            while let Some(&mut (v, ref mut edge)) = call.last_mut() {
                if *edge == 0 && index[v] == UNSEEN {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(&w) = self.adj[v].get(*edge) {
                    *edge += 1;
                    if index[w] == UNSEEN {
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("component root on stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
        comp
    }

    /// A model, or `None` when some variable shares a component with its
    /// negation.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let comp = self.components();
        (0..self.num_vars())
            .map(|v| {
                let (pos, neg) = (comp[2 * v], comp[2 * v + 1]);
                // the literal later in topological order is set true
                (pos != neg).then_some(pos < neg)
            })
            .collect()
    }
}

/// Clauses excluding everything outside the unary and binary projections
/// of `rel`, as position pairs `((i, a), (j, b))` meaning
/// `x_i = a ∨ x_j = b`; unary clauses repeat the literal.
fn projection_clauses(rel: &[Vec<bool>]) -> Vec<((usize, bool), (usize, bool))> {
    let arity = rel.first().map_or(0, Vec::len);
    let mut clauses = Vec::new();
    for i in 0..arity {
        for a in [false, true] {
            if !rel.iter().any(|t| t[i] == a) {
                clauses.push(((i, !a), (i, !a)));
            }
        }
    }
    for i in 0..arity {
        for j in i + 1..arity {
            for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
                if !rel.iter().any(|t| t[i] == a && t[j] == b) {
                    clauses.push(((i, !a), (j, !b)));
                }
            }
        }
    }
    clauses
}

/// Builds the implication graph of all binary projections of `sys`.
pub fn implication_graph(sys: &BooleanSystem) -> ImplicationGraph {
    let templates: Vec<_> = RelationId::ALL
        .iter()
        .map(|&r| projection_clauses(sys.relation(r)))
        .collect();
    let mut g = ImplicationGraph::new(sys.num_vars());
    for c in sys.constraints() {
        let s = sys.scope(c);
        for &((i, a), (j, b)) in &templates[s.relation.index()] {
            g.add_clause(Lit::new(s.scope[i], a), Lit::new(s.scope[j], b));
        }
    }
    g
}

/// Majority-closed relations are determined by their binary projections,
/// so the projected 2-SAT instance is equisatisfiable with `sys`. The
/// model is re-checked against the full constraints.
pub fn solve_majority(sys: &BooleanSystem) -> Result<Option<Vec<bool>>, SolveError> {
    for r in RelationId::ALL {
        if sys.relation(r).is_empty() {
            return Err(SolveError::Contract(format!("relation {r:?} is empty")));
        }
    }
    match implication_graph(sys).solve() {
        None => Ok(None),
        Some(asg) => verified(sys, asg, "2-SAT"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_gives_two_clauses() {
        let eq = vec![vec![false, false], vec![true, true]];
        let clauses = projection_clauses(&eq);
        assert_eq!(clauses, vec![((0, true), (1, false)), ((0, false), (1, true))]);
        let mut g = ImplicationGraph::new(2);
        for ((_, a), (_, b)) in clauses {
            g.add_clause(Lit::new(0, a), Lit::new(1, b));
        }
        // a → b and b → a
        assert!(g.has_edge(Lit::new(0, true), Lit::new(1, true)));
        assert!(g.has_edge(Lit::new(1, true), Lit::new(0, true)));
    }

    #[test]
    fn contradiction_shares_a_component() {
        let mut g = ImplicationGraph::new(2);
        let a = Lit::new(0, true);
        let b = Lit::new(1, true);
        g.add_clause(a, a);
        g.add_clause(a.negate(), b);
        g.add_clause(b.negate(), a.negate());
        let comp = g.components();
        assert_eq!(comp[a.0], comp[a.negate().0]);
        assert_eq!(g.solve(), None);
    }

    #[test]
    fn chain_model() {
        // x0 → x1 → x2, x0 forced
        let mut g = ImplicationGraph::new(3);
        g.add_clause(Lit::new(0, true), Lit::new(0, true));
        g.add_clause(Lit::new(0, false), Lit::new(1, true));
        g.add_clause(Lit::new(1, false), Lit::new(2, true));
        assert_eq!(g.solve(), Some(vec![true, true, true]));
    }

    #[test]
    fn unconstrained_variables_get_a_value() {
        assert_eq!(ImplicationGraph::new(3).solve().map(|m| m.len()), Some(3));
    }

    #[test]
    fn unary_projection_becomes_unit() {
        let rel = vec![vec![true, false], vec![true, true]];
        let clauses = projection_clauses(&rel);
        assert!(clauses.contains(&((0, true), (0, true))));
    }
}

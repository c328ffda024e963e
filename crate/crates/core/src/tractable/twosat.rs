//! 2-SAT over item-selection variables and the translation of restricted
//! count properties into 2-CNF.

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::TractableError;
use crate::catalog::Catalog;
use crate::properties::{PropertyKind, SetProperty};

/// Literal over variable `var`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }

    pub fn not(self) -> Self {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }

    fn node(self) -> usize {
        2 * self.var + self.negated as usize
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}v{}", if self.negated { "!" } else { "" }, self.var)
    }
}

/// A conjunction of one- or two-literal clauses. Properties that no subset
/// can satisfy are listed by id instead of being translated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TwoSatInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    pub infeasible: Vec<String>,
}

impl TwoSatInstance {
    pub fn new(num_vars: usize) -> Self {
        TwoSatInstance {
            num_vars,
            ..Default::default()
        }
    }

    /// Panics on an empty or over-long clause or an unknown variable.
    pub fn add_clause(&mut self, lits: Vec<Lit>) {
        assert!(
            (1..=2).contains(&lits.len()),
            "2-SAT clauses have one or two literals"
        );
        assert!(
            lits.iter().all(|l| l.var < self.num_vars),
            "unknown variable"
        );
        self.clauses.push(lits);
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.infeasible.is_empty()
            && self
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    pub fn mentions(&self) -> Vec<bool> {
        let mut m = vec![false; self.num_vars];
        for c in &self.clauses {
            for l in c {
                m[l.var] = true;
            }
        }
        m
    }
}

/// Satisfying assignment, or `None`.
///
/// Implication graph over `2·num_vars` literal nodes, strongly connected
/// components by Tarjan's algorithm; a variable is true iff its positive
/// literal's component comes later in topological order than the negative
/// one's.
pub fn solve_2sat(inst: &TwoSatInstance) -> Option<Vec<bool>> {
    if !inst.infeasible.is_empty() {
        return None;
    }
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(2 * inst.num_vars, 2 * inst.clauses.len());
    for _ in 0..2 * inst.num_vars {
        g.add_node(());
    }
    let idx = |l: Lit| NodeIndex::new(l.node());
    for c in &inst.clauses {
        let (a, b) = match c[..] {
            [a] => (a, a),
            [a, b] => (a, b),
            _ => panic!("2-SAT clauses have one or two literals"),
        };
        g.add_edge(idx(a.not()), idx(b), ());
        g.add_edge(idx(b.not()), idx(a), ());
    }
    // components come out sinks first
    let mut comp = vec![0usize; 2 * inst.num_vars];
    for (c, nodes) in tarjan_scc(&g).into_iter().enumerate() {
        for n in nodes {
            comp[n.index()] = c;
        }
    }
    (0..inst.num_vars)
        .map(|v| {
            let (t, f) = (comp[Lit::pos(v).node()], comp[Lit::neg(v).node()]);
            (t != f).then_some(t < f)
        })
        .collect()
}

/// Clauses saying the number of true variables among `vars` lies in
/// `allowed` (indexed by count, `vars.len() ≤ 2`). `None` if no count is
/// allowed.
pub fn count_clauses(vars: &[usize], allowed: &[bool]) -> Option<Vec<Vec<Lit>>> {
    use Lit as L;
    let ok: Vec<bool> = (0..=vars.len()).map(|c| allowed[c]).collect();
    if !ok.iter().any(|&b| b) {
        return None;
    }
    Some(match (vars, &ok[..]) {
        (_, o) if o.iter().all(|&b| b) => vec![],
        ([v], [false, true]) => vec![vec![L::pos(*v)]],
        ([v], [true, false]) => vec![vec![L::neg(*v)]],
        (&[v, w], &[false, true, true]) => vec![vec![L::pos(v), L::pos(w)]],
        (&[v, w], &[true, true, false]) => vec![vec![L::neg(v), L::neg(w)]],
        (&[v, w], &[false, true, false]) => {
            vec![vec![L::pos(v), L::pos(w)], vec![L::neg(v), L::neg(w)]]
        }
        (&[v, w], &[false, false, true]) => vec![vec![L::pos(v)], vec![L::pos(w)]],
        (&[v, w], &[true, false, false]) => vec![vec![L::neg(v)], vec![L::neg(w)]],
        (&[v, w], &[true, false, true]) => {
            vec![vec![L::pos(v), L::neg(w)], vec![L::neg(v), L::pos(w)]]
        }
        _ => unreachable!("all count patterns over at most two variables are covered"),
    })
}

/// Clauses for the property values in `targets`, one variable per item.
///
/// The admissible counts of each property over the at most two items its
/// formula selects determine the clauses; a property whose admissible set
/// is empty is reported in `infeasible`.
pub fn translate_to_2sat(
    catalog: &Catalog,
    targets: &[(&SetProperty, bool)],
) -> Result<TwoSatInstance, TractableError> {
    let mut inst = TwoSatInstance::new(catalog.len());
    for (p, want) in targets {
        let PropertyKind::CountVsConst { phi, rel, k } = &p.kind else {
            return Err(TractableError::NotInClass(vec![format!(
                "{}: only |phi| REL k properties translate",
                p.id
            )]));
        };
        let vars: Vec<usize> = (0..catalog.len())
            .filter(|&i| phi.eval(catalog.item(i)))
            .collect();
        if vars.len() > 2 {
            return Err(TractableError::NotInClass(vec![format!(
                "{}: formula selects {} items, at most 2 translate",
                p.id,
                vars.len()
            )]));
        }
        let allowed: Vec<bool> = (0..=2).map(|c| rel.holds(c, *k) == *want).collect();
        match count_clauses(&vars, &allowed) {
            Some(cs) => inst.clauses.extend(cs),
            None => inst.infeasible.push(p.id.clone()),
        }
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(inst: &TwoSatInstance) -> Option<Vec<bool>> {
        (0u32..1 << inst.num_vars)
            .map(|m| {
                (0..inst.num_vars)
                    .map(|v| m >> v & 1 == 1)
                    .collect::<Vec<_>>()
            })
            .find(|a| inst.satisfied_by(a))
    }

    #[test]
    fn small_cases() {
        let mut i = TwoSatInstance::new(2);
        i.add_clause(vec![Lit::pos(0)]);
        i.add_clause(vec![Lit::neg(0), Lit::pos(1)]);
        assert_eq!(solve_2sat(&i), Some(vec![true, true]));
        let mut i = TwoSatInstance::new(1);
        i.add_clause(vec![Lit::pos(0)]);
        i.add_clause(vec![Lit::neg(0)]);
        assert_eq!(solve_2sat(&i), None);
        assert_eq!(solve_2sat(&TwoSatInstance::new(0)), Some(vec![]));
    }

    /// Each clause set accepts exactly the assignments whose number of true
    /// variables is allowed.
    #[test]
    fn count_clauses_truth_tables() {
        for width in 0..=2usize {
            for mask in 0u32..8 {
                let allowed: Vec<bool> = (0..3).map(|c| mask >> c & 1 == 1).collect();
                let vars: Vec<usize> = (0..width).collect();
                let cs = count_clauses(&vars, &allowed);
                let any = (0..=width).any(|c| allowed[c]);
                assert_eq!(cs.is_some(), any);
                let Some(cs) = cs else { continue };
                for a in 0u32..1 << width {
                    let asg: Vec<bool> = (0..width).map(|v| a >> v & 1 == 1).collect();
                    let count = asg.iter().filter(|&&b| b).count();
                    let sat = cs.iter().all(|c| c.iter().any(|l| l.holds(&asg)));
                    assert_eq!(
                        sat, allowed[count],
                        "width {width} mask {mask:03b} assignment {asg:?}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(n in 1usize..=12, raw in proptest::collection::vec((0usize..12, any::<bool>(), 0usize..12, any::<bool>(), any::<bool>()), 0..30)) {
            let mut inst = TwoSatInstance::new(n);
            for (a, na, b, nb, unit) in raw {
                let la = Lit { var: a % n, negated: na };
                let lb = Lit { var: b % n, negated: nb };
                inst.add_clause(if unit { vec![la] } else { vec![la, lb] });
            }
            let got = solve_2sat(&inst);
            prop_assert_eq!(got.is_some(), brute(&inst).is_some());
            if let Some(a) = got {
                prop_assert!(inst.satisfied_by(&a));
            }
        }
    }
}

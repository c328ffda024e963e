//! Branch-and-bound over partial property assignments.
//!
//! Each tree node fixes the values of a prefix of the property order and maps
//! to a CSP over item-selection variables: the constraints of the fixed
//! values plus the required cardinality. Every node is solved, so a child
//! can resume its search from the parent's solution, and the parent's
//! solution is a free witness for the sibling whose value it already has.
//!
//! Within one tree search all CSPs share a static item order and a search
//! universe (the items in some property scope), and every solver result is
//! the first solution of its CSP in that order. Switching warm starts,
//! sibling inference, NoGoods or any pruning rule therefore never changes a
//! witness.

use std::collections::BinaryHeap;
use std::time::Instant;

use serde::Serialize;

use crate::catalog::{Catalog, Rel};
use crate::csp_core::{
    static_order, Csp, Influence, Outcome, Solution, Solver, SolverConfig, VarOrder,
};
use crate::prefmodel::{preferred_value_order, topo_property_order, ModelKind};
use crate::problem::{Limits, Problem, SearchResult, SolveStats, Status};
use crate::properties::{
    property_to_constraints, CardinalityConstraint, PropertyAssignment, PropertyValue, SetProperty,
};
use crate::subset_search::child_scores;

/// How the tree is ordered and when it stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeMode {
    /// Properties in TCP-net topological order, values best first; the first
    /// satisfiable full assignment is returned.
    Tcp,
    /// Properties by descending value span, children by descending upper
    /// bound; branch-and-bound on the value function.
    Gai,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeStrategy {
    DepthFirst,
    /// Largest upper bound first. Only used in GAI mode.
    BestFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemOrder {
    /// Most constrained items first, ties by child-ordering score.
    Heuristic,
    /// Catalog order.
    Catalog,
}

/// Named solver variants: static item order, optionally with NoGoods (ng)
/// and incremental warm starts (inc).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    BbS,
    BbSNg,
    BbSInc,
    BbSNgInc,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::BbS,
        Variant::BbSNg,
        Variant::BbSInc,
        Variant::BbSNgInc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::BbS => "BB-S",
            Variant::BbSNg => "BB-S+ng",
            Variant::BbSInc => "BB-S+inc",
            Variant::BbSNgInc => "BB-S+ng+inc",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CspSearchConfig {
    /// `None` follows the model kind.
    pub mode: Option<TreeMode>,
    pub strategy: TreeStrategy,
    pub solver: SolverConfig,
    pub warm_start: bool,
    pub sibling: bool,
    pub item_order: ItemOrder,
    pub trace: bool,
    /// The node budget counts tree nodes.
    pub limits: Limits,
}

impl Default for CspSearchConfig {
    fn default() -> Self {
        CspSearchConfig::variant(Variant::BbSNgInc)
    }
}

impl CspSearchConfig {
    pub fn variant(v: Variant) -> Self {
        let ng = matches!(v, Variant::BbSNg | Variant::BbSNgInc);
        let inc = matches!(v, Variant::BbSInc | Variant::BbSNgInc);
        CspSearchConfig {
            mode: None,
            strategy: TreeStrategy::DepthFirst,
            solver: SolverConfig {
                nogoods: ng,
                ..SolverConfig::default()
            },
            warm_start: inc,
            sibling: true,
            item_order: ItemOrder::Heuristic,
            trace: false,
            limits: Limits::none(),
        }
    }

    pub fn with_mode(mut self, m: TreeMode) -> Self {
        self.mode = Some(m);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeOutcome {
    /// CSP searched and satisfiable.
    Solved,
    /// Parent witness reused without search.
    Inferred,
    Unsat,
    /// Upper bound does not beat the incumbent.
    Pruned,
}

/// One visited tree node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub alpha: PropertyAssignment,
    /// Constraint ids of the node's CSP.
    pub constraints: Vec<String>,
    pub outcome: NodeOutcome,
    pub warm: bool,
    /// Selection bits in catalog order.
    pub witness: Option<Vec<u8>>,
    pub item_backtracks: u64,
}

/// Required-size constraint `Σ x_i = k` over every item.
pub fn cardinality_constraint(n: usize, k: usize) -> CardinalityConstraint {
    CardinalityConstraint::new("C", (0..n).map(|i| (i, 1)).collect(), Rel::Eq, k as i64)
}

/// CSP of a partial assignment: the cardinality constraint (if any) first,
/// then the constraints of each assigned property in property order.
pub fn build_csp(
    alpha: &PropertyAssignment,
    catalog: &Catalog,
    props: &[SetProperty],
    cardinality: Option<usize>,
) -> Csp {
    let mut cs = Vec::new();
    if let Some(k) = cardinality {
        cs.push(cardinality_constraint(catalog.len(), k));
    }
    for (p, v) in props.iter().zip(alpha) {
        if let Some(v) = v {
            cs.extend(property_to_constraints(p, *v, catalog));
        }
    }
    Csp::new(catalog.len(), cs)
}

/// Parent witness as a witness for a sibling: valid iff the branched
/// property is boolean and the witness already gives it `value`.
pub fn sibling_inference(
    p: &Problem,
    prop: usize,
    parent_witness: &[usize],
    value: PropertyValue,
) -> Option<Vec<usize>> {
    if !p.props[prop].is_boolean() {
        return None;
    }
    let counts = p.table.counts(parent_witness);
    (p.table.value(&p.props, prop, &counts) == value).then(|| parent_witness.to_vec())
}

/// Property order used by a mode.
pub fn property_order(p: &Problem, mode: TreeMode) -> Vec<usize> {
    match (mode, &p.model.kind) {
        (TreeMode::Tcp, ModelKind::Tcp(net)) => topo_property_order(net),
        _ => {
            let spans = p.gai.spans();
            let mut weight = vec![0.0f64; p.m()];
            for (f, s) in p.gai.factors.iter().zip(spans) {
                for &q in &f.scope {
                    weight[q] += s;
                }
            }
            let mut order: Vec<usize> = (0..p.m()).collect();
            order.sort_by(|&a, &b| weight[b].total_cmp(&weight[a]).then(a.cmp(&b)));
            order
        }
    }
}

/// One constraint per property (its scope) plus the cardinality constraint.
fn scope_constraints(p: &Problem) -> Vec<CardinalityConstraint> {
    let mut cs = Vec::new();
    if let Some(k) = p.cardinality() {
        cs.push(cardinality_constraint(p.n(), k));
    }
    for prop in &p.props {
        let v = prop.domain(p.n()).value(0);
        cs.extend(property_to_constraints(prop, v, &p.catalog));
    }
    cs
}

/// Static item order for a tree search over `p`.
pub fn item_order(p: &Problem, how: ItemOrder) -> VarOrder {
    match how {
        ItemOrder::Catalog => VarOrder::identity(p.n()),
        ItemOrder::Heuristic => {
            let all: Vec<usize> = (0..p.n()).collect();
            let scores = child_scores(p, &[], &all);
            static_order(p.n(), &scope_constraints(p), Some(&scores))
        }
    }
}

struct Aborted;

struct Tree<'a> {
    p: &'a Problem,
    cfg: CspSearchConfig,
    mode: TreeMode,
    prop_order: Vec<usize>,
    order: &'a VarOrder,
    solver: Solver<'a>,
    /// Domain indices reachable from the empty set over the whole catalog.
    reach0: Vec<Vec<usize>>,
    stats: SolveStats,
    trace: Vec<TraceEntry>,
    best: Option<(Solution, Vec<PropertyValue>, f64)>,
}

struct Open {
    depth: usize,
    alpha: PropertyAssignment,
    witness: Solution,
    ub: f64,
    seq: u64,
}

impl PartialEq for Open {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == std::cmp::Ordering::Equal
    }
}
impl Eq for Open {}
impl PartialOrd for Open {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Open {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.ub.total_cmp(&o.ub).then(o.seq.cmp(&self.seq))
    }
}

impl<'a> Tree<'a> {
    fn bits(&self, s: &Solution) -> Vec<u8> {
        let mut b = vec![0; self.p.n()];
        for i in s.items(self.order) {
            b[i] = 1;
        }
        b
    }

    fn record(
        &mut self,
        alpha: &PropertyAssignment,
        outcome: NodeOutcome,
        warm: bool,
        w: Option<&Solution>,
        bt: u64,
    ) {
        if !self.cfg.trace {
            return;
        }
        let csp = build_csp(alpha, &self.p.catalog, &self.p.props, self.p.cardinality());
        let mut constraints: Vec<String> = csp.constraints.iter().map(|c| c.id.clone()).collect();
        constraints.extend(csp.false_constant.clone());
        self.trace.push(TraceEntry {
            alpha: alpha.clone(),
            constraints,
            outcome,
            warm,
            witness: w.map(|s| self.bits(s)),
            item_backtracks: bt,
        });
    }

    fn check_limits(&self) -> Result<(), Aborted> {
        let l = &self.cfg.limits;
        if l.node_budget.is_some_and(|b| self.stats.tree_nodes > b) || l.expired() {
            return Err(Aborted);
        }
        Ok(())
    }

    /// Solves the CSP of `alpha` (cold or resumed from `parent`).
    fn solve_node(
        &mut self,
        alpha: &PropertyAssignment,
        parent: Option<&Solution>,
    ) -> Result<Option<Solution>, Aborted> {
        let csp = build_csp(alpha, &self.p.catalog, &self.p.props, self.p.cardinality());
        let warm = if self.cfg.warm_start { parent } else { None };
        self.stats.csps_solved += 1;
        if warm.is_some() {
            self.stats.warm_starts += 1;
        }
        let before = self.solver.stats.item_backtracks;
        let out = self.solver.solve(&csp, warm);
        let bt = self.solver.stats.item_backtracks - before;
        match out {
            Outcome::Sat(s) => {
                self.assert_witness(alpha, &s);
                self.record(alpha, NodeOutcome::Solved, warm.is_some(), Some(&s), bt);
                Ok(Some(s))
            }
            Outcome::Unsat => {
                self.stats.property_backtracks += 1;
                self.record(alpha, NodeOutcome::Unsat, warm.is_some(), None, bt);
                Ok(None)
            }
            Outcome::Aborted => Err(Aborted),
        }
    }

    fn assert_witness(&self, alpha: &PropertyAssignment, s: &Solution) {
        let items = s.items(self.order);
        let values = self.p.evaluate(&items);
        for (q, a) in alpha.iter().enumerate() {
            if let Some(v) = a {
                assert_eq!(values[q], *v, "witness disagrees with property {q}");
            }
        }
        assert!(
            self.p.size_ok(items.len()),
            "witness violates the cardinality"
        );
    }

    /// Witness for the child of a node with witness `parent` that sets the
    /// property at `depth` to `v`, tried as child number `idx`.
    fn child(
        &mut self,
        alpha: &PropertyAssignment,
        depth: usize,
        idx: usize,
        parent: &Solution,
    ) -> Result<Option<Solution>, Aborted> {
        self.stats.tree_nodes += 1;
        self.check_limits()?;
        let q = self.prop_order[depth];
        let v = alpha[q].expect("child value set");
        if self.cfg.sibling
            && idx > 0
            && sibling_inference(self.p, q, &parent.items(self.order), v).is_some()
        {
            self.stats.sibling_inferences += 1;
            self.record(alpha, NodeOutcome::Inferred, false, Some(parent), 0);
            return Ok(Some(parent.clone()));
        }
        self.solve_node(alpha, Some(parent))
    }

    fn ub(&self, alpha: &PropertyAssignment) -> f64 {
        let domains = self.p.domains();
        let allowed: Vec<Vec<usize>> = (0..self.p.m())
            .map(|q| match alpha[q] {
                Some(v) => vec![domains[q].index(v).expect("value in domain")],
                None => self.reach0[q].clone(),
            })
            .collect();
        self.p.gai.upper_bound(&allowed)
    }

    fn leaf(&mut self, alpha: &PropertyAssignment, w: &Solution) {
        let values: Vec<PropertyValue> =
            alpha.iter().map(|v| v.expect("full assignment")).collect();
        let value = self.p.value_of(&values);
        if self.best.as_ref().map_or(true, |b| value > b.2) {
            self.best = Some((w.clone(), values, value));
        }
    }

    fn tcp_dfs(
        &mut self,
        depth: usize,
        alpha: &mut PropertyAssignment,
        w: &Solution,
    ) -> Result<bool, Aborted> {
        if depth == self.p.m() {
            self.leaf(alpha, w);
            return Ok(true);
        }
        let q = self.prop_order[depth];
        let net = self.p.model.as_tcp().expect("TCP mode needs a TCP-net");
        let values = preferred_value_order(net, q, alpha)
            .expect("parents precede children in topological order");
        for (idx, v) in values.into_iter().enumerate() {
            alpha[q] = Some(v);
            let layer = self.solver.store.depth();
            self.solver.store.push_layer();
            let found = match self.child(alpha, depth, idx, w)? {
                Some(s) => self.tcp_dfs(depth + 1, alpha, &s)?,
                None => false,
            };
            self.solver.store.truncate(layer);
            if found {
                return Ok(true);
            }
        }
        alpha[q] = None;
        Ok(false)
    }

    /// Child values of the property at `depth`, best bound first.
    fn gai_children(
        &self,
        depth: usize,
        alpha: &mut PropertyAssignment,
    ) -> Vec<(PropertyValue, f64)> {
        let q = self.prop_order[depth];
        let dom = self.p.domains()[q];
        let mut kids: Vec<(PropertyValue, f64)> = dom
            .values()
            .map(|v| {
                alpha[q] = Some(v);
                (v, self.ub(alpha))
            })
            .collect();
        alpha[q] = None;
        kids.sort_by(|a, b| b.1.total_cmp(&a.1));
        kids
    }

    fn beats_incumbent(&mut self, ub: f64, alpha: &PropertyAssignment) -> bool {
        match &self.best {
            Some(b) if ub <= b.2 => {
                self.stats.ub_prunes += 1;
                self.record(alpha, NodeOutcome::Pruned, false, None, 0);
                false
            }
            _ => true,
        }
    }

    fn gai_dfs(
        &mut self,
        depth: usize,
        alpha: &mut PropertyAssignment,
        w: &Solution,
    ) -> Result<(), Aborted> {
        if depth == self.p.m() {
            self.leaf(alpha, w);
            return Ok(());
        }
        let q = self.prop_order[depth];
        for (idx, (v, ub)) in self.gai_children(depth, alpha).into_iter().enumerate() {
            alpha[q] = Some(v);
            if !self.beats_incumbent(ub, alpha) {
                continue;
            }
            let layer = self.solver.store.depth();
            self.solver.store.push_layer();
            let r = match self.child(alpha, depth, idx, w) {
                Ok(Some(s)) => self.gai_dfs(depth + 1, alpha, &s),
                Ok(None) => Ok(()),
                Err(e) => Err(e),
            };
            self.solver.store.truncate(layer);
            r?;
        }
        alpha[q] = None;
        Ok(())
    }

    fn gai_best_first(&mut self, root: Solution) -> Result<(), Aborted> {
        let mut seq = 0;
        let mut heap = BinaryHeap::new();
        let alpha0 = vec![None; self.p.m()];
        heap.push(Open {
            depth: 0,
            ub: self.ub(&alpha0),
            alpha: alpha0,
            witness: root,
            seq,
        });
        while let Some(node) = heap.pop() {
            if !self.beats_incumbent(node.ub, &node.alpha) {
                self.stats.ub_prunes += heap.len() as u64;
                break;
            }
            if node.depth == self.p.m() {
                self.leaf(&node.alpha, &node.witness);
                continue;
            }
            let mut alpha = node.alpha.clone();
            let q = self.prop_order[node.depth];
            for (idx, (v, ub)) in self
                .gai_children(node.depth, &mut alpha)
                .into_iter()
                .enumerate()
            {
                alpha[q] = Some(v);
                if !self.beats_incumbent(ub, &alpha) {
                    continue;
                }
                // records are only valid below the node they were made at
                let layer = self.solver.store.depth();
                self.solver.store.push_layer();
                let r = self.child(&alpha, node.depth, idx, &node.witness);
                self.solver.store.truncate(layer);
                if let Some(s) = r? {
                    seq += 1;
                    heap.push(Open {
                        depth: node.depth + 1,
                        alpha: alpha.clone(),
                        witness: s,
                        ub,
                        seq,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Runs the tree search and returns the visited nodes when `cfg.trace` is set.
pub fn solve_csp_traced(p: &Problem, cfg: CspSearchConfig) -> (SearchResult, Vec<TraceEntry>) {
    let started = Instant::now();
    let mode = cfg.mode.unwrap_or(match p.model.kind {
        ModelKind::Tcp(_) => TreeMode::Tcp,
        ModelKind::Gai(_) => TreeMode::Gai,
    });
    if mode == TreeMode::Tcp && p.model.as_tcp().is_none() {
        let mut r =
            SearchResult::infeasible(SolveStats::default(), "TCP mode needs a TCP-net model");
        r.status = Status::LimitReached;
        return (r, Vec::new());
    }
    let order = item_order(p, cfg.item_order);
    let universe: Vec<usize> = scope_constraints(p)
        .iter()
        .flat_map(|c| c.terms.iter().map(|t| t.0))
        .collect();
    let mut solver =
        Solver::new(&order, Influence::Formulas(&p.table), cfg.solver).with_universe(universe);
    solver.deadline = cfg.limits.deadline;
    let all: Vec<usize> = (0..p.n()).collect();
    let domains = p.domains();
    let reach0 = (0..p.m())
        .map(|q| {
            let rem = p.table.remaining_counts(all.iter().copied());
            p.table
                .reachable(&p.props, q, &p.table.counts(&[]), &rem)
                .into_iter()
                .filter_map(|v| domains[q].index(v))
                .collect()
        })
        .collect();
    let mut t = Tree {
        p,
        cfg,
        mode,
        prop_order: property_order(p, mode),
        order: &order,
        solver,
        reach0,
        stats: SolveStats::default(),
        trace: Vec::new(),
        best: None,
    };

    let mut alpha = vec![None; p.m()];
    t.stats.tree_nodes += 1;
    let outcome = match t.solve_node(&alpha, None) {
        Ok(None) => {
            let mut stats = t.solver.stats.clone();
            merge_tree_stats(&mut stats, &t.stats, started);
            let why = match p.cardinality() {
                Some(k) if k > p.n() => "required cardinality exceeds the catalog size",
                _ => "no subset satisfies the hard constraints",
            };
            return (SearchResult::infeasible(stats, why), t.trace);
        }
        Ok(Some(root)) => match (t.mode, cfg.strategy) {
            (TreeMode::Tcp, _) => t.tcp_dfs(0, &mut alpha, &root).map(|_| ()),
            (TreeMode::Gai, TreeStrategy::DepthFirst) => t.gai_dfs(0, &mut alpha, &root),
            (TreeMode::Gai, TreeStrategy::BestFirst) => t.gai_best_first(root),
        },
        Err(a) => Err(a),
    };
    let complete = outcome.is_ok();
    let mut stats = t.solver.stats.clone();
    merge_tree_stats(&mut stats, &t.stats, started);
    let result = match t.best.take() {
        Some((w, assignment, value)) => SearchResult {
            subset: w.items(&order),
            assignment,
            value,
            status: if complete {
                Status::Optimal
            } else {
                Status::LimitReached
            },
            proven_optimal: complete,
            stats,
            diagnostic: None,
        },
        None => SearchResult {
            subset: Vec::new(),
            assignment: Vec::new(),
            value: f64::NEG_INFINITY,
            status: Status::LimitReached,
            proven_optimal: false,
            stats,
            diagnostic: Some("limit reached before a full assignment was satisfied".into()),
        },
    };
    (result, t.trace)
}

fn merge_tree_stats(into: &mut SolveStats, tree: &SolveStats, started: Instant) {
    into.tree_nodes = tree.tree_nodes;
    into.csps_solved = tree.csps_solved;
    into.property_backtracks = tree.property_backtracks;
    into.sibling_inferences = tree.sibling_inferences;
    into.warm_starts = tree.warm_starts;
    into.ub_prunes = tree.ub_prunes;
    into.wall_ms = started.elapsed().as_millis() as u64;
}

pub fn solve_csp_bnb(p: &Problem, cfg: CspSearchConfig) -> SearchResult {
    solve_csp_traced(p, cfg).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::tests::{senators_gai, senators_tcp};

    const T: PropertyValue = PropertyValue::Bool(true);
    const F: PropertyValue = PropertyValue::Bool(false);

    #[test]
    fn csp_construction() {
        let p = senators_tcp();
        let csp = build_csp(&vec![Some(T), None, None], &p.catalog, &p.props, Some(3));
        let ids: Vec<&str> = csp.constraints.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["C", "P1=T"]);
        let csp = build_csp(
            &vec![Some(T), Some(T), Some(F)],
            &p.catalog,
            &p.props,
            Some(3),
        );
        let ids: Vec<&str> = csp.constraints.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["C", "P1=T", "P2=T", "P3=F"]);
        let csp = build_csp(&vec![None; 3], &p.catalog, &p.props, None);
        assert!(csp.constraints.is_empty() && csp.holds(&[]));
    }

    #[test]
    fn senators_tcp_trace() {
        let p = senators_tcp();
        let cfg = CspSearchConfig {
            item_order: ItemOrder::Catalog,
            trace: true,
            ..CspSearchConfig::default()
        };
        let (r, trace) = solve_csp_traced(&p, cfg);
        assert_eq!(r.subset, vec![0, 1, 3]);
        assert_eq!(r.assignment, vec![T, T, T]);
        // the compiled value function ranks (T,T,T) first
        assert_eq!(r.value, p.gai.value_idx(&[1, 1, 1]));
        let at =
            |a: &[Option<PropertyValue>]| trace.iter().find(|e| e.alpha == a).expect("visited");
        let n1 = at(&[Some(T), None, None]);
        assert_eq!(n1.constraints, ["C", "P1=T"]);
        assert_eq!(n1.witness.as_deref(), Some(&[1, 1, 1, 0][..]));
        let n2 = at(&[Some(T), Some(T), None]);
        assert_eq!(
            (n2.witness.as_deref(), n2.item_backtracks),
            (Some(&[1, 1, 1, 0][..]), 0)
        );
        let n3 = at(&[Some(T), Some(T), Some(T)]);
        assert_eq!(
            (n3.witness.as_deref(), n3.item_backtracks),
            (Some(&[1, 1, 0, 1][..]), 2)
        );
        assert_eq!(r.stats.property_backtracks, 0);
    }

    #[test]
    fn gai_mode_and_strategies() {
        let p = senators_gai();
        for strategy in [TreeStrategy::DepthFirst, TreeStrategy::BestFirst] {
            for v in Variant::ALL {
                let cfg = CspSearchConfig {
                    strategy,
                    ..CspSearchConfig::variant(v)
                };
                let r = solve_csp_bnb(&p, cfg);
                assert_eq!(
                    (r.value, &r.assignment[..]),
                    (11.0, &[T, T, T][..]),
                    "{}",
                    v.name()
                );
                assert_eq!(p.evaluate(&r.subset), vec![T, T, T]);
                assert_eq!(r.subset.len(), 3);
            }
        }
    }

    #[test]
    fn sibling_rules() {
        let p = senators_tcp();
        // {o1,o2,o3} has P3 false
        assert_eq!(sibling_inference(&p, 2, &[0, 1, 2], F), Some(vec![0, 1, 2]));
        assert_eq!(sibling_inference(&p, 2, &[0, 1, 2], T), None);
    }

    #[test]
    fn oversize_cardinality_infeasible() {
        let mut p = senators_gai();
        p.model.cardinality = Some(7);
        let r = solve_csp_bnb(&p, CspSearchConfig::default());
        assert_eq!(r.status, Status::Infeasible);
        assert!(r.diagnostic.is_some());
    }

    #[test]
    fn gai_property_order_by_span() {
        let p = senators_gai();
        assert_eq!(property_order(&p, TreeMode::Gai), vec![0, 1, 2]);
    }
}

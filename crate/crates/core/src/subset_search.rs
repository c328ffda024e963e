//! Branch-and-bound over the lattice of item subsets.
//!
//! A node is a subset `S`; its children add one item with a larger catalog
//! index than every member of `S`, so each subset is generated once. The
//! lower bound of a node is the value of `S` itself and the upper bound
//! maximizes each factor over the property values still reachable by adding
//! some of those larger-index items. A required cardinality acts as a
//! preference dominating all others: nodes are compared by the pair
//! (has the required size, value), and bounded by the pair (can still reach
//! the required size, upper bound).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use serde::Serialize;

use crate::problem::{Limits, Problem, SearchResult, SolveStats, Status};
use crate::properties::RemainingCounts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    BestFirst,
    DepthFirst,
}

#[derive(Debug, Clone, Copy)]
pub struct SubsetConfig {
    pub strategy: Strategy,
    /// Skip nodes whose upper bound does not beat the incumbent.
    pub prune: bool,
    pub limits: Limits,
    /// Record every generated node.
    pub trace: bool,
}

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

impl Default for SubsetConfig {
    fn default() -> Self {
        SubsetConfig {
            strategy: Strategy::DepthFirst,
            prune: true,
            limits: Limits::none().with_nodes(DEFAULT_NODE_BUDGET),
            trace: false,
        }
    }
}

impl SubsetConfig {
    pub fn with_strategy(mut self, s: Strategy) -> Self {
        self.strategy = s;
        self
    }
}

/// A generated subset with its bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetNode {
    pub subset: Vec<usize>,
    pub lb: f64,
    pub ub: f64,
}

/// Lexicographic score: the size flag dominates the value.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(bool, f64);

impl Key {
    fn cmp(&self, other: &Key) -> Ordering {
        self.0.cmp(&other.0).then(self.1.total_cmp(&other.1))
    }
}

struct Node {
    subset: Vec<usize>,
    counts: Vec<i64>,
    ub: Key,
    seq: u64,
}

/// Max-heap entry: larger bound first, earlier generation on ties.
struct ByBound(Node);

impl PartialEq for ByBound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByBound {}
impl PartialOrd for ByBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByBound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .ub
            .cmp(&other.0.ub)
            .then(other.0.seq.cmp(&self.0.seq))
    }
}

/// Counts of items `i..n` for every `i`.
fn suffix_remaining(p: &Problem) -> Vec<RemainingCounts> {
    let n = p.n();
    let mut out = vec![p.table.remaining_counts(std::iter::empty()); n + 1];
    for i in (0..n).rev() {
        let mut r = out[i + 1].clone();
        p.table.add_remaining(&mut r, i);
        out[i] = r;
    }
    out
}

/// Domain indices of each property reachable from `counts` using `rem`.
fn reachable_idx(p: &Problem, counts: &[i64], rem: &RemainingCounts) -> Vec<Vec<usize>> {
    let domains = p.domains();
    (0..p.m())
        .map(|q| {
            p.table
                .reachable(&p.props, q, counts, rem)
                .into_iter()
                .filter_map(|v| domains[q].index(v))
                .collect()
        })
        .collect()
}

fn current_idx(p: &Problem, counts: &[i64]) -> Vec<usize> {
    let domains = p.domains();
    p.table
        .values(&p.props, counts)
        .into_iter()
        .zip(&domains)
        .map(|(v, d)| d.index(v).expect("value in domain"))
        .collect()
}

/// Per-item score used to order children: for every property whose value
/// could still improve the total, the gain of its best reachable value is
/// credited to the items satisfying its phi.
pub fn child_scores(p: &Problem, subset: &[usize], remaining: &[usize]) -> Vec<f64> {
    let counts = p.table.counts(subset);
    let rem = p.table.remaining_counts(remaining.iter().copied());
    let gains = property_gains(p, &counts, &rem);
    remaining
        .iter()
        .map(|&i| {
            (0..p.m())
                .filter(|&q| p.table.sat(p.table.phi_of(q), i))
                .map(|q| gains[q])
                .sum()
        })
        .collect()
}

fn property_gains(p: &Problem, counts: &[i64], rem: &RemainingCounts) -> Vec<f64> {
    let mut cur = current_idx(p, counts);
    let base = p.gai.value_idx(&cur);
    let reach = reachable_idx(p, counts, rem);
    (0..p.m())
        .map(|q| {
            let keep = cur[q];
            let mut best = 0.0f64;
            for &v in &reach[q] {
                cur[q] = v;
                best = best.max(p.gai.value_idx(&cur) - base);
            }
            cur[q] = keep;
            best
        })
        .collect()
}

/// `remaining` sorted by descending [`child_scores`], ties by index.
pub fn order_children(p: &Problem, subset: &[usize], remaining: &[usize]) -> Vec<usize> {
    let scores = child_scores(p, subset, remaining);
    let mut idx: Vec<usize> = (0..remaining.len()).collect();
    idx.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then(remaining[a].cmp(&remaining[b]))
    });
    idx.into_iter().map(|k| remaining[k]).collect()
}

struct Search<'a> {
    p: &'a Problem,
    cfg: SubsetConfig,
    suffix: Vec<RemainingCounts>,
    stats: SolveStats,
    best: Option<(Vec<usize>, Key)>,
    trace: Vec<SubsetNode>,
    seq: u64,
    started: Instant,
}

impl Search<'_> {
    fn make(&mut self, subset: Vec<usize>, counts: Vec<i64>) -> Node {
        let next = subset.last().map_or(0, |&i| i + 1);
        let lb = self.p.gai.value_idx(&current_idx(self.p, &counts));
        let ub = self
            .p
            .gai
            .upper_bound(&reachable_idx(self.p, &counts, &self.suffix[next]));
        self.stats.nodes_generated += 1;
        self.seq += 1;
        if self.cfg.trace {
            self.trace.push(SubsetNode {
                subset: subset.clone(),
                lb,
                ub,
            });
        }
        let len = subset.len();
        let n = self.p.n();
        let reach = self
            .p
            .cardinality()
            .map_or(true, |k| len <= k && len + (n - next) >= k);
        let key = Key(self.p.size_ok(len), lb);
        if self
            .best
            .as_ref()
            .map_or(true, |b| key.cmp(&b.1) == Ordering::Greater)
        {
            self.best = Some((subset.clone(), key));
            self.stats.nodes_until_opt = self.stats.nodes_generated;
        }
        Node {
            subset,
            counts,
            ub: Key(reach, ub),
            seq: self.seq,
        }
    }

    fn worth_expanding(&mut self, node: &Node) -> bool {
        if !self.cfg.prune {
            return true;
        }
        match &self.best {
            Some((_, v)) if node.ub.cmp(v) != Ordering::Greater => {
                self.stats.ub_prunes += 1;
                false
            }
            _ => true,
        }
    }

    /// Children in heuristic order.
    fn children(&mut self, node: &Node) -> Vec<Node> {
        self.stats.nodes_expanded += 1;
        let n = self.p.n();
        let next = node.subset.last().map_or(0, |&i| i + 1);
        let remaining: Vec<usize> = (next..n).collect();
        let rem = &self.suffix[next];
        let gains = property_gains(self.p, &node.counts, rem);
        let mut scored: Vec<(f64, usize)> = remaining
            .iter()
            .map(|&i| {
                let s = (0..self.p.m())
                    .filter(|&q| self.p.table.sat(self.p.table.phi_of(q), i))
                    .map(|q| gains[q])
                    .sum();
                (s, i)
            })
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored
            .into_iter()
            .map(|(_, i)| {
                let mut s = node.subset.clone();
                s.push(i);
                let mut c = node.counts.clone();
                self.p.table.add(&mut c, i);
                self.make(s, c)
            })
            .collect()
    }

    fn out_of_budget(&self) -> bool {
        self.cfg
            .limits
            .node_budget
            .is_some_and(|b| self.stats.nodes_generated >= b)
            || (self.stats.nodes_generated % 256 == 0 && self.cfg.limits.expired())
    }

    fn run(&mut self) -> bool {
        let root = self.make(Vec::new(), self.p.table.counts(&[]));
        match self.cfg.strategy {
            Strategy::DepthFirst => {
                let mut stack = vec![root];
                while let Some(node) = stack.pop() {
                    if self.out_of_budget() {
                        return false;
                    }
                    if !self.worth_expanding(&node) {
                        continue;
                    }
                    let kids = self.children(&node);
                    stack.extend(kids.into_iter().rev());
                }
            }
            Strategy::BestFirst => {
                let mut heap = BinaryHeap::new();
                heap.push(ByBound(root));
                while let Some(ByBound(node)) = heap.pop() {
                    if self.out_of_budget() {
                        return false;
                    }
                    if !self.worth_expanding(&node) {
                        if self.cfg.prune {
                            // every queued node has a bound no larger
                            self.stats.ub_prunes += heap.len() as u64;
                            break;
                        }
                        continue;
                    }
                    for c in self.children(&node) {
                        heap.push(ByBound(c));
                    }
                }
            }
        }
        true
    }
}

/// Runs the search; with `trace` set in `cfg` the generated nodes are
/// returned in generation order.
pub fn solve_subset_traced(p: &Problem, cfg: SubsetConfig) -> (SearchResult, Vec<SubsetNode>) {
    let started = Instant::now();
    if p.cardinality().is_some_and(|k| k > p.n()) {
        return (
            SearchResult::infeasible(
                SolveStats::default(),
                "required cardinality exceeds the catalog size",
            ),
            Vec::new(),
        );
    }
    let mut s = Search {
        p,
        cfg,
        suffix: suffix_remaining(p),
        stats: SolveStats::default(),
        best: None,
        trace: Vec::new(),
        seq: 0,
        started,
    };
    let complete = s.run();
    s.stats.wall_ms = s.started.elapsed().as_millis() as u64;
    let result = match s.best.take() {
        Some((subset, Key(true, value))) => SearchResult {
            assignment: p.evaluate(&subset),
            subset,
            value,
            status: if complete {
                Status::Optimal
            } else {
                Status::LimitReached
            },
            proven_optimal: complete,
            stats: s.stats,
            diagnostic: None,
        },
        Some(_) if complete => {
            SearchResult::infeasible(s.stats, "no subset has the required cardinality")
        }
        _ => SearchResult {
            subset: Vec::new(),
            assignment: Vec::new(),
            value: f64::NEG_INFINITY,
            status: Status::LimitReached,
            proven_optimal: false,
            stats: s.stats,
            diagnostic: Some("limit reached before any feasible subset was found".into()),
        },
    };
    (result, s.trace)
}

pub fn solve_subset_bnb(p: &Problem, cfg: SubsetConfig) -> SearchResult {
    solve_subset_traced(p, cfg).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::tests::senators_gai;

    fn node<'a>(trace: &'a [SubsetNode], s: &[usize]) -> &'a SubsetNode {
        trace
            .iter()
            .find(|n| n.subset == s)
            .unwrap_or_else(|| panic!("{s:?} not generated"))
    }

    #[test]
    fn senators_dfs_bounds() {
        let p = senators_gai();
        let cfg = SubsetConfig {
            trace: true,
            ..SubsetConfig::default()
        };
        let (r, trace) = solve_subset_traced(&p, cfg);
        assert_eq!(r.value, 11.0);
        assert_eq!(r.subset, vec![0, 1, 3]);
        assert!(r.proven_optimal);
        // incumbent path and bounds
        let path: [(&[usize], f64, f64); 4] = [
            (&[], 5.0, 11.0),
            (&[0], 5.0, 11.0),
            (&[0, 1], 8.0, 11.0),
            (&[0, 1, 3], 11.0, 11.0),
        ];
        for (s, lb, ub) in path {
            let n = node(&trace, s);
            assert_eq!((n.lb, n.ub), (lb, ub), "{s:?}");
        }
        // subsets that can no longer reach size 3 are still generated; with
        // no larger-index item left their bound is their own value
        for s in [&[3][..], &[0, 3]] {
            let n = node(&trace, s);
            assert_eq!((n.lb, n.ub), (6.0, 6.0), "{s:?}");
        }
        let n = node(&trace, &[0, 2]);
        assert_eq!((n.lb, n.ub), (8.0, 11.0));
        let n = node(&trace, &[0, 1, 2]);
        assert_eq!((n.lb, n.ub), (10.0, 11.0));
        // {o1,o2,o4} is generated before its sibling {o1,o2,o3}
        let pos = |s: &[usize]| trace.iter().position(|n| n.subset == s).unwrap();
        assert!(pos(&[0, 1, 3]) < pos(&[0, 1, 2]));
    }

    #[test]
    fn best_first_and_unpruned_agree() {
        let p = senators_gai();
        for strategy in [Strategy::BestFirst, Strategy::DepthFirst] {
            for prune in [true, false] {
                let cfg = SubsetConfig {
                    strategy,
                    prune,
                    ..SubsetConfig::default()
                };
                let r = solve_subset_bnb(&p, cfg);
                assert_eq!(r.value, 11.0, "{strategy:?} prune={prune}");
            }
        }
    }

    #[test]
    fn heuristic_prefers_items_helping_properties() {
        let p = senators_gai();
        // at the empty set o4 only helps P3 (gain 1); the others help P1 (gain 3)
        assert_eq!(order_children(&p, &[], &[3, 2, 1, 0]), vec![0, 1, 2, 3]);
        let s = child_scores(&p, &[0, 1], &[2, 3]);
        // P1 is already true and cannot change, so o3 earns only P2's gain
        assert_eq!(s, vec![2.0, 3.0]);
    }

    #[test]
    fn oversize_cardinality_is_infeasible() {
        let mut p = senators_gai();
        p.model.cardinality = Some(5);
        let r = solve_subset_bnb(&p, SubsetConfig::default());
        assert_eq!(r.status, Status::Infeasible);
    }

    #[test]
    fn node_budget_reports_limit() {
        let p = senators_gai();
        let cfg = SubsetConfig {
            limits: Limits::none().with_nodes(2),
            ..SubsetConfig::default()
        };
        let r = solve_subset_bnb(&p, cfg);
        assert_eq!(r.status, Status::LimitReached);
        assert!(!r.proven_optimal);
    }
}

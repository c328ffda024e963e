//! Backtracking solver for conjunctions of cardinality constraints over
//! boolean item-selection variables.
//!
//! The search walks the tree of selected sets under a static variable order:
//! a node is a set `S` of positions, its children add one position after the
//! last one in `S`, smallest first. Unselected variables count as 0, so every
//! node is itself a candidate solution and is tested on entry. This visits
//! assignments in the order of a chronological backtracker that tries value
//! 1 before 0 and stops as soon as the current partial assignment (rest at 0)
//! satisfies every constraint.

mod checks;
mod nogood;
mod order;

use std::fmt::Write as _;
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::problem::SolveStats;
use crate::properties::{Allowed, CardinalityConstraint, PropertyTable};

pub use checks::{can_must_check, forward_check, monotonic_prune};
pub use nogood::{match_nogood, record_nogood, NoGoodStore, DEFAULT_NOGOOD_CAP};
pub use order::{static_order, VarOrder};

use checks::{can_must_dead, needs_unreachable};

/// A conjunction of cardinality constraints over `num_vars` items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csp {
    pub num_vars: usize,
    /// Constraints with a non-empty scope.
    pub constraints: Vec<CardinalityConstraint>,
    /// Id of an empty-scope constraint that is false, if any.
    pub false_constant: Option<String>,
}

impl Csp {
    /// Empty-scope constraints are folded into constants.
    pub fn new(num_vars: usize, constraints: Vec<CardinalityConstraint>) -> Self {
        let mut false_constant = None;
        let mut kept = Vec::with_capacity(constraints.len());
        for c in constraints {
            match c.constant() {
                Some(true) => {}
                Some(false) => {
                    false_constant.get_or_insert(c.id);
                }
                None => kept.push(c),
            }
        }
        Csp {
            num_vars,
            constraints: kept,
            false_constant,
        }
    }

    pub fn is_trivially_unsat(&self) -> bool {
        self.false_constant.is_some()
    }

    /// Does selecting exactly `items` satisfy every constraint?
    pub fn holds(&self, items: &[usize]) -> bool {
        let mut sel = vec![false; self.num_vars];
        for &i in items {
            sel[i] = true;
        }
        self.false_constant.is_none() && self.constraints.iter().all(|c| c.holds(&sel))
    }

    /// One constraint per line, `<id>: [+i,-j,...] REL bound`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        if let Some(id) = &self.false_constant {
            let _ = writeln!(s, "{id}: [] false");
        }
        for c in &self.constraints {
            let _ = writeln!(s, "{c}");
        }
        s
    }
}

/// Which pruning rules are active. Every rule is sound on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub fc: bool,
    pub can_must: bool,
    pub monotone: bool,
    pub nogoods: bool,
    /// Skip a candidate when an earlier candidate of the same node had the
    /// same coefficients in every constraint and failed.
    pub interchangeable: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            fc: true,
            can_must: true,
            monotone: true,
            nogoods: true,
            interchangeable: true,
        }
    }
}

/// A satisfying selection, as ascending positions in the variable order it
/// was found under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    positions: Vec<usize>,
    fingerprint: u64,
}

impl Solution {
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Selected items, ascending.
    pub fn items(&self, order: &VarOrder) -> Vec<usize> {
        let mut v: Vec<usize> = self.positions.iter().map(|&p| order.item_at(p)).collect();
        v.sort_unstable();
        v
    }

    /// 0/1 vector indexed by position.
    pub fn bits(&self, n: usize) -> Vec<u8> {
        let mut b = vec![0; n];
        for &p in &self.positions {
            b[p] = 1;
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Solution),
    Unsat,
    /// Deadline passed.
    Aborted,
}

/// What a NoGood is keyed on.
#[derive(Debug, Clone, Copy)]
pub enum Influence<'a> {
    /// Per-formula counts of the selected items. Valid across every CSP whose
    /// constraints are functions of these counts, so the store may be kept
    /// between solves of CSPs with growing constraint sets.
    Formulas(&'a PropertyTable),
    /// The constraint sums themselves; only meaningful within one CSP, so
    /// records are dropped after each solve.
    ConstraintSums,
}

/// Reusable solver state: variable order, NoGood store and counters.
pub struct Solver<'a> {
    pub order: &'a VarOrder,
    pub influence: Influence<'a>,
    pub config: SolverConfig,
    pub store: NoGoodStore,
    pub deadline: Option<Instant>,
    pub stats: SolveStats,
    /// When set, positions where the search stopped to check a node are
    /// appended here (root excluded). Used to trace runs.
    pub trace: Option<Vec<Vec<usize>>>,
    /// Positions the search may select, in addition to those in some scope
    /// of the CSP being solved. Warm starts and shared NoGoods are only
    /// valid between CSPs searched over the same set of positions.
    universe: Option<Vec<bool>>,
}

struct Frame {
    /// Position added to reach this node; `usize::MAX` at the root.
    pos: usize,
    /// Next index into the active-position list to try as a child.
    next: usize,
}

struct Prep {
    active: Vec<usize>,
    terms_at: Vec<Vec<(u32, i8)>>,
    /// Positions with equal `terms_at` share a class.
    class: Vec<u32>,
    num_classes: usize,
    allowed: Vec<Allowed>,
    unsigned: Vec<bool>,
    pos_cnt: Vec<Vec<u32>>,
    neg_cnt: Vec<Vec<u32>>,
    /// (need, cap, suffix count of items in both scopes)
    pairs: Vec<(usize, usize, Vec<u32>)>,
}

enum Verdict {
    Keep,
    Monotone,
    Fc { terminal: bool },
    CanMust,
    NoGood,
}

impl<'a> Solver<'a> {
    pub fn new(order: &'a VarOrder, influence: Influence<'a>, config: SolverConfig) -> Self {
        Solver {
            order,
            influence,
            config,
            store: NoGoodStore::default(),
            deadline: None,
            stats: SolveStats::default(),
            trace: None,
            universe: None,
        }
    }

    /// Fixes the selectable items for every later solve.
    pub fn with_universe(mut self, items: impl IntoIterator<Item = usize>) -> Self {
        let mut u = vec![false; self.order.len()];
        for i in items {
            u[self.order.position_of(i)] = true;
        }
        self.universe = Some(u);
        self
    }

    fn prepare(&self, csp: &Csp) -> Prep {
        let n = csp.num_vars;
        let cn = csp.constraints.len();
        let mut terms_at: Vec<Vec<(u32, i8)>> = vec![Vec::new(); n];
        let mut pos_cnt = vec![vec![0u32; n + 1]; cn];
        let mut neg_cnt = vec![vec![0u32; n + 1]; cn];
        let mut member = vec![vec![false; n]; cn];
        for (c, con) in csp.constraints.iter().enumerate() {
            for &(item, coef) in &con.terms {
                let p = self.order.position_of(item);
                terms_at[p].push((c as u32, coef));
                member[c][p] = coef > 0;
                if coef > 0 {
                    pos_cnt[c][p] = 1;
                } else {
                    neg_cnt[c][p] = 1;
                }
            }
            for p in (0..n).rev() {
                pos_cnt[c][p] += pos_cnt[c][p + 1];
                neg_cnt[c][p] += neg_cnt[c][p + 1];
            }
        }
        let in_universe = |p: usize| self.universe.as_ref().is_some_and(|u| u[p]);
        let active = (0..n)
            .filter(|&p| !terms_at[p].is_empty() || in_universe(p))
            .collect();
        let mut classes: FxHashMap<&[(u32, i8)], u32> = FxHashMap::default();
        let class: Vec<u32> = terms_at
            .iter()
            .map(|t| {
                let next = classes.len() as u32;
                *classes.entry(t.as_slice()).or_insert(next)
            })
            .collect();
        let num_classes = classes.len();
        let allowed: Vec<Allowed> = csp.constraints.iter().map(|c| c.allowed()).collect();
        let unsigned: Vec<bool> = csp.constraints.iter().map(|c| !c.is_signed()).collect();
        let mut pairs = Vec::new();
        if self.config.can_must {
            let bounded_below = |a: &Allowed| a.lo > 0;
            let bounded_above = |a: &Allowed| a.hi < i64::MAX / 8;
            for i in 0..cn {
                if !unsigned[i] || !bounded_below(&allowed[i]) {
                    continue;
                }
                for k in 0..cn {
                    if k == i || !unsigned[k] || !bounded_above(&allowed[k]) {
                        continue;
                    }
                    let mut both = vec![0u32; n + 1];
                    for p in (0..n).rev() {
                        both[p] = both[p + 1] + (member[i][p] && member[k][p]) as u32;
                    }
                    if both[0] > 0 {
                        pairs.push((i, k, both));
                    }
                }
            }
        }
        Prep {
            active,
            terms_at,
            class,
            num_classes,
            allowed,
            unsigned,
            pos_cnt,
            neg_cnt,
            pairs,
        }
    }

    fn key_len(&self, csp: &Csp) -> usize {
        match self.influence {
            Influence::Formulas(t) => t.num_formulas(),
            Influence::ConstraintSums => csp.constraints.len(),
        }
    }

    fn apply(&self, prep: &Prep, cur: &mut [i64], key: &mut [u32], pos: usize, sign: i64) {
        for &(c, coef) in &prep.terms_at[pos] {
            cur[c as usize] += sign * coef as i64;
        }
        match self.influence {
            Influence::Formulas(t) => {
                for &f in t.item_formulas(self.order.item_at(pos)) {
                    key[f] = (key[f] as i64 + sign) as u32;
                }
            }
            Influence::ConstraintSums => {
                for &(c, _) in &prep.terms_at[pos] {
                    key[c as usize] = cur[c as usize] as u32;
                }
            }
        }
    }

    /// Examines the state just reached by adding position `j`.
    fn verdict(&mut self, prep: &Prep, cur: &[i64], key: &[u32], j: usize) -> Verdict {
        let cfg = self.config;
        for c in 0..cur.len() {
            let lo = cur[c] - prep.neg_cnt[c][j + 1] as i64;
            let hi = cur[c] + prep.pos_cnt[c][j + 1] as i64;
            let a = &prep.allowed[c];
            if cfg.monotone && lo > a.hi {
                return Verdict::Monotone;
            }
            if cfg.fc && needs_unreachable(a, lo, hi) {
                return Verdict::Fc {
                    terminal: prep.unsigned[c] && hi < a.lo,
                };
            }
        }
        for (i, k, both) in &prep.pairs {
            if can_must_dead(
                &prep.allowed[*i],
                &prep.allowed[*k],
                cur[*i],
                cur[*k],
                prep.pos_cnt[*i][j + 1] as i64,
                both[j + 1] as i64,
            ) {
                return Verdict::CanMust;
            }
        }
        if cfg.nogoods && self.store.matches(key, (j + 1) as u32) {
            return Verdict::NoGood;
        }
        Verdict::Keep
    }

    fn satisfied(prep: &Prep, cur: &[i64]) -> bool {
        cur.iter().zip(&prep.allowed).all(|(&s, a)| a.contains(s))
    }

    /// First solution at or after `warm` in search order, or UNSAT.
    ///
    /// `warm` must be where a search by this solver stopped on a CSP whose
    /// constraints are a subset of `csp`'s, with every position of `csp`'s
    /// scopes inside the universe (see [`Solver::with_universe`]). Panics on
    /// an order mismatch.
    pub fn solve(&mut self, csp: &Csp, warm: Option<&Solution>) -> Outcome {
        let started = Instant::now();
        let scoped = matches!(self.influence, Influence::ConstraintSums);
        let base_layers = self.store.depth();
        if scoped {
            self.store.push_layer();
        }
        let out = if csp.is_trivially_unsat() {
            Outcome::Unsat
        } else {
            self.run(csp, warm)
        };
        if scoped {
            self.store.truncate(base_layers);
        }
        self.stats.wall_ms += started.elapsed().as_millis() as u64;
        out
    }

    fn run(&mut self, csp: &Csp, warm: Option<&Solution>) -> Outcome {
        assert_eq!(
            csp.num_vars,
            self.order.len(),
            "variable count differs from the order"
        );
        let prep = self.prepare(csp);
        let mut cur = vec![0i64; csp.constraints.len()];
        let mut key = vec![0u32; self.key_len(csp)];
        let mut stack = vec![Frame {
            pos: usize::MAX,
            next: 0,
        }];
        // classes known to fail as the next item, per stack level
        let mut failed: Vec<Vec<bool>> = vec![vec![false; prep.num_classes]];
        let push_level = |failed: &mut Vec<Vec<bool>>, depth: usize| {
            if failed.len() <= depth {
                failed.push(vec![false; prep.num_classes]);
            } else {
                failed[depth].fill(false);
            }
        };
        // index of each active position in `prep.active`
        let mut slot = vec![usize::MAX; csp.num_vars];
        for (i, &p) in prep.active.iter().enumerate() {
            slot[p] = i;
        }

        if let Some(w) = warm {
            assert_eq!(
                w.fingerprint,
                self.order.fingerprint(),
                "warm start from a different variable order"
            );
            for &p in &w.positions {
                let s = slot[p];
                assert!(
                    s != usize::MAX,
                    "warm-start item outside the search universe"
                );
                stack.last_mut().expect("root").next = s + 1;
                self.apply(&prep, &mut cur, &mut key, p, 1);
                stack.push(Frame {
                    pos: p,
                    next: s + 1,
                });
                push_level(&mut failed, stack.len() - 1);
            }
        }
        self.stats.item_nodes += 1;
        if let Some(t) = &mut self.trace {
            t.push(stack.iter().skip(1).map(|f| f.pos).collect());
        }
        if Self::satisfied(&prep, &cur) {
            return Outcome::Sat(self.solution(&stack));
        }

        let mut ticks: u64 = 0;
        loop {
            ticks += 1;
            if ticks % 4096 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
                return Outcome::Aborted;
            }
            let top = stack.len() - 1;
            let mut advanced = false;
            let mut i = stack[top].next;
            while i < prep.active.len() {
                let j = prep.active[i];
                i += 1;
                let class = prep.class[j] as usize;
                if failed[top][class] {
                    self.stats.interchangeable_skips += 1;
                    continue;
                }
                self.apply(&prep, &mut cur, &mut key, j, 1);
                let v = self.verdict(&prep, &cur, &key, j);
                if let Verdict::Keep = v {
                    stack[top].next = i;
                    stack.push(Frame { pos: j, next: i });
                    push_level(&mut failed, top + 1);
                    advanced = true;
                    break;
                }
                if self.config.interchangeable {
                    failed[top][class] = true;
                }
                let mut stop = false;
                match v {
                    Verdict::Monotone => self.stats.monotone_prunes += 1,
                    Verdict::Fc { terminal } => {
                        self.stats.fc_prunes += 1;
                        stop = terminal;
                    }
                    Verdict::CanMust => self.stats.can_must_prunes += 1,
                    Verdict::NoGood => self.stats.nogood_hits += 1,
                    Verdict::Keep => unreachable!(),
                }
                if self.config.nogoods
                    && !matches!(v, Verdict::NoGood)
                    && self.store.record(&key, (j + 1) as u32)
                {
                    self.stats.nogoods_recorded += 1;
                }
                self.apply(&prep, &mut cur, &mut key, j, -1);
                self.stats.item_backtracks += 1;
                if stop {
                    i = prep.active.len();
                }
            }
            if advanced {
                self.stats.item_nodes += 1;
                if let Some(t) = &mut self.trace {
                    t.push(stack.iter().skip(1).map(|f| f.pos).collect());
                }
                #[cfg(debug_assertions)]
                if self.stats.item_nodes % 1021 == 0 {
                    self.assert_influence(&prep, &stack, &key);
                }
                if Self::satisfied(&prep, &cur) {
                    return Outcome::Sat(self.solution(&stack));
                }
                continue;
            }
            // every child of the top node failed
            stack[top].next = prep.active.len();
            let frontier = if top == 0 { 0 } else { stack[top].pos + 1 };
            if self.config.nogoods && self.store.record(&key, frontier as u32) {
                self.stats.nogoods_recorded += 1;
            }
            if top == 0 {
                return Outcome::Unsat;
            }
            let f = stack.pop().expect("non-root");
            if self.config.interchangeable {
                failed[top - 1][prep.class[f.pos] as usize] = true;
            }
            self.apply(&prep, &mut cur, &mut key, f.pos, -1);
            self.stats.item_backtracks += 1;
        }
    }

    fn solution(&self, stack: &[Frame]) -> Solution {
        Solution {
            positions: stack.iter().skip(1).map(|f| f.pos).collect(),
            fingerprint: self.order.fingerprint(),
        }
    }

    #[cfg(debug_assertions)]
    fn assert_influence(&self, prep: &Prep, stack: &[Frame], key: &[u32]) {
        if let Influence::Formulas(t) = self.influence {
            let items: Vec<usize> = stack
                .iter()
                .skip(1)
                .map(|f| self.order.item_at(f.pos))
                .collect();
            let fresh: Vec<u32> = t.counts(&items).into_iter().map(|c| c as u32).collect();
            debug_assert_eq!(fresh, key, "influence vector drifted");
        }
        let _ = prep;
    }
}

/// Solves one CSP with a fresh solver over `order`.
pub fn solve(
    csp: &Csp,
    order: &VarOrder,
    config: SolverConfig,
    warm: Option<&Solution>,
) -> (Outcome, SolveStats) {
    let mut s = Solver::new(order, Influence::ConstraintSums, config);
    let out = s.solve(csp, warm);
    (out, s.stats)
}

/// Rebuilds a [`Solution`] from selected items under `order`.
pub fn solution_from_items(order: &VarOrder, items: &[usize]) -> Solution {
    let mut positions: Vec<usize> = items.iter().map(|&i| order.position_of(i)).collect();
    positions.sort_unstable();
    Solution {
        positions,
        fingerprint: order.fingerprint(),
    }
}

#[cfg(test)]
mod tests;

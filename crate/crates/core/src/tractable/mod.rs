//! Polynomial-time solvers for two restricted problem classes under TCP-net
//! preferences, both over a single item attribute:
//!
//! * atomic properties `|X = x| REL k`, solved greedily value group by value
//!   group, since items with different values never interact;
//! * properties over at most two OR-ed equality atoms with every attribute
//!   value held by at most one item, solved by committing property values in
//!   preference order and testing joint satisfiability with 2-SAT.

mod twosat;

use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{AttrValue, Formula, Rel};
use crate::prefmodel::{preferred_value_order, topo_property_order, ModelKind, TcpNet};
use crate::problem::{Problem, SearchResult, SolveStats, Status};
use crate::properties::{PropertyKind, PropertyValue};

pub use twosat::{count_clauses, solve_2sat, translate_to_2sat, Lit, TwoSatInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TractableError {
    #[error("instance outside the class: {}", .0.join("; "))]
    NotInClass(Vec<String>),
    #[error("property {0}: no value is consistent with the earlier ones")]
    Exhausted(String),
}

/// Instance parameters and class membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TractableClassProfile {
    pub n: usize,
    pub m: usize,
    /// Number of item attributes.
    pub a: usize,
    /// Most connectives in one property formula.
    pub k: usize,
    /// Largest number of distinct values of an attribute.
    pub d: usize,
    /// Largest number of items sharing one attribute value.
    pub mu: usize,
    /// Some property counts the empty (always true) formula.
    pub empties_allowed: bool,
    /// Some property formula uses negation.
    pub negation_allowed: bool,
    pub atomic_greedy: bool,
    pub two_sat: bool,
    /// Why each class is rejected.
    pub reasons: Vec<String>,
}

impl TractableClassProfile {
    pub fn class_name(&self) -> &'static str {
        if self.atomic_greedy {
            "atomic-greedy"
        } else if self.two_sat {
            "two-sat"
        } else {
            "general"
        }
    }
}

fn equality_atoms_only(f: &Formula) -> bool {
    f.atoms().iter().all(|a| a.rel == Rel::Eq)
}

/// Computes the instance parameters and which solver, if any, applies.
pub fn check_class(p: &Problem) -> TractableClassProfile {
    let cat = &p.catalog;
    let schema = cat.schema();
    let a = schema.len();
    let k = p
        .props
        .iter()
        .map(|q| q.connective_count())
        .max()
        .unwrap_or(0);
    let d = (0..a)
        .map(|i| match schema.attribute(i).domain_size() {
            Some(s) => s,
            None => cat
                .items()
                .iter()
                .map(|o| o.values[i])
                .collect::<HashSet<AttrValue>>()
                .len(),
        })
        .max()
        .unwrap_or(0);
    let empties = p.props.iter().any(|q| matches!(q.phi(), Formula::True));
    let negation = p.props.iter().any(|q| q.phi().has_negation());

    let mut common = Vec::new();
    if a != 1 {
        common.push(format!("items have {a} attributes, the classes need 1"));
    }
    if !matches!(p.model.kind, ModelKind::Tcp(_)) {
        common.push("preferences are not a TCP-net".into());
    }
    if p.cardinality().is_some() {
        common.push("a required subset size is not expressible in these classes".into());
    }
    for q in &p.props {
        if !matches!(q.kind, PropertyKind::CountVsConst { .. }) {
            common.push(format!("{}: only |phi| REL k properties are allowed", q.id));
        } else if !equality_atoms_only(q.phi()) {
            common.push(format!(
                "{}: only attribute = value atoms are allowed",
                q.id
            ));
        }
    }
    if empties {
        common.push("empty property (formula `true`) present".into());
    }
    if negation {
        common.push("negated formula present".into());
    }

    let mut greedy = common.clone();
    if k > 0 {
        greedy.push(format!(
            "atomic greedy: formulas have up to {k} connectives, needs 0"
        ));
    }
    let mut two_sat = common;
    if k > 1 {
        two_sat.push(format!(
            "2-SAT: formulas have up to {k} connectives, needs at most 1"
        ));
    }
    if p.props.iter().any(|q| q.phi().has_and()) {
        two_sat.push("2-SAT: conjunction present, only disjunction is allowed".into());
    }
    let mu = cat.max_multiplicity();
    if mu > 1 {
        two_sat.push(format!(
            "2-SAT: an attribute value appears {mu} times, needs at most 1"
        ));
    }
    let atomic_greedy = greedy.is_empty();
    let two = two_sat.is_empty();
    let mut reasons = Vec::new();
    if !atomic_greedy {
        reasons.extend(
            greedy
                .into_iter()
                .map(|r| r.trim_start_matches("atomic greedy: ").to_string()),
        );
    }
    if !two {
        for r in two_sat {
            if !reasons.contains(&r) {
                reasons.push(r);
            }
        }
    }
    TractableClassProfile {
        n: cat.len(),
        m: p.m(),
        a,
        k,
        d,
        mu,
        empties_allowed: empties,
        negation_allowed: negation,
        atomic_greedy,
        two_sat: two,
        reasons,
    }
}

fn net(p: &Problem) -> &TcpNet {
    p.model.as_tcp().expect("class check guarantees a TCP-net")
}

fn finish(p: &Problem, subset: Vec<usize>, stats: SolveStats) -> SearchResult {
    let assignment = p.evaluate(&subset);
    SearchResult {
        value: p.value_of(&assignment),
        subset,
        assignment,
        status: Status::Optimal,
        proven_optimal: true,
        stats,
        diagnostic: None,
    }
}

/// `(rel, k)` with the relation negated for a false target.
fn target(rel: Rel, k: i64, v: PropertyValue) -> (Rel, i64) {
    if v == PropertyValue::Bool(true) {
        (rel, k)
    } else {
        (rel.negate(), k)
    }
}

/// Greedy solver for atomic properties.
///
/// Properties are taken in topological order with their values best first.
/// A value is kept if the count constraints committed on the same atom
/// still admit a common count (checked without the data) and that count
/// is available in the catalog. At the end each atom's group contributes
/// its smallest admissible count of items, in catalog order.
pub fn solve_atomic_greedy(p: &Problem) -> Result<SearchResult, TractableError> {
    let profile = check_class(p);
    if !profile.atomic_greedy {
        return Err(TractableError::NotInClass(profile.reasons));
    }
    let started = Instant::now();
    let mut stats = SolveStats::default();
    let top = p
        .props
        .iter()
        .map(|q| match q.kind {
            PropertyKind::CountVsConst { k, .. } => k.max(0),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
        + 2;
    // formulas and committed constraints per distinct atom
    let mut groups: Vec<(Formula, Vec<(Rel, i64)>)> = Vec::new();
    let mut alpha = vec![None; p.m()];
    let admits =
        |cs: &[(Rel, i64)], hi: i64| (0..=hi).find(|&c| cs.iter().all(|&(r, k)| r.holds(c, k)));

    for q in topo_property_order(net(p)) {
        let PropertyKind::CountVsConst { phi, rel, k } = &p.props[q].kind else {
            unreachable!("class check")
        };
        let g = match groups.iter().position(|(f, _)| f == phi) {
            Some(g) => g,
            None => {
                groups.push((phi.clone(), Vec::new()));
                groups.len() - 1
            }
        };
        let values = preferred_value_order(net(p), q, &alpha).expect("parents committed first");
        let mut chosen = None;
        for v in values {
            let mut cs = groups[g].1.clone();
            cs.push(target(*rel, *k, v));
            // offline conflict: no count at all satisfies the group
            if admits(&cs, top).is_none() {
                continue;
            }
            // data check: a satisfying count is available
            let avail = p.catalog.items().iter().filter(|o| phi.eval(o)).count() as i64;
            stats.item_touches += p.n() as u64;
            if admits(&cs, avail.min(top)).is_some() {
                chosen = Some((v, cs));
                break;
            }
        }
        let (v, cs) = chosen.ok_or_else(|| TractableError::Exhausted(p.props[q].id.clone()))?;
        groups[g].1 = cs;
        alpha[q] = Some(v);
    }

    let mut subset = Vec::new();
    for (phi, cs) in &groups {
        let need = admits(cs, top).expect("committed constraints are consistent") as usize;
        let mut taken = 0;
        for (i, o) in p.catalog.items().iter().enumerate() {
            if taken == need {
                break;
            }
            stats.item_touches += 1;
            if phi.eval(o) {
                subset.push(i);
                taken += 1;
            }
        }
    }
    subset.sort_unstable();
    stats.wall_ms = started.elapsed().as_millis() as u64;
    Ok(finish(p, subset, stats))
}

/// 2-SAT solver for single-connective disjunctive properties.
///
/// Property values are committed in topological order, best first; a value
/// is kept if the 2-SAT translation of all committed values is satisfiable.
/// Items mentioned by no clause stay unselected.
pub fn solve_onevee(p: &Problem) -> Result<SearchResult, TractableError> {
    let profile = check_class(p);
    if !profile.two_sat {
        return Err(TractableError::NotInClass(profile.reasons));
    }
    let started = Instant::now();
    let mut stats = SolveStats::default();
    let mut alpha = vec![None; p.m()];
    let mut committed: Vec<(usize, bool)> = Vec::new();
    let mut last: Option<(TwoSatInstance, Vec<bool>)> = None;
    for q in topo_property_order(net(p)) {
        let values = preferred_value_order(net(p), q, &alpha).expect("parents committed first");
        let mut ok = false;
        for v in values {
            let want = v == PropertyValue::Bool(true);
            let mut targets: Vec<_> = committed.iter().map(|&(r, b)| (&p.props[r], b)).collect();
            targets.push((&p.props[q], want));
            let inst = translate_to_2sat(&p.catalog, &targets)?;
            stats.item_touches += (p.n() * targets.len()) as u64;
            if let Some(asg) = solve_2sat(&inst) {
                committed.push((q, want));
                alpha[q] = Some(v);
                last = Some((inst, asg));
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(TractableError::Exhausted(p.props[q].id.clone()));
        }
    }
    let subset = match last {
        Some((inst, asg)) => {
            let used = inst.mentions();
            (0..p.n()).filter(|&i| used[i] && asg[i]).collect()
        }
        None => Vec::new(),
    };
    stats.wall_ms = started.elapsed().as_millis() as u64;
    Ok(finish(p, subset, stats))
}

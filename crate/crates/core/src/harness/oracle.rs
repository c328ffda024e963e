//! Exhaustive reference solvers. They enumerate every subset and evaluate
//! properties from per-formula item bitmasks, sharing no search code with
//! the engines.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, Rel};
use crate::prefmodel::{
    compile_tcpnet_to_gai, compile_tcpnet_to_gai_approx, CompileError, GaiFunction, ModelKind,
    TcpNet,
};
use crate::problem::Problem;
use crate::properties::{Domain, PropertyKind, PropertyValue, SetProperty};

pub const DEFAULT_GUARD: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("catalog has {n} items, the oracle enumerates at most {guard}")]
    TooLarge { n: usize, guard: usize },
    #[error("no subset satisfies the required size")]
    Infeasible,
    #[error(transparent)]
    Compile(#[from] CompileError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub assignment: Vec<PropertyValue>,
    /// Lexicographically smallest optimal subset (ascending indices).
    pub witness: Vec<usize>,
    /// Number of subsets attaining the optimal assignment (TCP) or value (GAI).
    pub optimal_count: u64,
}

type Achievable = HashMap<Vec<usize>, (Vec<usize>, u64)>;

enum Eval {
    Vs { phi: u32, rel: Rel, k: i64 },
    VsCount { phi: u32, rel: Rel, psi: u32 },
    Count { phi: u32 },
}

/// Property evaluators over subsets encoded as bitmasks.
struct Evaluator(Vec<Eval>);

impl Evaluator {
    fn new(catalog: &Catalog, props: &[SetProperty]) -> Self {
        let mask = |f: &crate::catalog::Formula| {
            catalog
                .items()
                .iter()
                .enumerate()
                .filter(|(_, o)| f.eval(o))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        };
        Evaluator(
            props
                .iter()
                .map(|p| match &p.kind {
                    PropertyKind::CountVsConst { phi, rel, k } => Eval::Vs {
                        phi: mask(phi),
                        rel: *rel,
                        k: *k,
                    },
                    PropertyKind::CountVsCount { phi, rel, psi } => Eval::VsCount {
                        phi: mask(phi),
                        rel: *rel,
                        psi: mask(psi),
                    },
                    PropertyKind::Counter { phi } => Eval::Count { phi: mask(phi) },
                })
                .collect(),
        )
    }

    /// Domain index of every property (`false = 0`, `true = 1`, counters by count).
    fn indices(&self, s: u32, out: &mut [usize]) {
        let c = |m: u32| (m & s).count_ones() as i64;
        for (o, e) in out.iter_mut().zip(&self.0) {
            *o = match *e {
                Eval::Vs { phi, rel, k } => rel.holds(c(phi), k) as usize,
                Eval::VsCount { phi, rel, psi } => rel.holds(c(phi), c(psi)) as usize,
                Eval::Count { phi } => c(phi) as usize,
            };
        }
    }
}

fn bits(s: u32) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).collect()
}

fn values(props: &[SetProperty], n: usize, idx: &[usize]) -> Vec<PropertyValue> {
    props
        .iter()
        .zip(idx)
        .map(|(p, &i)| p.domain(n).value(i))
        .collect()
}

fn guard_check(n: usize, guard: usize) -> Result<(), OracleError> {
    if n > guard.min(31) {
        Err(OracleError::TooLarge {
            n,
            guard: guard.min(31),
        })
    } else {
        Ok(())
    }
}

/// Subsets of admissible size, in increasing bitmask order.
fn subsets(n: usize, cardinality: Option<usize>) -> impl Iterator<Item = u32> {
    (0u32..1 << n).filter(move |s| cardinality.map_or(true, |k| s.count_ones() as usize == k))
}

/// Maximizes `gai` over all subsets (of size `cardinality` when given).
pub fn brute_force_gai(
    catalog: &Catalog,
    props: &[SetProperty],
    gai: &GaiFunction,
    cardinality: Option<usize>,
    guard: usize,
) -> Result<OracleResult, OracleError> {
    let n = catalog.len();
    guard_check(n, guard)?;
    let ev = Evaluator::new(catalog, props);
    let mut idx = vec![0; props.len()];
    let mut best: Option<(f64, Vec<usize>, Vec<usize>, u64)> = None;
    for s in subsets(n, cardinality) {
        ev.indices(s, &mut idx);
        let v = gai.value_idx(&idx);
        match &mut best {
            Some((bv, _, w, count)) if v == *bv => {
                *count += 1;
                let b = bits(s);
                if b < *w {
                    *w = b;
                }
            }
            Some((bv, ..)) if v < *bv => {}
            _ => best = Some((v, idx.clone(), bits(s), 1)),
        }
    }
    let (value, idx, witness, optimal_count) = best.ok_or(OracleError::Infeasible)?;
    Ok(OracleResult {
        value,
        assignment: values(props, n, &idx),
        witness,
        optimal_count,
    })
}

/// Best achievable assignment in the net's conditional-lexicographic order.
///
/// All achievable assignments are collected first; assignments are then
/// visited best first (topological order, preferred values first) and the
/// first achievable one is returned. `value` is that assignment's value
/// under the net's compiled value function.
pub fn brute_force_tcp(
    catalog: &Catalog,
    props: &[SetProperty],
    net: &TcpNet,
    cardinality: Option<usize>,
    guard: usize,
) -> Result<OracleResult, OracleError> {
    let n = catalog.len();
    guard_check(n, guard)?;
    let gai = match compile_tcpnet_to_gai(net) {
        Err(CompileError::Overflow) => compile_tcpnet_to_gai_approx(net)?,
        other => other?,
    };
    let ev = Evaluator::new(catalog, props);
    let mut idx = vec![0; props.len()];
    // achievable assignment -> (smallest witness, count)
    let mut seen: Achievable = HashMap::new();
    for s in subsets(n, cardinality) {
        ev.indices(s, &mut idx);
        let e = seen.entry(idx.clone()).or_insert((bits(s), 0));
        e.1 += 1;
        if e.1 > 1 {
            let b = bits(s);
            if b < e.0 {
                e.0 = b;
            }
        }
    }
    if seen.is_empty() {
        return Err(OracleError::Infeasible);
    }
    let order = topo(net);
    let mut partial = vec![usize::MAX; props.len()];
    let best =
        lex_first(net, &order, 0, &mut partial, &seen).expect("some assignment is achievable");
    let (witness, count) = seen.remove(&best).expect("found among achievable");
    Ok(OracleResult {
        value: gai.value_idx(&best),
        assignment: values(props, n, &best),
        witness,
        optimal_count: count,
    })
}

/// Kahn's algorithm over cp- and i-arcs, smallest index first.
fn topo(net: &TcpNet) -> Vec<usize> {
    let m = net.len();
    let mut indeg = vec![0usize; m];
    for (_, t) in net.edges() {
        indeg[t] += 1;
    }
    let mut out = Vec::with_capacity(m);
    let mut done = vec![false; m];
    while out.len() < m {
        let v = (0..m)
            .find(|&v| !done[v] && indeg[v] == 0)
            .expect("acyclic net");
        done[v] = true;
        out.push(v);
        for (f, t) in net.edges() {
            if f == v {
                indeg[t] -= 1;
            }
        }
    }
    out
}

fn lex_first(
    net: &TcpNet,
    order: &[usize],
    depth: usize,
    partial: &mut Vec<usize>,
    seen: &Achievable,
) -> Option<Vec<usize>> {
    if depth == order.len() {
        return seen
            .contains_key(partial.as_slice())
            .then(|| partial.clone());
    }
    let p = order[depth];
    let dom: Domain = net.domains[p];
    let ctx = partial.clone();
    let pref = net.order_at(p, |q| ctx[q]).values(dom);
    for v in pref {
        partial[p] = dom.index(v).expect("value in domain");
        let fixed: Vec<usize> = order[..=depth].to_vec();
        let reachable = seen
            .keys()
            .any(|a| fixed.iter().all(|&q| a[q] == partial[q]));
        if reachable {
            if let Some(a) = lex_first(net, order, depth + 1, partial, seen) {
                return Some(a);
            }
        }
    }
    partial[p] = usize::MAX;
    None
}

/// Dispatches on the problem's model.
pub fn oracle(p: &Problem, guard: usize) -> Result<OracleResult, OracleError> {
    match &p.model.kind {
        ModelKind::Tcp(net) => brute_force_tcp(&p.catalog, &p.props, net, p.cardinality(), guard),
        ModelKind::Gai(g) => brute_force_gai(&p.catalog, &p.props, g, p.cardinality(), guard),
    }
}

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::properties::{Domain, PropertyAssignment, PropertyValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TcpError {
    #[error("preference graph has a cycle through {0:?}")]
    Cycle(Vec<usize>),
    #[error("node {node}: CP table has no row for parent context {context:?}")]
    IncompleteTable {
        node: usize,
        context: Vec<PropertyValue>,
    },
    #[error("node {node}: order {order:?} is not a total order over the domain")]
    BadOrder {
        node: usize,
        order: Vec<PropertyValue>,
    },
    #[error("arc {0} -> {1} references an unknown node")]
    UnknownNode(usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("conditional importance arcs are not supported")]
    ConditionalImportance,
    #[error("node {node}: parent {parent} is not assigned")]
    MissingParent { node: usize, parent: usize },
}

/// Best-first ordering of one property's values in one parent context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueOrder {
    Explicit(Vec<PropertyValue>),
    /// Smaller values first.
    Ascending,
    /// Larger values first.
    Descending,
}

impl ValueOrder {
    /// Values best first.
    pub fn values(&self, dom: Domain) -> Vec<PropertyValue> {
        match self {
            ValueOrder::Explicit(v) => v.clone(),
            ValueOrder::Ascending => dom.values().collect(),
            ValueOrder::Descending => {
                let mut v: Vec<_> = dom.values().collect();
                v.reverse();
                v
            }
        }
    }

    /// Position of domain index `idx` in the order, best = 0.
    pub fn rank(&self, dom: Domain, idx: usize) -> usize {
        match self {
            ValueOrder::Explicit(v) => v
                .iter()
                .position(|&x| dom.index(x) == Some(idx))
                .unwrap_or(usize::MAX),
            ValueOrder::Ascending => idx,
            ValueOrder::Descending => dom.size() - 1 - idx,
        }
    }

    fn is_total(&self, dom: Domain) -> bool {
        match self {
            ValueOrder::Explicit(v) => {
                let mut seen = vec![false; dom.size()];
                v.len() == dom.size()
                    && v.iter().all(|&x| match dom.index(x) {
                        Some(i) if !seen[i] => {
                            seen[i] = true;
                            true
                        }
                        _ => false,
                    })
            }
            _ => true,
        }
    }
}

/// Acyclic TCP-net without conditional importance. Node `i` is property `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TcpNet {
    pub domains: Vec<Domain>,
    pub cp_parents: Vec<Vec<usize>>,
    /// Per node, one slot per parent context in mixed radix (first parent
    /// most significant). `None` marks a missing row.
    pub cp_tables: Vec<Vec<Option<ValueOrder>>>,
    pub i_arcs: Vec<(usize, usize)>,
}

impl TcpNet {
    /// Net with no arcs and empty CP tables.
    pub fn new(domains: Vec<Domain>) -> Self {
        let m = domains.len();
        TcpNet {
            domains,
            cp_parents: vec![Vec::new(); m],
            cp_tables: vec![vec![None]; m],
            i_arcs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    /// Replaces `node`'s parents; clears its table.
    pub fn set_parents(&mut self, node: usize, parents: Vec<usize>) {
        let rows = parents
            .iter()
            .map(|&p| self.domains.get(p).map_or(1, |d| d.size()))
            .product();
        self.cp_parents[node] = parents;
        self.cp_tables[node] = vec![None; rows];
    }

    /// Sets the row of `node`'s table for the parent values `context`
    /// (aligned with `cp_parents[node]`).
    pub fn set_order(
        &mut self,
        node: usize,
        context: &[PropertyValue],
        order: ValueOrder,
    ) -> Result<(), TcpError> {
        let row = self
            .context_index(node, context)
            .ok_or_else(|| TcpError::IncompleteTable {
                node,
                context: context.to_vec(),
            })?;
        self.cp_tables[node][row] = Some(order);
        Ok(())
    }

    /// Same order for every parent context.
    pub fn set_order_all(&mut self, node: usize, order: ValueOrder) {
        for row in &mut self.cp_tables[node] {
            *row = Some(order.clone());
        }
    }

    pub fn add_i_arc(&mut self, from: usize, to: usize) {
        self.i_arcs.push((from, to));
    }

    fn context_index(&self, node: usize, context: &[PropertyValue]) -> Option<usize> {
        let parents = &self.cp_parents[node];
        if parents.len() != context.len() {
            return None;
        }
        let mut idx = 0;
        for (&p, &v) in parents.iter().zip(context) {
            let d = self.domains[p];
            idx = idx * d.size() + d.index(v)?;
        }
        Some(idx)
    }

    /// Parent context as a row index, read from value indices.
    pub fn context_row(&self, node: usize, value_idx: impl Fn(usize) -> usize) -> usize {
        self.cp_parents[node]
            .iter()
            .fold(0, |acc, &p| acc * self.domains[p].size() + value_idx(p))
    }

    fn context_of_row(&self, node: usize, mut row: usize) -> Vec<PropertyValue> {
        let parents = &self.cp_parents[node];
        let mut out = vec![PropertyValue::Bool(false); parents.len()];
        for (slot, &p) in parents.iter().enumerate().rev() {
            let d = self.domains[p];
            out[slot] = d.value(row % d.size());
            row /= d.size();
        }
        out
    }

    /// All arcs (cp and importance) as `(from, to)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cp_parents
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| (p, c)))
            .chain(self.i_arcs.iter().copied())
    }

    /// The order for `node` given value indices of (at least) its parents.
    pub fn order_at(&self, node: usize, value_idx: impl Fn(usize) -> usize) -> &ValueOrder {
        self.cp_tables[node][self.context_row(node, value_idx)]
            .as_ref()
            .expect("validated net has complete CP tables")
    }
}

/// Checks acyclicity, table completeness and arc sanity. Reports every
/// violation found.
pub fn validate_tcpnet(net: &TcpNet) -> Result<(), Vec<TcpError>> {
    let m = net.len();
    let mut errors = Vec::new();
    for (a, b) in net.edges() {
        if a >= m || b >= m {
            errors.push(TcpError::UnknownNode(a, b));
        } else if a == b {
            errors.push(TcpError::SelfLoop(a));
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    for node in 0..m {
        for (row, slot) in net.cp_tables[node].iter().enumerate() {
            match slot {
                None => errors.push(TcpError::IncompleteTable {
                    node,
                    context: net.context_of_row(node, row),
                }),
                Some(order) if !order.is_total(net.domains[node]) => {
                    errors.push(TcpError::BadOrder {
                        node,
                        order: order.values(net.domains[node]),
                    })
                }
                Some(_) => {}
            }
        }
    }
    if let Err(cycle) = kahn(net) {
        errors.push(TcpError::Cycle(cycle));
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn kahn(net: &TcpNet) -> Result<Vec<usize>, Vec<usize>> {
    let m = net.len();
    let mut indeg = vec![0usize; m];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (a, b) in net.edges() {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..m).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(m);
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    if order.len() == m {
        Ok(order)
    } else {
        Err((0..m).filter(|&v| indeg[v] > 0).collect())
    }
}

/// Topological order of the cp/i-arc graph; among available nodes the one
/// declared first goes first.
pub fn topo_property_order(net: &TcpNet) -> Vec<usize> {
    kahn(net).expect("validated net is acyclic")
}

/// CP-table row for `p` under the parent values in `ctx`, best first.
pub fn preferred_value_order(
    net: &TcpNet,
    p: usize,
    ctx: &PropertyAssignment,
) -> Result<Vec<PropertyValue>, TcpError> {
    let mut idx = Vec::with_capacity(net.cp_parents[p].len());
    for &q in &net.cp_parents[p] {
        let v = ctx
            .get(q)
            .copied()
            .flatten()
            .and_then(|v| net.domains[q].index(v))
            .ok_or(TcpError::MissingParent { node: p, parent: q })?;
        idx.push(v);
    }
    let row = idx
        .iter()
        .zip(&net.cp_parents[p])
        .fold(0, |acc, (&i, &q)| acc * net.domains[q].size() + i);
    let order = net.cp_tables[p][row]
        .as_ref()
        .ok_or_else(|| TcpError::IncompleteTable {
            node: p,
            context: net.context_of_row(p, row),
        })?;
    Ok(order.values(net.domains[p]))
}

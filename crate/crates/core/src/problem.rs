//! A complete problem instance and the result/statistics types shared by
//! every engine.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::catalog::Catalog;
use crate::prefmodel::{
    compile_tcpnet_to_gai_approx, CompileError, GaiFunction, ModelKind, PreferenceModel,
};
use crate::properties::{Domain, PropertyTable, PropertyValue, SetProperty};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("model covers {model} properties but {props} are defined")]
    PropertyCount { model: usize, props: usize },
    #[error("property {0}: model domain differs from the property's domain")]
    DomainMismatch(usize),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Catalog, properties and preference model, plus derived lookup tables.
#[derive(Debug, Clone)]
pub struct Problem {
    pub catalog: Catalog,
    pub props: Vec<SetProperty>,
    pub model: PreferenceModel,
    pub table: PropertyTable,
    /// The model's value function (compiled for TCP-nets).
    pub gai: GaiFunction,
    /// False when a TCP-net is too large for an exact compiled value
    /// function; `gai` then only approximates the net's order.
    pub exact_values: bool,
}

impl Problem {
    pub fn new(
        catalog: Catalog,
        props: Vec<SetProperty>,
        model: PreferenceModel,
    ) -> Result<Self, ProblemError> {
        if model.num_properties() != props.len() {
            return Err(ProblemError::PropertyCount {
                model: model.num_properties(),
                props: props.len(),
            });
        }
        let domains = match &model.kind {
            ModelKind::Tcp(n) => &n.domains,
            ModelKind::Gai(g) => &g.domains,
        };
        for (p, prop) in props.iter().enumerate() {
            if domains[p] != prop.domain(catalog.len()) {
                return Err(ProblemError::DomainMismatch(p));
            }
        }
        let (gai, exact_values) = match (model.value_function(), &model.kind) {
            (Ok(g), _) => (g, true),
            (Err(CompileError::Overflow), ModelKind::Tcp(net)) => {
                (compile_tcpnet_to_gai_approx(net)?, false)
            }
            (Err(e), _) => return Err(e.into()),
        };
        let table = PropertyTable::new(&catalog, &props, model.cardinality.is_some());
        Ok(Problem {
            catalog,
            props,
            model,
            table,
            gai,
            exact_values,
        })
    }

    pub fn n(&self) -> usize {
        self.catalog.len()
    }

    pub fn m(&self) -> usize {
        self.props.len()
    }

    pub fn domains(&self) -> Vec<Domain> {
        self.props.iter().map(|p| p.domain(self.n())).collect()
    }

    pub fn cardinality(&self) -> Option<usize> {
        self.model.cardinality
    }

    /// Whether a subset of this size meets the required cardinality.
    pub fn size_ok(&self, size: usize) -> bool {
        self.model.cardinality.map_or(true, |k| k == size)
    }

    pub fn evaluate(&self, subset: &[usize]) -> Vec<PropertyValue> {
        self.table.values(&self.props, &self.table.counts(subset))
    }

    pub fn value_of(&self, values: &[PropertyValue]) -> f64 {
        let idx: Vec<usize> = values
            .iter()
            .zip(self.domains())
            .map(|(&v, d)| d.index(v).expect("value in domain"))
            .collect();
        self.gai.value_idx(&idx)
    }

    /// Sorted item ids of a subset.
    pub fn ids(&self, subset: &[usize]) -> Vec<String> {
        self.catalog
            .ids_of(subset)
            .into_iter()
            .map(String::from)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The returned subset is optimal.
    Optimal,
    /// A limit was hit; the result is the best found so far.
    LimitReached,
    /// No subset satisfies the hard constraints.
    Infeasible,
}

/// Counters gathered during a run. Engines fill the fields that apply.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Subset-space: subsets generated / expanded / generated before the
    /// final incumbent was found.
    pub nodes_generated: u64,
    pub nodes_expanded: u64,
    pub nodes_until_opt: u64,
    /// Tree-of-CSPs: property-tree nodes, CSPs actually searched, property-
    /// level backtracks, witnesses obtained without search.
    pub tree_nodes: u64,
    pub csps_solved: u64,
    pub property_backtracks: u64,
    pub sibling_inferences: u64,
    pub warm_starts: u64,
    pub ub_prunes: u64,
    /// Item-level search inside the CSP solver.
    pub item_nodes: u64,
    pub item_backtracks: u64,
    pub nogoods_recorded: u64,
    pub nogood_hits: u64,
    pub fc_prunes: u64,
    pub can_must_prunes: u64,
    pub monotone_prunes: u64,
    /// Candidates skipped because an interchangeable one already failed.
    pub interchangeable_skips: u64,
    /// Item touches in the tractable-class solvers.
    pub item_touches: u64,
    pub wall_ms: u64,
}

/// Outcome of an optimization run.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    /// Selected item indices, ascending.
    pub subset: Vec<usize>,
    /// Property values of `subset` (empty when infeasible).
    pub assignment: Vec<PropertyValue>,
    pub value: f64,
    pub status: Status,
    pub proven_optimal: bool,
    pub stats: SolveStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl SearchResult {
    pub fn infeasible(stats: SolveStats, why: impl Into<String>) -> Self {
        SearchResult {
            subset: Vec::new(),
            assignment: Vec::new(),
            value: f64::NEG_INFINITY,
            status: Status::Infeasible,
            proven_optimal: false,
            stats,
            diagnostic: Some(why.into()),
        }
    }
}

/// Resource limits for a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub node_budget: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }

    pub fn timeout(d: Duration) -> Self {
        Limits {
            node_budget: None,
            deadline: Some(Instant::now() + d),
        }
    }

    pub fn with_nodes(mut self, n: u64) -> Self {
        self.node_budget = Some(n);
        self
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::prefmodel::PreferenceModel;
    use crate::properties::tests::{senator_props, senators};

    pub(crate) fn senators_gai() -> Problem {
        let cat = senators();
        let props = senator_props(&cat);
        let model =
            PreferenceModel::gai(crate::prefmodel::gai::tests::president_gai()).with_cardinality(3);
        Problem::new(cat, props, model).unwrap()
    }

    pub(crate) fn senators_tcp() -> Problem {
        let cat = senators();
        let props = senator_props(&cat);
        let model =
            PreferenceModel::tcp(crate::prefmodel::tcp::tests::president()).with_cardinality(3);
        Problem::new(cat, props, model).unwrap()
    }

    #[test]
    fn evaluation() {
        let p = senators_gai();
        let v = p.evaluate(&[0, 1, 3]);
        assert_eq!(v, vec![PropertyValue::Bool(true); 3]);
        assert_eq!(p.value_of(&v), 11.0);
        assert_eq!(p.value_of(&p.evaluate(&[])), 5.0);
        assert!(p.size_ok(3) && !p.size_ok(2));
    }
}

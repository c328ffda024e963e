use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::gai::{GaiError, GaiFunction};
use super::tcp::{validate_tcpnet, TcpError, TcpNet, ValueOrder};
use super::{ModelKind, PreferenceModel};
use crate::catalog::AttributeSchema;
use crate::properties::{PropertyError, PropertyFile, PropertyValue, SetProperty};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown model kind `{0}` (expected `tcp` or `gai`)")]
    UnknownKind(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("conditional importance arcs are not supported")]
    ConditionalImportance,
    #[error("property `{prop}`: bad value order: {msg}")]
    BadOrder { prop: String, msg: String },
    #[error("property `{prop}`: context must assign exactly its cp-parents")]
    BadContext { prop: String },
    #[error("factor over {scope:?}: {msg}")]
    BadFactor { scope: Vec<String>, msg: String },
    #[error("model has {got} properties but {expected} were given")]
    PropertyCount { got: usize, expected: usize },
    #[error("invalid TCP-net: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Tcp(Vec<TcpError>),
    #[error("invalid GAI function: {0}")]
    Gai(#[from] GaiError),
    #[error(transparent)]
    Property(#[from] PropertyError),
}

/// JSON shape of a preference model.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ModelFile {
    pub kind: String,
    /// Inline property definitions; used when no separate property file is given.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertyFile>,
    /// `[parent, child]` pairs; a child's parents keep their listed order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cp_arcs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cp_tables: BTreeMap<String, Vec<CpRowFile>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub i_arcs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_arcs: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<CardinalityFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpRowFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub when: BTreeMap<String, PropertyValue>,
    /// A list of values best first, or `"ascending"` / `"descending"`.
    pub order: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorFile {
    pub scope: Vec<String>,
    pub table: Vec<FactorRowFile>,
    /// Value for combinations not listed in `table`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorRowFile {
    pub values: Vec<PropertyValue>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CardinalityFile {
    pub k: usize,
}

impl ModelFile {
    pub fn parse(json: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(json)?)
    }

    /// Inline properties parsed against `schema`.
    pub fn inline_properties(
        &self,
        schema: &AttributeSchema,
    ) -> Result<Vec<SetProperty>, ModelError> {
        Ok(self
            .properties
            .iter()
            .cloned()
            .map(|p| p.into_property(schema))
            .collect::<Result<_, _>>()?)
    }

    /// Builds and validates the model over `props` for a catalog of `n` items.
    pub fn into_model(
        &self,
        props: &[SetProperty],
        n: usize,
    ) -> Result<PreferenceModel, ModelError> {
        if self
            .ci_arcs
            .as_ref()
            .is_some_and(|v| !v.is_null() && v.as_array().map_or(true, |a| !a.is_empty()))
        {
            return Err(ModelError::ConditionalImportance);
        }
        let idx = |id: &str| {
            props
                .iter()
                .position(|p| p.id == id)
                .ok_or_else(|| ModelError::UnknownProperty(id.to_string()))
        };
        let domains: Vec<_> = props.iter().map(|p| p.domain(n)).collect();
        let kind = match self.kind.as_str() {
            "tcp" => {
                let mut net = TcpNet::new(domains.clone());
                let mut parents: Vec<Vec<usize>> = vec![Vec::new(); props.len()];
                for (a, b) in &self.cp_arcs {
                    parents[idx(b)?].push(idx(a)?);
                }
                for (c, ps) in parents.into_iter().enumerate() {
                    net.set_parents(c, ps);
                }
                for (a, b) in &self.i_arcs {
                    net.add_i_arc(idx(a)?, idx(b)?);
                }
                for (id, rows) in &self.cp_tables {
                    let p = idx(id)?;
                    for row in rows {
                        let order = parse_order(id, &row.order)?;
                        if row.when.len() != net.cp_parents[p].len() {
                            return Err(ModelError::BadContext { prop: id.clone() });
                        }
                        let mut ctx = Vec::with_capacity(row.when.len());
                        for &q in &net.cp_parents[p] {
                            let v = row
                                .when
                                .get(&props[q].id)
                                .ok_or_else(|| ModelError::BadContext { prop: id.clone() })?;
                            ctx.push(*v);
                        }
                        net.set_order(p, &ctx, order)
                            .map_err(|_| ModelError::BadContext { prop: id.clone() })?;
                    }
                }
                validate_tcpnet(&net).map_err(ModelError::Tcp)?;
                ModelKind::Tcp(net)
            }
            "gai" => {
                let mut g = GaiFunction::new(domains.clone());
                for f in &self.factors {
                    let scope = f
                        .scope
                        .iter()
                        .map(|s| idx(s))
                        .collect::<Result<Vec<_>, _>>()?;
                    let bad = |msg: String| ModelError::BadFactor {
                        scope: f.scope.clone(),
                        msg,
                    };
                    let len = g.table_len(&scope);
                    let mut table = vec![f.default; len];
                    for row in &f.table {
                        if row.values.len() != scope.len() {
                            return Err(bad(format!(
                                "row {:?} does not match the scope",
                                row.values
                            )));
                        }
                        let mut e = 0;
                        for (&p, &v) in scope.iter().zip(&row.values) {
                            let i = domains[p].index(v).ok_or_else(|| {
                                bad(format!("value {v} outside the domain of `{}`", props[p].id))
                            })?;
                            e = e * domains[p].size() + i;
                        }
                        table[e] = Some(row.value);
                    }
                    let table = table
                        .into_iter()
                        .enumerate()
                        .map(|(e, v)| {
                            v.ok_or_else(|| {
                                bad(format!(
                                    "no entry for {:?} and no default",
                                    g.decode(&scope, e)
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    g.add_factor(scope, table);
                }
                g.validate()?;
                ModelKind::Gai(g)
            }
            other => return Err(ModelError::UnknownKind(other.to_string())),
        };
        Ok(PreferenceModel {
            kind,
            cardinality: self.cardinality.map(|c| c.k),
        })
    }

    /// File form of `model` (properties inlined when `schema` is given).
    pub fn from_model(
        model: &PreferenceModel,
        props: &[SetProperty],
        schema: Option<&AttributeSchema>,
    ) -> Self {
        let id = |p: usize| props[p].id.clone();
        let mut file = ModelFile {
            properties: schema.map_or_else(Vec::new, |s| {
                props
                    .iter()
                    .map(|p| PropertyFile::from_property(p, s))
                    .collect()
            }),
            cardinality: model.cardinality.map(|k| CardinalityFile { k }),
            ..ModelFile::default()
        };
        match &model.kind {
            ModelKind::Tcp(net) => {
                file.kind = "tcp".into();
                for (c, ps) in net.cp_parents.iter().enumerate() {
                    for &p in ps {
                        file.cp_arcs.push((id(p), id(c)));
                    }
                }
                file.i_arcs = net.i_arcs.iter().map(|&(a, b)| (id(a), id(b))).collect();
                for p in 0..net.len() {
                    let mut rows = Vec::new();
                    for (r, order) in net.cp_tables[p].iter().enumerate() {
                        let Some(order) = order else { continue };
                        let mut when = BTreeMap::new();
                        let mut rest = r;
                        for &q in net.cp_parents[p].iter().rev() {
                            let d = net.domains[q];
                            when.insert(id(q), d.value(rest % d.size()));
                            rest /= d.size();
                        }
                        let order = match order {
                            ValueOrder::Ascending => Value::from("ascending"),
                            ValueOrder::Descending => Value::from("descending"),
                            ValueOrder::Explicit(v) => {
                                serde_json::to_value(v).expect("values serialize")
                            }
                        };
                        rows.push(CpRowFile { when, order });
                    }
                    file.cp_tables.insert(id(p), rows);
                }
            }
            ModelKind::Gai(g) => {
                file.kind = "gai".into();
                for f in &g.factors {
                    file.factors.push(FactorFile {
                        scope: f.scope.iter().map(|&p| id(p)).collect(),
                        table: f
                            .table
                            .iter()
                            .enumerate()
                            .map(|(e, &value)| FactorRowFile {
                                values: g.decode(&f.scope, e),
                                value,
                            })
                            .collect(),
                        default: None,
                    });
                }
            }
        }
        file
    }
}

fn parse_order(prop: &str, v: &Value) -> Result<ValueOrder, ModelError> {
    let bad = |msg: &str| ModelError::BadOrder {
        prop: prop.to_string(),
        msg: msg.to_string(),
    };
    match v {
        Value::String(s) if s == "ascending" => Ok(ValueOrder::Ascending),
        Value::String(s) if s == "descending" => Ok(ValueOrder::Descending),
        Value::Array(_) => serde_json::from_value(v.clone())
            .map(ValueOrder::Explicit)
            .map_err(|_| bad("expected a list of booleans or integers")),
        _ => Err(bad("expected a list, \"ascending\" or \"descending\"")),
    }
}

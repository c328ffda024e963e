//! Set properties: count predicates and counters over subsets of a catalog.

mod conflicts;
mod constraints;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{parse_formula, AttributeSchema, Catalog, Formula, ParseError, Rel};

pub use conflicts::{
    count_set_relation, resolve_offline_conflicts, ConflictKind, ConflictPair, ConflictReport,
};
pub use constraints::{property_to_constraints, Allowed, CardinalityConstraint};
pub use table::{PropertyTable, RemainingCounts};

#[derive(Debug, Error)]
pub enum PropertyError {
    #[error("property `{id}`: {source}")]
    Formula {
        id: String,
        #[source]
        source: ParseError,
    },
    #[error("property `{0}`: missing field `{1}`")]
    MissingField(String, &'static str),
    #[error("property `{id}`: unknown kind `{kind}`")]
    UnknownKind { id: String, kind: String },
    #[error("property `{id}`: bound must be non-negative")]
    NegativeBound { id: String },
    #[error("duplicate property id `{0}`")]
    DuplicateId(String),
    #[error("malformed property file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    /// `|phi| REL k`
    CountVsConst { phi: Formula, rel: Rel, k: i64 },
    /// `|phi| REL |psi|`
    CountVsCount {
        phi: Formula,
        rel: Rel,
        psi: Formula,
    },
    /// `|phi|` itself, valued in `0..=n`.
    Counter { phi: Formula },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetProperty {
    pub id: String,
    pub kind: PropertyKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Bool(bool),
    Int(i64),
}

impl PropertyValue {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            PropertyValue::Bool(b) => Some(b),
            PropertyValue::Int(_) => None,
        }
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Bool(true) => f.write_str("T"),
            PropertyValue::Bool(false) => f.write_str("F"),
            PropertyValue::Int(i) => write!(f, "{i}"),
        }
    }
}

/// One slot per property, `None` when unassigned.
pub type PropertyAssignment = Vec<Option<PropertyValue>>;

/// Value domain of a property. Values are addressed by a dense index:
/// `false = 0`, `true = 1` for booleans, the count itself for counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Bool,
    Count(usize),
}

impl Domain {
    pub fn size(self) -> usize {
        match self {
            Domain::Bool => 2,
            Domain::Count(n) => n + 1,
        }
    }

    pub fn value(self, idx: usize) -> PropertyValue {
        match self {
            Domain::Bool => PropertyValue::Bool(idx == 1),
            Domain::Count(_) => PropertyValue::Int(idx as i64),
        }
    }

    pub fn index(self, v: PropertyValue) -> Option<usize> {
        match (self, v) {
            (Domain::Bool, PropertyValue::Bool(b)) => Some(b as usize),
            (Domain::Count(n), PropertyValue::Int(i)) if i >= 0 && (i as usize) <= n => {
                Some(i as usize)
            }
            _ => None,
        }
    }

    pub fn values(self) -> impl Iterator<Item = PropertyValue> {
        (0..self.size()).map(move |i| self.value(i))
    }
}

impl SetProperty {
    pub fn count_vs_const(id: &str, phi: Formula, rel: Rel, k: i64) -> Self {
        SetProperty {
            id: id.to_string(),
            kind: PropertyKind::CountVsConst { phi, rel, k },
        }
    }

    pub fn count_vs_count(id: &str, phi: Formula, rel: Rel, psi: Formula) -> Self {
        SetProperty {
            id: id.to_string(),
            kind: PropertyKind::CountVsCount { phi, rel, psi },
        }
    }

    pub fn counter(id: &str, phi: Formula) -> Self {
        SetProperty {
            id: id.to_string(),
            kind: PropertyKind::Counter { phi },
        }
    }

    pub fn phi(&self) -> &Formula {
        match &self.kind {
            PropertyKind::CountVsConst { phi, .. }
            | PropertyKind::CountVsCount { phi, .. }
            | PropertyKind::Counter { phi } => phi,
        }
    }

    pub fn psi(&self) -> Option<&Formula> {
        match &self.kind {
            PropertyKind::CountVsCount { psi, .. } => Some(psi),
            _ => None,
        }
    }

    pub fn is_boolean(&self) -> bool {
        !matches!(self.kind, PropertyKind::Counter { .. })
    }

    /// Value domain for a catalog of `n` items.
    pub fn domain(&self, n: usize) -> Domain {
        if self.is_boolean() {
            Domain::Bool
        } else {
            Domain::Count(n)
        }
    }

    /// Connectives used by the property's formulas.
    pub fn connective_count(&self) -> usize {
        self.phi().connective_count() + self.psi().map_or(0, Formula::connective_count)
    }

    /// Property value given `|phi|` and `|psi|` (the latter ignored unless needed).
    pub fn value_from_counts(&self, c_phi: i64, c_psi: i64) -> PropertyValue {
        match &self.kind {
            PropertyKind::CountVsConst { rel, k, .. } => PropertyValue::Bool(rel.holds(c_phi, *k)),
            PropertyKind::CountVsCount { rel, .. } => PropertyValue::Bool(rel.holds(c_phi, c_psi)),
            PropertyKind::Counter { .. } => PropertyValue::Int(c_phi),
        }
    }

    /// Values reachable by adding any subset of some remaining items.
    ///
    /// `c_phi`/`c_psi` are the current counts. `r_phi` counts remaining
    /// items satisfying phi; `r_phi_only`/`r_psi_only` count remaining items
    /// satisfying exactly one of phi and psi (only used for count-vs-count).
    pub fn reachable_from_counts(
        &self,
        c_phi: i64,
        c_psi: i64,
        r_phi: i64,
        r_phi_only: i64,
        r_psi_only: i64,
    ) -> Vec<PropertyValue> {
        match &self.kind {
            PropertyKind::CountVsConst { rel, k, .. } => {
                let (lo, hi) = (c_phi - k, c_phi - k + r_phi);
                bools(exists_in(lo, hi, rel.negate()), exists_in(lo, hi, *rel))
            }
            // Items in both or neither class leave |phi|-|psi| unchanged, the
            // others shift it by one each, so every integer in the interval
            // below is attainable.
            PropertyKind::CountVsCount { rel, .. } => {
                let d = c_phi - c_psi;
                let (lo, hi) = (d - r_psi_only, d + r_phi_only);
                bools(exists_in(lo, hi, rel.negate()), exists_in(lo, hi, *rel))
            }
            PropertyKind::Counter { .. } => {
                (c_phi..=c_phi + r_phi).map(PropertyValue::Int).collect()
            }
        }
    }
}

fn bools(f: bool, t: bool) -> Vec<PropertyValue> {
    let mut out = Vec::with_capacity(2);
    if f {
        out.push(PropertyValue::Bool(false));
    }
    if t {
        out.push(PropertyValue::Bool(true));
    }
    out
}

/// Does some integer `x` in `[lo, hi]` satisfy `x REL 0`?
fn exists_in(lo: i64, hi: i64, rel: Rel) -> bool {
    if lo > hi {
        return false;
    }
    match rel {
        Rel::Eq => lo <= 0 && 0 <= hi,
        Rel::Ne => lo != 0 || hi != 0,
        Rel::Lt => lo < 0,
        Rel::Le => lo <= 0,
        Rel::Gt => hi > 0,
        Rel::Ge => hi >= 0,
    }
}

/// Value of `p` on the items of `catalog` at the given indices.
pub fn eval_property(p: &SetProperty, catalog: &Catalog, subset: &[usize]) -> PropertyValue {
    let count = |f: &Formula| subset.iter().filter(|&&i| f.eval(catalog.item(i))).count() as i64;
    let c_psi = p.psi().map_or(0, count);
    p.value_from_counts(count(p.phi()), c_psi)
}

/// Values of `p` attainable as `current ∪ E` for some `E ⊆ remaining`,
/// in ascending order.
pub fn reachable_values(
    p: &SetProperty,
    catalog: &Catalog,
    current: &[usize],
    remaining: &[usize],
) -> Vec<PropertyValue> {
    let sat = |f: &Formula, i: usize| f.eval(catalog.item(i));
    let c_phi = current.iter().filter(|&&i| sat(p.phi(), i)).count() as i64;
    let c_psi = p.psi().map_or(0, |psi| {
        current.iter().filter(|&&i| sat(psi, i)).count() as i64
    });
    let r_phi = remaining.iter().filter(|&&i| sat(p.phi(), i)).count() as i64;
    let (mut r_phi_only, mut r_psi_only) = (0, 0);
    if let Some(psi) = p.psi() {
        for &i in remaining {
            match (sat(p.phi(), i), sat(psi, i)) {
                (true, false) => r_phi_only += 1,
                (false, true) => r_psi_only += 1,
                _ => {}
            }
        }
    }
    p.reachable_from_counts(c_phi, c_psi, r_phi, r_phi_only, r_psi_only)
}

/// JSON shape of a property definition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyFile {
    pub id: String,
    pub kind: String,
    pub phi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel: Option<Rel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
}

impl PropertyFile {
    pub fn into_property(self, schema: &AttributeSchema) -> Result<SetProperty, PropertyError> {
        let parse = |text: &str, id: &str| {
            parse_formula(text, schema).map_err(|source| PropertyError::Formula {
                id: id.to_string(),
                source,
            })
        };
        let phi = parse(&self.phi, &self.id)?;
        let rel = || {
            self.rel
                .ok_or_else(|| PropertyError::MissingField(self.id.clone(), "rel"))
        };
        let kind = match self.kind.as_str() {
            "count_vs_const" => {
                let k = self
                    .k
                    .ok_or_else(|| PropertyError::MissingField(self.id.clone(), "k"))?;
                if k < 0 {
                    return Err(PropertyError::NegativeBound { id: self.id });
                }
                PropertyKind::CountVsConst {
                    phi,
                    rel: rel()?,
                    k,
                }
            }
            "count_vs_count" => {
                let psi = self
                    .psi
                    .as_deref()
                    .ok_or_else(|| PropertyError::MissingField(self.id.clone(), "psi"))?;
                PropertyKind::CountVsCount {
                    phi,
                    rel: rel()?,
                    psi: parse(psi, &self.id)?,
                }
            }
            "counter" => PropertyKind::Counter { phi },
            other => {
                return Err(PropertyError::UnknownKind {
                    id: self.id.clone(),
                    kind: other.to_string(),
                })
            }
        };
        Ok(SetProperty { id: self.id, kind })
    }

    pub fn from_property(p: &SetProperty, schema: &AttributeSchema) -> Self {
        let text = |f: &Formula| f.display(schema).to_string();
        match &p.kind {
            PropertyKind::CountVsConst { phi, rel, k } => PropertyFile {
                id: p.id.clone(),
                kind: "count_vs_const".into(),
                phi: text(phi),
                rel: Some(*rel),
                k: Some(*k),
                psi: None,
            },
            PropertyKind::CountVsCount { phi, rel, psi } => PropertyFile {
                id: p.id.clone(),
                kind: "count_vs_count".into(),
                phi: text(phi),
                rel: Some(*rel),
                k: None,
                psi: Some(text(psi)),
            },
            PropertyKind::Counter { phi } => PropertyFile {
                id: p.id.clone(),
                kind: "counter".into(),
                phi: text(phi),
                rel: None,
                k: None,
                psi: None,
            },
        }
    }
}

/// Parses a JSON array of property definitions.
pub fn load_properties(
    json: &str,
    schema: &AttributeSchema,
) -> Result<Vec<SetProperty>, PropertyError> {
    let files: Vec<PropertyFile> = serde_json::from_str(json)?;
    let mut out: Vec<SetProperty> = Vec::with_capacity(files.len());
    for f in files {
        let p = f.into_property(schema)?;
        if out.iter().any(|q| q.id == p.id) {
            return Err(PropertyError::DuplicateId(p.id));
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::catalog::{load_catalog, Attribute, CatalogFormat};

    pub(crate) fn senators() -> Catalog {
        let schema = AttributeSchema::new(vec![
            Attribute::categorical("Party", ["Republican", "Democrat"]),
            Attribute::categorical("View", ["liberal", "conservative", "ultra conservative"]),
            Attribute::categorical("Experience", ["experienced", "inexperienced"]),
        ])
        .unwrap();
        let text = "id,Party,View,Experience
o1,Republican,conservative,inexperienced
o2,Republican,ultra conservative,experienced
o3,Democrat,conservative,experienced
o4,Democrat,liberal,experienced
";
        load_catalog(text.as_bytes(), CatalogFormat::Csv, Some(&schema)).unwrap()
    }

    pub(crate) fn senator_props(cat: &Catalog) -> Vec<SetProperty> {
        let s = cat.schema();
        let f = |t: &str| parse_formula(t, s).unwrap();
        vec![
            SetProperty::count_vs_const(
                "P1",
                f("Party = Republican | View = conservative"),
                Rel::Ge,
                2,
            ),
            SetProperty::count_vs_const("P2", f("Experience = experienced"), Rel::Ge, 2),
            SetProperty::count_vs_const("P3", f("View = liberal"), Rel::Ge, 1),
        ]
    }

    const T: PropertyValue = PropertyValue::Bool(true);
    const F: PropertyValue = PropertyValue::Bool(false);

    #[test]
    fn evaluation_examples() {
        let cat = senators();
        let p = senator_props(&cat);
        assert_eq!(eval_property(&p[1], &cat, &[0, 1]), F);
        assert_eq!(eval_property(&p[0], &cat, &[0, 1, 2]), T);
        let sum = SetProperty::counter("SUM", Formula::True);
        assert_eq!(eval_property(&sum, &cat, &[]), PropertyValue::Int(0));
        assert_eq!(eval_property(&sum, &cat, &[0, 3]), PropertyValue::Int(2));
        assert_eq!(crate::catalog::count_satisfying(p[1].phi(), cat.items()), 3);
    }

    #[test]
    fn reachability_examples() {
        let cat = senators();
        let p = senator_props(&cat);
        assert_eq!(reachable_values(&p[1], &cat, &[1, 2], &[0, 3]), vec![T]);
        assert_eq!(reachable_values(&p[1], &cat, &[1], &[0, 2, 3]), vec![F, T]);
        assert_eq!(reachable_values(&p[2], &cat, &[], &[]), vec![F]);
    }

    #[test]
    fn property_file() {
        let cat = senators();
        let json = r#"[
            {"id": "P1", "kind": "count_vs_const", "phi": "Party = Republican | View = conservative", "rel": ">=", "k": 2},
            {"id": "D", "kind": "count_vs_count", "phi": "Party = Democrat", "rel": ">", "psi": "Party = Republican"},
            {"id": "SUM", "kind": "counter", "phi": "true"}
        ]"#;
        let props = load_properties(json, cat.schema()).unwrap();
        assert_eq!(props[0], senator_props(&cat)[0]);
        assert!(matches!(
            props[1].kind,
            PropertyKind::CountVsCount { rel: Rel::Gt, .. }
        ));
        assert_eq!(props[2].domain(4), Domain::Count(4));
        let back: Vec<_> = props
            .iter()
            .map(|p| PropertyFile::from_property(p, cat.schema()))
            .collect();
        let again = load_properties(&serde_json::to_string(&back).unwrap(), cat.schema()).unwrap();
        assert_eq!(again, props);
        let bad = r#"[{"id": "X", "kind": "count_vs_const", "phi": "Genre = Comedy", "rel": ">=", "k": 1}]"#;
        assert!(matches!(
            load_properties(bad, cat.schema()),
            Err(PropertyError::Formula { .. })
        ));
    }
}

//! Attribute schemas, items and catalogs.
//!
//! A [`Catalog`] is the pool of selectable items. Every item carries one value
//! per schema attribute; the position of an item inside the catalog is its
//! canonical index and every solver refers to items by that index.

mod formula;
mod load;
mod parser;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use formula::{Atom, Formula, Rel};
pub use load::{load_catalog, CatalogFormat};
pub use parser::{parse_formula, ParseError};

#[derive(Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("duplicate attribute `{0}` in schema")]
    DuplicateAttribute(String),
    #[error("categorical attribute `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("categorical attribute `{attr}` lists value `{value}` twice")]
    DuplicateDomainValue { attr: String, value: String },
    #[error("integer attribute `{0}` has lo > hi")]
    BadRange(String),
    #[error("duplicate item id `{0}`")]
    DuplicateItem(String),
    #[error("item `{item}`: missing value for attribute `{attr}`")]
    MissingValue { item: String, attr: String },
    #[error("item `{item}`: unknown attribute `{attr}`")]
    UnknownAttribute { item: String, attr: String },
    #[error("item `{item}`: value `{value}` is outside the domain of `{attr}`")]
    SchemaViolation {
        item: String,
        attr: String,
        value: String,
    },
    #[error("record {record}: {msg}")]
    Malformed { record: usize, msg: String },
}

/// Kind and domain of an attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttrKind {
    Categorical(Vec<String>),
    Integer { lo: Option<i64>, hi: Option<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttrKind,
}

impl Attribute {
    pub fn categorical<S: Into<String>>(name: &str, domain: impl IntoIterator<Item = S>) -> Self {
        Attribute {
            name: name.to_string(),
            kind: AttrKind::Categorical(domain.into_iter().map(Into::into).collect()),
        }
    }

    pub fn integer(name: &str, lo: Option<i64>, hi: Option<i64>) -> Self {
        Attribute {
            name: name.to_string(),
            kind: AttrKind::Integer { lo, hi },
        }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.kind, AttrKind::Categorical(_))
    }

    /// Index of `value` in a categorical domain.
    pub fn category(&self, value: &str) -> Option<u32> {
        match &self.kind {
            AttrKind::Categorical(dom) => dom.iter().position(|v| v == value).map(|i| i as u32),
            AttrKind::Integer { .. } => None,
        }
    }

    fn admits_int(&self, v: i64) -> bool {
        match self.kind {
            AttrKind::Integer { lo, hi } => {
                lo.map_or(true, |lo| v >= lo) && hi.map_or(true, |hi| v <= hi)
            }
            AttrKind::Categorical(_) => false,
        }
    }

    /// Number of distinct values for categorical attributes, `None` for integers.
    pub fn domain_size(&self) -> Option<usize> {
        match &self.kind {
            AttrKind::Categorical(dom) => Some(dom.len()),
            AttrKind::Integer {
                lo: Some(lo),
                hi: Some(hi),
            } => Some((hi - lo + 1).max(0) as usize),
            AttrKind::Integer { .. } => None,
        }
    }
}

/// Ordered list of attributes with unique names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
    by_name: HashMap<String, usize>,
}

impl AttributeSchema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self, CatalogError> {
        let mut by_name = HashMap::with_capacity(attributes.len());
        for (i, a) in attributes.iter().enumerate() {
            if by_name.insert(a.name.clone(), i).is_some() {
                return Err(CatalogError::DuplicateAttribute(a.name.clone()));
            }
            match &a.kind {
                AttrKind::Categorical(dom) => {
                    if dom.is_empty() {
                        return Err(CatalogError::EmptyDomain(a.name.clone()));
                    }
                    for (j, v) in dom.iter().enumerate() {
                        if dom[..j].contains(v) {
                            return Err(CatalogError::DuplicateDomainValue {
                                attr: a.name.clone(),
                                value: v.clone(),
                            });
                        }
                    }
                }
                AttrKind::Integer {
                    lo: Some(lo),
                    hi: Some(hi),
                } if lo > hi => {
                    return Err(CatalogError::BadRange(a.name.clone()));
                }
                AttrKind::Integer { .. } => {}
            }
        }
        Ok(AttributeSchema {
            attributes,
            by_name,
        })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn attribute(&self, idx: usize) -> &Attribute {
        &self.attributes[idx]
    }

    /// Parses a raw textual value for attribute `idx`.
    pub fn parse_value(&self, idx: usize, raw: &str) -> Option<AttrValue> {
        let attr = &self.attributes[idx];
        match &attr.kind {
            AttrKind::Categorical(_) => attr.category(raw).map(AttrValue::Cat),
            AttrKind::Integer { .. } => raw
                .trim()
                .parse::<i64>()
                .ok()
                .filter(|v| attr.admits_int(*v))
                .map(AttrValue::Int),
        }
    }

    pub fn display_value(&self, idx: usize, v: AttrValue) -> String {
        match (&self.attributes[idx].kind, v) {
            (AttrKind::Categorical(dom), AttrValue::Cat(c)) => dom[c as usize].clone(),
            (_, AttrValue::Int(i)) => i.to_string(),
            (_, AttrValue::Cat(c)) => format!("#{c}"),
        }
    }
}

/// A single attribute value. Categorical values are stored as their index in
/// the attribute's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttrValue {
    Cat(u32),
    Int(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: String,
    /// One value per schema attribute, in schema order.
    pub values: Vec<AttrValue>,
}

/// An attribute schema plus the ordered list of available items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    schema: AttributeSchema,
    items: Vec<Item>,
}

impl Catalog {
    pub fn new(schema: AttributeSchema, items: Vec<Item>) -> Result<Self, CatalogError> {
        let mut seen = HashMap::with_capacity(items.len());
        for item in &items {
            if seen.insert(item.id.as_str(), ()).is_some() {
                return Err(CatalogError::DuplicateItem(item.id.clone()));
            }
            if item.values.len() != schema.len() {
                return Err(CatalogError::MissingValue {
                    item: item.id.clone(),
                    attr: schema
                        .attributes()
                        .get(item.values.len())
                        .map(|a| a.name.clone())
                        .unwrap_or_default(),
                });
            }
            for (i, v) in item.values.iter().enumerate() {
                let attr = schema.attribute(i);
                let ok = match (&attr.kind, v) {
                    (AttrKind::Categorical(dom), AttrValue::Cat(c)) => (*c as usize) < dom.len(),
                    (AttrKind::Integer { .. }, AttrValue::Int(x)) => attr.admits_int(*x),
                    _ => false,
                };
                if !ok {
                    return Err(CatalogError::SchemaViolation {
                        item: item.id.clone(),
                        attr: attr.name.clone(),
                        value: format!("{v:?}"),
                    });
                }
            }
        }
        Ok(Catalog { schema, items })
    }

    /// Builds a catalog from textual values, one row per item in schema order.
    pub fn from_rows<I, R, S>(schema: AttributeSchema, rows: I) -> Result<Self, CatalogError>
    where
        I: IntoIterator<Item = (S, R)>,
        R: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut items = Vec::new();
        for (id, raw) in rows {
            let id = id.as_ref().to_string();
            let mut values = Vec::with_capacity(schema.len());
            for (i, r) in raw.into_iter().enumerate() {
                if i >= schema.len() {
                    return Err(CatalogError::Malformed {
                        record: items.len() + 1,
                        msg: "too many values".into(),
                    });
                }
                let v = schema.parse_value(i, r.as_ref()).ok_or_else(|| {
                    CatalogError::SchemaViolation {
                        item: id.clone(),
                        attr: schema.attribute(i).name.clone(),
                        value: r.as_ref().to_string(),
                    }
                })?;
                values.push(v);
            }
            items.push(Item { id, values });
        }
        Catalog::new(schema, items)
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, idx: usize) -> &Item {
        &self.items[idx]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|o| o.id == id)
    }

    /// Maximum number of times any single attribute value appears.
    pub fn max_multiplicity(&self) -> usize {
        let mut counts: HashMap<(usize, AttrValue), usize> = HashMap::new();
        for item in &self.items {
            for (a, v) in item.values.iter().enumerate() {
                *counts.entry((a, *v)).or_default() += 1;
            }
        }
        counts.values().copied().max().unwrap_or(0)
    }

    pub fn ids_of(&self, subset: &[usize]) -> Vec<&str> {
        subset.iter().map(|&i| self.items[i].id.as_str()).collect()
    }
}

/// Number of items in `subset` satisfying `f`.
pub fn count_satisfying<'a>(f: &Formula, subset: impl IntoIterator<Item = &'a Item>) -> usize {
    subset.into_iter().filter(|o| f.eval(o)).count()
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            write!(f, "{}:", item.id)?;
            for (i, v) in item.values.iter().enumerate() {
                write!(
                    f,
                    " {}={}",
                    self.schema.attribute(i).name,
                    self.schema.display_value(i, *v)
                )?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// JSON shape of a schema: `{"attributes": [{"name", "kind", "domain" | "lo"/"hi"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemaFile {
    pub attributes: Vec<AttributeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributeFile {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<i64>,
}

impl SchemaFile {
    pub fn into_schema(self) -> Result<AttributeSchema, CatalogError> {
        let attrs = self
            .attributes
            .into_iter()
            .map(|a| match a.kind.as_str() {
                "categorical" => Ok(Attribute {
                    name: a.name,
                    kind: AttrKind::Categorical(a.domain.unwrap_or_default()),
                }),
                "integer" => Ok(Attribute {
                    name: a.name,
                    kind: AttrKind::Integer { lo: a.lo, hi: a.hi },
                }),
                other => Err(CatalogError::Malformed {
                    record: 0,
                    msg: format!("attribute `{}`: unknown kind `{other}`", a.name),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        AttributeSchema::new(attrs)
    }

    pub fn from_schema(schema: &AttributeSchema) -> Self {
        SchemaFile {
            attributes: schema
                .attributes()
                .iter()
                .map(|a| match &a.kind {
                    AttrKind::Categorical(dom) => AttributeFile {
                        name: a.name.clone(),
                        kind: "categorical".into(),
                        domain: Some(dom.clone()),
                        lo: None,
                        hi: None,
                    },
                    AttrKind::Integer { lo, hi } => AttributeFile {
                        name: a.name.clone(),
                        kind: "integer".into(),
                        domain: None,
                        lo: *lo,
                        hi: *hi,
                    },
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn party() -> AttributeSchema {
        AttributeSchema::new(vec![
            Attribute::categorical("Party", ["Republican", "Democrat"]),
            Attribute::integer("Year", Some(1900), None),
        ])
        .unwrap()
    }

    #[test]
    fn schema_rejects_duplicates() {
        let err = AttributeSchema::new(vec![
            Attribute::categorical("A", ["x"]),
            Attribute::categorical("A", ["y"]),
        ])
        .unwrap_err();
        assert_eq!(err, CatalogError::DuplicateAttribute("A".into()));
        let err = AttributeSchema::new(vec![Attribute::categorical("A", ["x", "x"])]).unwrap_err();
        assert!(matches!(err, CatalogError::DuplicateDomainValue { .. }));
        let err = AttributeSchema::new(vec![Attribute::categorical::<&str>("A", [])]).unwrap_err();
        assert!(matches!(err, CatalogError::EmptyDomain(_)));
    }

    #[test]
    fn rows_are_validated() {
        let cat = Catalog::from_rows(party(), [("a", ["Democrat", "1999"])]).unwrap();
        assert_eq!(
            cat.item(0).values,
            vec![AttrValue::Cat(1), AttrValue::Int(1999)]
        );
        let err = Catalog::from_rows(party(), [("a", ["Independent", "1999"])]).unwrap_err();
        assert!(matches!(err, CatalogError::SchemaViolation { .. }));
        let err = Catalog::from_rows(party(), [("a", ["Democrat", "1800"])]).unwrap_err();
        assert!(matches!(err, CatalogError::SchemaViolation { .. }));
        let err = Catalog::from_rows(
            party(),
            [("a", ["Democrat", "2000"]), ("a", ["Democrat", "2001"])],
        )
        .unwrap_err();
        assert_eq!(err, CatalogError::DuplicateItem("a".into()));
    }

    #[test]
    fn multiplicity() {
        let schema = AttributeSchema::new(vec![Attribute::categorical("X", ["a", "b"])]).unwrap();
        let cat =
            Catalog::from_rows(schema, [("o1", ["a"]), ("o2", ["a"]), ("o3", ["b"])]).unwrap();
        assert_eq!(cat.max_multiplicity(), 2);
    }
}

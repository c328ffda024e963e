use std::collections::BTreeMap;
use std::io::Read;

use serde::Deserialize;

use super::{AttrValue, AttributeSchema, Catalog, CatalogError, Item, SchemaFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFormat {
    /// Header `id,<attr>,...`, one item per row. Needs an external schema.
    Csv,
    /// `{"schema": {...}, "items": [{"id": .., "values": {..}}]}`. The
    /// embedded schema may be omitted when one is supplied by the caller.
    Json,
}

#[derive(Deserialize)]
struct CatalogFile {
    #[serde(default)]
    schema: Option<SchemaFile>,
    #[serde(default)]
    items: Vec<ItemFile>,
}

#[derive(Deserialize)]
struct ItemFile {
    id: String,
    values: BTreeMap<String, serde_json::Value>,
}

/// Reads a catalog. Items keep their source order.
pub fn load_catalog<R: Read>(
    source: R,
    format: CatalogFormat,
    schema: Option<&AttributeSchema>,
) -> Result<Catalog, CatalogError> {
    match format {
        CatalogFormat::Csv => {
            let schema = schema.ok_or_else(|| CatalogError::Malformed {
                record: 0,
                msg: "CSV catalogs need a schema".into(),
            })?;
            load_csv(source, schema.clone())
        }
        CatalogFormat::Json => load_json(source, schema),
    }
}

fn load_csv<R: Read>(source: R, schema: AttributeSchema) -> Result<Catalog, CatalogError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let header = rdr
        .headers()
        .map_err(|e| CatalogError::Malformed {
            record: 0,
            msg: e.to_string(),
        })?
        .clone();
    if header.get(0) != Some("id") {
        return Err(CatalogError::Malformed {
            record: 0,
            msg: "first column must be `id`".into(),
        });
    }
    // column -> attribute index
    let mut columns = Vec::with_capacity(header.len() - 1);
    for name in header.iter().skip(1) {
        let idx = schema
            .index_of(name)
            .ok_or_else(|| CatalogError::UnknownAttribute {
                item: "<header>".into(),
                attr: name.to_string(),
            })?;
        if columns.contains(&idx) {
            return Err(CatalogError::Malformed {
                record: 0,
                msg: format!("column `{name}` appears twice"),
            });
        }
        columns.push(idx);
    }
    if let Some(missing) = (0..schema.len()).find(|i| !columns.contains(i)) {
        return Err(CatalogError::MissingValue {
            item: "<header>".into(),
            attr: schema.attribute(missing).name.clone(),
        });
    }

    let mut items = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CatalogError::Malformed {
            record: row + 1,
            msg: e.to_string(),
        })?;
        if rec.len() != header.len() {
            return Err(CatalogError::Malformed {
                record: row + 1,
                msg: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let id = rec[0].to_string();
        let mut values = vec![AttrValue::Int(0); schema.len()];
        for (col, &attr) in columns.iter().enumerate() {
            let raw = &rec[col + 1];
            values[attr] =
                schema
                    .parse_value(attr, raw)
                    .ok_or_else(|| CatalogError::SchemaViolation {
                        item: id.clone(),
                        attr: schema.attribute(attr).name.clone(),
                        value: raw.to_string(),
                    })?;
        }
        items.push(Item { id, values });
    }
    Catalog::new(schema, items)
}

fn load_json<R: Read>(
    source: R,
    schema: Option<&AttributeSchema>,
) -> Result<Catalog, CatalogError> {
    let file: CatalogFile =
        serde_json::from_reader(source).map_err(|e| CatalogError::Malformed {
            record: e.line(),
            msg: e.to_string(),
        })?;
    let schema = match (file.schema, schema) {
        (Some(s), _) => s.into_schema()?,
        (None, Some(s)) => s.clone(),
        (None, None) => {
            return Err(CatalogError::Malformed {
                record: 0,
                msg: "no schema given".into(),
            })
        }
    };
    let mut items = Vec::with_capacity(file.items.len());
    for it in file.items {
        let mut values = Vec::with_capacity(schema.len());
        for (i, attr) in schema.attributes().iter().enumerate() {
            let raw = it
                .values
                .get(&attr.name)
                .ok_or_else(|| CatalogError::MissingValue {
                    item: it.id.clone(),
                    attr: attr.name.clone(),
                })?;
            let text = match raw {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let v = schema
                .parse_value(i, &text)
                .ok_or_else(|| CatalogError::SchemaViolation {
                    item: it.id.clone(),
                    attr: attr.name.clone(),
                    value: text.clone(),
                })?;
            values.push(v);
        }
        if let Some(extra) = it.values.keys().find(|k| schema.index_of(k).is_none()) {
            return Err(CatalogError::UnknownAttribute {
                item: it.id.clone(),
                attr: extra.clone(),
            });
        }
        items.push(Item { id: it.id, values });
    }
    Catalog::new(schema, items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Attribute;

    fn schema() -> AttributeSchema {
        AttributeSchema::new(vec![
            Attribute::categorical("Party", ["Republican", "Democrat"]),
            Attribute::categorical("View", ["liberal", "conservative", "ultra conservative"]),
            Attribute::categorical("Experience", ["experienced", "inexperienced"]),
        ])
        .unwrap()
    }

    const SENATORS: &str = "id,Party,View,Experience
o1,Republican,conservative,inexperienced
o2,Republican,ultra conservative,experienced
o3,Democrat,conservative,experienced
o4,Democrat,liberal,experienced
";

    #[test]
    fn csv_senators() {
        let cat = load_catalog(SENATORS.as_bytes(), CatalogFormat::Csv, Some(&schema())).unwrap();
        assert_eq!(cat.len(), 4);
        assert_eq!(cat.item(1).id, "o2");
        assert_eq!(cat.item(1).values[1], AttrValue::Cat(2));
    }

    #[test]
    fn csv_column_order_is_free() {
        let text = "id,Experience,View,Party\na,experienced,liberal,Democrat\n";
        let cat = load_catalog(text.as_bytes(), CatalogFormat::Csv, Some(&schema())).unwrap();
        assert_eq!(
            cat.item(0).values,
            vec![AttrValue::Cat(1), AttrValue::Cat(0), AttrValue::Cat(0)]
        );
    }

    #[test]
    fn empty_and_bad_rows() {
        let cat = load_catalog(
            "id,Party,View,Experience\n".as_bytes(),
            CatalogFormat::Csv,
            Some(&schema()),
        )
        .unwrap();
        assert!(cat.is_empty());
        let bad = "id,Party,View,Experience\no1,Independent,liberal,experienced\n";
        let err = load_catalog(bad.as_bytes(), CatalogFormat::Csv, Some(&schema())).unwrap_err();
        assert!(matches!(err, CatalogError::SchemaViolation { .. }));
        let short = "id,Party,View,Experience\no1,Democrat\n";
        let err = load_catalog(short.as_bytes(), CatalogFormat::Csv, Some(&schema())).unwrap_err();
        assert!(matches!(err, CatalogError::Malformed { record: 1, .. }));
    }

    #[test]
    fn json_roundtrip_shape() {
        let text = r#"{
            "schema": {"attributes": [
                {"name": "Genre", "kind": "categorical", "domain": ["Comedy", "Drama"]},
                {"name": "Year", "kind": "integer", "lo": 1900, "hi": 2100}
            ]},
            "items": [
                {"id": "m1", "values": {"Genre": "Drama", "Year": 2003}},
                {"id": "m2", "values": {"Genre": "Comedy", "Year": "1950"}}
            ]
        }"#;
        let cat = load_catalog(text.as_bytes(), CatalogFormat::Json, None).unwrap();
        assert_eq!(
            cat.item(0).values,
            vec![AttrValue::Cat(1), AttrValue::Int(2003)]
        );
        assert_eq!(cat.item(1).values[1], AttrValue::Int(1950));
        let dup = r#"{"schema": {"attributes": [{"name": "G", "kind": "categorical", "domain": ["a"]}]},
            "items": [{"id": "x", "values": {"G": "a"}}, {"id": "x", "values": {"G": "a"}}]}"#;
        assert!(matches!(
            load_catalog(dup.as_bytes(), CatalogFormat::Json, None),
            Err(CatalogError::DuplicateItem(_))
        ));
    }
}

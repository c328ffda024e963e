use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AttrValue, AttributeSchema, Item};

/// Relational operator over integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Rel {
    pub const ALL: [Rel; 6] = [Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge];

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Rel::Eq => lhs == rhs,
            Rel::Ne => lhs != rhs,
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Ge => lhs >= rhs,
        }
    }

    /// The relation holding exactly when `self` does not.
    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Rel> {
        Some(match s {
            "=" | "==" => Rel::Eq,
            "!=" => Rel::Ne,
            "<" => Rel::Lt,
            "<=" => Rel::Le,
            ">" => Rel::Gt,
            ">=" => Rel::Ge,
            _ => return None,
        })
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `attr REL value`. Categorical attributes only admit `=` and `!=`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub attr: usize,
    pub rel: Rel,
    pub value: AttrValue,
}

impl Atom {
    pub fn eval(&self, item: &Item) -> bool {
        match (item.values[self.attr], self.value) {
            (AttrValue::Cat(a), AttrValue::Cat(b)) => match self.rel {
                Rel::Eq => a == b,
                Rel::Ne => a != b,
                _ => false,
            },
            (AttrValue::Int(a), AttrValue::Int(b)) => self.rel.holds(a, b),
            _ => false,
        }
    }
}

/// Propositional item formula over attribute atoms.
///
/// Connectives are binary so that [`Formula::connective_count`] matches the
/// usual count of logical operators (`a | b | c` has two).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(attr: usize, rel: Rel, value: AttrValue) -> Formula {
        Formula::Atom(Atom { attr, rel, value })
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-folded disjunction; `None` for an empty iterator.
    pub fn any(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    pub fn eval(&self, item: &Item) -> bool {
        match self {
            Formula::True => true,
            Formula::Atom(a) => a.eval(item),
            Formula::Not(f) => !f.eval(item),
            Formula::And(a, b) => a.eval(item) && b.eval(item),
            Formula::Or(a, b) => a.eval(item) || b.eval(item),
        }
    }

    /// Number of AND/OR/NOT nodes.
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.connective_count(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::True => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn has_negation(&self) -> bool {
        match self {
            Formula::True => false,
            Formula::Atom(a) => a.rel != Rel::Eq,
            Formula::Not(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.has_negation() || b.has_negation(),
        }
    }

    pub fn has_and(&self) -> bool {
        match self {
            Formula::True | Formula::Atom(_) => false,
            Formula::Not(f) => f.has_and(),
            Formula::And(..) => true,
            Formula::Or(a, b) => a.has_and() || b.has_and(),
        }
    }

    /// Canonical text form, re-parseable by [`super::parse_formula`].
    pub fn display<'a>(&'a self, schema: &'a AttributeSchema) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            schema,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) => 3,
            Formula::True | Formula::Atom(_) => 4,
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    schema: &'a AttributeSchema,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.formula, self.schema, 0)
    }
}

fn write_formula(
    f: &mut fmt::Formatter<'_>,
    node: &Formula,
    schema: &AttributeSchema,
    min_prec: u8,
) -> fmt::Result {
    let paren = node.precedence() < min_prec;
    if paren {
        f.write_str("(")?;
    }
    match node {
        Formula::True => f.write_str("true")?,
        Formula::Atom(a) => {
            let attr = schema.attribute(a.attr);
            write_token(f, &attr.name)?;
            write!(f, " {} ", a.rel)?;
            match a.value {
                AttrValue::Int(v) => write!(f, "{v}")?,
                AttrValue::Cat(_) => write_token(f, &schema.display_value(a.attr, a.value))?,
            }
        }
        Formula::Not(inner) => {
            f.write_str("!")?;
            write_formula(f, inner, schema, 3)?;
        }
        Formula::And(a, b) => {
            write_formula(f, a, schema, 2)?;
            f.write_str(" & ")?;
            write_formula(f, b, schema, 3)?;
        }
        Formula::Or(a, b) => {
            write_formula(f, a, schema, 1)?;
            f.write_str(" | ")?;
            write_formula(f, b, schema, 2)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

pub(super) fn is_bare_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '+')
}

fn write_token(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    let bare = !s.is_empty() && s != "true" && s.chars().all(is_bare_char);
    if bare {
        f.write_str(s)
    } else {
        f.write_str("\"")?;
        for c in s.chars() {
            if c == '"' || c == '\\' {
                f.write_str("\\")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_table() {
        for r in Rel::ALL {
            assert_eq!(r.negate().negate(), r);
            for a in -2..5 {
                for b in -2..5 {
                    assert_ne!(r.holds(a, b), r.negate().holds(a, b));
                }
            }
        }
    }

    #[test]
    fn connectives() {
        let a = Formula::atom(0, Rel::Eq, AttrValue::Cat(0));
        let f = Formula::or(Formula::or(a.clone(), a.clone()), Formula::not(a.clone()));
        assert_eq!(f.connective_count(), 3);
        assert_eq!(Formula::True.connective_count(), 0);
    }
}

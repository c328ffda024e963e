//! Concrete syntax for item formulas.
//!
//! ```text
//! formula := or
//! or      := and ("|" and)*
//! and     := not ("&" not)*
//! not     := "!" not | "(" formula ")" | atom | "true"
//! atom    := NAME REL VALUE
//! REL     := "=" | "!=" | "<" | "<=" | ">" | ">="
//! ```
//!
//! Names and values are bare words (`[A-Za-z0-9_.+-]+`) or double-quoted
//! strings with `\"` escapes. Categorical values are matched case-sensitively.

use thiserror::Error;

use super::formula::{is_bare_char, Formula, Rel};
use super::{AttrKind, AttrValue, AttributeSchema};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown attribute `{name}` at {pos}")]
    UnknownAttribute { name: String, pos: usize },
    #[error("value `{value}` is outside the domain of `{attr}` (at {pos})")]
    ValueOutOfDomain {
        attr: String,
        value: String,
        pos: usize,
    },
    #[error("operator `{rel}` cannot compare categorical attribute `{attr}` (at {pos})")]
    TypeMismatch { attr: String, rel: Rel, pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Quoted(String),
    Rel(Rel),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '(' => {
                chars.next();
                Tok::LParen
            }
            ')' => {
                chars.next();
                Tok::RParen
            }
            '&' => {
                chars.next();
                Tok::And
            }
            '|' => {
                chars.next();
                Tok::Or
            }
            '!' | '<' | '>' | '=' => {
                chars.next();
                let two = chars.peek().map(|&(_, n)| n) == Some('=');
                if two {
                    chars.next();
                }
                match (c, two) {
                    ('!', false) => Tok::Not,
                    ('!', true) => Tok::Rel(Rel::Ne),
                    ('<', false) => Tok::Rel(Rel::Lt),
                    ('<', true) => Tok::Rel(Rel::Le),
                    ('>', false) => Tok::Rel(Rel::Gt),
                    ('>', true) => Tok::Rel(Rel::Ge),
                    _ => Tok::Rel(Rel::Eq),
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                while let Some((_, c)) = chars.next() {
                    match c {
                        '\\' => match chars.next() {
                            Some((_, e)) => s.push(e),
                            None => break,
                        },
                        '"' => {
                            closed = true;
                            break;
                        }
                        _ => s.push(c),
                    }
                }
                if !closed {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "unterminated string".into(),
                    });
                }
                Tok::Quoted(s)
            }
            c if is_bare_char(c) => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_bare_char(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                Tok::Word(s)
            }
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    schema: &'a AttributeSchema,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.not()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            let rhs = self.not()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::not(self.not()?))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.or()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(Tok::Word(w))
                if w == "true" && !matches!(self.toks.get(self.at + 1), Some((_, Tok::Rel(_)))) =>
            {
                self.at += 1;
                Ok(Formula::True)
            }
            Some(Tok::Word(_)) | Some(Tok::Quoted(_)) => self.atom(),
            Some(_) => self.syntax("expected an atom, `!`, `(` or `true`"),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let name_pos = self.pos();
        let name = match self.peek() {
            Some(Tok::Word(w)) | Some(Tok::Quoted(w)) => w.clone(),
            _ => return self.syntax("expected attribute name"),
        };
        self.at += 1;
        let attr = self
            .schema
            .index_of(&name)
            .ok_or(ParseError::UnknownAttribute {
                name: name.clone(),
                pos: name_pos,
            })?;
        let rel_pos = self.pos();
        let rel = match self.peek() {
            Some(Tok::Rel(r)) => *r,
            _ => return self.syntax("expected a comparison operator"),
        };
        self.at += 1;
        let value_pos = self.pos();
        let raw = match self.peek() {
            Some(Tok::Word(w)) | Some(Tok::Quoted(w)) => w.clone(),
            _ => return self.syntax("expected a value"),
        };
        self.at += 1;
        let attribute = self.schema.attribute(attr);
        let value = match &attribute.kind {
            AttrKind::Categorical(_) => {
                if !matches!(rel, Rel::Eq | Rel::Ne) {
                    return Err(ParseError::TypeMismatch {
                        attr: name,
                        rel,
                        pos: rel_pos,
                    });
                }
                attribute.category(&raw).map(AttrValue::Cat)
            }
            AttrKind::Integer { .. } => raw.parse::<i64>().ok().map(AttrValue::Int),
        };
        match value {
            Some(value) => Ok(Formula::atom(attr, rel, value)),
            None => Err(ParseError::ValueOutOfDomain {
                attr: name,
                value: raw,
                pos: value_pos,
            }),
        }
    }
}

/// Parses `text` against `schema`.
pub fn parse_formula(text: &str, schema: &AttributeSchema) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: "empty formula".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        schema,
    };
    let f = p.or()?;
    if p.at != p.toks.len() {
        return p.syntax("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Attribute;

    fn senators() -> AttributeSchema {
        AttributeSchema::new(vec![
            Attribute::categorical("Party", ["Republican", "Democrat"]),
            Attribute::categorical("View", ["liberal", "conservative", "ultra conservative"]),
            Attribute::categorical("Experience", ["experienced", "inexperienced"]),
            Attribute::integer("Year", None, None),
        ])
        .unwrap()
    }

    #[test]
    fn disjunction_of_atoms() {
        let s = senators();
        let f = parse_formula("Party = Republican | View = conservative", &s).unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::atom(0, Rel::Eq, AttrValue::Cat(0)),
                Formula::atom(1, Rel::Eq, AttrValue::Cat(1))
            )
        );
    }

    #[test]
    fn true_literal() {
        assert_eq!(parse_formula("true", &senators()).unwrap(), Formula::True);
        assert_eq!(
            parse_formula(" ( true ) ", &senators()).unwrap(),
            Formula::True
        );
    }

    #[test]
    fn precedence_and_quotes() {
        let s = senators();
        let f = parse_formula(
            "!Party=Democrat & View = \"ultra conservative\" | Year>=2002",
            &s,
        )
        .unwrap();
        let expected = Formula::or(
            Formula::and(
                Formula::not(Formula::atom(0, Rel::Eq, AttrValue::Cat(1))),
                Formula::atom(1, Rel::Eq, AttrValue::Cat(2)),
            ),
            Formula::atom(3, Rel::Ge, AttrValue::Int(2002)),
        );
        assert_eq!(f, expected);
        assert_eq!(parse_formula(&f.display(&s).to_string(), &s).unwrap(), f);
    }

    #[test]
    fn errors() {
        let s = senators();
        assert!(matches!(
            parse_formula("!(Genre = Comedy)", &s),
            Err(ParseError::UnknownAttribute { ref name, pos: 2 }) if name == "Genre"
        ));
        assert!(matches!(
            parse_formula("Party = Independent", &s),
            Err(ParseError::ValueOutOfDomain { .. })
        ));
        assert!(matches!(
            parse_formula("Party < Democrat", &s),
            Err(ParseError::TypeMismatch { .. })
        ));
        assert!(matches!(
            parse_formula("Year >= soon", &s),
            Err(ParseError::ValueOutOfDomain { .. })
        ));
        assert!(matches!(
            parse_formula("(Party = Democrat", &s),
            Err(ParseError::Syntax { pos: 17, .. })
        ));
        assert!(matches!(
            parse_formula("", &s),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_formula("Party = Democrat Party", &s),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_formula("Party = \"Democrat", &s),
            Err(ParseError::Syntax { .. })
        ));
    }
}

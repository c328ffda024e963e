use std::fmt;

use super::{PropertyKind, PropertyValue, SetProperty};
use crate::catalog::{Catalog, Rel};

/// `Σ coeff·x_item REL bound` over boolean item-selection variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityConstraint {
    pub id: String,
    /// `(item, ±1)` sorted by item; items with coefficient 0 are left out.
    pub terms: Vec<(usize, i8)>,
    pub rel: Rel,
    pub bound: i64,
}

/// Integer sums admitted by a constraint: `lo..=hi` minus an optional hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Allowed {
    pub lo: i64,
    pub hi: i64,
    pub hole: Option<i64>,
}

const UNBOUNDED: i64 = i64::MAX / 4;

impl Allowed {
    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi && self.hole != Some(x)
    }

    /// Does `[a, b]` contain an allowed integer?
    pub fn meets(&self, a: i64, b: i64) -> bool {
        let (a, b) = (a.max(self.lo), b.min(self.hi));
        a <= b && !(a == b && self.hole == Some(a))
    }
}

impl CardinalityConstraint {
    pub fn new(id: impl Into<String>, mut terms: Vec<(usize, i8)>, rel: Rel, bound: i64) -> Self {
        terms.sort_unstable();
        CardinalityConstraint {
            id: id.into(),
            terms,
            rel,
            bound,
        }
    }

    /// Normalized integer region; strict relations become inclusive bounds.
    pub fn allowed(&self) -> Allowed {
        let k = self.bound;
        let (lo, hi, hole) = match self.rel {
            Rel::Eq => (k, k, None),
            Rel::Ne => (-UNBOUNDED, UNBOUNDED, Some(k)),
            Rel::Lt => (-UNBOUNDED, k - 1, None),
            Rel::Le => (-UNBOUNDED, k, None),
            Rel::Gt => (k + 1, UNBOUNDED, None),
            Rel::Ge => (k, UNBOUNDED, None),
        };
        Allowed { lo, hi, hole }
    }

    pub fn is_signed(&self) -> bool {
        self.terms.iter().any(|&(_, c)| c < 0)
    }

    pub fn sum(&self, selected: &[bool]) -> i64 {
        self.terms
            .iter()
            .filter(|(i, _)| selected[*i])
            .map(|&(_, c)| c as i64)
            .sum()
    }

    pub fn holds(&self, selected: &[bool]) -> bool {
        self.rel.holds(self.sum(selected), self.bound)
    }

    /// Sums attainable by some assignment: `[-(#neg), #pos]`.
    pub fn sum_range(&self) -> (i64, i64) {
        let pos = self.terms.iter().filter(|t| t.1 > 0).count() as i64;
        (pos - self.terms.len() as i64, pos)
    }

    /// Truth value when the scope is empty, `None` otherwise.
    pub fn constant(&self) -> Option<bool> {
        self.terms.is_empty().then(|| self.rel.holds(0, self.bound))
    }
}

impl fmt::Display for CardinalityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [", self.id)?;
        for (n, (i, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}{}", if *c > 0 { '+' } else { '-' }, i)?;
        }
        write!(f, "] {} {}", self.rel, self.bound)
    }
}

/// Constraint(s) over item variables that hold exactly when `p` takes `v`.
///
/// Panics if `v` is not in the property's domain.
pub fn property_to_constraints(
    p: &SetProperty,
    v: PropertyValue,
    catalog: &Catalog,
) -> Vec<CardinalityConstraint> {
    let scope = |f: &crate::catalog::Formula| -> Vec<usize> {
        (0..catalog.len())
            .filter(|&i| f.eval(catalog.item(i)))
            .collect()
    };
    let id = format!("{}={}", p.id, v);
    let c = match (&p.kind, v) {
        (PropertyKind::CountVsConst { phi, rel, k }, PropertyValue::Bool(b)) => {
            CardinalityConstraint::new(
                id,
                scope(phi).into_iter().map(|i| (i, 1)).collect(),
                if b { *rel } else { rel.negate() },
                *k,
            )
        }
        (PropertyKind::CountVsCount { phi, rel, psi }, PropertyValue::Bool(b)) => {
            let terms = (0..catalog.len())
                .filter_map(|i| {
                    let o = catalog.item(i);
                    let c = phi.eval(o) as i8 - psi.eval(o) as i8;
                    (c != 0).then_some((i, c))
                })
                .collect();
            CardinalityConstraint::new(id, terms, if b { *rel } else { rel.negate() }, 0)
        }
        (PropertyKind::Counter { phi }, PropertyValue::Int(c)) => CardinalityConstraint::new(
            id,
            scope(phi).into_iter().map(|i| (i, 1)).collect(),
            Rel::Eq,
            c,
        ),
        _ => panic!("value {v} outside the domain of property `{}`", p.id),
    };
    vec![c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::tests::{senator_props, senators};

    #[test]
    fn senator_constraints() {
        let cat = senators();
        let p = senator_props(&cat);
        let c1 = &property_to_constraints(&p[0], PropertyValue::Bool(true), &cat)[0];
        assert_eq!(c1.terms, vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!((c1.rel, c1.bound), (Rel::Ge, 2));
        let c1n = &property_to_constraints(&p[0], PropertyValue::Bool(false), &cat)[0];
        assert_eq!((c1n.rel, c1n.bound), (Rel::Lt, 2));
        assert_eq!(c1n.to_string(), "P1=F: [+0,+1,+2] < 2");
        let c3 = &property_to_constraints(&p[2], PropertyValue::Bool(true), &cat)[0];
        assert_eq!(c3.terms, vec![(3, 1)]);
    }

    #[test]
    fn allowed_regions() {
        let c = CardinalityConstraint::new("c", vec![(0, 1)], Rel::Ne, 2);
        let a = c.allowed();
        assert!(a.contains(1) && !a.contains(2) && a.contains(3));
        assert!(!a.meets(2, 2) && a.meets(2, 3));
        let c = CardinalityConstraint::new("c", vec![], Rel::Lt, 0);
        assert_eq!(c.constant(), Some(false));
        assert!(!c.allowed().meets(0, 10));
    }
}

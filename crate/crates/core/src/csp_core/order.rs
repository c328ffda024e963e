use std::hash::{Hash, Hasher};

use rustc_hash::FxHasher;

use crate::properties::CardinalityConstraint;

/// Static variable order: position → item and back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarOrder {
    items: Vec<usize>,
    positions: Vec<usize>,
    fingerprint: u64,
}

impl VarOrder {
    /// Panics unless `items` is a permutation of `0..items.len()`.
    pub fn new(items: Vec<usize>) -> Self {
        let mut positions = vec![usize::MAX; items.len()];
        for (pos, &i) in items.iter().enumerate() {
            assert!(
                i < items.len() && positions[i] == usize::MAX,
                "not a permutation"
            );
            positions[i] = pos;
        }
        let mut h = FxHasher::default();
        items.hash(&mut h);
        VarOrder {
            fingerprint: h.finish(),
            items,
            positions,
        }
    }

    pub fn identity(n: usize) -> Self {
        VarOrder::new((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item_at(&self, pos: usize) -> usize {
        self.items[pos]
    }

    pub fn position_of(&self, item: usize) -> usize {
        self.positions[item]
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

/// Most constrained items first: descending number of constraint scopes
/// containing the item, then descending `score` (if given), then index.
pub fn static_order(
    n: usize,
    constraints: &[CardinalityConstraint],
    score: Option<&[f64]>,
) -> VarOrder {
    let mut degree = vec![0usize; n];
    for c in constraints {
        for &(i, _) in &c.terms {
            degree[i] += 1;
        }
    }
    let mut items: Vec<usize> = (0..n).collect();
    items.sort_by(|&a, &b| {
        degree[b]
            .cmp(&degree[a])
            .then_with(|| match score {
                Some(s) => s[b].partial_cmp(&s[a]).unwrap_or(std::cmp::Ordering::Equal),
                None => std::cmp::Ordering::Equal,
            })
            .then(a.cmp(&b))
    });
    VarOrder::new(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Rel;

    #[test]
    fn most_constrained_first() {
        let cs = vec![
            CardinalityConstraint::new("a", vec![(2, 1), (1, 1)], Rel::Ge, 1),
            CardinalityConstraint::new("b", vec![(2, 1)], Rel::Ge, 1),
            CardinalityConstraint::new("c", vec![(2, 1), (0, 1)], Rel::Ge, 1),
        ];
        assert_eq!(static_order(4, &cs, None).items(), &[2, 0, 1, 3]);
        assert_eq!(
            static_order(4, &cs, Some(&[0.0, 1.0, 0.0, 0.0])).items(),
            &[2, 1, 0, 3]
        );
        assert_eq!(static_order(3, &[], None), VarOrder::identity(3));
    }
}

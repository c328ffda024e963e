use serde::Serialize;

use super::{PropertyKind, SetProperty};
use crate::catalog::Rel;

/// How two same-formula count predicates relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConflictKind {
    /// Whenever `stronger` holds, `weaker` holds too, so `weaker` carries no
    /// extra information once `stronger` is true.
    Subsumption {
        stronger: usize,
        weaker: usize,
    },
    /// The two can never hold together; at most one may be true.
    MutualExclusion,
    Compatible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictPair {
    pub a: usize,
    pub b: usize,
    pub kind: ConflictKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConflictReport {
    /// Every pair of count-vs-constant properties over syntactically equal
    /// formulas, `a < b` as property indices.
    pub pairs: Vec<ConflictPair>,
}

impl ConflictReport {
    pub fn exclusions(&self) -> impl Iterator<Item = &ConflictPair> {
        self.pairs
            .iter()
            .filter(|p| p.kind == ConflictKind::MutualExclusion)
    }

    /// Properties made redundant by a stronger one.
    pub fn redundant(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .pairs
            .iter()
            .filter_map(|p| match p.kind {
                ConflictKind::Subsumption { weaker, .. } => Some(weaker),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Relation between `{c : c REL_a k_a}` and `{c : c REL_b k_b}` over `c ≥ 0`.
/// Returns `(disjoint, a ⊆ b, b ⊆ a)`.
pub fn count_set_relation(rel_a: Rel, k_a: i64, rel_b: Rel, k_b: i64) -> (bool, bool, bool) {
    // Beyond max(k)+1 both predicates are constant, so one extra point
    // represents the whole tail.
    let top = k_a.max(k_b).max(0) + 2;
    let (mut meet, mut a_in_b, mut b_in_a) = (false, true, true);
    for c in 0..=top {
        let (x, y) = (rel_a.holds(c, k_a), rel_b.holds(c, k_b));
        meet |= x && y;
        a_in_b &= !x || y;
        b_in_a &= !y || x;
    }
    (!meet, a_in_b, b_in_a)
}

/// Pairwise classification of count-vs-constant properties sharing a formula.
pub fn resolve_offline_conflicts(props: &[SetProperty]) -> ConflictReport {
    let mut pairs = Vec::new();
    for (a, pa) in props.iter().enumerate() {
        let PropertyKind::CountVsConst {
            phi: fa,
            rel: ra,
            k: ka,
        } = &pa.kind
        else {
            continue;
        };
        for (b, pb) in props.iter().enumerate().skip(a + 1) {
            let PropertyKind::CountVsConst {
                phi: fb,
                rel: rb,
                k: kb,
            } = &pb.kind
            else {
                continue;
            };
            if fa != fb {
                continue;
            }
            let (disjoint, a_in_b, b_in_a) = count_set_relation(*ra, *ka, *rb, *kb);
            let kind = if disjoint {
                ConflictKind::MutualExclusion
            } else if a_in_b {
                ConflictKind::Subsumption {
                    stronger: a,
                    weaker: b,
                }
            } else if b_in_a {
                ConflictKind::Subsumption {
                    stronger: b,
                    weaker: a,
                }
            } else {
                ConflictKind::Compatible
            };
            pairs.push(ConflictPair { a, b, kind });
        }
    }
    ConflictReport { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{AttrValue, Formula};

    fn p(id: &str, value: u32, rel: Rel, k: i64) -> SetProperty {
        SetProperty::count_vs_const(id, Formula::atom(0, Rel::Eq, AttrValue::Cat(value)), rel, k)
    }

    #[test]
    fn examples() {
        let r = resolve_offline_conflicts(&[p("1a", 0, Rel::Le, 5), p("1b", 0, Rel::Le, 3)]);
        assert_eq!(
            r.pairs[0].kind,
            ConflictKind::Subsumption {
                stronger: 1,
                weaker: 0
            }
        );
        assert_eq!(r.redundant(), vec![0]);

        let r = resolve_offline_conflicts(&[p("2a", 1, Rel::Eq, 5), p("2b", 1, Rel::Gt, 6)]);
        assert_eq!(r.pairs[0].kind, ConflictKind::MutualExclusion);
        let r = resolve_offline_conflicts(&[p("3a", 1, Rel::Lt, 7), p("3b", 1, Rel::Ge, 9)]);
        assert_eq!(r.exclusions().count(), 1);

        let r = resolve_offline_conflicts(&[p("x", 0, Rel::Ge, 1), p("y", 1, Rel::Ge, 1)]);
        assert!(r.pairs.is_empty());
        let r = resolve_offline_conflicts(&[p("x", 0, Rel::Ge, 1), p("y", 0, Rel::Le, 4)]);
        assert_eq!(r.pairs[0].kind, ConflictKind::Compatible);
    }
}

//! Pruning tests on single constraints and constraint pairs.
//!
//! Counts only grow as items are added, so an upper bound that is already
//! exceeded stays exceeded, and a lower bound that cannot be met by the
//! items still available never will be.

use crate::properties::{Allowed, CardinalityConstraint};

/// True iff `current_count` already exceeds what the constraint allows.
/// Meant for positive-coefficient constraints, where counts never decrease.
pub fn monotonic_prune(c: &CardinalityConstraint, current_count: i64) -> bool {
    current_count > c.allowed().hi
}

/// False iff no count in `current_count ..= current_count + remaining_satisfiers`
/// can reach what the constraint requires from below.
pub fn forward_check(
    c: &CardinalityConstraint,
    current_count: i64,
    remaining_satisfiers: i64,
) -> bool {
    !needs_unreachable(
        &c.allowed(),
        current_count,
        current_count + remaining_satisfiers,
    )
}

/// Dead end by the can/must rule: `need` must still gain `p` items, `cap`
/// can only take `q` more, `p > q`, and every remaining item that helps
/// `need` also counts toward `cap`.
pub fn can_must_check(
    need: &CardinalityConstraint,
    cap: &CardinalityConstraint,
    need_count: i64,
    cap_count: i64,
    rem_need: i64,
    rem_both: i64,
) -> bool {
    can_must_dead(
        &need.allowed(),
        &cap.allowed(),
        need_count,
        cap_count,
        rem_need,
        rem_both,
    )
}

/// Reachable sums `[lo, hi]` miss the allowed region from below, or only
/// hit its hole.
pub(crate) fn needs_unreachable(a: &Allowed, lo: i64, hi: i64) -> bool {
    if lo > a.hi {
        // above: monotone territory, not ours
        return false;
    }
    hi < a.lo || (a.hole.is_some() && lo.max(a.lo) == hi.min(a.hi) && a.hole == Some(hi.min(a.hi)))
}

pub(crate) fn can_must_dead(
    need: &Allowed,
    cap: &Allowed,
    need_count: i64,
    cap_count: i64,
    rem_need: i64,
    rem_both: i64,
) -> bool {
    let p = need.lo - need_count;
    let q = cap.hi - cap_count;
    p > 0 && p > q && rem_need == rem_both
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Rel;

    fn c(rel: Rel, k: i64) -> CardinalityConstraint {
        CardinalityConstraint::new("c", vec![(0, 1)], rel, k)
    }

    #[test]
    fn monotone() {
        assert!(monotonic_prune(&c(Rel::Le, 3), 4));
        assert!(monotonic_prune(&c(Rel::Eq, 5), 6));
        assert!(!monotonic_prune(&c(Rel::Ge, 2), 5));
        assert!(monotonic_prune(&c(Rel::Lt, 3), 3));
        assert!(!monotonic_prune(&c(Rel::Ne, 3), 9));
    }

    #[test]
    fn forward() {
        assert!(!forward_check(&c(Rel::Ge, 4), 1, 2));
        assert!(forward_check(&c(Rel::Ge, 2), 2, 0));
        assert!(forward_check(&c(Rel::Eq, 3), 1, 2));
        assert!(!forward_check(&c(Rel::Ne, 2), 2, 0));
        assert!(forward_check(&c(Rel::Ne, 2), 2, 1));
        assert!(!forward_check(&c(Rel::Gt, 0), 0, 0));
    }

    /// Exhaustive check of both rules against the definition: a state is
    /// dead iff no number of additions `t ∈ 0..=rem` gives an allowed count.
    #[test]
    fn forward_check_matches_enumeration() {
        for rel in Rel::ALL {
            for k in 0..5 {
                let cc = c(rel, k);
                for count in 0..6 {
                    for rem in 0..4 {
                        let alive = (0..=rem).any(|t| rel.holds(count + t, k));
                        let pruned = monotonic_prune(&cc, count) || !forward_check(&cc, count, rem);
                        assert_eq!(!alive, pruned, "{rel} {k} count={count} rem={rem}");
                    }
                }
            }
        }
    }

    #[test]
    fn can_must() {
        // |A=a| >= 5 with 3 picked, |B=b| <= 3 with 2 picked
        let need = c(Rel::Ge, 5);
        let cap = c(Rel::Le, 3);
        assert!(can_must_check(&need, &cap, 3, 2, 4, 4));
        assert!(!can_must_check(&need, &cap, 3, 2, 4, 3));
        assert!(!can_must_check(&need, &cap, 5, 2, 4, 4));
    }
}

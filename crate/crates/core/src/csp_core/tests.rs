use proptest::prelude::*;

use super::*;
use crate::catalog::Rel;
use crate::properties::tests::{senator_props, senators};
use crate::properties::{property_to_constraints, PropertyValue};

const T: PropertyValue = PropertyValue::Bool(true);

fn size_eq(n: usize, k: i64) -> CardinalityConstraint {
    CardinalityConstraint::new("C", (0..n).map(|i| (i, 1)).collect(), Rel::Eq, k)
}

/// Constraints `C, C1, C2, C3` of the senator example with every property true.
fn senator_constraints() -> Vec<CardinalityConstraint> {
    let cat = senators();
    let props = senator_props(&cat);
    let mut v = vec![size_eq(4, 3)];
    for p in &props {
        v.extend(property_to_constraints(p, T, &cat));
    }
    v
}

/// First satisfying subset in set-tree pre-order, i.e. the lexicographically
/// smallest ascending position list, over positions in some scope.
fn first_in_preorder(csp: &Csp, order: &VarOrder) -> Option<Vec<usize>> {
    let mut active: Vec<usize> = csp
        .constraints
        .iter()
        .flat_map(|c| c.terms.iter().map(|&(i, _)| order.position_of(i)))
        .collect();
    active.sort_unstable();
    active.dedup();
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << active.len()) {
        let pos: Vec<usize> = (0..active.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| active[b])
            .collect();
        let items: Vec<usize> = pos.iter().map(|&p| order.item_at(p)).collect();
        if csp.holds(&items) && best.as_ref().map_or(true, |b| pos < *b) {
            best = Some(pos);
        }
    }
    if csp.is_trivially_unsat() {
        return None;
    }
    best
}

#[test]
fn senators_cold_then_warm() {
    let cs = senator_constraints();
    let order = VarOrder::identity(4);
    let cfg = SolverConfig::default();

    let csp1 = Csp::new(4, cs[..2].to_vec());
    let (out, _) = solve(&csp1, &order, cfg, None);
    let Outcome::Sat(s1) = out else {
        panic!("{out:?}")
    };
    assert_eq!(s1.bits(4), vec![1, 1, 1, 0]);

    let csp2 = Csp::new(4, cs[..3].to_vec());
    let (out, st) = solve(&csp2, &order, cfg, Some(&s1));
    assert_eq!(out, Outcome::Sat(s1.clone()));
    assert_eq!(st.item_backtracks, 0);

    let csp3 = Csp::new(4, cs.clone());
    let (out, st) = solve(&csp3, &order, cfg, Some(&s1));
    let Outcome::Sat(s2) = out else {
        panic!("{out:?}")
    };
    assert_eq!(s2.bits(4), vec![1, 1, 0, 1]);
    assert_eq!(s2.items(&order), vec![0, 1, 3]);
    assert_eq!(st.item_backtracks, 2);
}

#[test]
fn senators_with_formula_influence() {
    let cat = senators();
    let props = senator_props(&cat);
    let table = PropertyTable::new(&cat, &props, true);
    let cs = senator_constraints();
    let order = VarOrder::identity(4);
    let mut solver = Solver::new(&order, Influence::Formulas(&table), SolverConfig::default());
    let Outcome::Sat(s1) = solver.solve(&Csp::new(4, cs[..2].to_vec()), None) else {
        panic!()
    };
    let Outcome::Sat(s2) = solver.solve(&Csp::new(4, cs.clone()), Some(&s1)) else {
        panic!()
    };
    assert_eq!(s2.items(&order), vec![0, 1, 3]);
}

#[test]
fn unsat_and_constants() {
    let order = VarOrder::identity(3);
    let a = CardinalityConstraint::new("a", vec![(0, 1), (1, 1)], Rel::Ge, 2);
    let b = CardinalityConstraint::new("b", vec![(0, 1), (1, 1)], Rel::Le, 1);
    let (out, st) = solve(
        &Csp::new(3, vec![a.clone(), b]),
        &order,
        SolverConfig::default(),
        None,
    );
    assert_eq!(out, Outcome::Unsat);
    assert!(st.item_nodes >= 1);

    let f = CardinalityConstraint::new("f", vec![], Rel::Gt, 0);
    let csp = Csp::new(3, vec![a.clone(), f]);
    assert!(csp.is_trivially_unsat());
    assert_eq!(
        solve(&csp, &order, SolverConfig::default(), None).0,
        Outcome::Unsat
    );
    assert!(csp.dump().starts_with("f: [] false"));

    let t = CardinalityConstraint::new("t", vec![], Rel::Ge, 0);
    let csp = Csp::new(3, vec![a, t]);
    assert_eq!(csp.constraints.len(), 1);
    let Outcome::Sat(s) = solve(&csp, &order, SolverConfig::default(), None).0 else {
        panic!()
    };
    assert_eq!(s.items(&order), vec![0, 1]);
}

#[test]
fn empty_csp_selects_nothing() {
    let order = VarOrder::identity(5);
    let Outcome::Sat(s) = solve(&Csp::new(5, vec![]), &order, SolverConfig::default(), None).0
    else {
        panic!()
    };
    assert!(s.positions().is_empty());
}

#[test]
fn deadline_aborts() {
    // pigeonhole-like: exactly 11 of 22 items, with 11 disjoint pairs each
    // capped at 0, forces a full search; an expired deadline stops it
    let n = 22;
    let mut cs = vec![size_eq(n, 12)];
    for p in 0..11 {
        cs.push(CardinalityConstraint::new(
            format!("p{p}"),
            vec![(2 * p, 1), (2 * p + 1, 1)],
            Rel::Le,
            1,
        ));
    }
    let order = VarOrder::identity(n);
    let cfg = SolverConfig {
        fc: false,
        can_must: false,
        monotone: false,
        nogoods: false,
        interchangeable: false,
    };
    let mut s = Solver::new(&order, Influence::ConstraintSums, cfg);
    s.deadline = Some(Instant::now());
    assert_eq!(s.solve(&Csp::new(n, cs), None), Outcome::Aborted);
}

#[test]
#[should_panic(expected = "different variable order")]
fn warm_start_order_mismatch_rejected() {
    let cs = senator_constraints();
    let a = VarOrder::identity(4);
    let b = VarOrder::new(vec![3, 2, 1, 0]);
    let w = solution_from_items(&a, &[0, 1, 2]);
    solve(&Csp::new(4, cs), &b, SolverConfig::default(), Some(&w));
}

fn arb_constraint(n: usize) -> impl Strategy<Value = CardinalityConstraint> {
    (
        proptest::collection::vec(-1i8..=1, n),
        prop::sample::select(Rel::ALL.to_vec()),
        -2i64..5,
    )
        .prop_map(|(coefs, rel, k)| {
            let terms = coefs
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c != 0)
                .collect();
            CardinalityConstraint::new("r", terms, rel, k)
        })
}

fn arb_csp() -> impl Strategy<Value = (usize, Vec<CardinalityConstraint>, Vec<usize>)> {
    (1usize..9).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(arb_constraint(n), 0..5),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
    })
}

fn configs() -> Vec<SolverConfig> {
    (0..32)
        .map(|m| SolverConfig {
            fc: m & 1 != 0,
            can_must: m & 2 != 0,
            monotone: m & 4 != 0,
            nogoods: m & 8 != 0,
            interchangeable: m & 16 != 0,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Every combination of pruning rules returns the pre-order first
    /// solution found by enumeration, or UNSAT when there is none.
    #[test]
    fn matches_enumeration((n, cs, perm) in arb_csp()) {
        let order = VarOrder::new(perm);
        let csp = Csp::new(n, cs);
        let expect = first_in_preorder(&csp, &order);
        for cfg in configs() {
            let (out, _) = solve(&csp, &order, cfg, None);
            match (&out, &expect) {
                (Outcome::Sat(s), Some(e)) => {
                    prop_assert_eq!(s.positions(), &e[..]);
                    prop_assert!(csp.holds(&s.items(&order)));
                }
                (Outcome::Unsat, None) => {}
                _ => prop_assert!(false, "{:?} vs {:?} under {:?}", out, expect, cfg),
            }
        }
    }

    /// Adding constraints and resuming from the previous solution gives the
    /// same answer as a cold start.
    #[test]
    fn warm_equals_cold((n, cs, perm) in arb_csp(), split in 0usize..5) {
        let order = VarOrder::new(perm);
        let split = split.min(cs.len());
        let base = Csp::new(n, cs[..split].to_vec());
        let full = Csp::new(n, cs);
        let universe: Vec<usize> = full.constraints.iter().flat_map(|c| c.terms.iter().map(|t| t.0)).collect();
        let mut solver = Solver::new(&order, Influence::ConstraintSums, SolverConfig::default()).with_universe(universe.clone());
        if let Outcome::Sat(w) = solver.solve(&base, None) {
            let mut fresh = Solver::new(&order, Influence::ConstraintSums, SolverConfig::default()).with_universe(universe);
            let cold = fresh.solve(&full, None);
            let warm = solver.solve(&full, Some(&w));
            prop_assert_eq!(cold, warm);
        }
    }
}

use super::{PropertyAssignment, PropertyValue, SetProperty};
use crate::catalog::{Catalog, Formula};

/// Precomputed formula satisfaction for a fixed catalog and property list.
///
/// Every distinct phi/psi in the property list is tracked once; the vector of
/// per-formula counts of a subset (its influence vector) determines every
/// property value.
#[derive(Debug, Clone)]
pub struct PropertyTable {
    formulas: Vec<Formula>,
    sat: Vec<Vec<bool>>,
    members: Vec<Vec<usize>>,
    item_formulas: Vec<Vec<usize>>,
    phi: Vec<usize>,
    psi: Vec<Option<usize>>,
    size_formula: Option<usize>,
    /// per property with psi: items satisfying exactly phi / exactly psi
    phi_only: Vec<Vec<bool>>,
    psi_only: Vec<Vec<bool>>,
    n: usize,
}

/// Counts over a pool of not-yet-decided items.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RemainingCounts {
    pub formula: Vec<i64>,
    pub phi_only: Vec<i64>,
    pub psi_only: Vec<i64>,
}

impl PropertyTable {
    /// With `track_size`, the `true` formula is tracked as well so that the
    /// influence vector also records the subset size.
    pub fn new(catalog: &Catalog, props: &[SetProperty], track_size: bool) -> Self {
        let mut formulas: Vec<Formula> = Vec::new();
        let mut intern = |f: &Formula| match formulas.iter().position(|g| g == f) {
            Some(i) => i,
            None => {
                formulas.push(f.clone());
                formulas.len() - 1
            }
        };
        let phi: Vec<usize> = props.iter().map(|p| intern(p.phi())).collect();
        let psi: Vec<Option<usize>> = props.iter().map(|p| p.psi().map(&mut intern)).collect();
        let size_formula = track_size.then(|| intern(&Formula::True));

        let n = catalog.len();
        let sat: Vec<Vec<bool>> = formulas
            .iter()
            .map(|f| catalog.items().iter().map(|o| f.eval(o)).collect())
            .collect();
        let members = sat
            .iter()
            .map(|row| (0..n).filter(|&i| row[i]).collect())
            .collect();
        let item_formulas = (0..n)
            .map(|i| (0..formulas.len()).filter(|&f| sat[f][i]).collect())
            .collect();
        let mut phi_only = Vec::with_capacity(props.len());
        let mut psi_only = Vec::with_capacity(props.len());
        for p in 0..props.len() {
            match psi[p] {
                Some(q) => {
                    phi_only.push((0..n).map(|i| sat[phi[p]][i] && !sat[q][i]).collect());
                    psi_only.push((0..n).map(|i| !sat[phi[p]][i] && sat[q][i]).collect());
                }
                None => {
                    phi_only.push(Vec::new());
                    psi_only.push(Vec::new());
                }
            }
        }
        PropertyTable {
            formulas,
            sat,
            members,
            item_formulas,
            phi,
            psi,
            size_formula,
            phi_only,
            psi_only,
            n,
        }
    }

    pub fn num_items(&self) -> usize {
        self.n
    }

    pub fn num_formulas(&self) -> usize {
        self.formulas.len()
    }

    pub fn formula(&self, f: usize) -> &Formula {
        &self.formulas[f]
    }

    pub fn sat(&self, f: usize, item: usize) -> bool {
        self.sat[f][item]
    }

    /// Items satisfying formula `f`, ascending.
    pub fn members(&self, f: usize) -> &[usize] {
        &self.members[f]
    }

    /// Formulas satisfied by `item`, ascending.
    pub fn item_formulas(&self, item: usize) -> &[usize] {
        &self.item_formulas[item]
    }

    pub fn phi_of(&self, p: usize) -> usize {
        self.phi[p]
    }

    pub fn psi_of(&self, p: usize) -> Option<usize> {
        self.psi[p]
    }

    pub fn size_formula(&self) -> Option<usize> {
        self.size_formula
    }

    /// Influence vector of a subset.
    pub fn counts(&self, subset: &[usize]) -> Vec<i64> {
        let mut c = vec![0; self.formulas.len()];
        for &i in subset {
            self.add(&mut c, i);
        }
        c
    }

    pub fn add(&self, counts: &mut [i64], item: usize) {
        for &f in &self.item_formulas[item] {
            counts[f] += 1;
        }
    }

    pub fn remove(&self, counts: &mut [i64], item: usize) {
        for &f in &self.item_formulas[item] {
            counts[f] -= 1;
        }
    }

    pub fn value(&self, props: &[SetProperty], p: usize, counts: &[i64]) -> PropertyValue {
        let c_psi = self.psi[p].map_or(0, |q| counts[q]);
        props[p].value_from_counts(counts[self.phi[p]], c_psi)
    }

    pub fn values(&self, props: &[SetProperty], counts: &[i64]) -> Vec<PropertyValue> {
        (0..props.len())
            .map(|p| self.value(props, p, counts))
            .collect()
    }

    pub fn assignment(&self, props: &[SetProperty], counts: &[i64]) -> PropertyAssignment {
        self.values(props, counts).into_iter().map(Some).collect()
    }

    pub fn remaining_counts(&self, items: impl IntoIterator<Item = usize>) -> RemainingCounts {
        let mut r = RemainingCounts {
            formula: vec![0; self.formulas.len()],
            phi_only: vec![0; self.phi.len()],
            psi_only: vec![0; self.phi.len()],
        };
        for i in items {
            self.add_remaining(&mut r, i);
        }
        r
    }

    pub fn add_remaining(&self, r: &mut RemainingCounts, item: usize) {
        self.add(&mut r.formula, item);
        for p in 0..self.phi.len() {
            if self.psi[p].is_some() {
                r.phi_only[p] += self.phi_only[p][item] as i64;
                r.psi_only[p] += self.psi_only[p][item] as i64;
            }
        }
    }

    /// Values of `p` reachable from `counts` by adding some of the remaining items.
    pub fn reachable(
        &self,
        props: &[SetProperty],
        p: usize,
        counts: &[i64],
        rem: &RemainingCounts,
    ) -> Vec<PropertyValue> {
        let c_psi = self.psi[p].map_or(0, |q| counts[q]);
        props[p].reachable_from_counts(
            counts[self.phi[p]],
            c_psi,
            rem.formula[self.phi[p]],
            rem.phi_only[p],
            rem.psi_only[p],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::tests::{senator_props, senators};
    use crate::properties::{eval_property, reachable_values};

    #[test]
    fn agrees_with_direct_evaluation() {
        let cat = senators();
        let props = senator_props(&cat);
        let t = PropertyTable::new(&cat, &props, true);
        assert_eq!(t.num_formulas(), 4);
        for mask in 0u32..16 {
            let subset: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            let rest: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 0).collect();
            let counts = t.counts(&subset);
            assert_eq!(counts[t.size_formula().unwrap()], subset.len() as i64);
            let rem = t.remaining_counts(rest.iter().copied());
            for (p, prop) in props.iter().enumerate() {
                assert_eq!(
                    t.value(&props, p, &counts),
                    eval_property(prop, &cat, &subset)
                );
                assert_eq!(
                    t.reachable(&props, p, &counts, &rem),
                    reachable_values(prop, &cat, &subset, &rest)
                );
            }
        }
    }
}

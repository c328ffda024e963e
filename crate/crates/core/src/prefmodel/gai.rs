use thiserror::Error;

use crate::properties::{Domain, PropertyAssignment, PropertyValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaiError {
    #[error("property {0} is unassigned")]
    Partial(usize),
    #[error("value {value} is outside the domain of property {prop}")]
    BadValue { prop: usize, value: PropertyValue },
    #[error("factor {factor}: unknown property {prop}")]
    UnknownProperty { factor: usize, prop: usize },
    #[error("factor {factor}: property {prop} listed twice")]
    RepeatedScope { factor: usize, prop: usize },
    #[error("factor {factor}: table has {got} entries, expected {expected}")]
    TableSize {
        factor: usize,
        got: usize,
        expected: usize,
    },
    #[error("property {0} appears in no factor")]
    Unscoped(usize),
    #[error("factor {factor}: non-finite entry")]
    NonFinite { factor: usize },
}

/// Local value table over a few properties. Entries are stored in mixed
/// radix over the scope's domains, first scope member most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub scope: Vec<usize>,
    pub table: Vec<f64>,
}

/// `U(a) = Σ_f table_f(a restricted to scope_f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaiFunction {
    pub domains: Vec<Domain>,
    pub factors: Vec<Factor>,
}

impl GaiFunction {
    pub fn new(domains: Vec<Domain>) -> Self {
        GaiFunction {
            domains,
            factors: Vec::new(),
        }
    }

    pub fn table_len(&self, scope: &[usize]) -> usize {
        scope.iter().map(|&p| self.domains[p].size()).product()
    }

    pub fn add_factor(&mut self, scope: Vec<usize>, table: Vec<f64>) {
        self.factors.push(Factor { scope, table });
    }

    /// Adds a factor whose entries come from `f(values)`, values aligned with `scope`.
    pub fn add_factor_fn(&mut self, scope: Vec<usize>, f: impl Fn(&[PropertyValue]) -> f64) {
        let len = self.table_len(&scope);
        let mut table = Vec::with_capacity(len);
        for e in 0..len {
            table.push(f(&self.decode(&scope, e)));
        }
        self.factors.push(Factor { scope, table });
    }

    /// Values (aligned with `scope`) of table entry `e`.
    pub fn decode(&self, scope: &[usize], mut e: usize) -> Vec<PropertyValue> {
        let mut out = vec![PropertyValue::Bool(false); scope.len()];
        for (slot, &p) in scope.iter().enumerate().rev() {
            let d = self.domains[p];
            out[slot] = d.value(e % d.size());
            e /= d.size();
        }
        out
    }

    pub fn validate(&self) -> Result<(), GaiError> {
        let m = self.domains.len();
        let mut covered = vec![false; m];
        for (i, f) in self.factors.iter().enumerate() {
            for (j, &p) in f.scope.iter().enumerate() {
                if p >= m {
                    return Err(GaiError::UnknownProperty { factor: i, prop: p });
                }
                if f.scope[..j].contains(&p) {
                    return Err(GaiError::RepeatedScope { factor: i, prop: p });
                }
                covered[p] = true;
            }
            let expected = self.table_len(&f.scope);
            if f.table.len() != expected {
                return Err(GaiError::TableSize {
                    factor: i,
                    got: f.table.len(),
                    expected,
                });
            }
            if f.table.iter().any(|v| !v.is_finite()) {
                return Err(GaiError::NonFinite { factor: i });
            }
        }
        match covered.iter().position(|c| !c) {
            Some(p) => Err(GaiError::Unscoped(p)),
            None => Ok(()),
        }
    }

    fn entry(&self, f: &Factor, idx: &[usize]) -> usize {
        f.scope
            .iter()
            .fold(0, |acc, &p| acc * self.domains[p].size() + idx[p])
    }

    /// Value of a full assignment given as domain indices.
    pub fn value_idx(&self, idx: &[usize]) -> f64 {
        self.factors
            .iter()
            .map(|f| f.table[self.entry(f, idx)])
            .sum()
    }

    pub fn indices(&self, a: &PropertyAssignment) -> Result<Vec<usize>, GaiError> {
        a.iter()
            .enumerate()
            .map(|(p, v)| {
                let v = v.ok_or(GaiError::Partial(p))?;
                self.domains[p]
                    .index(v)
                    .ok_or(GaiError::BadValue { prop: p, value: v })
            })
            .collect()
    }

    /// Sum of factor lookups for a full assignment.
    pub fn gai_value(&self, a: &PropertyAssignment) -> Result<f64, GaiError> {
        if a.len() < self.domains.len() {
            return Err(GaiError::Partial(a.len()));
        }
        Ok(self.value_idx(&self.indices(a)?))
    }

    /// Largest entry of factor `f` whose every component is allowed.
    /// `-inf` when some scope member has no allowed value.
    pub fn factor_max(&self, f: usize, allowed: &[Vec<usize>]) -> f64 {
        let factor = &self.factors[f];
        let sets: Vec<&[usize]> = factor
            .scope
            .iter()
            .map(|&p| allowed[p].as_slice())
            .collect();
        if sets.iter().any(|s| s.is_empty()) {
            return f64::NEG_INFINITY;
        }
        let mut best = f64::NEG_INFINITY;
        let mut pos = vec![0usize; sets.len()];
        loop {
            let e = factor
                .scope
                .iter()
                .zip(&pos)
                .zip(&sets)
                .fold(0, |acc, ((&p, &i), s)| acc * self.domains[p].size() + s[i]);
            best = best.max(factor.table[e]);
            // odometer, last position fastest
            let mut k = sets.len();
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < sets[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }

    /// `Σ_f max` over individually allowed values (domain indices per
    /// property). Admissible for any set of jointly achievable assignments
    /// drawn from `allowed`.
    pub fn upper_bound(&self, allowed: &[Vec<usize>]) -> f64 {
        (0..self.factors.len())
            .map(|f| self.factor_max(f, allowed))
            .sum()
    }

    /// [`Self::upper_bound`] over value lists instead of indices.
    pub fn upper_bound_values(&self, reach: &[Vec<PropertyValue>]) -> f64 {
        let allowed: Vec<Vec<usize>> = reach
            .iter()
            .enumerate()
            .map(|(p, vs)| {
                vs.iter()
                    .filter_map(|&v| self.domains[p].index(v))
                    .collect()
            })
            .collect();
        self.upper_bound(&allowed)
    }

    /// `max - min` of each factor's table.
    pub fn spans(&self) -> Vec<f64> {
        self.factors
            .iter()
            .map(|f| {
                let max = f.table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = f.table.iter().copied().fold(f64::INFINITY, f64::min);
                if f.table.is_empty() {
                    0.0
                } else {
                    max - min
                }
            })
            .collect()
    }

    /// Folds every factor whose scope is contained in another factor's scope
    /// into the latter. The function's values are unchanged.
    pub fn merge_subsumed(&mut self) {
        let mut i = 0;
        while i < self.factors.len() {
            let host = (0..self.factors.len()).find(|&j| {
                j != i
                    && self.factors[i]
                        .scope
                        .iter()
                        .all(|p| self.factors[j].scope.contains(p))
                    && (self.factors[j].scope.len() > self.factors[i].scope.len() || j < i)
            });
            match host {
                Some(j) => {
                    let small = self.factors.remove(i);
                    let j = if j > i { j - 1 } else { j };
                    let host_scope = self.factors[j].scope.clone();
                    let len = self.factors[j].table.len();
                    for e in 0..len {
                        let vals = self.decode(&host_scope, e);
                        let mut idx = vec![0; self.domains.len()];
                        for (&p, &v) in host_scope.iter().zip(&vals) {
                            idx[p] = self.domains[p].index(v).unwrap();
                        }
                        let add = small.table[self.entry(&small, &idx)];
                        self.factors[j].table[e] += add;
                    }
                    i = 0;
                }
                None => i += 1,
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    const T: PropertyValue = PropertyValue::Bool(true);
    const F: PropertyValue = PropertyValue::Bool(false);

    /// U1(P1, P2): TT 10, TF 8, FT 2, FF 5; U2(P3): T 1, F 0.
    pub(crate) fn president_gai() -> GaiFunction {
        let mut g = GaiFunction::new(vec![Domain::Bool; 3]);
        // entries: (F,F), (F,T), (T,F), (T,T)
        g.add_factor(vec![0, 1], vec![5.0, 2.0, 8.0, 10.0]);
        g.add_factor(vec![2], vec![0.0, 1.0]);
        g
    }

    #[test]
    fn values() {
        let g = president_gai();
        g.validate().unwrap();
        assert_eq!(g.gai_value(&vec![Some(T), Some(T), Some(T)]), Ok(11.0));
        assert_eq!(g.gai_value(&vec![Some(F), Some(F), Some(F)]), Ok(5.0));
        assert_eq!(g.gai_value(&vec![Some(T), Some(F), Some(F)]), Ok(8.0));
        assert_eq!(
            g.gai_value(&vec![Some(T), None, Some(F)]),
            Err(GaiError::Partial(1))
        );
    }

    #[test]
    fn bounds() {
        let g = president_gai();
        let all = vec![vec![0, 1]; 3];
        assert_eq!(g.upper_bound(&all), 11.0);
        assert_eq!(g.upper_bound(&[vec![1], vec![1], vec![1]]), 11.0);
        assert_eq!(
            g.upper_bound_values(&[vec![F, T], vec![T], vec![F, T]]),
            11.0
        );
        assert_eq!(g.upper_bound(&[vec![0], vec![0, 1], vec![0]]), 5.0);
        assert_eq!(g.spans(), vec![8.0, 1.0]);
    }

    #[test]
    fn merging_preserves_values() {
        let mut g = president_gai();
        g.add_factor(vec![1], vec![0.5, 0.25]);
        let before: Vec<f64> = (0..8)
            .map(|m| g.value_idx(&[m & 1, m >> 1 & 1, m >> 2 & 1]))
            .collect();
        g.merge_subsumed();
        assert_eq!(g.factors.len(), 2);
        let after: Vec<f64> = (0..8)
            .map(|m| g.value_idx(&[m & 1, m >> 1 & 1, m >> 2 & 1]))
            .collect();
        assert_eq!(before, after);
    }
}

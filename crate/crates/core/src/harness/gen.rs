//! Instance generators: hardness-reduction constructions, seeded random
//! instances, and random members of the two tractable classes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{AttrValue, Attribute, AttributeSchema, Catalog, Formula, Item, Rel};
use crate::prefmodel::{GaiFunction, PreferenceModel, TcpNet, ValueOrder};
use crate::problem::Problem;
use crate::properties::{Domain, PropertyValue, SetProperty};

const T: PropertyValue = PropertyValue::Bool(true);
const F: PropertyValue = PropertyValue::Bool(false);

/// CNF over variables `1..=num_vars`; literal `-v` is the negation of `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn satisfied_clauses(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| {
                c.iter()
                    .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
            })
            .count()
    }

    /// Largest number of simultaneously satisfiable clauses, by enumeration.
    pub fn max_satisfiable(&self) -> usize {
        (0u32..1 << self.num_vars)
            .map(|m| {
                let a: Vec<bool> = (0..self.num_vars).map(|v| m >> v & 1 == 1).collect();
                self.satisfied_clauses(&a)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_satisfiable(&self) -> bool {
        self.max_satisfiable() == self.clauses.len()
    }
}

/// Parameters of [`gen_random`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomProfile {
    pub n: usize,
    pub m: usize,
    /// Attributes per item.
    pub a: usize,
    /// Values per attribute.
    pub d: usize,
    /// Most connectives per formula.
    pub k: usize,
    pub seed: u64,
    /// GAI value function instead of a TCP-net.
    pub gai: bool,
    /// Probability that a property is a counter rather than a predicate.
    pub counter_prob: f64,
    /// Probability that a required subset size is drawn.
    pub cardinality_prob: f64,
}

impl RandomProfile {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        RandomProfile {
            n,
            m,
            a: 3,
            d: 3,
            k: 2,
            seed,
            gai: false,
            counter_prob: 0.0,
            cardinality_prob: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    VertexCover {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Ksat {
        cnf: Cnf,
    },
    Max2sat {
        cnf: Cnf,
    },
    Random {
        profile: RandomProfile,
    },
    AtomicClass {
        seed: u64,
    },
    TwoSatClass {
        seed: u64,
    },
    Movie {
        n: usize,
        seed: u64,
        tension: bool,
    },
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub problem: Problem,
    pub provenance: Provenance,
}

fn bool_net(m: usize) -> TcpNet {
    let mut net = TcpNet::new(vec![Domain::Bool; m]);
    for p in 0..m {
        net.set_order_all(p, ValueOrder::Explicit(vec![T, F]));
    }
    net
}

fn build(
    cat: Catalog,
    props: Vec<SetProperty>,
    model: PreferenceModel,
    provenance: Provenance,
) -> GeneratedInstance {
    let problem = Problem::new(cat, props, model).expect("generator builds consistent instances");
    GeneratedInstance {
        problem,
        provenance,
    }
}

/// Vertex cover as subset selection: one item per vertex, one 0/1 attribute
/// per edge marking its endpoints. `P_e = |X_e = 1| > 0` prefers true;
/// `SUM` counts the selection and prefers smaller values; every `P_e` is
/// more important than `SUM`. The optimum covers every edge with as few
/// vertices as possible.
pub fn gen_vertex_cover(vertices: usize, edges: &[(usize, usize)]) -> GeneratedInstance {
    assert!(
        edges
            .iter()
            .all(|&(u, v)| u < vertices && v < vertices && u != v),
        "simple graph expected"
    );
    let schema = AttributeSchema::new(
        (0..edges.len())
            .map(|e| Attribute::integer(&format!("X{e}"), Some(0), Some(1)))
            .collect(),
    )
    .expect("distinct names");
    let items = (0..vertices)
        .map(|v| Item {
            id: format!("v{v}"),
            values: edges
                .iter()
                .map(|&(a, b)| AttrValue::Int((a == v || b == v) as i64))
                .collect(),
        })
        .collect();
    let cat = Catalog::new(schema, items).expect("valid items");
    let mut props: Vec<SetProperty> = (0..edges.len())
        .map(|e| {
            SetProperty::count_vs_const(
                &format!("P{e}"),
                Formula::atom(e, Rel::Eq, AttrValue::Int(1)),
                Rel::Gt,
                0,
            )
        })
        .collect();
    props.push(SetProperty::counter("SUM", Formula::True));
    let m = props.len();
    let mut domains = vec![Domain::Bool; m - 1];
    domains.push(Domain::Count(vertices));
    let mut net = TcpNet::new(domains);
    for e in 0..m - 1 {
        net.set_order_all(e, ValueOrder::Explicit(vec![T, F]));
        net.add_i_arc(e, m - 1);
    }
    net.set_order_all(m - 1, ValueOrder::Ascending);
    build(
        cat,
        props,
        PreferenceModel::tcp(net),
        Provenance::VertexCover {
            vertices,
            edges: edges.to_vec(),
        },
    )
}

fn lit_name(l: i32) -> String {
    if l > 0 {
        format!("x{l}")
    } else {
        format!("nx{}", -l)
    }
}

/// Items `x_v`, `nx_v` and the literal-valued attribute `X`; `V_v` says
/// exactly one of `x_v`, `nx_v` is selected and `C_j` says clause `j` has a
/// selected literal.
fn sat_instance(cnf: &Cnf) -> (Catalog, Vec<SetProperty>) {
    let lits: Vec<i32> = (1..=cnf.num_vars as i32).flat_map(|v| [v, -v]).collect();
    let schema = AttributeSchema::new(vec![Attribute::categorical(
        "X",
        lits.iter().map(|&l| lit_name(l)),
    )])
    .expect("one attribute");
    let items = lits
        .iter()
        .enumerate()
        .map(|(i, &l)| Item {
            id: lit_name(l),
            values: vec![AttrValue::Cat(i as u32)],
        })
        .collect();
    let cat = Catalog::new(schema, items).expect("valid items");
    let atom = |l: i32| {
        let idx = lits
            .iter()
            .position(|&x| x == l)
            .expect("literal over a declared variable");
        Formula::atom(0, Rel::Eq, AttrValue::Cat(idx as u32))
    };
    let mut props: Vec<SetProperty> = (1..=cnf.num_vars as i32)
        .map(|v| {
            SetProperty::count_vs_const(
                &format!("V{v}"),
                Formula::or(atom(v), atom(-v)),
                Rel::Eq,
                1,
            )
        })
        .collect();
    for (j, c) in cnf.clauses.iter().enumerate() {
        let phi = Formula::any(c.iter().map(|&l| atom(l))).expect("non-empty clause");
        props.push(SetProperty::count_vs_const(
            &format!("C{}", j + 1),
            phi,
            Rel::Ge,
            1,
        ));
    }
    (cat, props)
}

/// k-SAT as subset selection under an edgeless TCP-net preferring every
/// property true. A subset making all properties true exists iff `cnf` is
/// satisfiable.
pub fn gen_ksat(cnf: &Cnf) -> GeneratedInstance {
    let (cat, props) = sat_instance(cnf);
    let m = props.len();
    build(
        cat,
        props,
        PreferenceModel::tcp(bool_net(m)),
        Provenance::Ksat { cnf: cnf.clone() },
    )
}

/// MAX-2SAT as subset selection under an additive value function: each
/// clause property scores 1 when true, each variable property scores
/// `-2·(clauses)` when false. The optimum equals the maximum number of
/// satisfiable clauses.
pub fn gen_max2sat(cnf: &Cnf) -> GeneratedInstance {
    assert!(
        cnf.clauses.iter().all(|c| (1..=2).contains(&c.len())),
        "clauses of one or two literals"
    );
    let (cat, props) = sat_instance(cnf);
    let penalty = -2.0 * cnf.clauses.len() as f64;
    let mut g = GaiFunction::new(vec![Domain::Bool; props.len()]);
    for v in 0..cnf.num_vars {
        g.add_factor(vec![v], vec![penalty, 0.0]);
    }
    for j in 0..cnf.clauses.len() {
        g.add_factor(vec![cnf.num_vars + j], vec![0.0, 1.0]);
    }
    build(
        cat,
        props,
        PreferenceModel::gai(g),
        Provenance::Max2sat { cnf: cnf.clone() },
    )
}

/// Random CNF with `clauses` clauses of exactly `width` distinct variables.
pub fn random_cnf(rng: &mut impl Rng, num_vars: usize, clauses: usize, width: usize) -> Cnf {
    let vars: Vec<i32> = (1..=num_vars as i32).collect();
    let clauses = (0..clauses)
        .map(|_| {
            vars.choose_multiple(rng, width.min(num_vars))
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    Cnf { num_vars, clauses }
}

fn random_catalog(rng: &mut ChaCha8Rng, n: usize, a: usize, d: usize) -> Catalog {
    let schema = AttributeSchema::new(
        (0..a)
            .map(|i| Attribute::categorical(&format!("A{i}"), (0..d).map(|v| format!("v{v}"))))
            .collect(),
    )
    .expect("distinct names");
    let items = (0..n)
        .map(|i| Item {
            id: format!("o{}", i + 1),
            values: (0..a)
                .map(|_| AttrValue::Cat(rng.gen_range(0..d) as u32))
                .collect(),
        })
        .collect();
    Catalog::new(schema, items).expect("valid items")
}

fn random_formula(rng: &mut ChaCha8Rng, a: usize, d: usize, connectives: usize) -> Formula {
    let atom = |rng: &mut ChaCha8Rng| {
        let rel = if rng.gen_bool(0.15) { Rel::Ne } else { Rel::Eq };
        Formula::atom(
            rng.gen_range(0..a),
            rel,
            AttrValue::Cat(rng.gen_range(0..d) as u32),
        )
    };
    let mut f = atom(rng);
    for _ in 0..connectives {
        let g = atom(rng);
        f = match rng.gen_range(0..5) {
            0 => Formula::and(f, g),
            1 => Formula::or(f, Formula::not(g)),
            _ => Formula::or(f, g),
        };
    }
    f
}

fn random_rel(rng: &mut ChaCha8Rng) -> Rel {
    *Rel::ALL.choose(rng).expect("non-empty")
}

/// Random acyclic TCP-net: a random topological permutation, up to two
/// cp-parents per node from earlier nodes, random importance arcs, and a
/// random value order in every parent context.
fn random_net(rng: &mut ChaCha8Rng, domains: Vec<Domain>) -> TcpNet {
    let m = domains.len();
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let mut net = TcpNet::new(domains.clone());
    for (pos, &p) in perm.iter().enumerate() {
        let count = rng.gen_range(0..=pos.min(2));
        let mut parents: Vec<usize> = perm[..pos]
            .choose_multiple(rng, count)
            .copied()
            .filter(|&q| domains[q].size() <= 4 || rng.gen_bool(0.3))
            .collect();
        parents.sort_unstable();
        net.set_parents(p, parents.clone());
        let rows: usize = parents.iter().map(|&q| domains[q].size()).product();
        net.cp_tables[p] = (0..rows)
            .map(|_| {
                let mut vals: Vec<PropertyValue> = domains[p].values().collect();
                vals.shuffle(rng);
                Some(ValueOrder::Explicit(vals))
            })
            .collect();
        for &q in &perm[..pos] {
            if !net.cp_parents[p].contains(&q) && rng.gen_bool(0.15) {
                net.add_i_arc(q, p);
            }
        }
    }
    net
}

fn random_gai(rng: &mut ChaCha8Rng, domains: Vec<Domain>) -> GaiFunction {
    let m = domains.len();
    let mut g = GaiFunction::new(domains);
    let mut covered = vec![false; m];
    let factors = rng.gen_range(1..=m.max(1));
    for _ in 0..factors {
        let width = rng.gen_range(1..=2.min(m));
        let mut scope: Vec<usize> = (0..m)
            .collect::<Vec<_>>()
            .choose_multiple(rng, width)
            .copied()
            .collect();
        scope.sort_unstable();
        scope.iter().for_each(|&p| covered[p] = true);
        let len = g.table_len(&scope);
        g.add_factor(
            scope,
            (0..len).map(|_| rng.gen_range(0..10) as f64).collect(),
        );
    }
    for p in (0..m).filter(|&p| !covered[p]) {
        let len = g.table_len(&[p]);
        g.add_factor(
            vec![p],
            (0..len).map(|_| rng.gen_range(0..10) as f64).collect(),
        );
    }
    g
}

/// Reproducible random instance.
pub fn gen_random(profile: &RandomProfile) -> GeneratedInstance {
    assert!(
        profile.n > 0 && profile.m > 0 && profile.a > 0 && profile.d > 0,
        "profile fields must be positive"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let (n, a, d) = (profile.n, profile.a, profile.d);
    let cat = random_catalog(&mut rng, n, a, d);
    let props: Vec<SetProperty> = (0..profile.m)
        .map(|i| {
            let id = format!("P{}", i + 1);
            let conn = rng.gen_range(0..=profile.k);
            let phi = random_formula(&mut rng, a, d, conn);
            if rng.gen_bool(profile.counter_prob) {
                SetProperty::counter(&id, phi)
            } else if rng.gen_bool(0.15) {
                let conn = rng.gen_range(0..=profile.k);
                let psi = random_formula(&mut rng, a, d, conn);
                SetProperty::count_vs_count(&id, phi, random_rel(&mut rng), psi)
            } else {
                SetProperty::count_vs_const(
                    &id,
                    phi,
                    random_rel(&mut rng),
                    rng.gen_range(0..=(n / 2 + 1) as i64),
                )
            }
        })
        .collect();
    let domains: Vec<Domain> = props.iter().map(|p| p.domain(n)).collect();
    let model = if profile.gai {
        PreferenceModel::gai(random_gai(&mut rng, domains))
    } else {
        PreferenceModel::tcp(random_net(&mut rng, domains))
    };
    let model = if rng.gen_bool(profile.cardinality_prob) {
        model.with_cardinality(rng.gen_range(0..=n))
    } else {
        model
    };
    build(
        cat,
        props,
        model,
        Provenance::Random {
            profile: profile.clone(),
        },
    )
}

fn single_attribute(rng: &mut ChaCha8Rng, n: usize, d: usize, distinct: bool) -> Catalog {
    let schema = AttributeSchema::new(vec![Attribute::categorical(
        "X",
        (0..d).map(|v| format!("x{v}")),
    )])
    .expect("one attribute");
    let mut values: Vec<u32> = if distinct {
        (0..d as u32)
            .collect::<Vec<_>>()
            .choose_multiple(rng, n)
            .copied()
            .collect()
    } else {
        (0..n).map(|_| rng.gen_range(0..d) as u32).collect()
    };
    values.shuffle(rng);
    let items = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| Item {
            id: format!("o{}", i + 1),
            values: vec![AttrValue::Cat(v)],
        })
        .collect();
    Catalog::new(schema, items).expect("valid items")
}

/// Random instance for the atomic greedy solver: one attribute with `d`
/// values, `m` properties `|X = x| REL k`, random boolean TCP-net.
pub fn gen_atomic_class(seed: u64, n: usize, m: usize, d: usize) -> GeneratedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cat = single_attribute(&mut rng, n, d, false);
    let props: Vec<SetProperty> = (0..m)
        .map(|i| {
            let x = rng.gen_range(0..d) as u32;
            let rel = random_rel(&mut rng);
            let k = rng.gen_range(0..=(n / 2 + 1) as i64);
            SetProperty::count_vs_const(
                &format!("P{}", i + 1),
                Formula::atom(0, Rel::Eq, AttrValue::Cat(x)),
                rel,
                k,
            )
        })
        .collect();
    let net = random_net(&mut rng, vec![Domain::Bool; m]);
    build(
        cat,
        props,
        PreferenceModel::tcp(net),
        Provenance::AtomicClass { seed },
    )
}

/// Random instance for the 2-SAT solver: one attribute whose values each
/// occur at most once, `m` properties over one value or the disjunction of
/// two, random boolean TCP-net.
pub fn gen_twosat_class(seed: u64, n: usize, m: usize) -> GeneratedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = n + n / 3 + 1;
    let cat = single_attribute(&mut rng, n, d, true);
    let props: Vec<SetProperty> = (0..m)
        .map(|i| {
            let atom = |rng: &mut ChaCha8Rng| {
                Formula::atom(0, Rel::Eq, AttrValue::Cat(rng.gen_range(0..d) as u32))
            };
            let phi = if rng.gen_bool(0.6) {
                Formula::or(atom(&mut rng), atom(&mut rng))
            } else {
                atom(&mut rng)
            };
            SetProperty::count_vs_const(
                &format!("P{}", i + 1),
                phi,
                random_rel(&mut rng),
                rng.gen_range(0..=3),
            )
        })
        .collect();
    let net = random_net(&mut rng, vec![Domain::Bool; m]);
    build(
        cat,
        props,
        PreferenceModel::tcp(net),
        Provenance::TwoSatClass { seed },
    )
}

/// All connected simple graphs on `v` labelled vertices, as edge lists.
pub fn connected_graphs(v: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..v)
        .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            (0..pairs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect::<Vec<_>>()
        })
        .filter(|edges| is_connected(v, edges))
        .collect()
}

fn is_connected(v: usize, edges: &[(usize, usize)]) -> bool {
    if v == 0 {
        return true;
    }
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Minimum vertex cover size by enumeration of vertex subsets.
pub fn min_vertex_cover(v: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << v)
        .filter(|s| {
            edges
                .iter()
                .all(|&(a, b)| s >> a & 1 == 1 || s >> b & 1 == 1)
        })
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::oracle::{oracle, DEFAULT_GUARD};
    use crate::prefmodel::ModelKind;
    use crate::tractable::check_class;

    fn sum_of(r: &crate::harness::OracleResult) -> PropertyValue {
        *r.assignment.last().unwrap()
    }

    #[test]
    fn vertex_cover_small_graphs() {
        for (v, edges, cover) in [
            (3, vec![(0, 1), (1, 2), (0, 2)], 2),
            (2, vec![(0, 1)], 1),
            (3, vec![(0, 1), (1, 2)], 1),
        ] {
            let g = gen_vertex_cover(v, &edges);
            assert_eq!(g.problem.n(), v);
            assert_eq!(g.problem.catalog.schema().len(), edges.len());
            let r = oracle(&g.problem, DEFAULT_GUARD).unwrap();
            assert!(r.assignment[..edges.len()].iter().all(|&x| x == T));
            assert_eq!(sum_of(&r), PropertyValue::Int(cover));
            assert_eq!(min_vertex_cover(v, &edges), cover as usize);
        }
        // the path's only optimal cover is its middle vertex
        let r = oracle(
            &gen_vertex_cover(3, &[(0, 1), (1, 2)]).problem,
            DEFAULT_GUARD,
        )
        .unwrap();
        assert_eq!(r.witness, vec![1]);
    }

    #[test]
    fn ksat_worked_formula() {
        // (x ∨ ¬y ∨ z) ∧ (y) ∧ (¬x ∨ z)
        let cnf = Cnf {
            num_vars: 3,
            clauses: vec![vec![1, -2, 3], vec![2], vec![-1, 3]],
        };
        let g = gen_ksat(&cnf);
        assert_eq!(g.problem.n(), 6);
        assert_eq!(g.problem.m(), 6);
        assert!(cnf.is_satisfiable());
        let r = oracle(&g.problem, DEFAULT_GUARD).unwrap();
        assert!(r.assignment.iter().all(|&x| x == T));
        let ids = g.problem.ids(&r.witness);
        assert!(ids.contains(&"x2".to_string()) && ids.contains(&"x3".to_string()));

        let contra = Cnf {
            num_vars: 1,
            clauses: vec![vec![1], vec![-1]],
        };
        let r = oracle(&gen_ksat(&contra).problem, DEFAULT_GUARD).unwrap();
        assert!(r.assignment.contains(&F));
    }

    #[test]
    fn max2sat_values() {
        let cnf = Cnf {
            num_vars: 2,
            clauses: vec![vec![1, 2], vec![-1, 2], vec![-1, -2]],
        };
        assert_eq!(cnf.max_satisfiable(), 3);
        let r = oracle(&gen_max2sat(&cnf).problem, DEFAULT_GUARD).unwrap();
        assert_eq!(r.value, 3.0);

        let cnf = Cnf {
            num_vars: 2,
            clauses: vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]],
        };
        assert_eq!(cnf.max_satisfiable(), 3);
        let r = oracle(&gen_max2sat(&cnf).problem, DEFAULT_GUARD).unwrap();
        assert_eq!(r.value, 3.0);
        // every variable property holds at the optimum
        assert!(r.assignment[..2].iter().all(|&x| x == T));

        let single = Cnf {
            num_vars: 2,
            clauses: vec![vec![1, 2]],
        };
        assert_eq!(
            oracle(&gen_max2sat(&single).problem, DEFAULT_GUARD)
                .unwrap()
                .value,
            1.0
        );
    }

    #[test]
    fn random_is_deterministic() {
        let mut prof = RandomProfile::new(12, 5, 42);
        prof.counter_prob = 0.3;
        prof.cardinality_prob = 0.5;
        let a = gen_random(&prof);
        let b = gen_random(&prof);
        assert_eq!(a.problem.catalog.items(), b.problem.catalog.items());
        assert_eq!(a.problem.props, b.problem.props);
        assert_eq!(a.problem.model, b.problem.model);
        assert!(oracle(&a.problem, DEFAULT_GUARD).is_ok() || a.problem.cardinality().is_some());
        prof.gai = true;
        let c = gen_random(&prof);
        assert!(matches!(c.problem.model.kind, ModelKind::Gai(_)));
    }

    #[test]
    fn class_generators_are_in_class() {
        for seed in 0..20 {
            let g = gen_atomic_class(seed, 10, 5, 3);
            assert!(
                check_class(&g.problem).atomic_greedy,
                "{:?}",
                check_class(&g.problem).reasons
            );
            let g = gen_twosat_class(seed, 10, 5);
            let prof = check_class(&g.problem);
            assert!(prof.two_sat, "{:?}", prof.reasons);
        }
    }

    #[test]
    fn graph_enumeration() {
        // connected labelled graphs on 1..=4 vertices: 1, 1, 4, 38
        let counts: Vec<usize> = (1..=4).map(|v| connected_graphs(v).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 38]);
    }
}

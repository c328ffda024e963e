//! A film-festival selection model over a synthetic movie catalog: pick 5
//! movies under a TCP-net over 14 boolean set properties.
//!
//! The catalog generator draws correlated attributes (old movies tend to be
//! black-and-white with mono sound, film-noir is mostly old, Spielberg is
//! rare) so the properties interact the way they would on real data.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{parse_formula, AttrValue, Attribute, AttributeSchema, Catalog, Item, Rel};
use crate::prefmodel::{PreferenceModel, TcpNet, ValueOrder};
use crate::problem::Problem;
use crate::properties::{Domain, PropertyValue, SetProperty};

use super::gen::{GeneratedInstance, Provenance};

const T: PropertyValue = PropertyValue::Bool(true);
const F: PropertyValue = PropertyValue::Bool(false);

pub const FESTIVAL_SIZE: usize = 5;

const GENRES: [&str; 12] = [
    "Comedy",
    "Thriller",
    "Family",
    "Drama",
    "War",
    "Film-noir",
    "Action",
    "Romance",
    "Horror",
    "Documentary",
    "Western",
    "Sci-Fi",
];
const LOCATIONS: [&str; 4] = ["North America", "Europe", "Asia", "Other"];
const DIRECTORS: [&str; 6] = [
    "Spielberg",
    "Hitchcock",
    "Kurosawa",
    "Scorsese",
    "Bergman",
    "Other",
];

/// Which property list to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MovieModel {
    /// The first `k` of the 14 base properties (`k` = 5, 9 or 14).
    Prefix(usize),
    /// Spielberg at most once and at least four war/film-noir movies.
    Altered,
    /// As `Altered`, with at least four film-noir movies and at least five
    /// commercial successes. These pull against "all movies new" and cause
    /// many property-level backtracks.
    Tension,
}

pub fn movie_schema() -> AttributeSchema {
    AttributeSchema::new(vec![
        Attribute::integer("Year", Some(1920), Some(2008)),
        Attribute::categorical("Genre", GENRES),
        Attribute::categorical("Color", ["Color", "B&W"]),
        Attribute::categorical("Director", DIRECTORS),
        Attribute::categorical("Sound", ["Mono", "Stereo", "Dolby"]),
        Attribute::categorical("Location", LOCATIONS),
        Attribute::categorical("Actor", ["Famous", "Unknown"]),
        Attribute::categorical("Actress", ["Famous", "Unknown"]),
        Attribute::integer("ReleaseDate", Some(1920), Some(2009)),
        Attribute::integer("NetProfit", None, None),
    ])
    .expect("distinct names")
}

fn cat(schema: &AttributeSchema, attr: &str, v: &str) -> AttrValue {
    let i = schema.index_of(attr).expect("known attribute");
    AttrValue::Cat(schema.attribute(i).category(v).expect("known value"))
}

/// `n` synthetic movies, reproducible from `seed`.
pub fn movie_catalog(n: usize, seed: u64) -> Catalog {
    let schema = movie_schema();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..n)
        .map(|i| {
            // skewed towards recent years
            let year = 2008 - (rng.gen::<f64>().powi(2) * 88.0) as i64;
            let old = year < 1960;
            let genre = if old && rng.gen_bool(0.15) {
                "Film-noir"
            } else {
                *GENRES
                    .iter()
                    .filter(|&&g| g != "Film-noir")
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .expect("non-empty")
            };
            let color = if rng.gen_bool(if old {
                0.8
            } else if year < 1970 {
                0.4
            } else {
                0.03
            }) {
                "B&W"
            } else {
                "Color"
            };
            let director = if rng.gen_bool(0.01) {
                "Spielberg"
            } else {
                DIRECTORS[1 + rng.gen_range(0..DIRECTORS.len() - 1)]
            };
            let sound = if year < 1975 && rng.gen_bool(0.7) {
                "Mono"
            } else if rng.gen_bool(0.5) {
                "Stereo"
            } else {
                "Dolby"
            };
            let location = LOCATIONS[if rng.gen_bool(0.5) {
                0
            } else {
                rng.gen_range(1..LOCATIONS.len())
            }];
            let famous = |rng: &mut ChaCha8Rng| {
                if rng.gen_bool(0.2) {
                    "Famous"
                } else {
                    "Unknown"
                }
            };
            let actor = famous(&mut rng);
            let actress = famous(&mut rng);
            let release = (year + rng.gen_range(0..=1)).min(2009);
            let profit = rng.gen_range(-2_000_000i64..6_000_000);
            Item {
                id: format!("m{}", i + 1),
                values: vec![
                    AttrValue::Int(year),
                    cat(&schema, "Genre", genre),
                    cat(&schema, "Color", color),
                    cat(&schema, "Director", director),
                    cat(&schema, "Sound", sound),
                    cat(&schema, "Location", location),
                    cat(&schema, "Actor", actor),
                    cat(&schema, "Actress", actress),
                    AttrValue::Int(release),
                    AttrValue::Int(profit),
                ],
            }
        })
        .collect();
    Catalog::new(schema, items).expect("generated values fit the schema")
}

/// The property list for `model`.
pub fn movie_properties(schema: &AttributeSchema, model: MovieModel) -> Vec<SetProperty> {
    let (sp6, sp8, sp8_rel, sp8_k, sp14_k) = match model {
        MovieModel::Prefix(_) => (
            Rel::Ge,
            r#"Genre = War | Genre = "Film-noir""#,
            Rel::Eq,
            0,
            2,
        ),
        MovieModel::Altered => (
            Rel::Le,
            r#"Genre = War | Genre = "Film-noir""#,
            Rel::Ge,
            4,
            2,
        ),
        MovieModel::Tension => (Rel::Le, r#"Genre = "Film-noir""#, Rel::Ge, 4, 5),
    };
    let rows: [(&str, &str, Rel, i64); 14] = [
        ("SP1", "Year >= 2002", Rel::Eq, 5),
        ("SP2", "Genre = Comedy", Rel::Ge, 2),
        ("SP3", "Genre = Thriller", Rel::Le, 3),
        ("SP4", "Genre = Family", Rel::Gt, 1),
        ("SP5", r#"Color = "B&W""#, Rel::Gt, 1),
        ("SP6", "Director = Spielberg", sp6, 1),
        ("SP7", "Sound = Mono", Rel::Ge, 2),
        ("SP8", sp8, sp8_rel, sp8_k),
        ("SP9", r#"Location = "North America""#, Rel::Gt, 1),
        ("SP10", "Actor = Famous | Actress = Famous", Rel::Eq, 5),
        ("SP11", "Actress = Famous", Rel::Ge, 2),
        ("SP12", "Genre = Drama", Rel::Ge, 2),
        ("SP13", "ReleaseDate < 1970", Rel::Le, 1),
        ("SP14", "NetProfit >= 1000000", Rel::Ge, sp14_k),
    ];
    let take = match model {
        MovieModel::Prefix(k) => k.min(14),
        _ => 14,
    };
    rows[..take]
        .iter()
        .map(|&(id, f, rel, k)| {
            SetProperty::count_vs_const(
                id,
                parse_formula(f, schema).expect("valid formula"),
                rel,
                k,
            )
        })
        .collect()
}

/// TCP-net over the first `m` properties (indices are `SPi - 1`).
///
/// * all movies new (SP1) is preferred and most important;
/// * comedies (SP2), family movies (SP4) and few thrillers (SP3) are
///   preferred when at least two comedies are present; otherwise more
///   thrillers are preferred; SP4 is more important than SP3;
/// * black-and-white (SP5) is wanted only when not all movies are new;
/// * Spielberg (SP6) is wanted only when not all movies are new; mono
///   sound (SP7) is wanted when SP6 holds;
/// * no war or film-noir (SP8) is preferred; if that fails, few North
///   American movies (SP9) are preferred, and SP9 is more important than
///   SP5;
/// * SP10 through SP14 prefer true unconditionally, SP10 over SP11.
pub fn movie_tcpnet(m: usize) -> TcpNet {
    let mut net = TcpNet::new(vec![Domain::Bool; m]);
    let tf = || ValueOrder::Explicit(vec![T, F]);
    let ft = || ValueOrder::Explicit(vec![F, T]);
    for p in 0..m {
        net.set_order_all(p, tf());
    }
    let has = |p: usize| p < m;
    let cond =
        |net: &mut TcpNet, child: usize, parent: usize, on_t: ValueOrder, on_f: ValueOrder| {
            net.set_parents(child, vec![parent]);
            net.set_order(child, &[T], on_t).expect("boolean context");
            net.set_order(child, &[F], on_f).expect("boolean context");
        };
    if has(1) {
        net.add_i_arc(0, 1);
    }
    if has(2) {
        cond(&mut net, 2, 1, tf(), ft());
    }
    if has(3) {
        cond(&mut net, 3, 1, tf(), tf());
        if has(2) {
            net.add_i_arc(3, 2);
        }
    }
    if has(4) {
        cond(&mut net, 4, 0, ft(), tf());
    }
    if has(5) {
        cond(&mut net, 5, 0, ft(), tf());
    }
    if has(6) {
        cond(&mut net, 6, 5, tf(), ft());
    }
    if has(8) {
        cond(&mut net, 8, 7, tf(), ft());
        net.add_i_arc(8, 4);
    }
    if has(10) {
        net.add_i_arc(9, 10);
    }
    net
}

/// Festival problem over `n` synthetic movies with exactly
/// [`FESTIVAL_SIZE`] selected.
pub fn movie_problem(n: usize, seed: u64, model: MovieModel) -> GeneratedInstance {
    let catalog = movie_catalog(n, seed);
    let props = movie_properties(catalog.schema(), model);
    let net = movie_tcpnet(props.len());
    let problem = Problem::new(
        catalog,
        props,
        PreferenceModel::tcp(net).with_cardinality(FESTIVAL_SIZE),
    )
    .expect("consistent movie model");
    GeneratedInstance {
        problem,
        provenance: Provenance::Movie {
            n,
            seed,
            tension: model == MovieModel::Tension,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefmodel::{topo_property_order, validate_tcpnet};

    #[test]
    fn catalog_is_reproducible() {
        let a = movie_catalog(200, 7);
        let b = movie_catalog(200, 7);
        assert_eq!(a.items(), b.items());
        assert_ne!(a.items(), movie_catalog(200, 8).items());
        let schema = a.schema();
        let spielberg = parse_formula("Director = Spielberg", schema).unwrap();
        let noir = parse_formula(r#"Genre = "Film-noir" & Year >= 2002"#, schema).unwrap();
        assert!(crate::catalog::count_satisfying(&spielberg, a.items()) < 10);
        assert_eq!(crate::catalog::count_satisfying(&noir, a.items()), 0);
    }

    #[test]
    fn nets_are_valid() {
        for m in [5, 9, 14] {
            let net = movie_tcpnet(m);
            validate_tcpnet(&net).unwrap();
            assert_eq!(topo_property_order(&net)[0], 0);
        }
        let schema = movie_schema();
        for model in [
            MovieModel::Prefix(5),
            MovieModel::Prefix(9),
            MovieModel::Prefix(14),
            MovieModel::Altered,
            MovieModel::Tension,
        ] {
            let props = movie_properties(&schema, model);
            assert!(props.iter().all(|p| p.is_boolean()));
        }
        assert_eq!(movie_properties(&schema, MovieModel::Prefix(9)).len(), 9);
    }
}

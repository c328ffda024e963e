//! The four-senator example used throughout the documentation and tests.

use crate::catalog::{
    load_catalog, parse_formula, Attribute, AttributeSchema, Catalog, CatalogFormat, Rel,
};
use crate::prefmodel::{GaiFunction, PreferenceModel, TcpNet, ValueOrder};
use crate::problem::Problem;
use crate::properties::{Domain, PropertyValue, SetProperty};

const T: PropertyValue = PropertyValue::Bool(true);
const F: PropertyValue = PropertyValue::Bool(false);

pub const SENATORS_CSV: &str = "id,Party,View,Experience
o1,Republican,conservative,inexperienced
o2,Republican,ultra conservative,experienced
o3,Democrat,conservative,experienced
o4,Democrat,liberal,experienced
";

pub fn senators_schema() -> AttributeSchema {
    AttributeSchema::new(vec![
        Attribute::categorical("Party", ["Republican", "Democrat"]),
        Attribute::categorical("View", ["liberal", "conservative", "ultra conservative"]),
        Attribute::categorical("Experience", ["experienced", "inexperienced"]),
    ])
    .expect("valid schema")
}

pub fn senators_catalog() -> Catalog {
    load_catalog(
        SENATORS_CSV.as_bytes(),
        CatalogFormat::Csv,
        Some(&senators_schema()),
    )
    .expect("valid catalog")
}

/// P1: at least two Republicans or conservatives; P2: at least two
/// experienced members; P3: at least one liberal.
pub fn senator_properties(cat: &Catalog) -> Vec<SetProperty> {
    let f = |t: &str| parse_formula(t, cat.schema()).expect("valid formula");
    vec![
        SetProperty::count_vs_const(
            "P1",
            f("Party = Republican | View = conservative"),
            Rel::Ge,
            2,
        ),
        SetProperty::count_vs_const("P2", f("Experience = experienced"), Rel::Ge, 2),
        SetProperty::count_vs_const("P3", f("View = liberal"), Rel::Ge, 1),
    ]
}

/// P1 true preferred; P2 preferred equal to P1; P3 true preferred and less
/// important than both.
pub fn senators_tcpnet() -> TcpNet {
    let mut net = TcpNet::new(vec![Domain::Bool; 3]);
    net.set_order_all(0, ValueOrder::Explicit(vec![T, F]));
    net.set_parents(1, vec![0]);
    net.set_order(1, &[T], ValueOrder::Explicit(vec![T, F]))
        .expect("context");
    net.set_order(1, &[F], ValueOrder::Explicit(vec![F, T]))
        .expect("context");
    net.set_order_all(2, ValueOrder::Explicit(vec![T, F]));
    net.add_i_arc(0, 2);
    net.add_i_arc(1, 2);
    net
}

/// `U1(P1,P2) + U2(P3)` with `U1`: TT=10, TF=8, FT=2, FF=5 and `U2`: T=1, F=0.
pub fn senators_gai() -> GaiFunction {
    let mut g = GaiFunction::new(vec![Domain::Bool; 3]);
    g.add_factor(vec![0, 1], vec![5.0, 2.0, 8.0, 10.0]);
    g.add_factor(vec![2], vec![0.0, 1.0]);
    g
}

/// The example with a required size of 3, under the value function or the
/// TCP-net.
pub fn senators_problem(gai: bool) -> Problem {
    let cat = senators_catalog();
    let props = senator_properties(&cat);
    let model = if gai {
        PreferenceModel::gai(senators_gai())
    } else {
        PreferenceModel::tcp(senators_tcpnet())
    };
    Problem::new(cat, props, model.with_cardinality(3)).expect("consistent example")
}

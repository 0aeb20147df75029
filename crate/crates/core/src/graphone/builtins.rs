//! The catalog of 1-graphs: the endless 1-path, the ladder of endless
//! paths, the ladder with endless rungs but plain ground branches, and the
//! chain of diamond chains.
//!
//! Each takes an optional truncation `K` that bounds the outer index, which
//! turns every infinite family the solver must enumerate into a finite one.
//! The inner index along a section stays infinite.

use crate::error::{Error, Result};
use crate::expr::build::*;
use crate::expr::{Cond, DistExpr, IntExpr};
use crate::graphzero::{Domain, EdgeRule, Family, Flags, GraphPresentation, Slot};
use crate::metric::DistCase;
use crate::node::NodeRef;

use super::{Embed, Membership, OneFamily, OneFlags, OneGraphPresentation, SectionTable, Template, TipRole};

pub const NAMES: [&str; 4] = ["endless_1path", "ladder_of_endless_paths", "ladder_mixed", "diamond_chain"];

pub fn builtin(name: &str) -> Result<OneGraphPresentation> {
    build(name, None)
}

/// The same graph with the outer index cut to `0..=k` (or `-k..=k`).
pub fn builtin_truncated(name: &str, k: u64) -> Result<OneGraphPresentation> {
    build(name, Some(k as i64))
}

fn build(name: &str, k: Option<i64>) -> Result<OneGraphPresentation> {
    let g = match name {
        "endless_1path" => endless_1path(k),
        "ladder_of_endless_paths" => ladder_of_endless_paths(k),
        "ladder_mixed" => ladder_mixed(k),
        "diamond_chain" => diamond_chain(k),
        _ => return Err(Error::Unsupported(format!("unknown 1-graph builtin {name:?}"))),
    };
    g.validate()?;
    Ok(g)
}

/// Outer index slot: naturals up to `k + extra`, or all naturals.
fn nat_upto(k: Option<i64>, extra: i64) -> Slot {
    match k {
        Some(k) => Slot::bounded(Domain::Nat, 0, k + extra),
        None => Slot::nat(),
    }
}

fn int_within(k: Option<i64>, extra: i64) -> Slot {
    match k {
        Some(k) => Slot::bounded(Domain::Int, -k, k + extra),
        None => Slot::int(),
    }
}

fn fam(name: &str, slots: Vec<Slot>) -> Family {
    Family::new(name, slots)
}

fn one(name: &str, slots: Vec<Slot>) -> OneFamily {
    OneFamily { family: fam(name, slots), embeds: None }
}

fn member(family: &str, section: &str, params: Vec<IntExpr>) -> Membership {
    Membership { family: family.into(), section: Template::new(section, params) }
}

fn tip(section: &str, role: &str, one_node: Template, inverse: Vec<IntExpr>) -> TipRole {
    TipRole {
        section: section.into(),
        role: role.into(),
        extra_slots: vec![],
        one_node,
        inverse,
        free_slots: vec![],
        routable: true,
    }
}

fn zero_graph(name: &str, families: Vec<Family>, edge_rules: Vec<EdgeRule>, oracle: Vec<DistCase>, hub: bool) -> GraphPresentation {
    GraphPresentation {
        name: name.into(),
        families,
        edge_rules,
        edits: vec![],
        flags: Flags { locally_finite: !hub, connected: false, infinite: true },
        distance_oracle: oracle,
        geodesic_oracle: vec![],
        sphere_oracle: vec![],
        standard: None,
    }
}

/// Rules for a family `f(k, i)` of endless or one-ended paths along `i`.
fn path_rules(f: &str) -> Vec<EdgeRule> {
    vec![
        EdgeRule::to(f, f, vec![x(0), add(x(1), c(1))]),
        EdgeRule::to(f, f, vec![x(0), sub(x(1), c(1))]),
    ]
}

fn d(a: IntExpr, b: IntExpr) -> IntExpr {
    abs(sub(a, b))
}

fn same_section() -> Cond {
    eq(x(0), y(0))
}

fn omegas(e: IntExpr) -> DistExpr {
    ord(e, c(0))
}

/// Distance along the section when both nodes share it, else `other`.
fn within_or(inner: IntExpr, other: DistExpr) -> DistExpr {
    dif(same_section(), fin(inner), other)
}

/// `min(|X0 − Y0|, |X0 + 1 − Y0|)`: how far the 1-node `Y` is from the
/// nearer end of section `X0`, whose ends are `X0` and `X0 + 1`.
fn to_nearer_end() -> IntExpr {
    min(d(x(0), y(0)), d(add(x(0), c(1)), y(0)))
}

fn flags(k: Option<i64>, locally: bool) -> OneFlags {
    OneFlags { locally_one_finite: locally, one_wconnected: true, infinitely_many_boundary: k.is_none() }
}

/// Sections `E(k)` are endless paths `e(k, i)`; the left end of `E(k)` and
/// the right end of `E(k − 1)` make up the 1-node `p(k)`.
fn endless_1path(k: Option<i64>) -> OneGraphPresentation {
    let z = zero_graph(
        "endless_1path",
        vec![fam("e", vec![int_within(k, 0), Slot::int()])],
        path_rules("e"),
        vec![DistCase::new("e", "e", dif(same_section(), fin(d(x(1), y(1))), DistExpr::Unreachable))],
        false,
    );
    let oracle = vec![
        DistCase::new("p", "p", omegas(mul(2, d(x(0), y(0))))),
        DistCase::new("e", "p", omegas(abs(sub(mul(2, sub(y(0), x(0))), c(1))))),
        DistCase::new("e", "e", within_or(d(x(1), y(1)), omegas(mul(2, d(x(0), y(0)))))),
    ];
    OneGraphPresentation {
        zero_graph: z,
        sections: SectionTable { families: vec![fam("E", vec![int_within(k, 0)])], membership: vec![member("e", "E", vec![x(0)])] },
        one_nodes: vec![one("p", vec![int_within(k, 1)])],
        tip_table: vec![
            tip("E", "left", Template::new("p", vec![x(0)]), vec![x(0)]),
            tip("E", "right", Template::new("p", vec![add(x(0), c(1))]), vec![sub(x(0), c(1))]),
        ],
        one_flags: flags(k, true),
        wdistance_oracle: oracle,
        one_standard: Some(NodeRef::new("p", vec![0])),
    }
}

/// The grounded ladder with every branch replaced by an endless path:
/// rungs `H(k)` join `n1(k)` to `n1(k+1)`, uprights `V(k)` join `n1(k)` to
/// the ground 1-node `g1`.
fn ladder_of_endless_paths(k: Option<i64>) -> OneGraphPresentation {
    let rungs = |e: i64| nat_upto(k.map(|k| (k - 1).max(0)), e);
    let z = zero_graph(
        "ladder_of_endless_paths",
        vec![fam("h", vec![rungs(0), Slot::int()]), fam("v", vec![nat_upto(k, 0), Slot::int()])],
        [path_rules("h"), path_rules("v")].concat(),
        vec![
            DistCase::new("h", "h", dif(same_section(), fin(d(x(1), y(1))), DistExpr::Unreachable)),
            DistCase::new("v", "v", dif(same_section(), fin(d(x(1), y(1))), DistExpr::Unreachable)),
            DistCase::new("h", "v", DistExpr::Unreachable),
        ],
        false,
    );
    // ladder distance between the 1-nodes, doubled: two tips per rung
    let oracle = vec![
        DistCase::new("n1", "n1", omegas(mul(2, min(d(x(0), y(0)), c(2))))),
        DistCase::new("n1", "g1", omegas(c(2))),
        DistCase::new("g1", "g1", omegas(c(0))),
        DistCase::new("h", "n1", omegas(add(c(1), mul(2, min(to_nearer_end(), c(2)))))),
        DistCase::new("h", "g1", omegas(c(3))),
        DistCase::new("v", "n1", omegas(add(c(1), mul(2, min(d(x(0), y(0)), c(1)))))),
        DistCase::new("v", "g1", omegas(c(1))),
        DistCase::new(
            "h",
            "h",
            within_or(d(x(1), y(1)), omegas(add(c(2), mul(2, min(sub(d(x(0), y(0)), c(1)), c(2)))))),
        ),
        DistCase::new("h", "v", omegas(add(c(2), mul(2, min(to_nearer_end(), c(1)))))),
        DistCase::new("v", "v", within_or(d(x(1), y(1)), omegas(c(2)))),
    ];
    let mut ground = tip("V", "right", Template::new("g1", vec![]), vec![x(0)]);
    ground.free_slots = vec![nat_upto(k, 0)];
    OneGraphPresentation {
        zero_graph: z,
        sections: SectionTable {
            families: vec![fam("H", vec![rungs(0)]), fam("V", vec![nat_upto(k, 0)])],
            membership: vec![member("h", "H", vec![x(0)]), member("v", "V", vec![x(0)])],
        },
        one_nodes: vec![one("n1", vec![nat_upto(k, 0)]), one("g1", vec![])],
        tip_table: vec![
            tip("H", "left", Template::new("n1", vec![x(0)]), vec![x(0)]),
            tip("H", "right", Template::new("n1", vec![add(x(0), c(1))]), vec![sub(x(0), c(1))]),
            tip("V", "left", Template::new("n1", vec![x(0)]), vec![x(0)]),
            ground,
        ],
        one_flags: flags(k, true),
        wdistance_oracle: oracle,
        one_standard: Some(NodeRef::new("n1", vec![0])),
    }
}

/// The grounded ladder with endless rungs `H(k)` but the original branches
/// `v(k)`–`g` to the ground. Each 1-node `n1(k)` contains the 0-node `v(k)`.
fn ladder_mixed(k: Option<i64>) -> OneGraphPresentation {
    let rungs = |e: i64| nat_upto(k.map(|k| (k - 1).max(0)), e);
    let z = zero_graph(
        "ladder_mixed",
        vec![fam("g", vec![]), fam("v", vec![nat_upto(k, 0)]), fam("h", vec![rungs(0), Slot::int()])],
        [vec![EdgeRule::all_of("g", "v"), EdgeRule::to("v", "g", vec![])], path_rules("h")].concat(),
        vec![
            DistCase::new("h", "h", dif(same_section(), fin(d(x(1), y(1))), DistExpr::Unreachable)),
            DistCase::new("v", "v", fin(mul(2, min(d(x(0), y(0)), c(1))))),
            DistCase::new("v", "g", fin(c(1))),
            DistCase::new("h", "g", DistExpr::Unreachable),
            DistCase::new("h", "v", DistExpr::Unreachable),
        ],
        true,
    );
    let one_to_one = fin(mul(2, min(d(x(0), y(0)), c(1))));
    let rung_to_one = ord(c(1), mul(2, min(to_nearer_end(), c(1))));
    let oracle = vec![
        DistCase::new("n1", "n1", one_to_one.clone()),
        DistCase::new("n1", "g", fin(c(1))),
        DistCase::new("g", "g", fin(c(0))),
        DistCase::new("h", "g", ord(c(1), c(1))),
        DistCase::new("h", "n1", rung_to_one.clone()),
        DistCase::new("h", "h", within_or(d(x(1), y(1)), ord(c(2), mul(2, min(sub(d(x(0), y(0)), c(1)), c(1)))))),
        // v(k) is measured as the 1-node containing it
        DistCase::new("v", "v", one_to_one.clone()),
        DistCase::new("v", "n1", one_to_one),
        DistCase::new("v", "g", fin(c(1))),
        DistCase::new("h", "v", rung_to_one),
    ];
    let mut n1 = one("n1", vec![nat_upto(k, 0)]);
    n1.embeds = Some(Embed { zero: Template::new("v", vec![x(0)]), owner_params: vec![x(0)] });
    OneGraphPresentation {
        zero_graph: z,
        sections: SectionTable {
            families: vec![fam("star", vec![]), fam("H", vec![rungs(0)])],
            membership: vec![member("g", "star", vec![]), member("v", "star", vec![]), member("h", "H", vec![x(0)])],
        },
        one_nodes: vec![n1],
        tip_table: vec![
            tip("H", "left", Template::new("n1", vec![x(0)]), vec![x(0)]),
            tip("H", "right", Template::new("n1", vec![add(x(0), c(1))]), vec![sub(x(0), c(1))]),
        ],
        one_flags: flags(k, false),
        wdistance_oracle: oracle,
        one_standard: Some(NodeRef::single("g")),
    }
}

/// Chains `C(k)` of diamonds: `a(k,i)` joins `l(k,i)` and `r(k,i)`, which
/// both join `a(k,i+1)`. The left-side tip of `C(k)` lies in `x1(k)`, the
/// right-side tip in `x1(k+1)`. Tips that switch sides infinitely often are
/// represented by one family `bf(j)`, each in its own singleton `s1(k,j)`.
fn diamond_chain(k: Option<i64>) -> OneGraphPresentation {
    let chain = || vec![nat_upto(k, 0), Slot::nat()];
    let rules = vec![
        EdgeRule::to("a", "l", vec![x(0), x(1)]),
        EdgeRule::to("a", "r", vec![x(0), x(1)]),
        EdgeRule::to("a", "l", vec![x(0), sub(x(1), c(1))]),
        EdgeRule::to("a", "r", vec![x(0), sub(x(1), c(1))]),
        EdgeRule::to("l", "a", vec![x(0), x(1)]),
        EdgeRule::to("l", "a", vec![x(0), add(x(1), c(1))]),
        EdgeRule::to("r", "a", vec![x(0), x(1)]),
        EdgeRule::to("r", "a", vec![x(0), add(x(1), c(1))]),
    ];
    // a(k,i) sits at height 2i, l(k,i) and r(k,i) at height 2i+1
    let aa = mul(2, d(x(1), y(1)));
    let a_side = abs(sub(mul(2, sub(x(1), y(1))), c(1)));
    let across = mul(2, max(d(x(1), y(1)), c(1)));
    let mut zero_oracle = vec![];
    let mut oracle = vec![];
    let pairs = [
        ("a", "a", aa.clone()),
        ("a", "l", a_side.clone()),
        ("a", "r", a_side),
        ("l", "l", aa.clone()),
        ("r", "r", aa),
        ("l", "r", across),
    ];
    for (p, q, inner) in pairs {
        zero_oracle.push(DistCase::new(p, q, dif(same_section(), fin(inner.clone()), DistExpr::Unreachable)));
        oracle.push(DistCase::new(p, q, within_or(inner, omegas(mul(2, d(x(0), y(0)))))));
    }
    for z in ["a", "l", "r"] {
        oracle.push(DistCase::new(z, "x1", omegas(add(c(1), mul(2, to_nearer_end())))));
        oracle.push(DistCase::new("s1", z, dif(same_section(), omegas(c(1)), omegas(add(mul(2, d(x(0), y(0))), c(1))))));
    }
    oracle.push(DistCase::new("x1", "x1", omegas(mul(2, d(x(0), y(0))))));
    oracle.push(DistCase::new("s1", "x1", omegas(add(c(2), mul(2, to_nearer_end())))));
    oracle.push(DistCase::new(
        "s1",
        "s1",
        dif(
            and(same_section(), eq(x(1), y(1))),
            omegas(c(0)),
            dif(same_section(), omegas(c(2)), omegas(add(mul(2, d(x(0), y(0))), c(2)))),
        ),
    ));
    let z = zero_graph(
        "diamond_chain",
        vec![fam("a", chain()), fam("l", chain()), fam("r", chain())],
        rules,
        zero_oracle,
        false,
    );
    let singles = match k {
        Some(k) => Slot::bounded(Domain::Nat, 0, k),
        None => Slot::nat(),
    };
    let back_and_forth = TipRole {
        section: "C".into(),
        role: "bf".into(),
        extra_slots: vec![singles.clone()],
        one_node: Template::new("s1", vec![x(0), x(1)]),
        inverse: vec![x(0), x(1)],
        free_slots: vec![],
        routable: false,
    };
    OneGraphPresentation {
        zero_graph: z,
        sections: SectionTable {
            families: vec![fam("C", vec![nat_upto(k, 0)])],
            membership: ["a", "l", "r"].into_iter().map(|f| member(f, "C", vec![x(0)])).collect(),
        },
        one_nodes: vec![one("x1", vec![nat_upto(k, 1)]), one("s1", vec![nat_upto(k, 0), singles])],
        tip_table: vec![
            tip("C", "left", Template::new("x1", vec![x(0)]), vec![x(0)]),
            tip("C", "right", Template::new("x1", vec![add(x(0), c(1))]), vec![sub(x(0), c(1))]),
            back_and_forth,
        ],
        one_flags: flags(k, true),
        wdistance_oracle: oracle,
        one_standard: Some(NodeRef::new("x1", vec![0])),
    }
}

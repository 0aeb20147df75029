//! The catalog of 0-graphs: paths, the grounded ladder, the ladder with a
//! tail at its ground node, and the square lattice with optional edits.

use crate::error::{Error, Result};
use crate::expr::build::*;
use crate::expr::{DistExpr, IntExpr, NodeExpr};
use crate::graphzero::{Edit, EdgeRule, Family, Flags, GeodesicCase, GraphPresentation, Slot, SphereCase};
use crate::metric::DistCase;
use crate::node::NodeRef;

pub const NAMES: [&str; 6] = ["endless_path", "one_ended_path", "grounded_ladder", "ladder_with_tail", "grid2d", "grid2d_edited"];

pub fn builtin(name: &str) -> Result<GraphPresentation> {
    builtin_with_edits(name, &[])
}

/// `grid2d_edited` takes the edit list; other names reject a nonempty one.
pub fn builtin_with_edits(name: &str, edits: &[Edit]) -> Result<GraphPresentation> {
    if !edits.is_empty() && name != "grid2d_edited" {
        return Err(Error::Precondition(format!("builtin {name} does not accept edits")));
    }
    let g = match name {
        "endless_path" => path(name, Slot::int()),
        "one_ended_path" => path(name, Slot::nat()),
        "grounded_ladder" => grounded_ladder(),
        "ladder_with_tail" => ladder_with_tail(),
        "grid2d" => grid2d(name),
        "grid2d_edited" => grid2d_edited(edits),
        _ => return Err(Error::Unsupported(format!("unknown 0-graph builtin {name:?}"))),
    };
    g.validate()?;
    Ok(g)
}

fn geo(a: &str, b: &str, expr: NodeExpr) -> GeodesicCase {
    GeodesicCase { families: [a.into(), b.into()], expr }
}

fn absdiff() -> IntExpr {
    abs(sub(x(0), y(0)))
}

/// Walks from `x(X0)` toward `x(Y0)` one step per unit of `t`.
fn toward(fam: &str) -> NodeExpr {
    nif(le(x(0), y(0)), node(fam, vec![add(x(0), t())]), node(fam, vec![sub(x(0), t())]))
}

fn path_rules(fam: &str) -> Vec<EdgeRule> {
    vec![EdgeRule::to(fam, fam, vec![add(x(0), c(1))]), EdgeRule::to(fam, fam, vec![sub(x(0), c(1))])]
}

fn path(name: &str, slot: Slot) -> GraphPresentation {
    GraphPresentation {
        name: name.into(),
        families: vec![Family::new("x", vec![slot])],
        edge_rules: path_rules("x"),
        edits: vec![],
        flags: Flags { locally_finite: true, connected: true, infinite: true },
        distance_oracle: vec![DistCase::new("x", "x", fin(absdiff()))],
        geodesic_oracle: vec![geo("x", "x", toward("x"))],
        sphere_oracle: vec![SphereCase { family: "x".into(), expr: node("x", vec![add(x(0), t())]) }],
        standard: Some(NodeRef::new("x", vec![0])),
    }
}

/// Distance between two rungs: 0, 1 for neighbours, else 2 through the ground.
fn rung_dist() -> DistExpr {
    dif(eq(x(0), y(0)), fin(c(0)), dif(eq(absdiff(), c(1)), fin(c(1)), fin(c(2))))
}

fn ladder_parts() -> (Vec<Family>, Vec<EdgeRule>, Vec<DistCase>, Vec<GeodesicCase>) {
    let families = vec![Family::new("x", vec![Slot::nat()]), Family::new("g", vec![])];
    let mut rules = path_rules("x");
    rules.push(EdgeRule::to("x", "g", vec![]));
    rules.push(EdgeRule::all_of("g", "x"));
    let oracle = vec![
        DistCase::new("x", "x", rung_dist()),
        DistCase::new("x", "g", fin(c(1))),
        DistCase::new("g", "g", fin(c(0))),
    ];
    let xy = node("x", vec![y(0)]);
    let geos = vec![
        geo(
            "x",
            "x",
            nif(
                le(absdiff(), c(1)),
                nif(eq(t(), c(0)), node("x", vec![x(0)]), xy.clone()),
                nif(eq(t(), c(0)), node("x", vec![x(0)]), nif(eq(t(), c(1)), node("g", vec![]), xy.clone())),
            ),
        ),
        geo("x", "g", nif(eq(t(), c(0)), node("x", vec![x(0)]), node("g", vec![]))),
        geo("g", "x", nif(eq(t(), c(0)), node("g", vec![]), xy)),
        geo("g", "g", node("g", vec![])),
    ];
    (families, rules, oracle, geos)
}

fn grounded_ladder() -> GraphPresentation {
    let (families, edge_rules, distance_oracle, geodesic_oracle) = ladder_parts();
    GraphPresentation {
        name: "grounded_ladder".into(),
        families,
        edge_rules,
        edits: vec![],
        flags: Flags { locally_finite: false, connected: true, infinite: true },
        distance_oracle,
        geodesic_oracle,
        sphere_oracle: vec![],
        standard: Some(NodeRef::new("x", vec![0])),
    }
}

fn ladder_with_tail() -> GraphPresentation {
    let (mut families, mut rules, mut oracle, mut geos) = ladder_parts();
    families.push(Family::new("t", vec![Slot::nat()]));
    rules.extend(path_rules("t"));
    rules.push(EdgeRule::to("t", "g", vec![]).guarded(eq(x(0), c(0))));
    rules.push(EdgeRule::to("g", "t", vec![c(0)]));
    oracle.push(DistCase::new("t", "t", fin(absdiff())));
    oracle.push(DistCase::new("t", "g", fin(add(x(0), c(1)))));
    oracle.push(DistCase::new("t", "x", fin(add(x(0), c(2)))));
    let g = || node("g", vec![]);
    // tail position k sits at distance k + 1 from the ground
    let down_tail = |start: NodeExpr, len_to_g: IntExpr| {
        // from a tail node, walk down the tail to t(0), then to g
        nif(le(t(), sub(len_to_g.clone(), c(1))), start, g())
    };
    geos.push(geo("t", "t", toward("t")));
    geos.push(geo("t", "g", down_tail(node("t", vec![sub(x(0), t())]), add(x(0), c(1)))));
    geos.push(geo(
        "t",
        "x",
        nif(le(t(), x(0)), node("t", vec![sub(x(0), t())]), nif(eq(t(), add(x(0), c(1))), g(), node("x", vec![y(0)]))),
    ));
    geos.push(geo("g", "t", nif(eq(t(), c(0)), g(), node("t", vec![sub(t(), c(1))]))));
    geos.push(geo(
        "x",
        "t",
        nif(eq(t(), c(0)), node("x", vec![x(0)]), nif(eq(t(), c(1)), g(), node("t", vec![sub(t(), c(2))]))),
    ));
    GraphPresentation {
        name: "ladder_with_tail".into(),
        families,
        edge_rules: rules,
        edits: vec![],
        flags: Flags { locally_finite: false, connected: true, infinite: true },
        distance_oracle: oracle,
        geodesic_oracle: geos,
        sphere_oracle: vec![],
        standard: Some(NodeRef::new("x", vec![0])),
    }
}

fn grid_rules() -> Vec<EdgeRule> {
    let g = |a: IntExpr, b: IntExpr| EdgeRule::to("grid", "grid", vec![a, b]);
    vec![
        g(add(x(0), c(1)), x(1)),
        g(sub(x(0), c(1)), x(1)),
        g(x(0), add(x(1), c(1))),
        g(x(0), sub(x(1), c(1))),
    ]
}

fn grid2d(name: &str) -> GraphPresentation {
    let l1 = add(abs(sub(x(0), y(0))), abs(sub(x(1), y(1))));
    let dx = abs(sub(x(0), y(0)));
    let rest = sub(t(), dx.clone());
    // first coordinate, then second
    let geodesic = nif(
        le(t(), dx),
        node("grid", vec![ite(le(x(0), y(0)), add(x(0), t()), sub(x(0), t())), x(1)]),
        node("grid", vec![y(0), ite(le(x(1), y(1)), add(x(1), rest.clone()), sub(x(1), rest))]),
    );
    GraphPresentation {
        name: name.into(),
        families: vec![Family::new("grid", vec![Slot::int(), Slot::int()])],
        edge_rules: grid_rules(),
        edits: vec![],
        flags: Flags { locally_finite: true, connected: true, infinite: true },
        distance_oracle: vec![DistCase::new("grid", "grid", fin(l1))],
        geodesic_oracle: vec![geo("grid", "grid", geodesic)],
        sphere_oracle: vec![SphereCase { family: "grid".into(), expr: node("grid", vec![add(x(0), t()), x(1)]) }],
        standard: Some(NodeRef::new("grid", vec![0, 0])),
    }
}

/// The lattice with a finite edit list. The closed forms describe the
/// unedited lattice, so they are dropped as soon as any edit is present and
/// every query falls back to search.
fn grid2d_edited(edits: &[Edit]) -> GraphPresentation {
    let mut g = grid2d("grid2d_edited");
    if !edits.is_empty() {
        g.edits = edits.to_vec();
        g.distance_oracle.clear();
        g.geodesic_oracle.clear();
        g.sphere_oracle.clear();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphzero::Dist0;

    fn n(s: &str) -> NodeRef {
        s.parse().unwrap()
    }

    #[test]
    fn catalog_validates() {
        for name in NAMES {
            let g = builtin(name).unwrap();
            g.validate().unwrap();
            assert_eq!(g.name, name);
        }
        assert!(builtin("petersen").is_err());
    }

    #[test]
    fn neighbor_examples() {
        let l = builtin("grounded_ladder").unwrap();
        assert_eq!(l.neighbors(&n("x(3)"), 8).unwrap(), (vec![n("g"), n("x(2)"), n("x(4)")], false));
        let (gn, inf) = l.neighbors(&n("g"), 4).unwrap();
        assert!(inf);
        assert_eq!(gn, vec![n("x(0)"), n("x(1)"), n("x(2)"), n("x(3)")]);
        let p = builtin("one_ended_path").unwrap();
        assert_eq!(p.neighbors(&n("x(0)"), 8).unwrap().0, vec![n("x(1)")]);
        let g = builtin("grid2d").unwrap();
        let (mut got, _) = g.neighbors(&n("grid(0,0)"), 8).unwrap();
        got.sort();
        assert_eq!(got, vec![n("grid(-1,0)"), n("grid(0,-1)"), n("grid(0,1)"), n("grid(1,0)")]);
    }

    #[test]
    fn distance_examples() {
        let l = builtin("grounded_ladder").unwrap();
        assert_eq!(l.distance(&n("x(0)"), &n("x(5)"), 64).unwrap(), 2);
        assert_eq!(l.bfs_distance(&n("x(0)"), &n("x(5)"), 64).unwrap(), Dist0::Finite(2));
        assert_eq!(l.bfs_distance(&n("x(40)"), &n("x(41)"), 64).unwrap(), Dist0::Finite(1));
        let g = builtin("grid2d").unwrap();
        assert_eq!(g.bfs_distance(&n("grid(0,0)"), &n("grid(3,4)"), 64).unwrap(), Dist0::Finite(7));
        // the search refuses instead of guessing past its radius
        assert!(matches!(
            g.bfs_distance(&n("grid(0,0)"), &n("grid(30,0)"), 10),
            Err(Error::Unresolved { .. })
        ));
    }

    #[test]
    fn sphere_examples() {
        let p = builtin("one_ended_path").unwrap();
        assert_eq!(p.sphere(&n("x(0)"), 4).unwrap(), vec![n("x(4)")]);
        let e = builtin("endless_path").unwrap();
        assert_eq!(e.sphere(&n("x(0)"), 2).unwrap(), vec![n("x(-2)"), n("x(2)")]);
        let g = builtin("grid2d").unwrap();
        assert_eq!(g.sphere(&n("grid(0,0)"), 2).unwrap().len(), 8);
        let l = builtin("grounded_ladder").unwrap();
        assert!(matches!(l.sphere(&n("x(0)"), 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tail_is_reached_only_through_ground() {
        let t = builtin("ladder_with_tail").unwrap();
        assert_eq!(t.bfs_distance(&n("x(7)"), &n("t(3)"), 64).unwrap(), Dist0::Finite(5));
        assert_eq!(t.distance(&n("x(7)"), &n("t(3)"), 64).unwrap(), 5);
    }

    #[test]
    fn edits_change_adjacency() {
        let edits = crate::graphzero::parse_edits("del:grid(0,0)/grid(1,0);add:grid(0,0)/grid(5,5)").unwrap();
        let g = builtin_with_edits("grid2d_edited", &edits).unwrap();
        assert!(g.distance_oracle.is_empty());
        assert_eq!(g.distance(&n("grid(0,0)"), &n("grid(1,0)"), 64).unwrap(), 3);
        assert_eq!(g.distance(&n("grid(0,0)"), &n("grid(5,6)"), 64).unwrap(), 2);
        assert!(builtin_with_edits("grid2d", &edits).is_err());
    }
}

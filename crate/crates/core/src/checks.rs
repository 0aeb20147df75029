//! Named property checks over the builtin catalogs, each a thin call into
//! the owning module. The CLI's `verify-examples` prints these.

use crate::error::Result;
use crate::expr::Affine;
use crate::filters::UltrafilterOracle;
use crate::galaxies0::{chain_thm42, is_principal, koenig_witness, limitedly_distant, Budgets, Limited, Principal};
use crate::galaxies1::{chain_thm112, classify_one_galaxies, classify_zero_galaxies, one_limitedly_distant, thm103_witness};
use crate::graphone::builtins::builtin as builtin1;
use crate::graphone::solver::solve;
use crate::graphzero::builtins::{builtin, builtin_with_edits};
use crate::graphzero::{edit_locality_violations, parse_edits, Dist0};
use crate::metric::Metric;
use crate::node::NodeRef;
use crate::ordinals::Ordinal;
use crate::seq::{DefSeq, NodeTerm};
use crate::ultrapower::Hypernode;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CheckOutcome {
    pub graph: &'static str,
    pub claim: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Check = (&'static str, &'static str, fn(&Budgets) -> Result<(bool, String)>);

fn node(s: &str) -> NodeRef {
    s.parse().expect("literal node")
}

fn linear(m: &dyn Metric, fam: &str, slope: i64, c: i64) -> Result<Hypernode> {
    Hypernode::new(m, DefSeq::affine(NodeTerm::new(fam, vec![Affine::new(slope, c)])), &UltrafilterOracle::Frechet)
}

fn constant(m: &dyn Metric, s: &str) -> Result<Hypernode> {
    Hypernode::constant(m, &node(s))
}

const O: UltrafilterOracle = UltrafilterOracle::Frechet;

const CHECKS: &[Check] = &[
    ("endless_path", "shifted hypernodes are limitedly distant, [x(0)] and [x(n)] are not", |b| {
        let g = builtin("endless_path")?;
        let near = limitedly_distant(&g, &linear(&g, "x", 1, 0)?, &linear(&g, "x", 1, 5)?, &O, b)?.answer;
        let far = limitedly_distant(&g, &constant(&g, "x(0)")?, &linear(&g, "x", 1, 0)?, &O, b)?.answer;
        Ok((near == Limited::Yes(5) && far == Limited::No, format!("{near}, {far}")))
    }),
    ("one_ended_path", "[x(n)] lies outside the principal galaxy and starts a valid chain", |b| {
        let g = builtin("one_ended_path")?;
        let v = linear(&g, "x", 1, 0)?;
        let p = is_principal(&g, &v, &O, b)?;
        let ch = chain_thm42(&g, &constant(&g, "x(0)")?, &v, 2, &O, b)?;
        Ok((p == Principal::No && ch.valid, format!("principal={p}, chain valid={}", ch.valid)))
    }),
    ("grounded_ladder", "all distances are at most 2 and there is one galaxy", |b| {
        let g = builtin("grounded_ladder")?;
        let mut worst = 0;
        for k in 0..=64 {
            for l in 0..=64 {
                worst = worst.max(g.distance(&NodeRef::new("x", vec![k]), &NodeRef::new("x", vec![l]), b.budget)?);
            }
        }
        let p = is_principal(&g, &linear(&g, "x", 3, 1)?, &O, b)?;
        let d05 = g.distance(&node("x(0)"), &node("x(5)"), b.budget)?;
        Ok((worst == 2 && d05 == 2 && p == Principal::Yes, format!("max d = {worst}, d(x(0),x(5)) = {d05}, principal={p}")))
    }),
    ("ladder_with_tail", "the tail leaves the principal galaxy and starts a valid chain", |b| {
        let g = builtin("ladder_with_tail")?;
        let t = linear(&g, "t", 1, 0)?;
        let l = limitedly_distant(&g, &t, &constant(&g, "x(0)")?, &O, b)?.answer;
        let ch = chain_thm42(&g, &constant(&g, "x(0)")?, &t, 2, &O, b)?;
        Ok((l == Limited::No && ch.valid, format!("{l}, chain valid={}", ch.valid)))
    }),
    ("grid2d", "the sphere witness is at distance n and nonprincipal", |b| {
        let g = builtin("grid2d")?;
        let w = koenig_witness(&g, &node("grid(0,0)"), 64)?;
        let p = is_principal(&g, &w, &O, b)?;
        Ok((p == Principal::No, format!("principal={p}")))
    }),
    ("grid2d_edited", "distances outside the edit envelope equal those of the lattice", |b| {
        let base = builtin("grid2d")?;
        let edits = parse_edits("add:grid(0,0)/grid(2,3);del:grid(5,5)/grid(6,5)")?;
        let g = builtin_with_edits("grid2d_edited", &edits)?;
        let (compared, bad) = edit_locality_violations(&base, &g, &node("grid(0,0)"), 6, b.budget)?;
        let bad = bad.len();
        Ok((bad == 0 && compared > 0, format!("{compared} pairs compared, {bad} differ")))
    }),
    ("endless_1path", "each standard 1-hypernode is alone in its 0-galaxy", |b| {
        let g = builtin1("endless_1path")?;
        let s = ["p(0)", "p(1)", "p(4)", "e(0,0)", "e(2,5)"].iter().map(|n| constant(&g, n)).collect::<Result<Vec<_>>>()?;
        let r = classify_zero_galaxies(&g, &s, &O, b)?;
        Ok((r.singletons.starts_with(&[0, 1, 2]), format!("classes {:?}", r.classes)))
    }),
    ("ladder_of_endless_paths", "1-node pairs within w*4, 0-node pairs within w*6, one 1-galaxy", |b| {
        let g = builtin1("ladder_of_endless_paths")?;
        let ones: Vec<NodeRef> = (0..12).map(|k| NodeRef::new("n1", vec![k])).chain([node("g1")]).collect();
        let zeros: Vec<NodeRef> = (0..6).flat_map(|k| [NodeRef::new("h", vec![k, -3 + k]), NodeRef::new("v", vec![k, k])]).collect();
        let max = |v: &[NodeRef]| -> Result<Ordinal> {
            let mut m = Ordinal::ZERO;
            for a in v {
                for c in v {
                    m = m.max(g.dist(a, c, b.budget)?);
                }
            }
            Ok(m)
        };
        let (m1, m0) = (max(&ones)?, max(&zeros)?);
        let reps = vec![linear(&g, "n1", 1, 0)?, linear(&g, "n1", 5, 2)?, constant(&g, "g1")?, constant(&g, "n1(3)")?];
        let r = classify_one_galaxies(&g, &reps, &O, b)?;
        let ok = m1 <= Ordinal::omega_times(4) && m0 <= Ordinal::omega_times(6) && r.classes.len() == 1;
        Ok((ok, format!("max 1-node distance {m1}, max 0-node distance {m0}, {} 1-galaxies", r.classes.len())))
    }),
    ("ladder_mixed", "the 1-nodes and the ground node share one 0-galaxy", |b| {
        let g = builtin1("ladder_mixed")?;
        let s = vec![constant(&g, "n1(0)")?, constant(&g, "n1(7)")?, linear(&g, "n1", 1, 0)?, constant(&g, "g")?];
        let r = classify_zero_galaxies(&g, &s, &O, b)?;
        Ok((r.classes.len() == 1, format!("classes {:?}", r.classes)))
    }),
    ("diamond_chain", "nodes two chains apart are joined by a walk of length w*4 but no path", |b| {
        let g = builtin1("diamond_chain")?;
        let (a, c) = (node("a(0,0)"), node("a(2,0)"));
        let d = solve(&g, &a, &c, b.budget)?.dist;
        let path = g.zero_graph.bfs_distance(&a, &c, b.budget);
        let no_path = !matches!(path, Ok(Dist0::Finite(_)));
        Ok((d == Ordinal::omega_times(4) && no_path, format!("d = {d}, 0-path search: {path:?}")))
    }),
    ("diamond_chain", "a boundary-walk witness and a chain of 1-galaxies exist", |b| {
        let g = builtin1("diamond_chain")?;
        let x = constant(&g, "x1(0)")?;
        let w = thm103_witness(&g, &node("x1(0)"), 32)?;
        let l = one_limitedly_distant(&g, &x, &w, &O, b)?.answer;
        let ch = chain_thm112(&g, &x, &w, 2, &O, b)?;
        Ok((l == Limited::No && ch.valid, format!("witness 1-limited: {l}, chain valid={}", ch.valid)))
    }),
];

pub fn run_all(bud: &Budgets) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(graph, claim, f)| match f(bud) {
            Ok((pass, detail)) => CheckOutcome { graph, claim, pass, detail },
            Err(e) => CheckOutcome { graph, claim, pass: false, detail: format!("error: {e}") },
        })
        .collect()
}

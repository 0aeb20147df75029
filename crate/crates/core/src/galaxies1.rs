//! Galaxies of a nonstandard 1-graph: 0-galaxies and 1-galaxies, the
//! boundary-layer witness of a nonprincipal 1-galaxy, and the chain of
//! 1-galaxies ordered by closeness.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Affine;
use crate::filters::UltrafilterOracle;
use crate::galaxies0::{
    ascend, assemble_chain, closer_than_at, is_principal_at, limitedly_distant_at, partial_order_check_at, Budgets,
    Chain, CloserReport, Limited, LimitedReport, PartialOrderReport, Principal, Scale,
};
use crate::graphone::solver::solve;
use crate::graphone::OneGraphPresentation;
use crate::metric::Metric;
use crate::node::NodeRef;
use crate::ordinals::Ordinal;
use crate::seq::{align, fit_nodes, OrdTerm};
use crate::ultrapower::{hyperdistance, Hypernode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    ZeroGalaxy,
    OneGalaxy,
}

impl Level {
    pub fn scale(self) -> Scale {
        match self {
            Level::ZeroGalaxy => Scale::Finite,
            Level::OneGalaxy => Scale::Omega,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Galaxy1Handle {
    pub representative: Hypernode,
    pub level: Level,
    pub kind: Principal,
    /// Limited-distance verdict against the standard node.
    pub evidence: LimitedReport,
    pub standard: NodeRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u64>,
}

pub fn galaxy1_handle(m: &dyn Metric, rep: &Hypernode, level: Level, o: &UltrafilterOracle, bud: &Budgets) -> Result<Galaxy1Handle> {
    let standard = m.standard_node();
    let x = Hypernode::constant(m, &standard)?;
    let evidence = limitedly_distant_at(m, rep, &x, level.scale(), o, bud)?;
    let k_min = match evidence.answer {
        Limited::Yes(k) => Some(k),
        _ => None,
    };
    Ok(Galaxy1Handle { representative: rep.clone(), level, kind: evidence.answer.into(), evidence, standard, k_min })
}

/// `d(a, b) <= ω·k` on a set in the ultrafilter, for the least such `k`.
pub fn one_limitedly_distant(m: &dyn Metric, a: &Hypernode, b: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<LimitedReport> {
    limitedly_distant_at(m, a, b, Scale::Omega, o, bud)
}

pub fn is_one_principal(m: &dyn Metric, a: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<Principal> {
    is_principal_at(m, a, Scale::Omega, o, bud)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub level: Level,
    /// Sample indices grouped by galaxy, each class sorted, classes ordered
    /// by their least member.
    pub classes: Vec<Vec<usize>>,
    pub singletons: Vec<usize>,
    /// Pairs the oracle could not settle; their classes are not claimed
    /// to differ.
    pub unresolved: Vec<(usize, usize)>,
    /// Pairs in one class whose direct verdict is `no`.
    pub conflicts: Vec<(usize, usize)>,
}

impl PartitionReport {
    pub fn class_of(&self, i: usize) -> usize {
        self.classes.iter().position(|c| c.contains(&i)).expect("every sample has a class")
    }
}

pub fn classify_at(m: &dyn Metric, samples: &[Hypernode], level: Level, o: &UltrafilterOracle, bud: &Budgets) -> Result<PartitionReport> {
    let k = samples.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut verdicts = BTreeMap::new();
    let mut unresolved = vec![];
    for i in 0..k {
        for j in i + 1..k {
            let v = limitedly_distant_at(m, &samples[i], &samples[j], level.scale(), o, bud)?.answer;
            match v {
                Limited::Yes(_) => {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                Limited::Undetermined => unresolved.push((i, j)),
                Limited::No => {}
            }
            verdicts.insert((i, j), v);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..k {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = groups.into_values().collect();
    let singletons = classes.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    let conflicts = verdicts
        .iter()
        .filter(|((i, j), v)| **v == Limited::No && root(&mut parent, *i) == root(&mut parent, *j))
        .map(|(p, _)| *p)
        .collect();
    Ok(PartitionReport { level, classes, singletons, unresolved, conflicts })
}

/// Groups hypernodes of either rank by plain limited distance `d <= k`.
pub fn classify_zero_galaxies(m: &dyn Metric, samples: &[Hypernode], o: &UltrafilterOracle, bud: &Budgets) -> Result<PartitionReport> {
    classify_at(m, samples, Level::ZeroGalaxy, o, bud)
}

pub fn classify_one_galaxies(m: &dyn Metric, samples: &[Hypernode], o: &UltrafilterOracle, bud: &Budgets) -> Result<PartitionReport> {
    classify_at(m, samples, Level::OneGalaxy, o, bud)
}

/// Boundary 1-nodes sharing a section with `n`.
fn boundary_neighbours(g: &OneGraphPresentation, n: &NodeRef, budget: usize) -> Result<BTreeSet<NodeRef>> {
    let inc = g.incidence(n, budget)?;
    if inc.truncated {
        return Err(Error::Unsupported(format!("{n} is incident to infinitely many sections")));
    }
    let mut out = BTreeSet::new();
    for s in inc.sections() {
        out.extend(g.boundary_one_nodes(&s, budget)?);
    }
    Ok(out)
}

/// Layers `X_0, X_1, …` of boundary 1-nodes around `x0`: `X_0` holds those
/// 1-adjacent to `x0`, `X_1` those adjacent to `X_0` but not to `x0`, and
/// `X_k` those adjacent to `X_{k−1}` but to nothing in `X_0 … X_{k−2}`.
pub fn boundary_layers(g: &OneGraphPresentation, x0: &NodeRef, count: usize, budget: usize) -> Result<Vec<Vec<NodeRef>>> {
    let mut nbr: BTreeMap<NodeRef, BTreeSet<NodeRef>> = BTreeMap::new();
    let mut near = |n: &NodeRef| -> Result<BTreeSet<NodeRef>> {
        if let Some(s) = nbr.get(n) {
            return Ok(s.clone());
        }
        let s = boundary_neighbours(g, n, budget)?;
        nbr.insert(n.clone(), s.clone());
        Ok(s)
    };
    let mut layers: Vec<BTreeSet<NodeRef>> = vec![near(x0)?];
    // everything 1-adjacent to a layer at least two back, or to x0
    let mut excluded: BTreeSet<NodeRef> = near(x0)?;
    excluded.insert(x0.clone());
    while layers.len() < count {
        let k = layers.len();
        if k >= 2 {
            for a in layers[k - 2].clone() {
                excluded.extend(near(&a)?);
                excluded.insert(a);
            }
        }
        let mut next = BTreeSet::new();
        for a in layers[k - 1].clone() {
            next.extend(near(&a)?.into_iter().filter(|b| !excluded.contains(b)));
        }
        if next.is_empty() {
            return Err(Error::Precondition(format!("boundary layer {k} around {x0} is empty")));
        }
        layers.push(next);
    }
    if layers[0].is_empty() {
        return Err(Error::Precondition(format!("{x0} is 1-adjacent to no boundary 1-node")));
    }
    Ok(layers.into_iter().map(|l| l.into_iter().collect()).collect())
}

/// A 1-hypernode `[x0, x_{m_0}, x_{m_1}, …]` whose `n`-th node is at least
/// `ω·n` from `x0`, following one walk out through the boundary layers.
/// Within a layer the largest node (in node order) that still continues
/// `check_upto` layers further is chosen.
pub fn thm103_witness(g: &OneGraphPresentation, x0: &NodeRef, check_upto: usize) -> Result<Hypernode> {
    let f = &g.one_flags;
    for (ok, flag) in [
        (f.locally_one_finite, "locally_one_finite"),
        (f.one_wconnected, "one_wconnected"),
        (f.infinitely_many_boundary, "infinitely_many_boundary"),
    ] {
        if !ok {
            return Err(Error::Precondition(format!("{} is not {flag}", g.name())));
        }
    }
    if !g.is_one_node(x0) {
        return Err(Error::Precondition(format!("{x0} is not a 1-node")));
    }
    g.check(x0)?;
    let budget = 64;
    let depth = check_upto.max(8) + 2;
    let layers = boundary_layers(g, x0, depth, budget)?;
    // keep only nodes with a continuation to the last layer
    let mut alive: Vec<BTreeSet<NodeRef>> = vec![BTreeSet::new(); depth];
    alive[depth - 1] = layers[depth - 1].iter().cloned().collect();
    for k in (0..depth - 1).rev() {
        for a in &layers[k] {
            if boundary_neighbours(g, a, budget)?.iter().any(|b| alive[k + 1].contains(b)) {
                alive[k].insert(a.clone());
            }
        }
    }
    let mut chosen: Vec<NodeRef> = vec![];
    for k in 0..depth {
        let pick = match chosen.last() {
            None => alive[0].iter().next_back().cloned(),
            Some(prev) => {
                let nb = boundary_neighbours(g, prev, budget)?;
                alive[k].iter().rev().find(|b| nb.contains(*b)).cloned()
            }
        };
        chosen.push(pick.ok_or_else(|| Error::Defect(format!("boundary walk breaks off at layer {k}")))?);
    }
    // index n = 0 is x0 itself and index n >= 1 the node chosen in layer
    // n − 1; if that falls short of ω·n, index by layer instead
    let shifted: Vec<NodeRef> = std::iter::once(x0.clone()).chain(chosen.iter().cloned()).collect();
    for vals in [shifted, chosen] {
        if let Some(h) = far_enough(g, x0, &vals, check_upto)? {
            return Ok(h);
        }
    }
    Err(Error::Defect(format!("boundary walk from {x0} does not reach ω·n by index n")))
}

/// Fits a hypernode to `vals` and checks `d(x0, h_n) >= ω·n` for
/// `n <= check_upto` and symbolically beyond.
fn far_enough(g: &OneGraphPresentation, x0: &NodeRef, vals: &[NodeRef], check_upto: usize) -> Result<Option<Hypernode>> {
    for (n, v) in vals.iter().enumerate().take(check_upto + 1) {
        if g.dist(x0, v, 64)? < Ordinal::omega_times(n as u64) {
            return Ok(None);
        }
    }
    let Some(seq) = fit_nodes(vals, 8, 3) else {
        return Err(Error::Unsupported(format!("the boundary walk from {x0} follows no definable pattern")));
    };
    let h = Hypernode::new(g, seq, &UltrafilterOracle::Frechet)?;
    let d = hyperdistance(g, &Hypernode::constant(g, x0)?, &h, 64)?.seq;
    let p = d.period;
    for r in 0..p {
        let want = OrdTerm::new(Affine::new(p as i64, r as i64), Affine::constant(0));
        let c = d.tail[r].eventual_cmp(&want);
        if c.value == Ordering::Less || c.from.max(0) as usize * p + r > vals.len() {
            return Ok(None);
        }
    }
    Ok(Some(h))
}

/// Rank-1 closeness: `{n : d(z_n, x_n) − d(y_n, x_n) >= ω·m}` in the
/// ultrafilter for every `m`.
pub fn closer_than_1(m: &dyn Metric, y: &Hypernode, z: &Hypernode, x: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<CloserReport> {
    closer_than_at(m, y, z, x, Scale::Omega, o, bud)
}

/// How many indices of a third-point sequence are computed explicitly.
const THIRD_SPAN: usize = 48;

/// `u_n` with `d(x, v_n) <= 3·d(x, u_n) <= 2·d(x, v_n)`: the first node on a
/// geodesic from `x` to `v_n` far enough out, or `x` itself when
/// `d(x, v_n) < ω·6`.
pub fn third_point(g: &OneGraphPresentation, x: &NodeRef, vn: &NodeRef, budget: usize) -> Result<NodeRef> {
    let d = g.dist(x, vn, budget)?;
    if d < Ordinal::omega_times(6) {
        return Ok(x.clone());
    }
    let sol = solve(g, x, vn, budget)?;
    if sol.dist != d {
        return Err(Error::Defect(format!("solver and distance disagree for {x}, {vn}: {} vs {d}", sol.dist)));
    }
    for w in &sol.geodesic.nodes {
        let dw = g.dist(x, w, budget)?;
        let three = dw.scale(3)?;
        if three >= d {
            if three > d.scale(2)? {
                return Err(Error::Defect(format!(
                    "no geodesic node between a third and two thirds of d({x}, {vn}) = {d}: {w} is at {dw}"
                )));
            }
            return Ok(w.clone());
        }
    }
    Err(Error::Defect(format!("geodesic from {x} to {vn} never reaches a third of {d}")))
}

/// The hypernode of third points of `v`, with the pattern found on the
/// first indices verified symbolically for the rest.
pub fn third_points(g: &OneGraphPresentation, x: &NodeRef, v: &Hypernode, budget: usize) -> Result<Hypernode> {
    let vals = (0..THIRD_SPAN).map(|n| third_point(g, x, &v.at(n)?, budget)).collect::<Result<Vec<_>>>()?;
    let Some(seq) = fit_nodes(&vals, 12, 3) else {
        return Err(Error::Unsupported(format!("third points of v from {x} follow no definable pattern")));
    };
    let u = Hypernode::new(g, seq, &UltrafilterOracle::Frechet)?;
    let xh = Hypernode::constant(g, x)?;
    let du = hyperdistance(g, &xh, &u, budget)?.seq;
    let dv = hyperdistance(g, &xh, v, budget)?.seq;
    let (du, dv) = align(&du, &dv)?;
    let p = du.period;
    for r in 0..p {
        let (a, b) = (du.tail[r].scale(3), &dv.tail[r]);
        let lo = a.eventual_cmp(b);
        let hi = a.eventual_cmp(&b.scale(2));
        let from = lo.from.max(hi.from).max(0) as usize * p + r + du.prefix.len();
        if lo.value == Ordering::Less || hi.value == Ordering::Greater || from > THIRD_SPAN {
            return Err(Error::Defect(format!("third points of v from {x} leave the one-third band in class {r}")));
        }
    }
    Ok(u)
}

/// 1-galaxies `Γ_{−depth} < … < Γ_v < … < Γ_{+depth}` ordered by closeness
/// to the principal 1-galaxy: third points on the near side, faster-growing
/// reindexings of `v` on the far side.
pub fn chain_thm112(
    g: &OneGraphPresentation,
    x: &Hypernode,
    v: &Hypernode,
    depth: usize,
    o: &UltrafilterOracle,
    bud: &Budgets,
) -> Result<Chain> {
    let Some(xs) = x.standard_value() else {
        return Err(Error::Precondition("the base hypernode must be standard".into()));
    };
    let l = one_limitedly_distant(g, x, v, o, bud)?.answer;
    if l != Limited::No {
        return Err(Error::Precondition(format!("v must lie outside the principal 1-galaxy (1-limitedly distant = {l})")));
    }
    let mut near = vec![];
    let mut cur = v.clone();
    for _ in 0..depth {
        cur = third_points(g, &xs, &cur, bud.budget)?;
        near.push(cur.clone());
    }
    near.reverse();
    let mut far = vec![];
    let mut cur = v.clone();
    for _ in 0..depth {
        cur = ascend(g, x, &cur, Scale::Omega, bud.budget)?;
        far.push(cur.clone());
    }
    let center = near.len();
    let mut reps = near;
    reps.push(v.clone());
    reps.extend(far);
    assemble_chain(g, x, reps, center, Scale::Omega, o, bud, vec![])
}

pub fn partial_order_check_1(m: &dyn Metric, reps: &[Hypernode], x: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<PartialOrderReport> {
    partial_order_check_at(m, reps, x, Scale::Omega, o, bud)
}

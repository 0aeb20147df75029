//! Finite presentations of infinite 0-graphs.
//!
//! Nodes come in families indexed by integer parameters. Edge rules map a
//! node to parameterised neighbours; one zero-parameter node may instead be
//! joined to every member of a family (a hub, like the ground node of the
//! grounded ladder). A finite edit list adds or removes concrete branches.

pub mod builtins;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Cond, DistValue, Env, IntExpr, NodeExpr};
use crate::metric::{self, DistCase, Metric};
use crate::node::NodeRef;
use crate::ordinals::Ordinal;

pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Nat,
    Int,
}

/// One parameter position. `min`/`max` truncate the domain (inclusive).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<i64>,
}

impl Slot {
    pub fn nat() -> Self {
        Slot { domain: Domain::Nat, min: None, max: None }
    }

    pub fn int() -> Self {
        Slot { domain: Domain::Int, min: None, max: None }
    }

    pub fn bounded(domain: Domain, min: i64, max: i64) -> Self {
        Slot { domain, min: Some(min), max: Some(max) }
    }

    pub fn lo(&self) -> Option<i64> {
        match (self.domain, self.min) {
            (Domain::Nat, m) => Some(m.unwrap_or(0).max(0)),
            (Domain::Int, m) => m,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo().is_none_or(|lo| v >= lo) && self.max.is_none_or(|hi| v <= hi)
    }

    pub fn is_finite(&self) -> bool {
        self.lo().is_some() && self.max.is_some()
    }

    /// The i-th value of the canonical enumeration: upward from the lower
    /// bound, or 0, 1, −1, 2, −2, … clipped to the bounds.
    fn canonical(&self) -> Vec<i64> {
        let mut out = vec![];
        let cap = 1 << 16;
        match self.lo() {
            Some(lo) => {
                let mut v = lo;
                while self.contains(v) && out.len() < cap {
                    out.push(v);
                    v += 1;
                }
            }
            None => {
                let hi = self.max.unwrap_or(i64::MAX);
                let start = hi.min(0);
                out.push(start);
                let mut k = 1;
                while out.len() < cap {
                    let up = start + k;
                    if up <= hi {
                        out.push(up);
                    }
                    out.push(start - k);
                    k += 1;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub slots: Vec<Slot>,
}

impl Family {
    pub fn new(name: &str, slots: Vec<Slot>) -> Self {
        Family { name: name.to_string(), slots }
    }

    pub fn admits(&self, params: &[i64]) -> bool {
        params.len() == self.slots.len() && self.slots.iter().zip(params).all(|(s, v)| s.contains(*v))
    }

    pub fn is_finite(&self) -> bool {
        self.slots.iter().all(Slot::is_finite)
    }

    /// First `count` members in canonical order: by the sum of per-slot
    /// canonical positions, then lexicographically by those positions.
    pub fn enumerate(&self, count: usize) -> Vec<NodeRef> {
        if self.slots.is_empty() {
            return vec![NodeRef::single(self.name.clone())].into_iter().take(count).collect();
        }
        let cols: Vec<Vec<i64>> =
            self.slots.iter().map(|s| s.canonical().into_iter().take(count.max(1)).collect()).collect();
        let max_sum: usize = cols.iter().map(|c| c.len().saturating_sub(1)).sum();
        let mut out = vec![];
        for total in 0..=max_sum {
            let mut idx = vec![0usize; cols.len()];
            push_with_sum(&cols, &mut idx, 0, total, &self.name, &mut out, count);
            if out.len() >= count {
                break;
            }
        }
        out
    }
}

fn push_with_sum(
    cols: &[Vec<i64>],
    idx: &mut Vec<usize>,
    slot: usize,
    left: usize,
    name: &str,
    out: &mut Vec<NodeRef>,
    count: usize,
) {
    if out.len() >= count {
        return;
    }
    if slot == cols.len() - 1 {
        if left < cols[slot].len() {
            idx[slot] = left;
            out.push(NodeRef::new(name, idx.iter().enumerate().map(|(s, &i)| cols[s][i]).collect()));
        }
        return;
    }
    for i in 0..=left.min(cols[slot].len().saturating_sub(1)) {
        idx[slot] = i;
        push_with_sum(cols, idx, slot + 1, left - i, name, out, count);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// One neighbour with parameters computed from the source's (`x`).
    Node { family: String, params: Vec<IntExpr> },
    /// Every member of a family. Only allowed from a zero-parameter family.
    AllOf { family: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRule {
    pub from: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<Cond>,
    pub target: Target,
}

impl EdgeRule {
    pub fn to(from: &str, family: &str, params: Vec<IntExpr>) -> Self {
        EdgeRule { from: from.into(), guard: None, target: Target::Node { family: family.into(), params } }
    }

    pub fn guarded(mut self, c: Cond) -> Self {
        self.guard = Some(c);
        self
    }

    pub fn all_of(from: &str, family: &str) -> Self {
        EdgeRule { from: from.into(), guard: None, target: Target::AllOf { family: family.into() } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditOp {
    Add,
    Delete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub op: EditOp,
    pub a: NodeRef,
    pub b: NodeRef,
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            EditOp::Add => "add",
            EditOp::Delete => "del",
        };
        write!(f, "{op}:{}/{}", self.a, self.b)
    }
}

impl FromStr for Edit {
    type Err = Error;

    /// `add:A/B` or `del:A/B`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad edit {s:?}; expected add:NODE/NODE or del:NODE/NODE"));
        let (op, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let op = match op.trim() {
            "add" => EditOp::Add,
            "del" | "delete" => EditOp::Delete,
            _ => return Err(bad()),
        };
        let (a, b) = rest.split_once('/').ok_or_else(bad)?;
        Ok(Edit { op, a: a.parse()?, b: b.parse()? })
    }
}

/// Parses a `;`-separated edit list.
pub fn parse_edits(s: &str) -> Result<Vec<Edit>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Whether edits to `base` may change `d(a, b)`: some edit endpoint `u` has
/// `d(a, u) + d(u, b) <= d(a, b) + s`, where `s` sums the base distances
/// between the endpoints of every edit. Outside this envelope no geodesic of
/// `base` touches an edit and no path through added edges is shorter, so the
/// edited distance equals the base one. Distances are taken in `base`.
pub fn in_edit_envelope(base: &GraphPresentation, edits: &[Edit], a: &NodeRef, b: &NodeRef, budget: usize) -> Result<bool> {
    let mut span = 0;
    for e in edits {
        span += base.distance(&e.a, &e.b, budget)?;
    }
    let dab = base.distance(a, b, budget)?;
    for e in edits {
        for u in [&e.a, &e.b] {
            if base.distance(a, u, budget)? + base.distance(u, b, budget)? <= dab + span {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Compares `edited` with `base` on every pair of nodes with all parameters
/// within `radius` of `center` and outside the edit envelope. Searches run
/// in `edited` restricted to the box widened by the total edit span plus one,
/// which loses nothing when a step changes each parameter by at most one.
/// Returns the number of pairs compared and the pairs whose distances differ.
pub fn edit_locality_violations(
    base: &GraphPresentation,
    edited: &GraphPresentation,
    center: &NodeRef,
    radius: i64,
    budget: usize,
) -> Result<(usize, Vec<(NodeRef, NodeRef)>)> {
    let fam = base.family(&center.family).ok_or_else(|| Error::InvalidNode(format!("{center} is not a node of {}", base.name)))?;
    let boxed = |r: i64| -> Vec<NodeRef> {
        let mut pts = vec![center.params.clone()];
        for i in 0..center.params.len() {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    (-r..=r).map(move |d| {
                        let mut q = p.clone();
                        q[i] = p[i] + d;
                        q
                    })
                })
                .collect();
        }
        pts.into_iter().filter(|p| fam.admits(p)).map(|p| NodeRef::new(fam.name.clone(), p)).collect()
    };
    let ends: Vec<&NodeRef> = edited.edits.iter().flat_map(|e| [&e.a, &e.b]).collect();
    let mut span = 0;
    for e in &edited.edits {
        span += base.distance(&e.a, &e.b, budget)?;
    }
    let region = boxed(radius + span as i64 + 1);
    let index: HashMap<&NodeRef, usize> = region.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut adj = Vec::with_capacity(region.len());
    for v in &region {
        let (ns, _) = edited.neighbors(v, budget)?;
        adj.push(ns.iter().filter_map(|w| index.get(w).copied()).collect::<Vec<usize>>());
    }
    let pts = boxed(radius);
    let mut to_ends = vec![];
    for u in &ends {
        to_ends.push(pts.iter().map(|a| base.distance(a, u, budget)).collect::<Result<Vec<u64>>>()?);
    }
    let (mut compared, mut bad) = (0, vec![]);
    let mut dist = vec![u64::MAX; region.len()];
    let mut queue = VecDeque::new();
    for (i, a) in pts.iter().enumerate() {
        dist.fill(u64::MAX);
        dist[index[a]] = 0;
        queue.push_back(index[a]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == u64::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (j, b) in pts.iter().enumerate().skip(i + 1) {
            let want = base.distance(a, b, budget)?;
            if to_ends.iter().any(|d| d[i] + d[j] <= want + span) {
                continue;
            }
            compared += 1;
            if dist[index[b]] != want {
                bad.push((a.clone(), b.clone()));
            }
        }
    }
    Ok((compared, bad))
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub locally_finite: bool,
    #[serde(default = "yes")]
    pub connected: bool,
    #[serde(default = "yes")]
    pub infinite: bool,
}

/// Canonical geodesic from `x` to `y`: the node at distance `t` from `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicCase {
    pub families: [String; 2],
    pub expr: NodeExpr,
}

/// Lexicographically largest node at distance `t` from `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereCase {
    pub family: String,
    pub expr: NodeExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPresentation {
    #[serde(default)]
    pub name: String,
    pub families: Vec<Family>,
    pub edge_rules: Vec<EdgeRule>,
    #[serde(default)]
    pub edits: Vec<Edit>,
    pub flags: Flags,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distance_oracle: Vec<DistCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub geodesic_oracle: Vec<GeodesicCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sphere_oracle: Vec<SphereCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard: Option<NodeRef>,
}

/// Rule-derived neighbours of one node, after edits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub finite: Vec<NodeRef>,
    /// Family all of whose members are also neighbours.
    pub all_of: Option<String>,
}

/// Result of a bounded breadth-first search that does not expand the hub's
/// family-wide edges.
#[derive(Debug, Clone)]
pub struct Bfs {
    pub dist: HashMap<NodeRef, u64>,
    /// True when the search ran out of nodes before the radius.
    pub exhausted: bool,
    pub radius: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dist0 {
    Finite(u64),
    Unreachable,
}

impl GraphPresentation {
    pub fn family(&self, name: &str) -> Option<&Family> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn is_valid(&self, n: &NodeRef) -> bool {
        self.family(&n.family).is_some_and(|f| f.admits(&n.params))
    }

    pub fn check(&self, n: &NodeRef) -> Result<()> {
        if self.is_valid(n) {
            Ok(())
        } else {
            Err(Error::InvalidNode(format!("{n} is not a node of {}", self.label())))
        }
    }

    fn label(&self) -> &str {
        if self.name.is_empty() {
            "the presentation"
        } else {
            &self.name
        }
    }

    /// The unique node with family-wide edges, if any.
    pub fn hub(&self) -> Option<(NodeRef, &str)> {
        self.edge_rules.iter().find_map(|r| match &r.target {
            Target::AllOf { family } => Some((NodeRef::single(r.from.clone()), family.as_str())),
            Target::Node { .. } => None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        let mut names = BTreeSet::new();
        for f in &self.families {
            if !crate::node::is_ident(&f.name) || !names.insert(f.name.as_str()) {
                return cfg(format!("bad or duplicate family name {:?}", f.name));
            }
        }
        let mut hubs = 0;
        for r in &self.edge_rules {
            let Some(src) = self.family(&r.from) else {
                return cfg(format!("edge rule from unknown family {:?}", r.from));
            };
            match &r.target {
                Target::Node { family, params } => {
                    let Some(dst) = self.family(family) else {
                        return cfg(format!("edge rule to unknown family {family:?}"));
                    };
                    if dst.slots.len() != params.len() {
                        return cfg(format!("edge rule {} -> {family} has wrong arity", r.from));
                    }
                }
                Target::AllOf { family } => {
                    hubs += 1;
                    if !src.slots.is_empty() || self.family(family).is_none() || r.guard.is_some() {
                        return cfg(format!("family-wide edges need a parameterless source and no guard ({})", r.from));
                    }
                }
            }
        }
        if hubs > 1 {
            return cfg("at most one family-wide edge rule is supported".into());
        }
        if hubs == 1 && self.flags.locally_finite {
            return cfg("a presentation with a hub is not locally finite".into());
        }
        let hub = self.hub().map(|h| h.0);
        for e in &self.edits {
            self.check(&e.a)?;
            self.check(&e.b)?;
            if e.a == e.b {
                return cfg(format!("edit {e} is a self-loop"));
            }
            if hub.as_ref().is_some_and(|h| *h == e.a || *h == e.b) {
                return cfg(format!("edit {e} touches the hub"));
            }
        }
        for c in &self.distance_oracle {
            for f in &c.families {
                if self.family(f).is_none() {
                    return cfg(format!("distance oracle names unknown family {f:?}"));
                }
            }
        }
        if let Some(s) = &self.standard {
            self.check(s)?;
        }
        self.check_symmetry(24)
    }

    /// Samples nodes of every family and checks that adjacency is symmetric
    /// and loop-free.
    pub fn check_symmetry(&self, per_family: usize) -> Result<()> {
        for f in &self.families {
            for u in f.enumerate(per_family) {
                let nb = self.neighborhood(&u)?;
                for v in &nb.finite {
                    if *v == u {
                        return Err(Error::Config(format!("self-loop at {u}")));
                    }
                    let back = self.neighborhood(v)?;
                    let covered = back.finite.contains(&u) || back.all_of.as_deref() == Some(u.family.as_str());
                    if !covered {
                        return Err(Error::Config(format!("edge {u} -> {v} has no reverse")));
                    }
                }
                if let Some(fam) = &nb.all_of {
                    for m in self.family(fam).map(|f| f.enumerate(per_family)).unwrap_or_default() {
                        if !self.neighborhood(&m)?.finite.contains(&u) {
                            return Err(Error::Config(format!("hub {u} -> {m} has no reverse")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn neighborhood(&self, x: &NodeRef) -> Result<Neighborhood> {
        self.check(x)?;
        let env = Env { x: &x.params, y: &[], t: 0 };
        let mut finite = BTreeSet::new();
        let mut all_of = None;
        for r in self.edge_rules.iter().filter(|r| r.from == x.family) {
            if let Some(g) = &r.guard {
                if !g.eval(&env)? {
                    continue;
                }
            }
            match &r.target {
                Target::Node { family, params } => {
                    let p = params.iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>>>()?;
                    let v = NodeRef::new(family.clone(), p);
                    if self.is_valid(&v) {
                        finite.insert(v);
                    }
                }
                Target::AllOf { family } => all_of = Some(family.clone()),
            }
        }
        for e in &self.edits {
            let other = if e.a == *x {
                &e.b
            } else if e.b == *x {
                &e.a
            } else {
                continue;
            };
            match e.op {
                EditOp::Add => finite.insert(other.clone()),
                EditOp::Delete => finite.remove(other),
            };
        }
        Ok(Neighborhood { finite: finite.into_iter().collect(), all_of })
    }

    /// Neighbours of `x`; an infinite neighbour set is cut to its first
    /// `budget` members in canonical order and flagged with `true`.
    pub fn neighbors(&self, x: &NodeRef, budget: usize) -> Result<(Vec<NodeRef>, bool)> {
        let nb = self.neighborhood(x)?;
        let mut out = nb.finite;
        let mut infinite = false;
        if let Some(fam) = nb.all_of {
            let f = self.family(&fam).expect("validated");
            infinite = !f.is_finite();
            for m in f.enumerate(budget) {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            out.sort();
        }
        Ok((out, infinite))
    }

    /// Breadth-first search up to `radius`, not expanding family-wide edges.
    pub fn bfs(&self, src: &NodeRef, radius: u64) -> Result<Bfs> {
        self.check(src)?;
        let mut dist = HashMap::new();
        dist.insert(src.clone(), 0u64);
        let mut queue = VecDeque::from([src.clone()]);
        let mut exhausted = true;
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du == radius {
                exhausted = false;
                continue;
            }
            for v in self.neighborhood(&u)?.finite {
                if !dist.contains_key(&v) {
                    dist.insert(v.clone(), du + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(Bfs { dist, exhausted, radius })
    }

    /// Distance by search alone, ignoring any oracle.
    pub fn bfs_distance(&self, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<Dist0> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Ok(Dist0::Finite(0));
        }
        let r = budget as u64;
        let bx = self.bfs(x, r)?;
        let direct = bx.dist.get(y).copied();
        let hub = self.hub().map(|h| h.0);
        let mut via_hub = None;
        let mut hub_unknown = false;
        if let Some(h) = &hub {
            match bx.dist.get(h) {
                Some(&dxh) if *y == *h => via_hub = Some(dxh),
                Some(&dxh) => {
                    let by = self.bfs(y, r)?;
                    match by.dist.get(h) {
                        Some(&dyh) => via_hub = Some(dxh + dyh),
                        None => hub_unknown = !by.exhausted,
                    }
                }
                None => hub_unknown = !bx.exhausted,
            }
        }
        let best = match (direct, via_hub) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        // anything not found lies beyond the radius, so it costs at least r + 1
        let unknown_direct = direct.is_none() && !bx.exhausted;
        match best {
            Some(d) if direct.is_some() || !unknown_direct || d <= r + 1 => Ok(Dist0::Finite(d)),
            Some(_) => Err(Error::Unresolved { lower_bound: Ordinal::finite(r + 1) }),
            None if !unknown_direct && !hub_unknown => Ok(Dist0::Unreachable),
            None => Err(Error::Unresolved { lower_bound: Ordinal::finite(r + 1) }),
        }
    }

    /// Exact distance: the oracle when it has a case for the pair, search otherwise.
    pub fn distance_opt(&self, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<Dist0> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Ok(Dist0::Finite(0));
        }
        match metric::eval_case(&self.distance_oracle, x, y)? {
            Some(DistValue::Ord { tau1: 0, tau0 }) if tau0 > 0 => Ok(Dist0::Finite(tau0 as u64)),
            Some(DistValue::Unreachable) => Ok(Dist0::Unreachable),
            Some(v) => Err(Error::Defect(format!("0-graph oracle gave {v:?} for {x}, {y}"))),
            None => self.bfs_distance(x, y, budget),
        }
    }

    pub fn distance(&self, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<u64> {
        match self.distance_opt(x, y, budget)? {
            Dist0::Finite(d) => Ok(d),
            Dist0::Unreachable => Err(Error::Precondition(format!("{x} and {y} are not connected"))),
        }
    }

    /// All nodes at distance exactly `n` from `x0`, sorted.
    pub fn sphere(&self, x0: &NodeRef, n: u64) -> Result<Vec<NodeRef>> {
        if !self.flags.locally_finite {
            return Err(Error::Unsupported(format!("sphere enumeration needs a locally finite graph ({})", self.label())));
        }
        let b = self.bfs(x0, n)?;
        let mut out: Vec<NodeRef> = b.dist.into_iter().filter(|(_, d)| *d == n).map(|(v, _)| v).collect();
        out.sort();
        Ok(out)
    }

    /// Node at distance `t` from `x` on the canonical geodesic to `y`.
    pub fn geodesic_point(&self, x: &NodeRef, y: &NodeRef, t: u64) -> Result<NodeRef> {
        let case = self.geodesic_oracle.iter().find(|c| c.families[0] == x.family && c.families[1] == y.family);
        let Some(case) = case else {
            return Err(Error::Unsupported(format!(
                "{} has no geodesic oracle for ({}, {})",
                self.label(),
                x.family,
                y.family
            )));
        };
        let (fam, params) = case.expr.eval(&Env { x: &x.params, y: &y.params, t: t as i64 })?;
        let v = NodeRef::new(fam, params);
        self.check(&v)?;
        Ok(v)
    }

    pub fn geodesic_case(&self, fx: &str, fy: &str) -> Option<&NodeExpr> {
        self.geodesic_oracle.iter().find(|c| c.families[0] == fx && c.families[1] == fy).map(|c| &c.expr)
    }

    pub fn sphere_case(&self, fx: &str) -> Option<&NodeExpr> {
        self.sphere_oracle.iter().find(|c| c.family == fx).map(|c| &c.expr)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GraphPresentation = serde_json::from_str(s)?;
        g.validate()?;
        Ok(g)
    }
}

impl Metric for GraphPresentation {
    fn rank(&self) -> u8 {
        0
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn check_node(&self, n: &NodeRef) -> Result<()> {
        self.check(n)
    }

    fn node_rank(&self, family: &str) -> Option<u8> {
        self.family(family).map(|_| 0)
    }

    fn dist(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<Ordinal> {
        self.distance(a, b, budget).map(Ordinal::finite)
    }

    fn dist_search(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<Ordinal> {
        match self.bfs_distance(a, b, budget)? {
            Dist0::Finite(d) => Ok(Ordinal::finite(d)),
            Dist0::Unreachable => Err(Error::Precondition(format!("{a} and {b} are not connected"))),
        }
    }

    fn oracle(&self) -> &[DistCase] {
        &self.distance_oracle
    }

    fn standard_node(&self) -> NodeRef {
        self.standard.clone().unwrap_or_else(|| self.families[0].enumerate(1)[0].clone())
    }

    fn sample_nodes(&self, count: usize) -> Vec<NodeRef> {
        let per = count.div_ceil(self.families.len().max(1)).max(1);
        let mut out: Vec<NodeRef> = self.families.iter().flat_map(|f| f.enumerate(per)).collect();
        out.truncate(count);
        out
    }
}

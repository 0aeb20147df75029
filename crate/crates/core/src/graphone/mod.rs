//! Finite presentations of rank-1 graphs.
//!
//! A 1-graph is a 0-graph whose branch components (0-sections) are named by
//! section families, plus 1-node families. A 1-node holds tips of sections
//! (ends of one-ended paths) and at most one embedded 0-node. The tip table
//! lists, for each section family, the tip roles it offers and which 1-node
//! receives each one, together with the inverse map from a 1-node back to
//! the sections whose tips it holds.

pub mod builtins;
pub mod solver;
pub mod walks;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{DistValue, Env, IntExpr};
use crate::graphzero::{Family, GraphPresentation, Slot};
use crate::metric::{self, DistCase, Metric};
use crate::node::NodeRef;
use crate::ordinals::Ordinal;

pub use solver::{Solution, SolverStats};
pub use walks::{Reach, Segment, WalkSketch};

/// A node computed from the parameters `X` of another object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub family: String,
    pub params: Vec<IntExpr>,
}

impl Template {
    pub fn new(family: &str, params: Vec<IntExpr>) -> Self {
        Template { family: family.to_string(), params }
    }

    pub fn eval(&self, x: &[i64]) -> Result<NodeRef> {
        let env = Env { x, y: &[], t: 0 };
        let p = self.params.iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>>>()?;
        Ok(NodeRef::new(self.family.clone(), p))
    }
}

/// Every node of a 0-node family lies in the section given by the template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub family: String,
    pub section: Template,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionTable {
    pub families: Vec<Family>,
    pub membership: Vec<Membership>,
}

/// The 0-node held by each member of a 1-node family, and the way back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embed {
    pub zero: Template,
    /// Parameters of the owning 1-node, from those of the 0-node.
    pub owner_params: Vec<IntExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFamily {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embeds: Option<Embed>,
}

/// One kind of tip offered by every section of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TipRole {
    pub section: String,
    pub role: String,
    /// Further parameters when a section has a whole family of such tips.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_slots: Vec<Slot>,
    /// The receiving 1-node, from the section parameters followed by the extras.
    pub one_node: Template,
    /// Section parameters followed by the extras, from the 1-node parameters
    /// followed by the free variables.
    pub inverse: Vec<IntExpr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub free_slots: Vec<Slot>,
    /// Non-routable 1-nodes are singletons whose tips sit in one section;
    /// passing through them never shortens a walk, so the solver only uses
    /// them as endpoints.
    #[serde(default = "yes")]
    pub routable: bool,
}

fn yes() -> bool {
    true
}

/// A tip held by a 1-node: section, role, and extra parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TipRef {
    pub section: NodeRef,
    pub role: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<i64>,
}

impl std::fmt::Display for TipRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.section, self.role)?;
        if !self.extra.is_empty() {
            let e: Vec<String> = self.extra.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", e.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFlags {
    #[serde(default)]
    pub locally_one_finite: bool,
    #[serde(default = "yes")]
    pub one_wconnected: bool,
    #[serde(default)]
    pub infinitely_many_boundary: bool,
}

impl Default for OneFlags {
    fn default() -> Self {
        OneFlags { locally_one_finite: false, one_wconnected: true, infinitely_many_boundary: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneGraphPresentation {
    #[serde(flatten)]
    pub zero_graph: GraphPresentation,
    pub sections: SectionTable,
    pub one_nodes: Vec<OneFamily>,
    pub tip_table: Vec<TipRole>,
    #[serde(default)]
    pub one_flags: OneFlags,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wdistance_oracle: Vec<DistCase>,
    /// Standard node of the whole 1-graph (a maximal node of either rank).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one_standard: Option<NodeRef>,
}

/// Incident sections of a 1-node, cut to an enumeration budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence {
    pub tips: Vec<TipRef>,
    /// Section containing the embedded 0-node, if any.
    pub branch: Option<(NodeRef, NodeRef)>,
    /// True when some free variable ranged over an infinite set and was cut.
    pub truncated: bool,
}

impl Incidence {
    pub fn sections(&self) -> BTreeSet<NodeRef> {
        let mut s: BTreeSet<NodeRef> = self.tips.iter().map(|t| t.section.clone()).collect();
        if let Some((sec, _)) = &self.branch {
            s.insert(sec.clone());
        }
        s
    }
}

fn free_family(slots: &[Slot]) -> Family {
    Family::new("free", slots.to_vec())
}

fn infinite(slots: &[Slot]) -> bool {
    slots.iter().any(|s| !s.is_finite())
}

impl OneGraphPresentation {
    pub fn name(&self) -> &str {
        &self.zero_graph.name
    }

    pub fn one_family(&self, name: &str) -> Option<&OneFamily> {
        self.one_nodes.iter().find(|f| f.family.name == name)
    }

    pub fn section_family(&self, name: &str) -> Option<&Family> {
        self.sections.families.iter().find(|f| f.name == name)
    }

    pub fn is_one_node(&self, n: &NodeRef) -> bool {
        self.one_family(&n.family).is_some_and(|f| f.family.admits(&n.params))
    }

    pub fn is_zero_node(&self, n: &NodeRef) -> bool {
        self.zero_graph.is_valid(n)
    }

    pub fn is_section(&self, s: &NodeRef) -> bool {
        self.section_family(&s.family).is_some_and(|f| f.admits(&s.params))
    }

    pub fn check(&self, n: &NodeRef) -> Result<()> {
        if self.is_one_node(n) || self.is_zero_node(n) {
            Ok(())
        } else {
            Err(Error::InvalidNode(format!("{n} is not a node of {}", self.name())))
        }
    }

    /// The section holding the branches at a 0-node.
    pub fn section_of(&self, u: &NodeRef) -> Result<NodeRef> {
        self.zero_graph.check(u)?;
        let m = self
            .sections
            .membership
            .iter()
            .find(|m| m.family == u.family)
            .ok_or_else(|| Error::Config(format!("0-node family {} has no section", u.family)))?;
        let s = m.section.eval(&u.params)?;
        if !self.is_section(&s) {
            return Err(Error::Config(format!("{u} maps to {s}, which is not a section")));
        }
        Ok(s)
    }

    /// The 0-node embedded in a 1-node, if any.
    pub fn embedded(&self, n: &NodeRef) -> Result<Option<NodeRef>> {
        let Some(f) = self.one_family(&n.family) else {
            return Err(Error::InvalidNode(format!("{n} is not a 1-node of {}", self.name())));
        };
        let Some(e) = &f.embeds else { return Ok(None) };
        let z = e.zero.eval(&n.params)?;
        Ok(self.zero_graph.is_valid(&z).then_some(z))
    }

    /// The 1-node containing a 0-node, if any.
    pub fn owner(&self, u: &NodeRef) -> Result<Option<NodeRef>> {
        for f in &self.one_nodes {
            let Some(e) = &f.embeds else { continue };
            if e.zero.family != u.family {
                continue;
            }
            let env = Env { x: &u.params, y: &[], t: 0 };
            let p = e.owner_params.iter().map(|x| x.eval(&env)).collect::<Result<Vec<_>>>()?;
            let n = NodeRef::new(f.family.name.clone(), p);
            if self.is_one_node(&n) && self.embedded(&n)?.as_ref() == Some(u) {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// The node distances are measured from: a nonmaximal 0-node stands for
    /// the 1-node that contains it.
    pub fn maximal(&self, n: &NodeRef) -> Result<NodeRef> {
        self.check(n)?;
        if self.is_zero_node(n) {
            if let Some(o) = self.owner(n)? {
                return Ok(o);
            }
        }
        Ok(n.clone())
    }

    pub fn roles(&self, section_family: &str) -> Vec<&TipRole> {
        self.tip_table.iter().filter(|r| r.section == section_family).collect()
    }

    pub fn role(&self, section_family: &str, role: &str) -> Option<&TipRole> {
        self.tip_table.iter().find(|r| r.section == section_family && r.role == role)
    }

    /// The 1-node receiving a tip.
    pub fn tip_owner(&self, t: &TipRef) -> Result<NodeRef> {
        let r = self
            .role(&t.section.family, &t.role)
            .ok_or_else(|| Error::InvalidNode(format!("{} has no tip role {}", t.section.family, t.role)))?;
        if !self.is_section(&t.section) || !free_family(&r.extra_slots).admits(&t.extra) {
            return Err(Error::InvalidNode(format!("no tip {t}")));
        }
        let mut x = t.section.params.clone();
        x.extend_from_slice(&t.extra);
        let n = r.one_node.eval(&x)?;
        if !self.is_one_node(&n) {
            return Err(Error::Config(format!("tip {t} maps to {n}, which is not a 1-node")));
        }
        Ok(n)
    }

    /// Tips of a section with given role, extras cut to `budget` members.
    pub fn section_tips(&self, s: &NodeRef, budget: usize) -> Result<(Vec<(TipRef, &TipRole)>, bool)> {
        let mut out = vec![];
        let mut truncated = false;
        for r in self.roles(&s.family) {
            let extras = if r.extra_slots.is_empty() {
                vec![vec![]]
            } else {
                truncated |= infinite(&r.extra_slots);
                free_family(&r.extra_slots).enumerate(budget).into_iter().map(|n| n.params).collect()
            };
            for extra in extras {
                out.push((TipRef { section: s.clone(), role: r.role.clone(), extra }, r));
            }
        }
        Ok((out, truncated))
    }

    /// Tips held by a 1-node. Free variables are cut to `budget` values;
    /// `seeds` are further sections always tried.
    pub fn tips_of(&self, n: &NodeRef, budget: usize, seeds: &[NodeRef]) -> Result<(Vec<TipRef>, bool)> {
        let mut out = BTreeSet::new();
        let mut truncated = false;
        for r in self.tip_table.iter().filter(|r| r.one_node.family == n.family) {
            let frees = if r.free_slots.is_empty() {
                vec![vec![]]
            } else {
                truncated |= infinite(&r.free_slots);
                free_family(&r.free_slots).enumerate(budget).into_iter().map(|m| m.params).collect()
            };
            let sf = self.section_family(&r.section).expect("validated").slots.len();
            for free in frees {
                let mut x = n.params.clone();
                x.extend(free);
                let env = Env { x: &x, y: &[], t: 0 };
                let v = r.inverse.iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>>>()?;
                let t = TipRef {
                    section: NodeRef::new(r.section.clone(), v[..sf].to_vec()),
                    role: r.role.clone(),
                    extra: v[sf..].to_vec(),
                };
                if self.tip_owner(&t).ok().as_ref() == Some(n) {
                    out.insert(t);
                }
            }
            for s in seeds.iter().filter(|s| s.family == r.section && r.extra_slots.is_empty()) {
                let t = TipRef { section: s.clone(), role: r.role.clone(), extra: vec![] };
                if self.tip_owner(&t).ok().as_ref() == Some(n) {
                    out.insert(t);
                }
            }
        }
        Ok((out.into_iter().collect(), truncated))
    }

    pub fn incidence(&self, n: &NodeRef, budget: usize) -> Result<Incidence> {
        let (tips, truncated) = self.tips_of(n, budget, &[])?;
        let branch = match self.embedded(n)? {
            Some(z) => Some((self.section_of(&z)?, z)),
            None => None,
        };
        Ok(Incidence { tips, branch, truncated })
    }

    /// Whether a 1-node is incident to a given section.
    pub fn incident(&self, n: &NodeRef, s: &NodeRef) -> Result<bool> {
        let (tips, _) = self.tips_of(n, 64, std::slice::from_ref(s))?;
        if tips.iter().any(|t| t.section == *s) {
            return Ok(true);
        }
        Ok(match self.embedded(n)? {
            Some(z) => self.section_of(&z)? == *s,
            None => false,
        })
    }

    /// Boundary 1-nodes: incident to two or more sections.
    pub fn is_boundary(&self, n: &NodeRef, budget: usize) -> Result<bool> {
        Ok(self.incidence(n, budget.max(2))?.sections().len() >= 2)
    }

    /// Two 1-nodes incident to a common section.
    pub fn one_adjacent(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<bool> {
        let ia = self.incidence(a, budget)?.sections();
        for s in self.incidence(b, budget)?.sections() {
            if ia.contains(&s) || self.incident(a, &s)? {
                return Ok(true);
            }
        }
        for s in ia {
            if self.incident(b, &s)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// 1-nodes whose embedded 0-node lies in `s`, cut to `budget` per family.
    pub fn embedded_in(&self, s: &NodeRef, budget: usize, seeds: &[NodeRef]) -> Result<(Vec<NodeRef>, bool)> {
        let mut out = BTreeSet::new();
        let mut truncated = false;
        for f in &self.one_nodes {
            let Some(e) = &f.embeds else { continue };
            let lands_here =
                self.sections.membership.iter().any(|m| m.family == e.zero.family && m.section.family == s.family);
            if !lands_here {
                continue;
            }
            truncated |= !f.family.is_finite();
            let cands = f.family.enumerate(budget).into_iter().chain(seeds.iter().filter(|n| n.family == f.family.name).cloned());
            for n in cands {
                if let Some(z) = self.embedded(&n)? {
                    if self.section_of(&z)? == *s {
                        out.insert(n);
                    }
                }
            }
        }
        Ok((out.into_iter().collect(), truncated))
    }

    /// All boundary 1-nodes incident to a section. Fails when the section
    /// has infinitely many incident 1-nodes to examine.
    pub fn boundary_one_nodes(&self, s: &NodeRef, budget: usize) -> Result<Vec<NodeRef>> {
        if !self.is_section(s) {
            return Err(Error::InvalidNode(format!("{s} is not a section of {}", self.name())));
        }
        let mut cands = BTreeSet::new();
        let (tips, _) = self.section_tips(s, budget)?;
        for (t, r) in tips {
            if !r.routable {
                // singletons hold tips of one section only
                continue;
            }
            if !r.extra_slots.is_empty() && infinite(&r.extra_slots) {
                return Err(Error::Unsupported(format!("{s} has infinitely many tips of role {}", r.role)));
            }
            cands.insert(self.tip_owner(&t)?);
        }
        let (emb, truncated) = self.embedded_in(s, budget, &[])?;
        if truncated {
            return Err(Error::Unsupported(format!("{s} has infinitely many incident 1-nodes through branches")));
        }
        cands.extend(emb);
        let mut out = vec![];
        for n in cands {
            if self.is_boundary(&n, budget)? {
                out.push(n);
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        self.zero_graph.validate()?;
        let mut names: BTreeSet<&str> = self.zero_graph.families.iter().map(|f| f.name.as_str()).collect();
        for f in &self.one_nodes {
            if !crate::node::is_ident(&f.family.name) || !names.insert(&f.family.name) {
                return cfg(format!("bad or duplicate 1-node family {:?}", f.family.name));
            }
        }
        let mut snames = BTreeSet::new();
        for f in &self.sections.families {
            if !crate::node::is_ident(&f.name) || !snames.insert(f.name.as_str()) {
                return cfg(format!("bad or duplicate section family {:?}", f.name));
            }
        }
        for f in &self.zero_graph.families {
            let n = self.sections.membership.iter().filter(|m| m.family == f.name).count();
            if n != 1 {
                return cfg(format!("0-node family {} needs exactly one section membership, has {n}", f.name));
            }
        }
        for m in &self.sections.membership {
            if self.zero_graph.family(&m.family).is_none() {
                return cfg(format!("membership names unknown 0-node family {}", m.family));
            }
            let Some(sf) = self.section_family(&m.section.family) else {
                return cfg(format!("membership names unknown section family {}", m.section.family));
            };
            if sf.slots.len() != m.section.params.len() {
                return cfg(format!("membership of {} has the wrong section arity", m.family));
            }
        }
        for f in &self.one_nodes {
            if let Some(e) = &f.embeds {
                let Some(zf) = self.zero_graph.family(&e.zero.family) else {
                    return cfg(format!("{} embeds unknown 0-node family {}", f.family.name, e.zero.family));
                };
                if zf.slots.len() != e.zero.params.len() || f.family.slots.len() != e.owner_params.len() {
                    return cfg(format!("embedding of {} has the wrong arity", f.family.name));
                }
                if Some(&zf.name) == self.zero_graph.hub().map(|h| h.0.family).as_ref() {
                    return cfg(format!("{} embeds the hub", f.family.name));
                }
            }
        }
        for r in &self.tip_table {
            let Some(sf) = self.section_family(&r.section) else {
                return cfg(format!("tip role {} names unknown section family {}", r.role, r.section));
            };
            let Some(of) = self.one_family(&r.one_node.family) else {
                return cfg(format!("tip role {}.{} names unknown 1-node family {}", r.section, r.role, r.one_node.family));
            };
            if of.family.slots.len() != r.one_node.params.len() || r.inverse.len() != sf.slots.len() + r.extra_slots.len() {
                return cfg(format!("tip role {}.{} has the wrong arity", r.section, r.role));
            }
            if !r.routable && (of.embeds.is_some() || !r.free_slots.is_empty()) {
                return cfg(format!("non-routable role {}.{} must target tip-only singletons", r.section, r.role));
            }
        }
        if self.tip_table.iter().filter(|r| !r.routable).any(|r| {
            self.tip_table.iter().any(|o| o.one_node.family == r.one_node.family && (o.section != r.section || o.role != r.role))
        }) {
            return cfg("a non-routable 1-node family must receive tips of a single role".into());
        }
        for c in &self.wdistance_oracle {
            for f in &c.families {
                if self.zero_graph.family(f).is_none() && self.one_family(f).is_none() {
                    return cfg(format!("wdistance oracle names unknown family {f:?}"));
                }
            }
        }
        if let Some(s) = &self.one_standard {
            self.check(s)?;
        }
        self.check_consistency(16)
    }

    /// Samples the maps and checks they agree: neighbours share a section,
    /// embeddings invert, and tip inverses find every tip.
    pub fn check_consistency(&self, per_family: usize) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        for f in &self.zero_graph.families {
            for u in f.enumerate(per_family) {
                let s = self.section_of(&u)?;
                let (nb, _) = self.zero_graph.neighbors(&u, per_family)?;
                for v in nb {
                    if self.section_of(&v)? != s {
                        return cfg(format!("branch {u}-{v} joins two sections"));
                    }
                }
            }
        }
        for f in &self.one_nodes {
            for n in f.family.enumerate(per_family) {
                if let Some(z) = self.embedded(&n)? {
                    if self.owner(&z)?.as_ref() != Some(&n) {
                        return cfg(format!("embedding of {z} in {n} does not invert"));
                    }
                }
            }
        }
        for sf in &self.sections.families {
            for s in sf.enumerate(per_family) {
                let (tips, _) = self.section_tips(&s, 4)?;
                for (t, _) in tips {
                    let n = self.tip_owner(&t)?;
                    let (back, _) = self.tips_of(&n, 4 * per_family, std::slice::from_ref(&s))?;
                    if !back.contains(&t) {
                        return cfg(format!("tip {t} of {n} is missing from the inverse map"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact wdistance from the least-cost walk search, ignoring the oracle.
    pub fn wdistance_search(&self, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<Ordinal> {
        Ok(solver::solve(self, x, y, budget)?.dist)
    }

    /// The oracle when it has a case for the pair, the solver otherwise.
    pub fn wdistance(&self, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<Ordinal> {
        let a = self.maximal(x)?;
        let b = self.maximal(y)?;
        if a == b {
            return Ok(Ordinal::ZERO);
        }
        match metric::eval_case(&self.wdistance_oracle, &a, &b)? {
            Some(DistValue::Ord { tau1, tau0 }) if tau1 >= 0 && tau0 >= 0 && (tau1, tau0) != (0, 0) => {
                Ok(Ordinal::new(tau1 as u64, tau0 as u64))
            }
            Some(DistValue::Unreachable) => Err(Error::Precondition(format!("{a} and {b} are not 1-wconnected"))),
            Some(v) => Err(Error::Defect(format!("wdistance oracle gave {v:?} for {a}, {b}"))),
            None => self.wdistance_search(&a, &b, budget),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: OneGraphPresentation = serde_json::from_str(s)?;
        g.validate()?;
        Ok(g)
    }

    /// Maximal nodes of every family, in canonical order.
    pub fn maximal_samples(&self, per_family: usize) -> Vec<NodeRef> {
        let zeros = self.zero_graph.families.iter().flat_map(|f| f.enumerate(per_family));
        let ones = self.one_nodes.iter().flat_map(|f| f.family.enumerate(per_family));
        ones.chain(zeros).filter(|n| self.maximal(n).ok().as_ref() == Some(n)).collect()
    }
}

impl Metric for OneGraphPresentation {
    fn rank(&self) -> u8 {
        1
    }

    fn name(&self) -> &str {
        &self.zero_graph.name
    }

    fn check_node(&self, n: &NodeRef) -> Result<()> {
        self.check(n)
    }

    fn node_rank(&self, family: &str) -> Option<u8> {
        if self.zero_graph.family(family).is_some() {
            Some(0)
        } else {
            self.one_family(family).map(|_| 1)
        }
    }

    fn dist(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<Ordinal> {
        self.wdistance(a, b, budget)
    }

    fn dist_search(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<Ordinal> {
        self.wdistance_search(a, b, budget)
    }

    fn oracle(&self) -> &[DistCase] {
        &self.wdistance_oracle
    }

    fn standard_node(&self) -> NodeRef {
        self.one_standard.clone().unwrap_or_else(|| self.one_nodes[0].family.enumerate(1)[0].clone())
    }

    fn sample_nodes(&self, count: usize) -> Vec<NodeRef> {
        let fams = self.one_nodes.len() + self.zero_graph.families.len();
        let mut out = self.maximal_samples(count.div_ceil(fams.max(1)).max(1));
        out.truncate(count);
        out
    }
}

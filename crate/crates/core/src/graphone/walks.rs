//! Walk sketches: a 1-walk as its sequence of 0-walks, each described by
//! the section it runs in and how it reaches the nodes at its two ends.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{OneGraphPresentation, TipRef};
use crate::error::{Error, Result};
use crate::node::NodeRef;
use crate::ordinals::Ordinal;

/// How a 0-walk reaches the node at one of its ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reach {
    /// By running out along a tip the node contains.
    ViaTip { tip: TipRef },
    /// By stopping at a 0-node: the node itself or the one it contains.
    ViaBranch { zero: NodeRef },
}

impl Reach {
    pub fn is_tip(&self) -> bool {
        matches!(self, Reach::ViaTip { .. })
    }
}

impl fmt::Display for Reach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reach::ViaTip { tip } => write!(f, "tip {tip}"),
            Reach::ViaBranch { zero } => write!(f, "at {zero}"),
        }
    }
}

/// One 0-walk of a 1-walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub section: NodeRef,
    pub start: Reach,
    pub end: Reach,
    /// Branch traversals; counted only when both ends stop at 0-nodes.
    #[serde(default)]
    pub steps: u64,
}

impl Segment {
    pub fn is_finite(&self) -> bool {
        !self.start.is_tip() && !self.end.is_tip()
    }

    /// ω per tip traversed; the branch count for a finite 0-walk.
    pub fn length(&self) -> Ordinal {
        let tips = u64::from(self.start.is_tip()) + u64::from(self.end.is_tip());
        if tips == 0 {
            Ordinal::finite(self.steps)
        } else {
            Ordinal::omega_times(tips)
        }
    }
}

/// `⟨x_0, W_0, x_1, …, W_{m−1}, x_m⟩` with `nodes[k]` and `nodes[k+1]` the
/// ends of `segments[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkSketch {
    pub nodes: Vec<NodeRef>,
    pub segments: Vec<Segment>,
}

impl WalkSketch {
    pub fn trivial(x: NodeRef) -> Self {
        WalkSketch { nodes: vec![x], segments: vec![] }
    }

    /// A single 0-walk stopping at 0-nodes on both sides, which needs no tip.
    pub fn is_zero_walk(&self) -> bool {
        self.segments.len() == 1 && self.segments[0].is_finite()
    }

    /// For a single 0-walk between two nodes: does it reach one of them
    /// through a tip. `None` for longer walks, where the clause does not apply.
    pub fn single_segment_uses_tip(&self) -> Option<bool> {
        (self.segments.len() == 1).then(|| !self.segments[0].is_finite())
    }

    fn shape(&self) -> Result<()> {
        if self.nodes.len() != self.segments.len() + 1 {
            return Err(Error::IllegalWalk(format!(
                "{} nodes for {} segments",
                self.nodes.len(),
                self.segments.len()
            )));
        }
        for (k, w) in self.segments.windows(2).enumerate() {
            if !w[0].end.is_tip() && !w[1].start.is_tip() {
                return Err(Error::IllegalWalk(format!(
                    "neither 0-walk reaches {} through a tip",
                    self.nodes[k + 1]
                )));
            }
        }
        Ok(())
    }

    /// `ω·τ₁ + τ₀`: τ₁ tips traversed, τ₀ branches traversed by finite 0-walks.
    pub fn length(&self) -> Result<Ordinal> {
        self.shape()?;
        self.segments.iter().try_fold(Ordinal::ZERO, |acc, s| acc.natural_sum(s.length()))
    }

    /// Full legality against a presentation: every end is reached as
    /// claimed, and every finite 0-walk is long enough to exist.
    pub fn check(&self, g: &OneGraphPresentation, budget: usize) -> Result<Ordinal> {
        let len = self.length()?;
        for n in &self.nodes {
            g.check(n)?;
        }
        for (k, s) in self.segments.iter().enumerate() {
            if !g.is_section(&s.section) {
                return Err(Error::IllegalWalk(format!("{} is not a section", s.section)));
            }
            for (reach, node) in [(&s.start, &self.nodes[k]), (&s.end, &self.nodes[k + 1])] {
                reaches(g, &s.section, reach, node)?;
            }
            if let (Reach::ViaBranch { zero: a }, Reach::ViaBranch { zero: b }) = (&s.start, &s.end) {
                let d = g.zero_graph.distance(a, b, budget)?;
                let least = if a == b { 2 } else { d };
                if s.steps < least {
                    return Err(Error::IllegalWalk(format!("{} steps cannot join {a} and {b}", s.steps)));
                }
            }
        }
        Ok(len)
    }

    /// Positions `k` where the walk passes from one section into another.
    pub fn crossings(&self) -> Vec<usize> {
        (1..self.segments.len()).filter(|&k| self.segments[k - 1].section != self.segments[k].section).collect()
    }
}

fn reaches(g: &OneGraphPresentation, section: &NodeRef, r: &Reach, node: &NodeRef) -> Result<()> {
    let ok = match r {
        Reach::ViaTip { tip } => tip.section == *section && g.is_one_node(node) && g.tip_owner(tip)? == *node,
        Reach::ViaBranch { zero } => {
            g.section_of(zero)? == *section && (zero == node || (g.is_one_node(node) && g.embedded(node)?.as_ref() == Some(zero)))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::IllegalWalk(format!("the 0-walk in {section} does not reach {node} by {r}")))
    }
}

/// Length of a walk sketch; fails on a node where neither neighbouring
/// 0-walk passes through a tip.
pub fn walk_length(w: &WalkSketch) -> Result<Ordinal> {
    w.length()
}

/// A 0-walk inside section `s` reaching both 1-nodes, preferring tips. The
/// same 1-node twice gives a walk out along a tip and back along it.
pub fn section_walk_exists(g: &OneGraphPresentation, s: &NodeRef, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<WalkSketch> {
    let reach = |n: &NodeRef| -> Result<Reach> {
        if !g.is_one_node(n) {
            return Err(Error::Precondition(format!("{n} is not a 1-node")));
        }
        let (tips, _) = g.tips_of(n, budget, std::slice::from_ref(s))?;
        if let Some(t) = tips.into_iter().find(|t| t.section == *s) {
            return Ok(Reach::ViaTip { tip: t });
        }
        match g.embedded(n)? {
            Some(z) if g.section_of(&z)? == *s => Ok(Reach::ViaBranch { zero: z }),
            _ => Err(Error::Precondition(format!("{n} is not incident to {s}"))),
        }
    };
    let (start, end) = (reach(x)?, reach(y)?);
    let steps = match (&start, &end) {
        (Reach::ViaBranch { zero: a }, Reach::ViaBranch { zero: b }) if a == b => 2,
        (Reach::ViaBranch { zero: a }, Reach::ViaBranch { zero: b }) => g.zero_graph.distance(a, b, budget)?,
        _ => 0,
    };
    let w = WalkSketch { nodes: vec![x.clone(), y.clone()], segments: vec![Segment { section: s.clone(), start, end, steps }] };
    w.check(g, budget)?;
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub applicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<Ordinal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<WalkSketch>,
    /// Whether the geodesic changes section at a 1-node, which forces a tip.
    pub crosses_sections: bool,
    /// Distance at least ω, and any section change has length at least ω.
    pub holds: bool,
}

/// For two 1-nodes sharing no section: their wdistance is at least ω, and a
/// geodesic must change section at some 1-node. Pairs sharing a section are
/// reported as inapplicable.
pub fn lemma10_checks(g: &OneGraphPresentation, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<SeparationReport> {
    let skip = |why: String| SeparationReport {
        applicable: false,
        reason: Some(why),
        distance: None,
        geodesic: None,
        crosses_sections: false,
        holds: true,
    };
    if !g.is_one_node(x) || !g.is_one_node(y) {
        return Ok(skip("both nodes must be 1-nodes".into()));
    }
    if g.one_adjacent(x, y, budget)? {
        return Ok(skip(format!("{x} and {y} are incident to a common section")));
    }
    let sol = super::solver::solve(g, x, y, budget)?;
    let crosses = !sol.geodesic.crossings().is_empty();
    let len = sol.geodesic.check(g, budget)?;
    let holds = sol.dist.tau1 >= 1 && len == sol.dist && (!crosses || len >= Ordinal::OMEGA);
    Ok(SeparationReport {
        applicable: true,
        reason: None,
        distance: Some(sol.dist),
        geodesic: Some(sol.geodesic),
        crosses_sections: crosses,
        holds,
    })
}

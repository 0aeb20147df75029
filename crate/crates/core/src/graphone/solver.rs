//! Least-length walk search in a 1-graph.
//!
//! States are 0-nodes, 1-nodes, and "inside section S after descending a
//! tip". A 1-node state is only ever entered through a tip or through its
//! embedded 0-node, and a 1-node reached through its embedded 0-node can
//! only be left through a tip, so every state path spells a legal walk.
//! Consecutive finite moves inside one section merge into one finite 0-walk.
//!
//! Infinite families are enumerated up to the budget. Each cut records the
//! least length any walk through the unseen part could have; the answer is
//! exact when it does not exceed that bound.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::walks::{Reach, Segment, WalkSketch};
use super::{OneGraphPresentation, TipRef};
use crate::error::{Error, Result};
use crate::node::NodeRef;
use crate::ordinals::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum State {
    Zero(NodeRef),
    One(NodeRef),
    /// Inside a section, having come down one of its tips.
    Entered(NodeRef),
}

#[derive(Debug, Clone)]
enum Move {
    Fin(u64),
    Up(TipRef),
    Down(TipRef),
    Land,
    Contain,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub settled: usize,
    pub pushed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub dist: Ordinal,
    /// A walk of exactly that length.
    pub geodesic: WalkSketch,
    pub stats: SolverStats,
}

struct Search<'a> {
    g: &'a OneGraphPresentation,
    budget: usize,
    target: State,
    seed_sections: Vec<NodeRef>,
    seed_ones: Vec<NodeRef>,
    seed_zeros: Vec<NodeRef>,
    dist: HashMap<State, Ordinal>,
    pred: HashMap<State, (State, Move)>,
    heap: BinaryHeap<Reverse<(Ordinal, u64, State)>>,
    leak: Option<Ordinal>,
    stats: SolverStats,
    seq: u64,
}

const OMEGA: Ordinal = Ordinal::OMEGA;

fn add(a: Ordinal, b: Ordinal) -> Result<Ordinal> {
    a.natural_sum(b)
}

impl Search<'_> {
    fn relax(&mut self, from: &State, c: Ordinal, to: State, mv: Move) {
        if self.dist.get(&to).is_some_and(|d| *d <= c) {
            return;
        }
        self.dist.insert(to.clone(), c);
        self.pred.insert(to.clone(), (from.clone(), mv));
        self.seq += 1;
        self.stats.pushed += 1;
        self.heap.push(Reverse((c, self.seq, to)));
    }

    fn leak_at(&mut self, bound: Ordinal) {
        self.leak = Some(self.leak.map_or(bound, |l| l.min(bound)));
    }

    fn is_target_one(&self, n: &NodeRef) -> bool {
        self.target == State::One(n.clone())
    }

    /// Moves up the tips of section `s`, from `st` at cost `c`.
    fn up_tips(&mut self, st: &State, c: Ordinal, s: &NodeRef) -> Result<()> {
        let (tips, _) = self.g.section_tips(s, 0)?;
        let mut cands: Vec<TipRef> = tips.into_iter().filter(|(_, r)| r.extra_slots.is_empty()).map(|(t, _)| t).collect();
        for r in self.g.roles(&s.family).into_iter().filter(|r| !r.extra_slots.is_empty()) {
            if r.routable {
                let (tips, cut) = self.g.section_tips(s, self.budget)?;
                cands.extend(tips.into_iter().filter(|(t, _)| t.role == r.role).map(|(t, _)| t));
                if cut {
                    self.leak_at(add(c, Ordinal::new(1, 1))?);
                }
            }
            // tips of seeded 1-nodes are always reachable
            for n in self.seed_ones.clone() {
                let (back, _) = self.g.tips_of(&n, self.budget, std::slice::from_ref(s))?;
                cands.extend(back.into_iter().filter(|t| t.section == *s && t.role == r.role));
            }
        }
        let cost = add(c, OMEGA)?;
        for t in cands {
            let n = self.g.tip_owner(&t)?;
            let routable = self.g.role(&t.section.family, &t.role).is_some_and(|r| r.routable);
            if routable || self.is_target_one(&n) {
                self.relax(st, cost, State::One(n), Move::Up(t));
            }
        }
        Ok(())
    }

    fn expand(&mut self, st: &State, c: Ordinal) -> Result<()> {
        let g = self.g;
        match st {
            State::Zero(u) => {
                if let Some(n) = g.owner(u)? {
                    self.relax(st, c, State::One(n), Move::Contain);
                }
                let s = g.section_of(u)?;
                self.up_tips(st, c, &s)?;
                self.finite_moves(st, c, u, &s)?;
            }
            State::One(n) => {
                if let Some(z) = g.embedded(n)? {
                    self.relax(st, c, State::Zero(z), Move::Contain);
                }
                let routable = !g.tip_table.iter().any(|r| !r.routable && r.one_node.family == n.family);
                if !routable && self.pred.contains_key(st) {
                    // singletons are endpoints only
                    return Ok(());
                }
                let (tips, cut) = g.tips_of(n, self.budget, &self.seed_sections)?;
                if cut {
                    // anything entered through an unseen section still has
                    // to climb out of it
                    self.leak_at(add(c, Ordinal::omega_times(2))?);
                }
                let cost = add(c, OMEGA)?;
                for t in tips {
                    self.relax(st, cost, State::Entered(t.section.clone()), Move::Down(t));
                }
            }
            State::Entered(s) => {
                if let State::Zero(y) = &self.target {
                    if g.section_of(y)? == *s {
                        let y = y.clone();
                        self.relax(st, c, State::Zero(y), Move::Land);
                    }
                }
                let seeds = self.seed_ones.clone();
                let (emb, cut) = g.embedded_in(s, self.budget, &seeds)?;
                if cut {
                    self.leak_at(add(c, Ordinal::finite(1))?);
                }
                for n in emb {
                    let z = g.embedded(&n)?.expect("embedded_in returns embedding 1-nodes");
                    self.relax(st, c, State::Zero(z), Move::Land);
                }
                self.up_tips(st, c, s)?;
            }
        }
        Ok(())
    }

    /// Finite 0-walks from `u` to the 0-nodes where something can happen.
    fn finite_moves(&mut self, st: &State, c: Ordinal, u: &NodeRef, s: &NodeRef) -> Result<()> {
        let g = self.g;
        let z = &g.zero_graph;
        let b = z.bfs(u, self.budget as u64)?;
        let hub = z.hub();
        let mut found = vec![];
        for (w, d) in &b.dist {
            if *d == 0 {
                continue;
            }
            let interesting = State::Zero(w.clone()) == self.target
                || hub.as_ref().is_some_and(|h| h.0 == *w)
                || g.owner(w)?.is_some();
            if interesting {
                found.push((w.clone(), *d));
            }
        }
        found.sort();
        for (w, d) in found {
            self.relax(st, add(c, Ordinal::finite(d))?, State::Zero(w), Move::Fin(d));
        }
        if !b.exhausted {
            let target_here = matches!(&self.target, State::Zero(y) if g.section_of(y)? == *s);
            let embeds_here = g.one_nodes.iter().filter_map(|f| f.embeds.as_ref()).any(|e| {
                g.sections.membership.iter().any(|m| m.family == e.zero.family && m.section.family == s.family)
            });
            if target_here || embeds_here {
                self.leak_at(add(c, Ordinal::finite(self.budget as u64 + 1))?);
            }
        }
        if let Some((h, fam)) = hub {
            if h == *u {
                let f = z.family(fam).expect("validated");
                if !f.is_finite() {
                    self.leak_at(add(c, Ordinal::finite(2))?);
                }
                let mut members: BTreeSet<NodeRef> = f.enumerate(self.budget).into_iter().collect();
                members.extend(self.seed_zeros.iter().filter(|n| n.family == fam).cloned());
                for m in members {
                    if z.is_valid(&m) {
                        self.relax(st, add(c, Ordinal::finite(1))?, State::Zero(m), Move::Fin(1));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sections, 1-nodes and 0-nodes tied to an endpoint, always included when
/// an infinite family is cut.
fn seeds(g: &OneGraphPresentation, n: &NodeRef, budget: usize, sec: &mut Vec<NodeRef>, ones: &mut Vec<NodeRef>, zeros: &mut Vec<NodeRef>) -> Result<()> {
    if g.is_one_node(n) {
        ones.push(n.clone());
        let inc = g.incidence(n, budget)?;
        sec.extend(inc.sections());
        if let Some((_, z)) = inc.branch {
            zeros.push(z);
        }
    } else {
        zeros.push(n.clone());
        sec.push(g.section_of(n)?);
    }
    Ok(())
}

/// Exact wdistance and a geodesic walk between two nodes.
pub fn solve(g: &OneGraphPresentation, x: &NodeRef, y: &NodeRef, budget: usize) -> Result<Solution> {
    let a = g.maximal(x)?;
    let b = g.maximal(y)?;
    let state_of = |n: &NodeRef| if g.is_one_node(n) { State::One(n.clone()) } else { State::Zero(n.clone()) };
    let (mut sec, mut ones, mut zeros) = (vec![], vec![], vec![]);
    seeds(g, &a, budget, &mut sec, &mut ones, &mut zeros)?;
    seeds(g, &b, budget, &mut sec, &mut ones, &mut zeros)?;
    let start = state_of(&a);
    let mut s = Search {
        g,
        budget,
        target: state_of(&b),
        seed_sections: sec,
        seed_ones: ones,
        seed_zeros: zeros,
        dist: HashMap::new(),
        pred: HashMap::new(),
        heap: BinaryHeap::new(),
        leak: None,
        stats: SolverStats::default(),
        seq: 0,
    };
    s.dist.insert(start.clone(), Ordinal::ZERO);
    s.heap.push(Reverse((Ordinal::ZERO, 0, start.clone())));
    let max_settled = budget.max(8) * 256;
    let mut settled = BTreeSet::new();
    while let Some(Reverse((c, _, st))) = s.heap.pop() {
        if s.dist.get(&st).is_some_and(|d| *d < c) || !settled.insert(st.clone()) {
            continue;
        }
        s.stats.settled += 1;
        if st == s.target {
            if let Some(l) = s.leak {
                if l < c {
                    return Err(Error::Unresolved { lower_bound: l });
                }
            }
            let geodesic = sketch(g, &s.pred, &start, &st, &a)?;
            return Ok(Solution { dist: c, geodesic, stats: s.stats });
        }
        if s.stats.settled > max_settled {
            return Err(Error::Unresolved { lower_bound: s.leak.map_or(c, |l| l.min(c)) });
        }
        s.expand(&st, c)?;
    }
    match s.leak {
        Some(l) => Err(Error::Unresolved { lower_bound: l }),
        None => Err(Error::Precondition(format!("{a} and {b} are not 1-wconnected in {}", g.name()))),
    }
}

/// Turns a state path into a walk sketch.
fn sketch(
    g: &OneGraphPresentation,
    pred: &HashMap<State, (State, Move)>,
    start: &State,
    end: &State,
    a: &NodeRef,
) -> Result<WalkSketch> {
    let mut path = vec![];
    let mut cur = end.clone();
    while cur != *start {
        let (p, mv) = pred.get(&cur).ok_or_else(|| Error::Defect("broken predecessor chain".into()))?;
        path.push((p.clone(), mv.clone(), cur.clone()));
        cur = p.clone();
    }
    path.reverse();
    let mut nodes = vec![a.clone()];
    let mut segments = vec![];
    // the open segment: its section, how it left the last node, finite steps
    let mut open: Option<(NodeRef, Reach, u64)> = None;
    for (from, mv, to) in path {
        match mv {
            Move::Fin(d) => {
                let State::Zero(u) = &from else { return Err(Error::Defect("finite move from a non-0-node".into())) };
                let seg = open.get_or_insert_with(|| (g.section_of(u).expect("valid"), Reach::ViaBranch { zero: u.clone() }, 0));
                seg.2 += d;
            }
            Move::Down(t) => {
                open = Some((t.section.clone(), Reach::ViaTip { tip: t }, 0));
            }
            Move::Land => {}
            Move::Up(t) => {
                let (section, start_reach, _) = match open.take() {
                    Some(o) => o,
                    None => {
                        let State::Zero(u) = &from else { return Err(Error::Defect("tip climb from nowhere".into())) };
                        (g.section_of(u)?, Reach::ViaBranch { zero: u.clone() }, 0)
                    }
                };
                let State::One(n) = &to else { return Err(Error::Defect("tip climb to a non-1-node".into())) };
                segments.push(Segment { section, start: start_reach, end: Reach::ViaTip { tip: t }, steps: 0 });
                nodes.push(n.clone());
            }
            Move::Contain => match (&from, &to) {
                (State::Zero(z), State::One(n)) => {
                    if let Some((section, start_reach, steps)) = open.take() {
                        let steps = if matches!(start_reach, Reach::ViaTip { .. }) { 0 } else { steps };
                        segments.push(Segment { section, start: start_reach, end: Reach::ViaBranch { zero: z.clone() }, steps });
                        nodes.push(n.clone());
                    }
                }
                (State::One(_), State::Zero(z)) => {
                    open = Some((g.section_of(z)?, Reach::ViaBranch { zero: z.clone() }, 0));
                }
                _ => return Err(Error::Defect("containment between nodes of one rank".into())),
            },
        }
    }
    if let Some((section, start_reach, steps)) = open {
        let State::Zero(z) = end else { return Err(Error::Defect("walk ends inside a section at a 1-node".into())) };
        let steps = if matches!(start_reach, Reach::ViaTip { .. }) { 0 } else { steps };
        segments.push(Segment { section, start: start_reach, end: Reach::ViaBranch { zero: z.clone() }, steps });
        nodes.push(z.clone());
    }
    Ok(WalkSketch { nodes, segments })
}

//! Helpers shared by the integration tests: node grids and a brute-force
//! walk enumerator for rank-1 graphs.

use std::collections::{BTreeSet, HashSet};

use galaxies_core::graphone::OneGraphPresentation;
use galaxies_core::{NodeRef, Ordinal};

/// Maximal nodes with every parameter in `lo..=hi`.
pub fn grid_nodes(g: &OneGraphPresentation, lo: i64, hi: i64) -> Vec<NodeRef> {
    let mut out = vec![];
    let mut fams: Vec<(String, usize)> = g.one_nodes.iter().map(|f| (f.family.name.clone(), f.family.slots.len())).collect();
    fams.extend(g.zero_graph.families.iter().map(|f| (f.name.clone(), f.slots.len())));
    for (f, arity) in fams {
        let mut params = vec![vec![]];
        for _ in 0..arity {
            params = params.into_iter().flat_map(|p: Vec<i64>| (lo..=hi).map(move |v| [p.clone(), vec![v]].concat())).collect();
        }
        for p in params {
            let v = NodeRef::new(f.clone(), p);
            if g.check(&v).is_ok() && g.maximal(&v).unwrap() == v {
                out.push(v);
            }
        }
    }
    out
}

/// Where a brute-force walk currently is.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Pos {
    /// At a 0-node; `pending` counts steps of a 0-walk that has not used a
    /// tip, `None` once it has.
    Zero(NodeRef, Option<u64>),
    /// Somewhere inside a section after coming down a tip.
    Inside(NodeRef),
    /// At a 1-node, flagged by whether it was reached through a tip.
    One(NodeRef, bool),
}

/// Least walk length with at most `max_tips` tips and `max_steps` branch
/// steps, by exhaustive search over walks.
pub fn brute_force(g: &OneGraphPresentation, x: &NodeRef, y: &NodeRef, max_tips: u64, max_steps: u64) -> Option<Ordinal> {
    let x = g.maximal(x).unwrap();
    let y = g.maximal(y).unwrap();
    if x == y {
        return Some(Ordinal::ZERO);
    }
    let one = |v: &NodeRef| g.is_one_node(v);
    // every embedded 0-node is a place worth landing
    let mut landmarks: BTreeSet<NodeRef> = BTreeSet::new();
    for f in &g.one_nodes {
        for m in f.family.enumerate(256) {
            if let Some(z) = g.embedded(&m).unwrap() {
                landmarks.insert(z);
            }
        }
    }
    if !one(&y) {
        landmarks.insert(y.clone());
    }
    let start = if one(&x) { Pos::One(x.clone(), true) } else { Pos::Zero(x.clone(), Some(0)) };
    let mut best: Option<Ordinal> = None;
    let mut seen = HashSet::new();
    let mut stack = vec![(start, 0u64, 0u64, 0u64)];
    while let Some((pos, tips, steps, fixed)) = stack.pop() {
        if !seen.insert((pos.clone(), tips, steps, fixed)) {
            continue;
        }
        let done = match &pos {
            Pos::Zero(u, pending) if *u == y => Some(Ordinal::new(tips, fixed + pending.unwrap_or(0))),
            Pos::One(m, _) if *m == y => Some(Ordinal::new(tips, fixed)),
            _ => None,
        };
        if let Some(len) = done {
            best = Some(best.map_or(len, |b| b.min(len)));
            continue;
        }
        let climb = |s: &NodeRef, stack: &mut Vec<_>| {
            if tips < max_tips {
                for (t, r) in g.section_tips(s, 256).unwrap().0 {
                    let m = g.tip_owner(&t).unwrap();
                    if r.routable || m == y {
                        stack.push((Pos::One(m, true), tips + 1, steps, fixed));
                    }
                }
            }
        };
        match pos {
            Pos::Zero(u, pending) => {
                if steps < max_steps {
                    for w in g.zero_graph.neighbors(&u, 256).unwrap().0 {
                        stack.push((Pos::Zero(w, pending.map(|p| p + 1)), tips, steps + 1, fixed));
                    }
                }
                climb(&g.section_of(&u).unwrap(), &mut stack);
                if let Some(m) = g.owner(&u).unwrap() {
                    stack.push((Pos::One(m, false), tips, steps, fixed + pending.unwrap_or(0)));
                }
            }
            Pos::Inside(s) => climb(&s, &mut stack),
            Pos::One(m, via_tip) => {
                let routable = !g.tip_table.iter().any(|r| !r.routable && r.one_node.family == m.family);
                if !routable && m != x {
                    continue;
                }
                if via_tip {
                    if let Some(z) = g.embedded(&m).unwrap() {
                        stack.push((Pos::Zero(z, Some(0)), tips, steps, fixed));
                    }
                }
                if tips < max_tips {
                    for t in g.tips_of(&m, 256, &[]).unwrap().0 {
                        stack.push((Pos::Inside(t.section.clone()), tips + 1, steps, fixed));
                        for l in &landmarks {
                            if g.section_of(l).unwrap() == t.section {
                                stack.push((Pos::Zero(l.clone(), None), tips + 1, steps, fixed));
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

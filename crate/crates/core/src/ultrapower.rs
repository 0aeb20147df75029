//! Hypernodes, hyperbranches and hyperordinals over a fixed presentation.
//!
//! A hypernode is a definable node sequence read modulo the ultrafilter.
//! Its hyperdistance to another hypernode is again a definable sequence,
//! obtained clause by clause from the presentation's distance oracle.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Affine, Eventual, SymEnv};
use crate::filters::{FilterVerdict, IndexSet, SetClass, UltrafilterOracle};
use crate::metric::{lookup, Metric};
use crate::node::NodeRef;
use crate::ordinals::Ordinal;
use crate::seq::{combine, pair_index_set, DefSeq, NodeSeq, NodeTerm, OrdSeq, OrdTerm, Term};

/// How many leading indices are checked explicitly when a sequence is bound
/// to a presentation.
const CHECK_SPAN: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypernode {
    pub rank: u8,
    pub seq: NodeSeq,
}

impl Hypernode {
    /// Binds a sequence to `m`. The rank is that of the node kind occupying
    /// a set in the ultrafilter; a mix the oracle cannot settle is refused.
    pub fn new(m: &dyn Metric, seq: NodeSeq, o: &UltrafilterOracle) -> Result<Self> {
        seq.validate()?;
        check_members(m, &seq)?;
        let mut ranks = Vec::with_capacity(seq.period);
        for t in &seq.tail {
            ranks.push(
                m.node_rank(&t.family).ok_or_else(|| Error::InvalidNode(format!("unknown node family {}", t.family)))?,
            );
        }
        let rank = if ranks.iter().all(|r| *r == ranks[0]) {
            ranks[0]
        } else {
            let ones = IndexSet::from_fn(seq.prefix.len(), seq.period, |n| ranks[n % seq.period] == 1);
            match o.verdict(&ones)? {
                FilterVerdict::InFilter => 1,
                FilterVerdict::NotInFilter => 0,
                FilterVerdict::Undetermined => {
                    return Err(Error::Precondition(
                        "sequence mixes 0-nodes and 1-nodes on sets the oracle cannot decide".into(),
                    ))
                }
            }
        };
        Ok(Hypernode { rank, seq })
    }

    pub fn constant(m: &dyn Metric, node: &NodeRef) -> Result<Self> {
        Hypernode::new(m, DefSeq::constant(node), &UltrafilterOracle::Frechet)
    }

    pub fn at(&self, n: usize) -> Result<NodeRef> {
        self.seq.at(n)
    }

    /// The node this hypernode is eventually equal to, if any. Standardness
    /// is read at the class level: agreement on a cofinite set.
    pub fn standard_value(&self) -> Option<NodeRef> {
        if !self.seq.is_eventually_constant() {
            return None;
        }
        self.seq.tail[0].eval(0).ok()
    }

    pub fn is_standard(&self) -> bool {
        self.standard_value().is_some()
    }
}

impl fmt::Display for Hypernode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.standard_value() {
            Some(v) if self.seq.prefix.is_empty() => write!(f, "[{v}]"),
            _ => write!(f, "[{}]", self.seq),
        }
    }
}

/// Every listed value is a node of `m`, and every clause stays inside the
/// parameter domains. Domains are intervals and clauses affine, so checking
/// the start of each clause and one far-away index covers the whole clause.
fn check_members(m: &dyn Metric, seq: &NodeSeq) -> Result<()> {
    let span = seq.prefix.len() + 2 * seq.period + CHECK_SPAN;
    for n in 0..span {
        m.check_node(&seq.at(n)?)?;
    }
    let far = (seq.prefix.len() / seq.period + (1 << 31)) as i64;
    for t in &seq.tail {
        m.check_node(&t.eval(far)?).map_err(|_| {
            Error::InvalidNode(format!("clause {t} leaves the node domain for large n"))
        })?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperbranch {
    pub a: Hypernode,
    pub b: Hypernode,
}

impl Hyperbranch {
    /// Valid when the endpoints are joined by a branch on a set in the
    /// ultrafilter, i.e. their hyperdistance is 1 there.
    pub fn new(m: &dyn Metric, a: Hypernode, b: Hypernode, o: &UltrafilterOracle, budget: usize) -> Result<Self> {
        if a.rank != 0 || b.rank != 0 {
            return Err(Error::RankMismatch("hyperbranch endpoints must be 0-hypernodes".into()));
        }
        let d = hyperdistance(m, &a, &b, budget)?;
        let one = d.seq.index_set(
            |t| {
                let e = t.eventual_cmp(&OrdTerm::constant(&Ordinal::finite(1)));
                Ok(Eventual::new(e.from, e.value == Ordering::Equal))
            },
            |v| Ok(*v == Ordinal::finite(1)),
        )?;
        match o.verdict(&one)? {
            FilterVerdict::InFilter => Ok(Hyperbranch { a, b }),
            v => Err(Error::Precondition(format!("endpoints are adjacent on a set that is {v}"))),
        }
    }

    pub fn is_standard(&self) -> bool {
        self.a.is_standard() && self.b.is_standard()
    }
}

/// A definable ordinal sequence read modulo the ultrafilter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperOrdinal {
    pub seq: OrdSeq,
}

impl HyperOrdinal {
    pub fn constant(v: Ordinal) -> Self {
        HyperOrdinal { seq: DefSeq::constant(&v) }
    }

    pub fn at(&self, n: usize) -> Result<Ordinal> {
        self.seq.at(n)
    }
}

impl fmt::Display for HyperOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.seq)
    }
}

/// `{n : a_n = b_n}` and its verdict.
pub fn agreement_set(a: &Hypernode, b: &Hypernode) -> Result<IndexSet> {
    pair_index_set(&a.seq, &b.seq, |x, y| Ok(x.eventual_eq(y)), |x, y| Ok(x == y))
}

pub fn hn_equal(a: &Hypernode, b: &Hypernode, o: &UltrafilterOracle) -> Result<FilterVerdict> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch(format!("rank {} vs rank {}", a.rank, b.rank)));
    }
    o.verdict(&agreement_set(a, b)?)
}

/// Distances are nonnegative, so a clause that is eventually negative means
/// the oracle is broken.
fn nonnegative_from(t: &OrdTerm) -> Result<i64> {
    let mut from = i64::MIN;
    for a in [t.tau1, t.tau0] {
        let (s, f) = a.add(Affine::constant(1)).eventual_sign();
        if s != Ordering::Greater {
            return Err(Error::Defect(format!("distance clause {t} is eventually negative")));
        }
        from = from.max(f);
    }
    Ok(from)
}

/// Distance between two clauses for all large `q`.
pub fn clause_distance(m: &dyn Metric, a: &NodeTerm, b: &NodeTerm, budget: usize) -> Result<Eventual<OrdTerm>> {
    if a == b {
        return Ok(Eventual::new(i64::MIN, OrdTerm::constant(&Ordinal::ZERO)));
    }
    if a.is_constant() && b.is_constant() {
        let d = m.dist(&a.eval(0)?, &b.eval(0)?, budget)?;
        return Ok(Eventual::new(i64::MIN, OrdTerm::constant(&d)));
    }
    let Some((expr, swapped)) = lookup(m.oracle(), &a.family, &b.family) else {
        return Err(Error::Unsupported(format!(
            "{} has no distance oracle for ({}, {}); non-constant sequences need one",
            m.name(),
            a.family,
            b.family
        )));
    };
    let (x, y) = if swapped { (b, a) } else { (a, b) };
    let env = SymEnv { x: &x.params, y: &y.params, t: Affine::constant(0) };
    let ev = expr.eval_eventual(&env)?;
    let Some((tau1, tau0)) = ev.value else {
        return Err(Error::Unsupported(format!("{a} and {b} are eventually unreachable from each other")));
    };
    let term = OrdTerm::new(tau1, tau0);
    Ok(Eventual::new(ev.from.max(nonnegative_from(&term)?), term))
}

/// `d(a, b) = [d(a_n, b_n)]` as a definable sequence.
pub fn hyperdistance(m: &dyn Metric, a: &Hypernode, b: &Hypernode, budget: usize) -> Result<HyperOrdinal> {
    let seq = combine(&a.seq, &b.seq, |x, y| clause_distance(m, x, y, budget), |x, y| m.dist(x, y, budget))?;
    Ok(HyperOrdinal { seq })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoOrdering {
    Less,
    Equal,
    Greater,
    Undetermined,
}

impl fmt::Display for HoOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HoOrdering::Less => "less",
            HoOrdering::Equal => "equal",
            HoOrdering::Greater => "greater",
            HoOrdering::Undetermined => "undetermined",
        })
    }
}

/// `{n : a_n ⋄ b_n}` for the chosen ordering `⋄`.
pub fn comparison_set(a: &HyperOrdinal, b: &HyperOrdinal, want: Ordering) -> Result<IndexSet> {
    pair_index_set(
        &a.seq,
        &b.seq,
        |x, y| {
            let e = x.eventual_cmp(y);
            Ok(Eventual::new(e.from, e.value == want))
        },
        |x, y| Ok(x.cmp(y) == want),
    )
}

pub fn ho_compare(a: &HyperOrdinal, b: &HyperOrdinal, o: &UltrafilterOracle) -> Result<HoOrdering> {
    let mut hit = None;
    for (want, tag) in [(Ordering::Less, HoOrdering::Less), (Ordering::Equal, HoOrdering::Equal), (Ordering::Greater, HoOrdering::Greater)] {
        if o.verdict(&comparison_set(a, b, want)?)?.is_in() {
            if hit.is_some() {
                return Err(Error::Defect("two disjoint comparison sets both in the ultrafilter".into()));
            }
            hit = Some(tag);
        }
    }
    Ok(hit.unwrap_or(HoOrdering::Undetermined))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub samples: usize,
    pub pointwise_failures: Vec<usize>,
    /// Class of `{n : d(a,c) <= d(a,b) ⊕ d(b,c)}`.
    pub holds_on: SetClass,
    pub pass: bool,
}

pub fn hyper_triangle_check(
    m: &dyn Metric,
    a: &Hypernode,
    b: &Hypernode,
    c: &Hypernode,
    samples: usize,
    budget: usize,
) -> Result<TriangleReport> {
    let ab = hyperdistance(m, a, b, budget)?;
    let bc = hyperdistance(m, b, c, budget)?;
    let ac = hyperdistance(m, a, c, budget)?;
    let mut pointwise_failures = vec![];
    for n in 0..samples {
        if ac.at(n)? > ab.at(n)?.natural_sum(bc.at(n)?)? {
            pointwise_failures.push(n);
        }
    }
    let sum = combine(
        &ab.seq,
        &bc.seq,
        |x, y| Ok(Eventual::new(i64::MIN, x.natural_sum(y))),
        |x, y| x.natural_sum(*y),
    )?;
    let holds = pair_index_set(
        &ac.seq,
        &sum,
        |x, y| {
            let e = x.eventual_cmp(y);
            Ok(Eventual::new(e.from, e.value != Ordering::Greater))
        },
        |x, y| Ok(x <= y),
    )?;
    let holds_on = holds.classify();
    let everywhere = holds_on == SetClass::Cofinite && holds.prefix.iter().all(|b| *b);
    Ok(TriangleReport { samples, pass: pointwise_failures.is_empty() && everywhere, pointwise_failures, holds_on })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphzero::builtins::builtin;

    fn path_seq(slope: i64, c: i64) -> NodeSeq {
        DefSeq::affine(NodeTerm::new("x", vec![Affine::new(slope, c)]))
    }

    #[test]
    fn equality_examples() {
        let g = builtin("one_ended_path").unwrap();
        let o = UltrafilterOracle::Frechet;
        let x0 = Hypernode::constant(&g, &"x(0)".parse().unwrap()).unwrap();
        let xn = Hypernode::new(&g, path_seq(1, 0), &o).unwrap();
        assert_eq!(hn_equal(&x0, &x0, &o).unwrap(), FilterVerdict::InFilter);
        assert_eq!(hn_equal(&x0, &xn, &o).unwrap(), FilterVerdict::NotInFilter);
        let inter = Hypernode::new(&g, DefSeq::cycle(&["x(0)".parse().unwrap(), "x(1)".parse().unwrap()]).unwrap(), &o).unwrap();
        assert_eq!(hn_equal(&inter, &x0, &o).unwrap(), FilterVerdict::Undetermined);
        let evens = UltrafilterOracle::residue_chain(vec![(2, 0)]).unwrap();
        assert_eq!(hn_equal(&inter, &x0, &evens).unwrap(), FilterVerdict::InFilter);
    }

    #[test]
    fn out_of_domain_clause_is_rejected() {
        let g = builtin("one_ended_path").unwrap();
        let o = UltrafilterOracle::Frechet;
        assert!(Hypernode::new(&g, path_seq(1, -1), &o).is_err());
        assert!(Hypernode::new(&g, path_seq(-1, 100), &o).is_err());
        // the explicit boundary substitution is fine
        let s = DefSeq::new(vec!["x(0)".parse().unwrap()], vec![NodeTerm::new("x", vec![Affine::new(1, -1)])]).unwrap();
        assert!(Hypernode::new(&g, s, &o).is_ok());
    }

    #[test]
    fn path_hyperdistance_is_index() {
        let g = builtin("one_ended_path").unwrap();
        let o = UltrafilterOracle::Frechet;
        let x0 = Hypernode::constant(&g, &"x(0)".parse().unwrap()).unwrap();
        let xn = Hypernode::new(&g, path_seq(1, 0), &o).unwrap();
        let d = hyperdistance(&g, &x0, &xn, 64).unwrap();
        for n in 0..50 {
            assert_eq!(d.at(n).unwrap(), Ordinal::finite(n as u64));
        }
        let z = hyperdistance(&g, &xn, &xn, 64).unwrap();
        assert!(z.seq.is_eventually_constant() && z.at(3).unwrap() == Ordinal::ZERO);
    }

    #[test]
    fn compare_examples() {
        let o = UltrafilterOracle::Frechet;
        let n = HyperOrdinal { seq: DefSeq::affine(OrdTerm::finite(Affine::new(1, 0))) };
        let n1 = HyperOrdinal { seq: DefSeq::affine(OrdTerm::finite(Affine::new(1, 1))) };
        assert_eq!(ho_compare(&n, &n1, &o).unwrap(), HoOrdering::Less);
        let w4 = HyperOrdinal::constant(Ordinal::omega_times(4));
        let w6 = HyperOrdinal::constant(Ordinal::omega_times(6));
        assert_eq!(ho_compare(&w4, &w6, &o).unwrap(), HoOrdering::Less);
        let alt = HyperOrdinal { seq: DefSeq::cycle(&[Ordinal::ZERO, Ordinal::finite(1)]).unwrap() };
        assert_eq!(ho_compare(&alt, &HyperOrdinal::constant(Ordinal::ZERO), &o).unwrap(), HoOrdering::Undetermined);
    }

    #[test]
    fn ladder_triangle_boundary() {
        let g = builtin("grounded_ladder").unwrap();
        let c = |s: &str| Hypernode::constant(&g, &s.parse().unwrap()).unwrap();
        let r = hyper_triangle_check(&g, &c("x(2)"), &c("g"), &c("x(9)"), 20, 64).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn hyperbranch_validity() {
        let g = builtin("endless_path").unwrap();
        let o = UltrafilterOracle::Frechet;
        let a = Hypernode::new(&g, path_seq(1, 0), &o).unwrap();
        let b = Hypernode::new(&g, path_seq(1, 1), &o).unwrap();
        let far = Hypernode::new(&g, path_seq(2, 0), &o).unwrap();
        let hb = Hyperbranch::new(&g, a.clone(), b, &o, 64).unwrap();
        assert!(!hb.is_standard());
        assert!(Hyperbranch::new(&g, a, far, &o, 64).is_err());
    }
}

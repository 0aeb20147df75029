//! Definable sequences: an explicit prefix followed by periodic clauses whose
//! parameters are affine in the quotient index.
//!
//! For `n >= prefix.len()` write `n = period·q + r`; the value at `n` is
//! `tail[r]` evaluated at `q`. Refining the period, shifting the index and
//! combining two sequences through an oracle all stay inside this form.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Affine, Eventual};
use crate::filters::{lcm, IndexSet};
use crate::node::NodeRef;
use crate::ordinals::Ordinal;

/// Longest prefix any construction may materialise.
pub const MAX_PREFIX: usize = 1 << 20;

pub trait Term: Clone + PartialEq + fmt::Debug {
    type Value: Clone + PartialEq + fmt::Debug;

    fn eval(&self, q: i64) -> Result<Self::Value>;
    /// The term with `q` replaced by `inner(Q)`.
    fn compose(&self, inner: Affine) -> Self;
    fn constant(v: &Self::Value) -> Self;
    fn is_constant(&self) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeTerm {
    pub family: String,
    pub params: Vec<Affine>,
}

impl NodeTerm {
    pub fn new(family: impl Into<String>, params: Vec<Affine>) -> Self {
        NodeTerm { family: family.into(), params }
    }
}

impl Term for NodeTerm {
    type Value = NodeRef;

    fn eval(&self, q: i64) -> Result<NodeRef> {
        Ok(NodeRef::new(self.family.clone(), self.params.iter().map(|a| a.eval(q)).collect()))
    }

    fn compose(&self, inner: Affine) -> Self {
        NodeTerm::new(self.family.clone(), self.params.iter().map(|a| a.compose(inner)).collect())
    }

    fn constant(v: &NodeRef) -> Self {
        NodeTerm::new(v.family.clone(), v.params.iter().map(|p| Affine::constant(*p)).collect())
    }

    fn is_constant(&self) -> bool {
        self.params.iter().all(|a| a.slope == 0)
    }
}

impl fmt::Display for NodeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            return f.write_str(&self.family);
        }
        let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.family, ps.join(","))
    }
}

/// `ω·tau1(q) + tau0(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrdTerm {
    pub tau1: Affine,
    pub tau0: Affine,
}

impl OrdTerm {
    pub fn new(tau1: Affine, tau0: Affine) -> Self {
        OrdTerm { tau1, tau0 }
    }

    pub fn finite(tau0: Affine) -> Self {
        OrdTerm { tau1: Affine::constant(0), tau0 }
    }
}

impl Term for OrdTerm {
    type Value = Ordinal;

    fn eval(&self, q: i64) -> Result<Ordinal> {
        let (a, b) = (self.tau1.eval(q), self.tau0.eval(q));
        if a < 0 || b < 0 {
            return Err(Error::Defect(format!("ordinal profile w*({})+({}) negative at q={q}", self.tau1, self.tau0)));
        }
        Ok(Ordinal::new(a as u64, b as u64))
    }

    fn compose(&self, inner: Affine) -> Self {
        OrdTerm::new(self.tau1.compose(inner), self.tau0.compose(inner))
    }

    fn constant(v: &Ordinal) -> Self {
        OrdTerm::new(Affine::constant(v.tau1 as i64), Affine::constant(v.tau0 as i64))
    }

    fn is_constant(&self) -> bool {
        self.tau1.slope == 0 && self.tau0.slope == 0
    }
}

impl fmt::Display for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tau1 == Affine::constant(0) {
            write!(f, "{}", self.tau0)
        } else {
            write!(f, "w*({})+({})", self.tau1, self.tau0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize, T::Value: Serialize",
    deserialize = "T: DeserializeOwned, T::Value: DeserializeOwned"
))]
pub struct DefSeq<T: Term> {
    pub prefix: Vec<T::Value>,
    pub period: usize,
    pub tail: Vec<T>,
}

pub type NodeSeq = DefSeq<NodeTerm>;
pub type OrdSeq = DefSeq<OrdTerm>;

/// Least `n >= lo` with `n ≡ r (mod p)` and `n div p >= from`.
fn first_index(lo: usize, p: usize, r: usize, from: i64) -> Result<usize> {
    let by_q = if from <= 0 { 0 } else { (from as usize).checked_mul(p).ok_or(Error::Overflow("sequence threshold"))? + r };
    let mut n = lo.max(by_q);
    n += (r + p - n % p) % p;
    Ok(n)
}

impl<T: Term> DefSeq<T> {
    pub fn new(prefix: Vec<T::Value>, tail: Vec<T>) -> Result<Self> {
        let s = DefSeq { prefix, period: tail.len(), tail };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.period == 0 || self.tail.len() != self.period {
            return Err(Error::Config(format!(
                "definable sequence needs one clause per residue (period {}, {} clauses)",
                self.period,
                self.tail.len()
            )));
        }
        Ok(())
    }

    pub fn constant(v: &T::Value) -> Self {
        DefSeq { prefix: vec![], period: 1, tail: vec![T::constant(v)] }
    }

    /// The sequence `n ↦ term(n)`.
    pub fn affine(term: T) -> Self {
        DefSeq { prefix: vec![], period: 1, tail: vec![term] }
    }

    /// Constants repeating with the given pattern.
    pub fn cycle(vals: &[T::Value]) -> Result<Self> {
        DefSeq::new(vec![], vals.iter().map(T::constant).collect())
    }

    pub fn at(&self, n: usize) -> Result<T::Value> {
        if n < self.prefix.len() {
            return Ok(self.prefix[n].clone());
        }
        self.tail[n % self.period].eval((n / self.period) as i64)
    }

    pub fn values(&self, count: usize) -> Result<Vec<T::Value>> {
        (0..count).map(|n| self.at(n)).collect()
    }

    /// The same sequence written with period `p`, a multiple of the current one.
    pub fn refine(&self, p: usize) -> Result<Self> {
        if p == 0 || p % self.period != 0 {
            return Err(Error::Defect(format!("cannot refine period {} to {p}", self.period)));
        }
        let k = (p / self.period) as i64;
        let tail = (0..p)
            .map(|r| self.tail[r % self.period].compose(Affine::new(k, (r / self.period) as i64)))
            .collect();
        Ok(DefSeq { prefix: self.prefix.clone(), period: p, tail })
    }

    /// The same sequence with at least `len` explicit prefix values.
    pub fn with_prefix_len(&self, len: usize) -> Result<Self> {
        if len > MAX_PREFIX {
            return Err(Error::Unsupported(format!("sequence prefix of length {len} is too long")));
        }
        let mut out = self.clone();
        for n in self.prefix.len()..len {
            out.prefix.push(self.at(n)?);
        }
        Ok(out)
    }

    /// The sequence `n ↦ self(c·n + e)`.
    pub fn reindex(&self, c: usize, e: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::Defect("reindex needs a positive stride".into()));
        }
        let p = self.period;
        let tail = (0..p)
            .map(|r| {
                let s = c * r + e;
                self.tail[s % p].compose(Affine::new(c as i64, (s / p) as i64))
            })
            .collect();
        let n0 = self.prefix.len().saturating_sub(e).div_ceil(c);
        let prefix = (0..n0).map(|n| self.at(c * n + e)).collect::<Result<_>>()?;
        Ok(DefSeq { prefix, period: p, tail })
    }

    /// Replaces the values at the first indices, keeping the tail.
    pub fn override_prefix(&self, vals: Vec<T::Value>) -> Result<Self> {
        let mut out = self.with_prefix_len(vals.len())?;
        for (i, v) in vals.into_iter().enumerate() {
            out.prefix[i] = v;
        }
        Ok(out)
    }

    pub fn is_eventually_constant(&self) -> bool {
        self.tail.iter().all(|t| t.is_constant()) && self.tail.windows(2).all(|w| w[0] == w[1])
    }

    /// The set of `n` satisfying a predicate. `tail_pred` decides the
    /// predicate for one clause for every `q` past a threshold; `point`
    /// decides it at a single value.
    pub fn index_set(
        &self,
        tail_pred: impl Fn(&T) -> Result<Eventual<bool>>,
        point: impl Fn(&T::Value) -> Result<bool>,
    ) -> Result<IndexSet> {
        let p = self.period;
        let mut offset = self.prefix.len();
        let mut bits = Vec::with_capacity(p);
        for (r, t) in self.tail.iter().enumerate() {
            let ev = tail_pred(t)?;
            offset = offset.max(first_index(self.prefix.len(), p, r, ev.from)?);
            bits.push(ev.value);
        }
        if offset > MAX_PREFIX {
            return Err(Error::Unsupported(format!("index set threshold {offset} is too large")));
        }
        let prefix = (0..offset).map(|n| point(&self.at(n)?)).collect::<Result<Vec<_>>>()?;
        Ok(IndexSet { prefix, offset, period: bits })
    }
}

/// Brings two sequences to a common period and prefix length.
pub fn align<A: Term, B: Term>(a: &DefSeq<A>, b: &DefSeq<B>) -> Result<(DefSeq<A>, DefSeq<B>)> {
    let p = lcm(a.period, b.period);
    let n0 = a.prefix.len().max(b.prefix.len());
    Ok((a.refine(p)?.with_prefix_len(n0)?, b.refine(p)?.with_prefix_len(n0)?))
}

/// Combines aligned clauses through `tail`, which must agree with `point`
/// for every `q` past the threshold it reports. Indices before the largest
/// threshold are filled in pointwise.
pub fn combine<A: Term, B: Term, C: Term>(
    a: &DefSeq<A>,
    b: &DefSeq<B>,
    tail: impl Fn(&A, &B) -> Result<Eventual<C>>,
    point: impl Fn(&A::Value, &B::Value) -> Result<C::Value>,
) -> Result<DefSeq<C>> {
    let (a, b) = align(a, b)?;
    let p = a.period;
    let mut n1 = a.prefix.len();
    let mut clauses = Vec::with_capacity(p);
    for r in 0..p {
        let ev = tail(&a.tail[r], &b.tail[r])?;
        n1 = n1.max(first_index(a.prefix.len(), p, r, ev.from)?);
        clauses.push(ev.value);
    }
    if n1 > MAX_PREFIX {
        return Err(Error::Unsupported(format!("combined sequence threshold {n1} is too large")));
    }
    let prefix = (0..n1).map(|n| point(&a.at(n)?, &b.at(n)?)).collect::<Result<_>>()?;
    Ok(DefSeq { prefix, period: p, tail: clauses })
}

/// `{n : P(a_n, b_n)}` for two sequences; see [`DefSeq::index_set`].
pub fn pair_index_set<A: Term, B: Term>(
    a: &DefSeq<A>,
    b: &DefSeq<B>,
    tail_pred: impl Fn(&A, &B) -> Result<Eventual<bool>>,
    point: impl Fn(&A::Value, &B::Value) -> Result<bool>,
) -> Result<IndexSet> {
    let (a, b) = align(a, b)?;
    let p = a.period;
    let mut offset = a.prefix.len();
    let mut bits = Vec::with_capacity(p);
    for r in 0..p {
        let ev = tail_pred(&a.tail[r], &b.tail[r])?;
        offset = offset.max(first_index(a.prefix.len(), p, r, ev.from)?);
        bits.push(ev.value);
    }
    if offset > MAX_PREFIX {
        return Err(Error::Unsupported(format!("index set threshold {offset} is too large")));
    }
    let prefix = (0..offset).map(|n| point(&a.at(n)?, &b.at(n)?)).collect::<Result<Vec<_>>>()?;
    Ok(IndexSet { prefix, offset, period: bits })
}

impl OrdTerm {
    /// Comparison with `other` that holds for every `q` past the threshold.
    pub fn eventual_cmp(&self, other: &OrdTerm) -> Eventual<std::cmp::Ordering> {
        let (s1, f1) = self.tau1.sub(other.tau1).eventual_sign();
        if s1 != std::cmp::Ordering::Equal {
            return Eventual::new(f1, s1);
        }
        let (s0, f0) = self.tau0.sub(other.tau0).eventual_sign();
        Eventual::new(f0, s0)
    }

    pub fn natural_sum(&self, other: &OrdTerm) -> OrdTerm {
        OrdTerm::new(self.tau1.add(other.tau1), self.tau0.add(other.tau0))
    }

    pub fn scale(&self, k: i64) -> OrdTerm {
        OrdTerm::new(self.tau1.mul(k), self.tau0.mul(k))
    }
}

impl NodeTerm {
    /// Whether the two clauses name the same node, eventually.
    pub fn eventual_eq(&self, other: &NodeTerm) -> Eventual<bool> {
        if self.family != other.family || self.params.len() != other.params.len() {
            return Eventual::new(i64::MIN, false);
        }
        let mut from = i64::MIN;
        for (a, b) in self.params.iter().zip(&other.params) {
            let (s, f) = a.sub(*b).eventual_sign();
            if s != std::cmp::Ordering::Equal {
                return Eventual::new(f, false);
            }
            from = from.max(f);
        }
        Eventual::new(from, true)
    }
}

/// Single-sequence form of [`combine`].
pub fn map<A: Term, C: Term>(
    a: &DefSeq<A>,
    tail: impl Fn(&A) -> Result<Eventual<C>>,
    point: impl Fn(&A::Value) -> Result<C::Value>,
) -> Result<DefSeq<C>> {
    let unit: DefSeq<OrdTerm> = DefSeq::constant(&Ordinal::ZERO);
    combine(a, &unit, |x, _| tail(x), |x, _| point(x))
}

impl<T: Term + fmt::Display> fmt::Display for DefSeq<T>
where
    T::Value: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            let ps: Vec<String> = self.prefix.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}] then ", ps.join(", "))?;
        }
        if self.period == 1 {
            write!(f, "{}", self.tail[0])
        } else {
            let cs: Vec<String> = self.tail.iter().enumerate().map(|(r, t)| format!("r{r}: {t}")).collect();
            write!(f, "n=({})q+r {{{}}}", self.period, cs.join("; "))
        }
    }
}

/// Recovers a definable node sequence from sample values `vals[0..]`.
///
/// Looks for the least period `p <= max_period` and the least start such
/// that every residue class is one affine clause from the start on, with at
/// least `min_reps` samples per clause. Returns `None` if no such fit exists;
/// a fit is only a hypothesis and callers must verify it.
pub fn fit_nodes(vals: &[NodeRef], max_period: usize, min_reps: usize) -> Option<NodeSeq> {
    for p in 1..=max_period {
        for start in 0..vals.len() {
            if let Some(s) = fit_from(vals, p, start, min_reps) {
                return Some(s);
            }
        }
    }
    None
}

fn fit_from(vals: &[NodeRef], p: usize, start: usize, min_reps: usize) -> Option<NodeSeq> {
    let mut tail = Vec::with_capacity(p);
    for r in 0..p {
        let first = start + (r + p - start % p) % p;
        let idx: Vec<usize> = (first..vals.len()).step_by(p).collect();
        if idx.len() < min_reps.max(2) {
            return None;
        }
        let v0 = &vals[idx[0]];
        let v1 = &vals[idx[1]];
        if idx.iter().any(|&i| vals[i].family != v0.family || vals[i].params.len() != v0.params.len()) {
            return None;
        }
        let (q0, q1) = ((idx[0] / p) as i64, (idx[1] / p) as i64);
        let mut params = Vec::with_capacity(v0.params.len());
        for j in 0..v0.params.len() {
            let slope = v1.params[j] - v0.params[j];
            let a = Affine::new(slope, v0.params[j] - slope * q0);
            debug_assert_eq!(a.eval(q1), v1.params[j]);
            if idx.iter().any(|&i| a.eval((i / p) as i64) != vals[i].params[j]) {
                return None;
            }
            params.push(a);
        }
        tail.push(NodeTerm::new(v0.family.clone(), params));
    }
    Some(DefSeq { prefix: vals[..start].to_vec(), period: p, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(q: Affine) -> NodeTerm {
        NodeTerm::new("x", vec![q])
    }

    fn half_floor() -> NodeSeq {
        // x(floor(n/2)): n = 2q + r gives q in both classes
        DefSeq::new(vec![], vec![x(Affine::new(1, 0)), x(Affine::new(1, 0))]).unwrap()
    }

    #[test]
    fn evaluation_and_refinement() {
        let s = half_floor();
        let want: Vec<NodeRef> = (0..20).map(|n| NodeRef::new("x", vec![n / 2])).collect();
        assert_eq!(s.values(20).unwrap(), want);
        let r = s.refine(6).unwrap().with_prefix_len(7).unwrap();
        assert_eq!(r.values(20).unwrap(), want);
    }

    #[test]
    fn reindex_matches_direct() {
        let s = DefSeq::new(vec![NodeRef::new("x", vec![9]); 3], vec![x(Affine::new(3, 1)), x(Affine::new(1, -2))])
            .unwrap();
        for (c, e) in [(1, 0), (2, 0), (3, 1), (2, 5)] {
            let w = s.reindex(c, e).unwrap();
            for n in 0..40 {
                assert_eq!(w.at(n).unwrap(), s.at(c * n + e).unwrap(), "c={c} e={e} n={n}");
            }
        }
    }

    #[test]
    fn combine_fills_prefix_before_threshold() {
        // |n - 5| is affine only from n = 5 on
        let a: NodeSeq = DefSeq::affine(x(Affine::new(1, 0)));
        let b: NodeSeq = DefSeq::constant(&NodeRef::new("x", vec![5]));
        let d = combine(
            &a,
            &b,
            |ta, tb| {
                let diff = ta.params[0].sub(tb.params[0]);
                let (sign, from) = diff.eventual_sign();
                let v = if sign == std::cmp::Ordering::Less { diff.mul(-1) } else { diff };
                Ok(Eventual::new(from.min(5), OrdTerm::finite(v)))
            },
            |va, vb| Ok(Ordinal::finite((va.params[0] - vb.params[0]).unsigned_abs())),
        )
        .unwrap();
        for n in 0..30 {
            assert_eq!(d.at(n).unwrap(), Ordinal::finite((n as i64 - 5).unsigned_abs()));
        }
    }

    #[test]
    fn index_set_from_profile() {
        let d: OrdSeq = DefSeq::affine(OrdTerm::finite(Affine::new(1, 0)));
        let s = d
            .index_set(
                |t| {
                    let (sign, from) = t.tau0.sub(Affine::constant(3)).eventual_sign();
                    Ok(Eventual::new(from, sign == std::cmp::Ordering::Greater))
                },
                |v| Ok(v.tau0 > 3),
            )
            .unwrap();
        assert_eq!(s.members_below(10), vec![4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn fit_recovers_ceil_third() {
        let vals: Vec<NodeRef> =
            (0..60).map(|n| NodeRef::new("x1", vec![if n < 3 { 0 } else { (n as i64 + 2) / 3 }])).collect();
        let s = fit_nodes(&vals, 12, 4).unwrap();
        assert_eq!(s.period, 3);
        for n in 0..200 {
            let want = if n < 3 { 0 } else { (n as i64 + 2) / 3 };
            assert_eq!(s.at(n).unwrap().params[0], want);
        }
    }

    proptest! {
        #[test]
        fn refine_and_align_preserve_values(
            p in 1usize..5, k in 1usize..4, pre in 0usize..6,
            slopes in proptest::collection::vec((-3i64..4, -9i64..9), 4),
        ) {
            let tail: Vec<NodeTerm> = (0..p).map(|r| x(Affine::new(slopes[r % 4].0, slopes[r % 4].1))).collect();
            let s = DefSeq::new(vec![NodeRef::new("x", vec![77]); pre], tail).unwrap();
            let r = s.refine(p * k).unwrap().with_prefix_len(pre + 3).unwrap();
            for n in 0..80 {
                prop_assert_eq!(s.at(n).unwrap(), r.at(n).unwrap());
            }
        }
    }
}

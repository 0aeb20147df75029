//! Galaxies of a nonstandard 0-graph: limited distance, principal-galaxy
//! membership, the closeness order and the two chain constructions.
//!
//! The same engine serves 1-graphs: [`Scale::Finite`] measures distances
//! against naturals `k`, [`Scale::Omega`] against `ω·k`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Affine, Eventual, SymEnv};
use crate::filters::{FilterVerdict, IndexSet, UltrafilterOracle};
use crate::graphzero::GraphPresentation;
use crate::metric::Metric;
use crate::node::NodeRef;
use crate::ordinals::Ordinal;
use crate::seq::{align, combine, DefSeq, NodeTerm, OrdSeq, OrdTerm, Term};
use crate::ultrapower::{hyperdistance, HyperOrdinal, Hypernode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Bounds are naturals `k`.
    Finite,
    /// Bounds are `ω·k`.
    Omega,
}

impl Scale {
    pub fn unit(self, k: u64) -> Ordinal {
        match self {
            Scale::Finite => Ordinal::finite(k),
            Scale::Omega => Ordinal::omega_times(k),
        }
    }

    /// `d <= unit(k)`.
    pub fn within(self, d: Ordinal, k: u64) -> bool {
        d <= self.unit(k)
    }

    fn within_eventual(self, t: &OrdTerm, k: u64) -> Eventual<bool> {
        let e = t.eventual_cmp(&OrdTerm::constant(&self.unit(k)));
        Eventual::new(e.from, e.value != Ordering::Greater)
    }

    /// Whether the clause exceeds every `unit(k)` for large `q`.
    fn unbounded(self, t: &OrdTerm) -> bool {
        match self {
            Scale::Finite => t.tau1.eventual_sign().0 == Ordering::Greater || t.tau0.slope > 0,
            Scale::Omega => t.tau1.slope > 0,
        }
    }

    /// The least `k` with the clause eventually within `unit(k)`, for a
    /// bounded clause.
    fn eventual_bound(self, t: &OrdTerm) -> u64 {
        match self {
            Scale::Finite => t.tau0.intercept.max(0) as u64,
            Scale::Omega => {
                let extra = u64::from(t.tau0.eventual_sign().0 == Ordering::Greater);
                t.tau1.intercept.max(0) as u64 + extra
            }
        }
    }

    /// `y + unit(m)` as an ordinal sum (not the natural sum): adding `ω·m`
    /// absorbs the finite part of `y`.
    fn shifted(self, y: &OrdTerm, by: Affine) -> OrdTerm {
        match self {
            Scale::Finite => OrdTerm::new(y.tau1, y.tau0.add(by)),
            Scale::Omega => OrdTerm::new(y.tau1.add(by), Affine::constant(0)),
        }
    }

    fn shifted_value(self, y: Ordinal, by: u64) -> Ordinal {
        match self {
            Scale::Finite => Ordinal::new(y.tau1, y.tau0 + by),
            Scale::Omega if by == 0 => y,
            Scale::Omega => Ordinal::new(y.tau1 + by, 0),
        }
    }
}

/// Work limits shared by every construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Search radius / solver budget for single distances.
    pub budget: usize,
    /// Largest `k` tried when looking for a limited-distance bound.
    pub k_max: u64,
    /// Witness thresholds `m = 1..=m_max` reported for closeness.
    pub m_max: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { budget: 64, k_max: 64, m_max: 32 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limited {
    Yes(u64),
    No,
    Undetermined,
}

impl fmt::Display for Limited {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limited::Yes(k) => write!(f, "yes({k})"),
            Limited::No => f.write_str("no"),
            Limited::Undetermined => f.write_str("undetermined"),
        }
    }
}

impl Limited {
    pub fn verdict(self) -> FilterVerdict {
        match self {
            Limited::Yes(_) => FilterVerdict::InFilter,
            Limited::No => FilterVerdict::NotInFilter,
            Limited::Undetermined => FilterVerdict::Undetermined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitedReport {
    pub answer: Limited,
    pub profile: HyperOrdinal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Indices whose clause is unbounded, from the profile's prefix on.
fn unbounded_set(profile: &OrdSeq, scale: Scale) -> IndexSet {
    let p = profile.period;
    let bits: Vec<bool> = profile.tail.iter().map(|t| scale.unbounded(t)).collect();
    IndexSet::from_fn(profile.prefix.len(), p, |n| n >= profile.prefix.len() && bits[n % p])
}

/// Decides limited distance from a distance profile.
pub fn limited_from_profile(profile: &OrdSeq, scale: Scale, o: &UltrafilterOracle, k_max: u64) -> Result<(Limited, Option<String>)> {
    let unb = o.verdict(&unbounded_set(profile, scale))?;
    if unb == FilterVerdict::InFilter {
        return Ok((Limited::No, None));
    }
    for k in 0..=k_max {
        let s = profile.index_set(|t| Ok(scale.within_eventual(t, k)), |v| Ok(scale.within(*v, k)))?;
        if o.verdict(&s)?.is_in() {
            return Ok((Limited::Yes(k), None));
        }
    }
    let diag = if unb == FilterVerdict::NotInFilter {
        let bound = profile.tail.iter().filter(|t| !scale.unbounded(t)).map(|t| scale.eventual_bound(t)).max();
        format!("bounded on a set in the ultrafilter, but no bound up to k_max={k_max} is decided (clause bound {bound:?})")
    } else {
        "the unbounded and bounded residue classes are both undecided by the oracle".to_string()
    };
    Ok((Limited::Undetermined, Some(diag)))
}

pub fn limitedly_distant_at(
    m: &dyn Metric,
    a: &Hypernode,
    b: &Hypernode,
    scale: Scale,
    o: &UltrafilterOracle,
    bud: &Budgets,
) -> Result<LimitedReport> {
    let profile = hyperdistance(m, a, b, bud.budget)?;
    let (answer, diagnostic) = limited_from_profile(&profile.seq, scale, o, bud.k_max)?;
    Ok(LimitedReport { answer, profile, diagnostic })
}

/// Rank-0 limited distance: `d(a, b) <= k` on a set in the ultrafilter.
pub fn limitedly_distant(m: &dyn Metric, a: &Hypernode, b: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<LimitedReport> {
    limitedly_distant_at(m, a, b, Scale::Finite, o, bud)
}

pub fn same_galaxy(m: &dyn Metric, a: &Hypernode, b: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<Limited> {
    Ok(limitedly_distant(m, a, b, o, bud)?.answer)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principal {
    Yes,
    No,
    Undetermined,
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Principal::Yes => "yes",
            Principal::No => "no",
            Principal::Undetermined => "undetermined",
        })
    }
}

impl From<Limited> for Principal {
    fn from(l: Limited) -> Self {
        match l {
            Limited::Yes(_) => Principal::Yes,
            Limited::No => Principal::No,
            Limited::Undetermined => Principal::Undetermined,
        }
    }
}

pub fn is_principal_at(m: &dyn Metric, a: &Hypernode, scale: Scale, o: &UltrafilterOracle, bud: &Budgets) -> Result<Principal> {
    let x = Hypernode::constant(m, &m.standard_node())?;
    Ok(limitedly_distant_at(m, a, &x, scale, o, bud)?.answer.into())
}

pub fn is_principal(m: &dyn Metric, a: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<Principal> {
    is_principal_at(m, a, Scale::Finite, o, bud)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalaxyHandle {
    pub representative: Hypernode,
    pub principal: Principal,
    /// Distance from the canonical standard node.
    pub standard: NodeRef,
    pub to_standard: HyperOrdinal,
    /// Least `k` with the distance to the standard node within `unit(k)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u64>,
}

pub fn handle_at(m: &dyn Metric, rep: &Hypernode, scale: Scale, o: &UltrafilterOracle, bud: &Budgets) -> Result<GalaxyHandle> {
    let standard = m.standard_node();
    let x = Hypernode::constant(m, &standard)?;
    let r = limitedly_distant_at(m, rep, &x, scale, o, bud)?;
    let k_min = match r.answer {
        Limited::Yes(k) => Some(k),
        _ => None,
    };
    Ok(GalaxyHandle { representative: rep.clone(), principal: r.answer.into(), standard, to_standard: r.profile, k_min })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closeness {
    Closer,
    NotCloser,
    Undetermined,
}

impl fmt::Display for Closeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closeness::Closer => "closer",
            Closeness::NotCloser => "not_closer",
            Closeness::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloserReport {
    pub answer: Closeness,
    /// Verdict of `{n : d(z_n, x_n) >= d(y_n, x_n) + unit(m)}` for `m = 1..`.
    pub witnesses: Vec<(u64, FilterVerdict)>,
    pub near_profile: HyperOrdinal,
    pub far_profile: HyperOrdinal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl CloserReport {
    pub fn all_witnesses_in(&self) -> bool {
        self.witnesses.iter().all(|(_, v)| v.is_in())
    }
}

/// Whether `y`'s galaxy is closer to `x`'s than `z`'s is, from the two
/// distance profiles. Does not check the nonprincipal precondition.
pub fn closer_from_profiles(dy: &OrdSeq, dz: &OrdSeq, scale: Scale, o: &UltrafilterOracle, m_max: u64) -> Result<(Closeness, Vec<(u64, FilterVerdict)>)> {
    let (dy, dz) = align(dy, dz)?;
    let p = dy.period;
    let gap_unbounded: Vec<bool> = (0..p)
        .map(|r| {
            let (a, b) = (&dz.tail[r], &dy.tail[r]);
            match scale {
                Scale::Finite => {
                    let (s1, _) = a.tau1.sub(b.tau1).eventual_sign();
                    s1 == Ordering::Greater || (s1 == Ordering::Equal && a.tau0.slope > b.tau0.slope)
                }
                Scale::Omega => a.tau1.slope > b.tau1.slope,
            }
        })
        .collect();
    let n0 = dy.prefix.len();
    let c = IndexSet::from_fn(n0, p, |n| n >= n0 && gap_unbounded[n % p]);
    let answer = match o.verdict(&c)? {
        FilterVerdict::InFilter => Closeness::Closer,
        FilterVerdict::NotInFilter => Closeness::NotCloser,
        FilterVerdict::Undetermined => Closeness::Undetermined,
    };
    let mut witnesses = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let s = crate::seq::pair_index_set(
            &dz,
            &dy,
            |a, b| {
                let e = a.eventual_cmp(&scale.shifted(b, Affine::constant(m as i64)));
                Ok(Eventual::new(e.from, e.value != Ordering::Less))
            },
            |a, b| Ok(*a >= scale.shifted_value(*b, m)),
        )?;
        witnesses.push((m, o.verdict(&s)?));
    }
    Ok((answer, witnesses))
}

pub fn closer_than_at(
    m: &dyn Metric,
    y: &Hypernode,
    z: &Hypernode,
    x: &Hypernode,
    scale: Scale,
    o: &UltrafilterOracle,
    bud: &Budgets,
) -> Result<CloserReport> {
    for (name, h) in [("first", y), ("second", z)] {
        let p = is_principal_at(m, h, scale, o, bud)?;
        if p != Principal::No {
            return Err(Error::Precondition(format!("{name} galaxy must be nonprincipal (is_principal = {p})")));
        }
    }
    let dy = hyperdistance(m, y, x, bud.budget)?;
    let dz = hyperdistance(m, z, x, bud.budget)?;
    let (answer, witnesses) = closer_from_profiles(&dy.seq, &dz.seq, scale, o, bud.m_max)?;
    let mut ill = vec![];
    for n in 0..64 {
        if dz.at(n)?.componentwise_sub(dy.at(n)?).is_none() && dz.at(n)? >= dy.at(n)? {
            ill.push(n);
        }
    }
    let diagnostic = (!ill.is_empty()).then(|| format!("componentwise difference is ill-ordered at n = {ill:?}"));
    Ok(CloserReport { answer, witnesses, near_profile: dy, far_profile: dz, diagnostic })
}

/// Rank-0 closeness: `{n : d(z_n, x_n) − d(y_n, x_n) >= m}` in the ultrafilter for every `m`.
pub fn closer_than(m: &dyn Metric, y: &Hypernode, z: &Hypernode, x: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<CloserReport> {
    closer_than_at(m, y, z, x, Scale::Finite, o, bud)
}

/// A run of galaxies, each strictly closer to the principal one than the next.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub scale: Scale,
    pub base: Hypernode,
    pub handles: Vec<GalaxyHandle>,
    /// Position of the input hypernode in `handles`.
    pub center: usize,
    /// `adjacent[i]` compares `handles[i]` with `handles[i + 1]`.
    pub adjacent: Vec<CloserReport>,
    /// Limited-distance answers for every pair `i < j`.
    pub distinct: Vec<(usize, usize, Limited)>,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Validates and packages a chain of representatives ordered from closest
/// to farthest.
pub fn assemble_chain(
    m: &dyn Metric,
    base: &Hypernode,
    reps: Vec<Hypernode>,
    center: usize,
    scale: Scale,
    o: &UltrafilterOracle,
    bud: &Budgets,
    mut notes: Vec<String>,
) -> Result<Chain> {
    let handles = reps.iter().map(|r| handle_at(m, r, scale, o, bud)).collect::<Result<Vec<_>>>()?;
    let mut valid = true;
    for (i, h) in handles.iter().enumerate() {
        if h.principal != Principal::No {
            valid = false;
            notes.push(format!("handle {i} is not shown nonprincipal ({})", h.principal));
        }
    }
    let mut adjacent = vec![];
    for w in reps.windows(2) {
        let dy = hyperdistance(m, &w[0], base, bud.budget)?;
        let dz = hyperdistance(m, &w[1], base, bud.budget)?;
        let (answer, witnesses) = closer_from_profiles(&dy.seq, &dz.seq, scale, o, bud.m_max)?;
        let r = CloserReport { answer, witnesses, near_profile: dy, far_profile: dz, diagnostic: None };
        if r.answer != Closeness::Closer || !r.all_witnesses_in() {
            valid = false;
            notes.push(format!("adjacent pair at {} is {}", adjacent.len(), r.answer));
        }
        adjacent.push(r);
    }
    let mut distinct = vec![];
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let l = limitedly_distant_at(m, &reps[i], &reps[j], scale, o, bud)?.answer;
            if l != Limited::No {
                valid = false;
                notes.push(format!("handles {i} and {j} are not shown to be different galaxies ({l})"));
            }
            distinct.push((i, j, l));
        }
    }
    Ok(Chain { scale, base: base.clone(), handles, center, adjacent, distinct, valid, notes })
}

/// The representative halfway along the canonical geodesic from the
/// standard node `x` to `v`: `u_n` at distance `⌊d(x, v_n)/2⌋` from `x`.
pub fn midpoint(g: &GraphPresentation, x: &NodeRef, v: &Hypernode, budget: usize) -> Result<Hypernode> {
    let xh = Hypernode::constant(g, x)?;
    let d = hyperdistance(g, &xh, v, budget)?.seq;
    // doubling the period makes every slope even, so halving stays affine
    let p = crate::filters::lcm(v.seq.period, d.period) * 2;
    let vs = v.seq.refine(p)?;
    let ds = d.refine(p)?;
    let xp: Vec<Affine> = x.params.iter().map(|c| Affine::constant(*c)).collect();
    let seq = combine(
        &vs,
        &ds,
        |vt: &NodeTerm, dt: &OrdTerm| {
            let half = Affine::new(dt.tau0.slope / 2, dt.tau0.intercept.div_euclid(2));
            let Some(expr) = g.geodesic_case(&x.family, &vt.family) else {
                return Err(Error::Unsupported(format!(
                    "midpoints need a geodesic oracle for ({}, {}) in {}",
                    x.family, vt.family, g.name
                )));
            };
            let ev = expr.eval_eventual(&SymEnv { x: &xp, y: &vt.params, t: half })?;
            Ok(Eventual::new(ev.from, NodeTerm::new(ev.value.0, ev.value.1)))
        },
        |vn: &NodeRef, dn: &Ordinal| g.geodesic_point(x, vn, dn.tau0 / 2),
    )?;
    Hypernode::new(g, seq, &UltrafilterOracle::Frechet)
}

/// A representative `w_n = v_{c·n+e}` with `d(x, w_n) >= d(x, v_n) + unit(n)`
/// for every `n`. The stride `c` and shift `e` are the least that work from
/// some index on; earlier indices use the least index of `v` that works.
pub fn ascend(m: &dyn Metric, x: &Hypernode, v: &Hypernode, scale: Scale, budget: usize) -> Result<Hypernode> {
    let d = hyperdistance(m, x, v, budget)?.seq;
    let need = |dn: Ordinal, n: usize| scale.shifted_value(dn, n as u64);
    for c in 1..=8usize {
        for e in 0..=8usize {
            let w = v.seq.reindex(c, e)?;
            let wh = Hypernode { rank: v.rank, seq: w.clone() };
            let dw = hyperdistance(m, x, &wh, budget)?.seq;
            let (dwa, da) = align(&dw, &d)?;
            let p = dwa.period;
            let mut from = dwa.prefix.len();
            let mut ok = true;
            for r in 0..p {
                let target = scale.shifted(&da.tail[r], Affine::new(p as i64, r as i64));
                let cmp = dwa.tail[r].eventual_cmp(&target);
                if cmp.value == Ordering::Less {
                    ok = false;
                    break;
                }
                from = from.max(first_index_at(p, r, cmp.from));
            }
            if !ok {
                continue;
            }
            // indices below the threshold: check, and repair where needed
            let mut fixed = vec![];
            for n in 0..from {
                let want = need(d.at(n)?, n);
                if dw.at(n)? >= want {
                    fixed.push(w.at(n)?);
                    continue;
                }
                let mut found = None;
                for j in 0..(1usize << 16) {
                    if hyperdistance_point(m, x, v, j, budget)? >= want {
                        found = Some(v.at(j)?);
                        break;
                    }
                }
                fixed.push(found.ok_or_else(|| Error::Defect(format!("no index of v is far enough for n = {n}")))?);
            }
            let seq = w.override_prefix(fixed)?;
            return Hypernode::new(m, seq, &UltrafilterOracle::Frechet);
        }
    }
    Err(Error::Unsupported("no affine index map v_(c·n+e) with c, e <= 8 grows fast enough".into()))
}

fn first_index_at(p: usize, r: usize, from: i64) -> usize {
    if from <= 0 {
        r
    } else {
        from as usize * p + r
    }
}

fn hyperdistance_point(m: &dyn Metric, x: &Hypernode, v: &Hypernode, n: usize, budget: usize) -> Result<Ordinal> {
    m.dist(&x.at(n)?, &v.at(n)?, budget)
}

/// Galaxies `Γ_{−depth} < … < Γ_v < … < Γ_{+depth}` ordered by closeness to
/// the principal galaxy: midpoints on the near side, faster-growing
/// reindexings of `v` on the far side.
pub fn chain_thm42(g: &GraphPresentation, x: &Hypernode, v: &Hypernode, depth: usize, o: &UltrafilterOracle, bud: &Budgets) -> Result<Chain> {
    let Some(xs) = x.standard_value() else {
        return Err(Error::Precondition("the base hypernode must be standard".into()));
    };
    let p = is_principal(g, v, o, bud)?;
    if p != Principal::No {
        return Err(Error::Precondition(format!("v must lie outside the principal galaxy (is_principal = {p})")));
    }
    let mut near = vec![];
    let mut cur = v.clone();
    for _ in 0..depth {
        cur = midpoint(g, &xs, &cur, bud.budget)?;
        near.push(cur.clone());
    }
    near.reverse();
    let mut far = vec![];
    let mut cur = v.clone();
    for _ in 0..depth {
        cur = ascend(g, x, &cur, Scale::Finite, bud.budget)?;
        far.push(cur.clone());
    }
    let center = near.len();
    let mut reps = near;
    reps.push(v.clone());
    reps.extend(far);
    assemble_chain(g, x, reps, center, Scale::Finite, o, bud, vec![])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialOrderReport {
    /// `closer[i][j]`: is galaxy `i` closer than galaxy `j`.
    pub closer: Vec<Vec<Closeness>>,
    pub transitivity_violations: Vec<(usize, usize, usize)>,
    pub antisymmetry_violations: Vec<(usize, usize)>,
    pub reflexive_hits: Vec<usize>,
    /// Pairs where neither side is strictly closer.
    pub incomparable: Vec<(usize, usize)>,
    pub pass: bool,
}

pub fn partial_order_check_at(
    m: &dyn Metric,
    reps: &[Hypernode],
    x: &Hypernode,
    scale: Scale,
    o: &UltrafilterOracle,
    bud: &Budgets,
) -> Result<PartialOrderReport> {
    for (i, r) in reps.iter().enumerate() {
        let p = is_principal_at(m, r, scale, o, bud)?;
        if p != Principal::No {
            return Err(Error::Precondition(format!("hypernode {i} must be nonprincipal (is_principal = {p})")));
        }
    }
    let profiles = reps.iter().map(|r| hyperdistance(m, r, x, bud.budget)).collect::<Result<Vec<_>>>()?;
    let k = reps.len();
    let mut closer = vec![vec![Closeness::NotCloser; k]; k];
    for i in 0..k {
        for j in 0..k {
            closer[i][j] = closer_from_profiles(&profiles[i].seq, &profiles[j].seq, scale, o, 0)?.0;
        }
    }
    let lt = |i: usize, j: usize| closer[i][j] == Closeness::Closer;
    let mut transitivity_violations = vec![];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if lt(i, j) && lt(j, l) && !lt(i, l) {
                    transitivity_violations.push((i, j, l));
                }
            }
        }
    }
    let mut antisymmetry_violations = vec![];
    let mut incomparable = vec![];
    for i in 0..k {
        for j in i + 1..k {
            if lt(i, j) && lt(j, i) {
                antisymmetry_violations.push((i, j));
            }
            if !lt(i, j) && !lt(j, i) {
                incomparable.push((i, j));
            }
        }
    }
    let reflexive_hits: Vec<usize> = (0..k).filter(|&i| lt(i, i)).collect();
    let pass = transitivity_violations.is_empty() && antisymmetry_violations.is_empty() && reflexive_hits.is_empty();
    Ok(PartialOrderReport { closer, transitivity_violations, antisymmetry_violations, reflexive_hits, incomparable, pass })
}

pub fn partial_order_check(m: &dyn Metric, reps: &[Hypernode], x: &Hypernode, o: &UltrafilterOracle, bud: &Budgets) -> Result<PartialOrderReport> {
    partial_order_check_at(m, reps, x, Scale::Finite, o, bud)
}

/// A hypernode at distance exactly `n` from `x0` at index `n`: the largest
/// node of each sphere, following the presentation's sphere oracle past the
/// explicitly searched range.
pub fn koenig_witness(g: &GraphPresentation, x0: &NodeRef, check_upto: u64) -> Result<Hypernode> {
    let f = &g.flags;
    if !(f.locally_finite && f.connected && f.infinite) {
        return Err(Error::Precondition(format!(
            "{} must be locally finite, connected and infinite (flags: {:?})",
            g.name, f
        )));
    }
    g.check(x0)?;
    let Some(expr) = g.sphere_case(&x0.family) else {
        return Err(Error::Unsupported(format!("{} has no sphere oracle for family {}", g.name, x0.family)));
    };
    let xp: Vec<Affine> = x0.params.iter().map(|c| Affine::constant(*c)).collect();
    let ev = expr.eval_eventual(&SymEnv { x: &xp, y: &[], t: Affine::new(1, 0) })?;
    let term = NodeTerm::new(ev.value.0, ev.value.1);
    let prefix_len = ev.from.max(0) as usize;
    let mut prefix = vec![];
    for n in 0..=check_upto.max(prefix_len as u64) {
        let sphere = g.sphere(x0, n)?;
        let Some(top) = sphere.last().cloned() else {
            return Err(Error::Precondition(format!("sphere of radius {n} around {x0} is empty")));
        };
        if (n as usize) < prefix_len {
            prefix.push(top);
        } else if term.eval(n as i64)? != top {
            return Err(Error::Defect(format!("sphere oracle disagrees with search at radius {n}")));
        }
    }
    let seq = DefSeq::new(prefix, vec![term])?;
    let h = Hypernode::new(g, seq, &UltrafilterOracle::Frechet)?;
    // the tail must sit at distance exactly n, symbolically
    let d = hyperdistance(g, &Hypernode::constant(g, x0)?, &h, 64)?.seq.with_prefix_len(0)?;
    let exact = d.tail.len() == 1 && d.tail[0] == OrdTerm::finite(Affine::new(1, 0)) && d.prefix.len() as u64 <= check_upto + 1;
    let prefix_ok = (0..d.prefix.len()).all(|n| d.prefix[n] == Ordinal::finite(n as u64));
    if !exact || !prefix_ok {
        return Err(Error::Defect(format!("sphere witness is not at distance n: profile {d}")));
    }
    Ok(h)
}

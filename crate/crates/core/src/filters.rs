//! Eventually periodic index sets and three-valued ultrafilter verdicts.
//!
//! A free ultrafilter on ℕ cannot be constructed, so membership is answered by
//! an [`UltrafilterOracle`] that is only ever *consistent with* some free
//! ultrafilter. When it cannot commit, it says [`FilterVerdict::Undetermined`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `{n : P(n)}` for an eventually periodic predicate `P`.
///
/// For `n < offset` membership is `prefix[n]`; for `n >= offset` it is
/// `period[n % period.len()]`. The residue is taken on `n` itself, not on
/// `n - offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    pub prefix: Vec<bool>,
    pub offset: usize,
    pub period: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetClass {
    Finite,
    Cofinite,
    Mixed,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl IndexSet {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        let s = IndexSet { offset: prefix.len(), prefix, period };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.period.is_empty() {
            return Err(Error::Config("index set period must be nonempty".into()));
        }
        if self.prefix.len() != self.offset {
            return Err(Error::Config(format!(
                "index set prefix has {} bits but offset is {}",
                self.prefix.len(),
                self.offset
            )));
        }
        Ok(())
    }

    pub fn empty() -> Self {
        IndexSet { prefix: vec![], offset: 0, period: vec![false] }
    }

    pub fn all() -> Self {
        IndexSet { prefix: vec![], offset: 0, period: vec![true] }
    }

    /// `{n : n >= start}`.
    pub fn tail_from(start: usize) -> Self {
        IndexSet { prefix: vec![false; start], offset: start, period: vec![true] }
    }

    /// A finite set given by its members.
    pub fn finite(members: &[usize]) -> Self {
        let len = members.iter().max().map_or(0, |m| m + 1);
        let mut prefix = vec![false; len];
        for &m in members {
            prefix[m] = true;
        }
        IndexSet { offset: len, prefix, period: vec![false] }
    }

    /// `{n : n ≡ residue (mod modulus)}`.
    pub fn residue_class(modulus: usize, residue: usize) -> Self {
        let period = (0..modulus).map(|r| r == residue % modulus).collect();
        IndexSet { prefix: vec![], offset: 0, period }
    }

    /// Builds the set from a membership function that is periodic with
    /// period `period` from `offset` on.
    pub fn from_fn(offset: usize, period: usize, f: impl Fn(usize) -> bool) -> Self {
        let prefix = (0..offset).map(&f).collect();
        let bits = (0..period)
            .map(|r| {
                // smallest n >= offset with n ≡ r
                let n = offset + (r + period - offset % period) % period;
                f(n)
            })
            .collect();
        IndexSet { prefix, offset, period: bits }
    }

    pub fn contains(&self, n: usize) -> bool {
        if n < self.offset {
            self.prefix[n]
        } else {
            self.period[n % self.period.len()]
        }
    }

    pub fn classify(&self) -> SetClass {
        if self.period.iter().all(|b| !b) {
            SetClass::Finite
        } else if self.period.iter().all(|b| *b) {
            SetClass::Cofinite
        } else {
            SetClass::Mixed
        }
    }

    fn combine(&self, other: &IndexSet, op: impl Fn(bool, bool) -> bool) -> IndexSet {
        let offset = self.offset.max(other.offset);
        let period = lcm(self.period.len(), other.period.len());
        IndexSet::from_fn(offset, period, |n| op(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &IndexSet) -> IndexSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            offset: self.offset,
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    /// Horizon past which both sets are periodic with a common period.
    fn horizon(&self, other: &IndexSet) -> usize {
        self.offset.max(other.offset) + lcm(self.period.len(), other.period.len())
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        (0..self.horizon(other)).all(|n| !self.contains(n) || other.contains(n))
    }

    /// Semantic equality (representations may differ).
    pub fn same_set(&self, other: &IndexSet) -> bool {
        (0..self.horizon(other)).all(|n| self.contains(n) == other.contains(n))
    }

    /// Members below `bound`, for diagnostics.
    pub fn members_below(&self, bound: usize) -> Vec<usize> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>();
        write!(f, "[{}|({})*]", bits(&self.prefix), bits(&self.period))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterVerdict {
    InFilter,
    NotInFilter,
    Undetermined,
}

impl FilterVerdict {
    pub fn negate(self) -> Self {
        match self {
            FilterVerdict::InFilter => FilterVerdict::NotInFilter,
            FilterVerdict::NotInFilter => FilterVerdict::InFilter,
            FilterVerdict::Undetermined => FilterVerdict::Undetermined,
        }
    }

    pub fn is_in(self) -> bool {
        self == FilterVerdict::InFilter
    }

    pub fn is_determined(self) -> bool {
        self != FilterVerdict::Undetermined
    }
}

impl fmt::Display for FilterVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterVerdict::InFilter => "in_filter",
            FilterVerdict::NotInFilter => "not_in_filter",
            FilterVerdict::Undetermined => "undetermined",
        })
    }
}

/// Stand-in for the fixed free ultrafilter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UltrafilterOracle {
    /// Decides exactly the finite and cofinite sets.
    Frechet,
    /// Commits additionally to a nested chain of residue classes
    /// `n ≡ r (mod m)`, each refining the previous one.
    ResidueChain(Vec<(u64, u64)>),
}

impl Default for UltrafilterOracle {
    fn default() -> Self {
        UltrafilterOracle::Frechet
    }
}

impl UltrafilterOracle {
    pub fn residue_chain(pairs: Vec<(u64, u64)>) -> Result<Self> {
        let o = UltrafilterOracle::ResidueChain(pairs);
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        let UltrafilterOracle::ResidueChain(pairs) = self else {
            return Ok(());
        };
        let mut prev: Option<(u64, u64)> = None;
        for &(m, r) in pairs {
            if m == 0 || r >= m {
                return Err(Error::Config(format!("bad residue class {r} mod {m}")));
            }
            if let Some((pm, pr)) = prev {
                if m % pm != 0 || r % pm != pr {
                    return Err(Error::Config(format!(
                        "residue chain does not refine: {r} mod {m} after {pr} mod {pm}"
                    )));
                }
            }
            prev = Some((m, r));
        }
        Ok(())
    }

    pub fn verdict(&self, s: &IndexSet) -> Result<FilterVerdict> {
        self.validate()?;
        s.validate()?;
        match s.classify() {
            SetClass::Cofinite => return Ok(FilterVerdict::InFilter),
            SetClass::Finite => return Ok(FilterVerdict::NotInFilter),
            SetClass::Mixed => {}
        }
        let UltrafilterOracle::ResidueChain(pairs) = self else {
            return Ok(FilterVerdict::Undetermined);
        };
        // The deepest class is contained in every shallower one, so it alone
        // decides anything the chain can decide.
        let Some(&(m, r)) = pairs.last() else {
            return Ok(FilterVerdict::Undetermined);
        };
        let (m, r) = (m as usize, r as usize);
        let span = lcm(s.period.len(), m);
        let start = s.offset;
        let hits: Vec<bool> = (start..start + span).filter(|n| n % m == r).map(|n| s.contains(n)).collect();
        Ok(if hits.iter().all(|b| *b) {
            FilterVerdict::InFilter
        } else if hits.iter().all(|b| !b) {
            FilterVerdict::NotInFilter
        } else {
            FilterVerdict::Undetermined
        })
    }
}

impl FromStr for UltrafilterOracle {
    type Err = Error;

    /// `frechet` or `residues=m1:r1,m2:r2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "frechet" {
            return Ok(UltrafilterOracle::Frechet);
        }
        let Some(list) = s.strip_prefix("residues=") else {
            return Err(Error::Parse(format!("unknown oracle {s:?}")));
        };
        let pairs = list
            .split(',')
            .map(|p| {
                let (m, r) = p.split_once(':').ok_or_else(|| Error::Parse(format!("bad residue pair {p:?}")))?;
                let m = m.trim().parse().map_err(|_| Error::Parse(format!("bad modulus {m:?}")))?;
                let r = r.trim().parse().map_err(|_| Error::Parse(format!("bad residue {r:?}")))?;
                Ok((m, r))
            })
            .collect::<Result<Vec<_>>>()?;
        UltrafilterOracle::residue_chain(pairs)
    }
}

impl fmt::Display for UltrafilterOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltrafilterOracle::Frechet => f.write_str("frechet"),
            UltrafilterOracle::ResidueChain(p) => {
                let parts: Vec<String> = p.iter().map(|(m, r)| format!("{m}:{r}")).collect();
                write!(f, "residues={}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> IndexSet {
        IndexSet::residue_class(2, 0)
    }

    fn odds() -> IndexSet {
        IndexSet::residue_class(2, 1)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(IndexSet::finite(&[0, 1, 2]).classify(), SetClass::Finite);
        assert_eq!(IndexSet::tail_from(5).classify(), SetClass::Cofinite);
        assert_eq!(evens().classify(), SetClass::Mixed);
    }

    #[test]
    fn verdict_examples() {
        let f = UltrafilterOracle::Frechet;
        assert_eq!(f.verdict(&IndexSet::tail_from(5)).unwrap(), FilterVerdict::InFilter);
        assert_eq!(f.verdict(&IndexSet::finite(&[3, 9])).unwrap(), FilterVerdict::NotInFilter);
        assert_eq!(f.verdict(&evens()).unwrap(), FilterVerdict::Undetermined);
        let rc = UltrafilterOracle::residue_chain(vec![(2, 0)]).unwrap();
        assert_eq!(rc.verdict(&evens()).unwrap(), FilterVerdict::InFilter);
        assert_eq!(rc.verdict(&odds()).unwrap(), FilterVerdict::NotInFilter);
        // multiples of 4 split the even class: undecided at depth (2,0)
        assert_eq!(rc.verdict(&IndexSet::residue_class(4, 0)).unwrap(), FilterVerdict::Undetermined);
        let deep = UltrafilterOracle::residue_chain(vec![(2, 0), (4, 2)]).unwrap();
        assert_eq!(deep.verdict(&IndexSet::residue_class(4, 0)).unwrap(), FilterVerdict::NotInFilter);
        assert_eq!(deep.verdict(&evens()).unwrap(), FilterVerdict::InFilter);
    }

    #[test]
    fn malformed_chain_is_config_error() {
        assert!(matches!(UltrafilterOracle::residue_chain(vec![(2, 0), (3, 1)]), Err(Error::Config(_))));
        assert!(matches!(UltrafilterOracle::residue_chain(vec![(2, 0), (4, 1)]), Err(Error::Config(_))));
        assert!(matches!(UltrafilterOracle::residue_chain(vec![(0, 0)]), Err(Error::Config(_))));
    }

    #[test]
    fn boolean_ops() {
        assert_eq!(evens().intersect(&odds()).classify(), SetClass::Finite);
        assert!(evens().intersect(&odds()).same_set(&IndexSet::empty()));
        assert_eq!(IndexSet::tail_from(3).intersect(&IndexSet::tail_from(7)).classify(), SetClass::Cofinite);
        assert!(evens().union(&odds()).same_set(&IndexSet::all()));
        assert!(evens().complement().same_set(&odds()));
    }

    #[test]
    fn transitivity_sets_replayed() {
        // N_xy = {n : d(x_n,y_n) <= 1}, N_yz = {n : d(y_n,z_n) <= 2}; with
        // d(x_n,z_n) <= d(x_n,y_n) + d(y_n,z_n) the set {d(x_n,z_n) <= 3}
        // contains their intersection.
        let dxy = |n: usize| if n % 3 == 0 { 5 } else { 1 };
        let dyz = |n: usize| if n < 4 { 9 } else { 2 };
        let dxz = |n: usize| dxy(n) + dyz(n) - usize::from(n % 2 == 0);
        let nxy = IndexSet::from_fn(0, 3, |n| dxy(n) <= 1);
        let nyz = IndexSet::from_fn(4, 1, |n| dyz(n) <= 2);
        let nxz = IndexSet::from_fn(4, 6, |n| dxz(n) <= 3);
        assert!(nxy.intersect(&nyz).is_subset(&nxz));
        let f = UltrafilterOracle::residue_chain(vec![(3, 1)]).unwrap();
        assert!(f.verdict(&nxy).unwrap().is_in());
        assert!(f.verdict(&nyz).unwrap().is_in());
        assert!(f.verdict(&nxz).unwrap().is_in());
    }

    #[test]
    fn from_fn_respects_residues() {
        let s = IndexSet::from_fn(5, 3, |n| n % 3 == 1);
        for n in 0..40 {
            assert_eq!(s.contains(n), n % 3 == 1, "n={n}");
        }
    }

    #[test]
    fn oracle_parse() {
        assert_eq!("frechet".parse::<UltrafilterOracle>().unwrap(), UltrafilterOracle::Frechet);
        let o: UltrafilterOracle = "residues=2:0,4:2".parse().unwrap();
        assert_eq!(o, UltrafilterOracle::ResidueChain(vec![(2, 0), (4, 2)]));
        assert_eq!(o.to_string(), "residues=2:0,4:2");
        assert!("residues=2:0,3:0".parse::<UltrafilterOracle>().is_err());
        assert!("nope".parse::<UltrafilterOracle>().is_err());
    }

    #[test]
    fn json_shape() {
        let s = IndexSet::new(vec![true, false], vec![false, true]).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["offset"], 2);
        assert_eq!(v["prefix"], serde_json::json!([true, false]));
        let back: IndexSet = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}

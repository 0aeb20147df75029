//! Ordinals below ω², written `ω·tau1 + tau0`.
//!
//! Every walk length and wdistance in a rank-1 graph lives here. Ordinals at
//! or above ω² have no representation, so the bound `d(x, y) < ω²` holds by
//! construction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ω·tau1 + tau0`. Field order makes the derived `Ord` lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Ordinal {
    pub tau1: u64,
    pub tau0: u64,
}

impl Ordinal {
    pub const ZERO: Ordinal = Ordinal { tau1: 0, tau0: 0 };
    pub const OMEGA: Ordinal = Ordinal { tau1: 1, tau0: 0 };

    pub const fn new(tau1: u64, tau0: u64) -> Self {
        Ordinal { tau1, tau0 }
    }

    pub const fn finite(n: u64) -> Self {
        Ordinal { tau1: 0, tau0: n }
    }

    /// `ω·k`.
    pub const fn omega_times(k: u64) -> Self {
        Ordinal { tau1: k, tau0: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.tau1 == 0 && self.tau0 == 0
    }

    pub fn is_finite(&self) -> bool {
        self.tau1 == 0
    }

    /// Natural (Hessenberg) sum. Below ω² it is componentwise.
    pub fn natural_sum(self, other: Ordinal) -> Result<Ordinal> {
        let tau1 = self.tau1.checked_add(other.tau1).ok_or(Error::Overflow("natural sum"))?;
        let tau0 = self.tau0.checked_add(other.tau0).ok_or(Error::Overflow("natural sum"))?;
        Ok(Ordinal { tau1, tau0 })
    }

    /// `self` added to itself `k` times under the natural sum.
    pub fn scale(self, k: u64) -> Result<Ordinal> {
        let tau1 = self.tau1.checked_mul(k).ok_or(Error::Overflow("scale"))?;
        let tau0 = self.tau0.checked_mul(k).ok_or(Error::Overflow("scale"))?;
        Ok(Ordinal { tau1, tau0 })
    }

    pub fn compare(&self, other: &Ordinal) -> Ordering {
        self.cmp(other)
    }

    /// Componentwise difference `self − other`, defined only when every
    /// component of `other` is at most the matching component of `self`.
    pub fn componentwise_sub(self, other: Ordinal) -> Option<Ordinal> {
        Some(Ordinal {
            tau1: self.tau1.checked_sub(other.tau1)?,
            tau0: self.tau0.checked_sub(other.tau0)?,
        })
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.tau1, self.tau0) {
            (0, t0) => write!(f, "{t0}"),
            (t1, 0) => write!(f, "w*{t1}"),
            (t1, t0) => write!(f, "w*{t1}+{t0}"),
        }
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not an ordinal below w^2: {s:?}"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        match s.strip_prefix("w*") {
            None => Ok(Ordinal::finite(num(s)?)),
            Some(rest) => match rest.split_once('+') {
                Some((t1, t0)) => Ok(Ordinal::new(num(t1)?, num(t0)?)),
                None => Ok(Ordinal::omega_times(num(rest)?)),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(t1: u64, t0: u64) -> Ordinal {
        Ordinal::new(t1, t0)
    }

    #[test]
    fn natural_sum_examples() {
        assert_eq!(o(1, 2).natural_sum(o(2, 3)).unwrap(), o(3, 5));
        assert_eq!(o(4, 9).natural_sum(Ordinal::ZERO).unwrap(), o(4, 9));
        // one-ended walk twice gives the endless-walk length
        assert_eq!(Ordinal::OMEGA.natural_sum(Ordinal::OMEGA).unwrap(), Ordinal::omega_times(2));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(o(1, 100).compare(&o(2, 0)), Ordering::Less);
        assert_eq!(o(0, 5).compare(&o(0, 5)), Ordering::Equal);
        assert_eq!(o(6, 0).compare(&o(4, 0)), Ordering::Greater);
    }

    #[test]
    fn scale_examples() {
        assert_eq!(o(2, 0).scale(3).unwrap(), o(6, 0));
        assert_eq!(o(1, 1).scale(2).unwrap(), o(2, 2));
        // the sandwich used by descending chains: d(x,v) <= 3 d(x,u) <= 2 d(x,v)
        let dv = o(8, 0);
        let du = o(3, 0);
        assert!(dv <= du.scale(3).unwrap() && du.scale(3).unwrap() <= dv.scale(2).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(o(u64::MAX, 0).natural_sum(o(1, 0)), Err(Error::Overflow(_))));
        assert!(matches!(o(0, u64::MAX).scale(2), Err(Error::Overflow(_))));
    }

    #[test]
    fn render_and_parse() {
        for (ord, text) in [(o(2, 5), "w*2+5"), (o(0, 7), "7"), (o(1, 0), "w*1"), (o(0, 0), "0")] {
            assert_eq!(ord.to_string(), text);
            assert_eq!(text.parse::<Ordinal>().unwrap(), ord);
        }
        assert!("w*".parse::<Ordinal>().is_err());
        assert!("w*1+".parse::<Ordinal>().is_err());
        assert!("-3".parse::<Ordinal>().is_err());
    }

    #[test]
    fn natural_sum_laws_exhaustive_small() {
        let vals: Vec<Ordinal> = (0..=8).flat_map(|a| (0..=8).map(move |b| o(a, b))).collect();
        for &a in &vals {
            assert_eq!(a.natural_sum(Ordinal::ZERO).unwrap(), a);
            for &b in &vals {
                assert_eq!(a.natural_sum(b).unwrap(), b.natural_sum(a).unwrap());
            }
        }
        for &a in vals.iter().step_by(7) {
            for &b in vals.iter().step_by(5) {
                for &c in vals.iter().step_by(3) {
                    let l = a.natural_sum(b).unwrap().natural_sum(c).unwrap();
                    let r = a.natural_sum(b.natural_sum(c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    fn arb() -> impl Strategy<Value = Ordinal> {
        (0u64..1_000_000, 0u64..1_000_000).prop_map(|(a, b)| o(a, b))
    }

    proptest! {
        #[test]
        fn natural_sum_commutative_associative(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(a.natural_sum(b).unwrap(), b.natural_sum(a).unwrap());
            prop_assert_eq!(
                a.natural_sum(b).unwrap().natural_sum(c).unwrap(),
                a.natural_sum(b.natural_sum(c).unwrap()).unwrap()
            );
        }

        #[test]
        fn compare_is_total_order(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(a.compare(&b), b.compare(&a).reverse());
            if a <= b && b <= c { prop_assert!(a <= c); }
            let n = [a < b, a == b, a > b].iter().filter(|x| **x).count();
            prop_assert_eq!(n, 1);
        }

        #[test]
        fn natural_sum_monotone(a in arb(), b in arb(), c in arb()) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(lo.natural_sum(c).unwrap() <= hi.natural_sum(c).unwrap());
        }

        #[test]
        fn scale_is_repeated_sum(a in arb(), k in 0u64..12) {
            let mut acc = Ordinal::ZERO;
            for _ in 0..k { acc = acc.natural_sum(a).unwrap(); }
            prop_assert_eq!(a.scale(k).unwrap(), acc);
        }

        #[test]
        fn display_round_trip(a in arb()) {
            prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
        }
    }
}

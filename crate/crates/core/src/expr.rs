//! Closed-form oracle expressions over node parameters.
//!
//! Presentations carry distance, geodesic and sphere oracles written in this
//! small language. Variables are the parameters of a first node (`x`), of a
//! second node (`y`) and one scalar `t`. Every expression can be evaluated
//! concretely, and also *eventually*: when each variable is an affine
//! function of an index `q`, the expression agrees with a single affine
//! function of `q` for all `q` past a computable threshold. That is what
//! turns a distance oracle into a definable distance profile.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `slope·q + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Affine {
    pub slope: i64,
    pub intercept: i64,
}

impl Affine {
    pub const fn new(slope: i64, intercept: i64) -> Self {
        Affine { slope, intercept }
    }

    pub const fn constant(c: i64) -> Self {
        Affine { slope: 0, intercept: c }
    }

    pub fn eval(&self, q: i64) -> i64 {
        (self.slope as i128 * q as i128 + self.intercept as i128) as i64
    }

    pub fn add(self, o: Affine) -> Affine {
        Affine::new(self.slope + o.slope, self.intercept + o.intercept)
    }

    pub fn sub(self, o: Affine) -> Affine {
        Affine::new(self.slope - o.slope, self.intercept - o.intercept)
    }

    pub fn mul(self, k: i64) -> Affine {
        Affine::new(self.slope * k, self.intercept * k)
    }

    /// Substitutes `q = inner(Q)`.
    pub fn compose(self, inner: Affine) -> Affine {
        Affine::new(self.slope * inner.slope, self.slope * inner.intercept + self.intercept)
    }

    /// The sign this function has for every `q >= from`, with the least such `from`.
    pub fn eventual_sign(&self) -> (Ordering, i64) {
        let (s, c) = (self.slope, self.intercept);
        match s.cmp(&0) {
            Ordering::Equal => (c.cmp(&0), i64::MIN),
            // s·q + c > 0  ⇔  q > −c/s  ⇔  q >= floor(−c/s) + 1
            Ordering::Greater => (Ordering::Greater, (-c).div_euclid(s) + 1),
            Ordering::Less => (Ordering::Less, c.div_euclid(-s) + 1),
        }
    }
}

impl std::fmt::Display for Affine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.slope, self.intercept) {
            (0, c) => write!(f, "{c}"),
            (s, 0) => write!(f, "{s}q"),
            (s, c) if c < 0 => write!(f, "{s}q{c}"),
            (s, c) => write!(f, "{s}q+{c}"),
        }
    }
}

/// A value that holds for every index `q >= from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eventual<T> {
    pub from: i64,
    pub value: T,
}

impl<T> Eventual<T> {
    pub fn new(from: i64, value: T) -> Self {
        Eventual { from, value }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Eventual<U> {
        Eventual { from: self.from, value: f(self.value) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntExpr {
    Const(i64),
    X(usize),
    Y(usize),
    T,
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(i64, Box<IntExpr>),
    Abs(Box<IntExpr>),
    Min(Box<IntExpr>, Box<IntExpr>),
    Max(Box<IntExpr>, Box<IntExpr>),
    If(Box<Cond>, Box<IntExpr>, Box<IntExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cond {
    True,
    Eq(IntExpr, IntExpr),
    Le(IntExpr, IntExpr),
    Lt(IntExpr, IntExpr),
    Not(Box<Cond>),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
}

/// An ordinal-valued distance, or "no walk at all".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistExpr {
    Ord { tau1: IntExpr, tau0: IntExpr },
    Unreachable,
    If(Box<Cond>, Box<DistExpr>, Box<DistExpr>),
}

/// A node-valued expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeExpr {
    Node { family: String, params: Vec<IntExpr> },
    If(Box<Cond>, Box<NodeExpr>, Box<NodeExpr>),
}

/// Variable bindings for concrete evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Env<'a> {
    pub x: &'a [i64],
    pub y: &'a [i64],
    pub t: i64,
}

/// Variable bindings for eventual evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SymEnv<'a> {
    pub x: &'a [Affine],
    pub y: &'a [Affine],
    pub t: Affine,
}

fn var<T: Copy>(vals: &[T], i: usize, side: &str) -> Result<T> {
    vals.get(i)
        .copied()
        .ok_or_else(|| Error::Config(format!("oracle refers to {side}[{i}] beyond node arity")))
}

impl IntExpr {
    pub fn eval(&self, env: &Env) -> Result<i64> {
        Ok(match self {
            IntExpr::Const(c) => *c,
            IntExpr::X(i) => var(env.x, *i, "x")?,
            IntExpr::Y(i) => var(env.y, *i, "y")?,
            IntExpr::T => env.t,
            IntExpr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            IntExpr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            IntExpr::Mul(k, a) => k * a.eval(env)?,
            IntExpr::Abs(a) => a.eval(env)?.abs(),
            IntExpr::Min(a, b) => a.eval(env)?.min(b.eval(env)?),
            IntExpr::Max(a, b) => a.eval(env)?.max(b.eval(env)?),
            IntExpr::If(c, a, b) => {
                if c.eval(env)? {
                    a.eval(env)?
                } else {
                    b.eval(env)?
                }
            }
        })
    }

    pub fn eval_eventual(&self, env: &SymEnv) -> Result<Eventual<Affine>> {
        let lo = i64::MIN;
        Ok(match self {
            IntExpr::Const(c) => Eventual::new(lo, Affine::constant(*c)),
            IntExpr::X(i) => Eventual::new(lo, var(env.x, *i, "x")?),
            IntExpr::Y(i) => Eventual::new(lo, var(env.y, *i, "y")?),
            IntExpr::T => Eventual::new(lo, env.t),
            IntExpr::Add(a, b) => {
                let (a, b) = (a.eval_eventual(env)?, b.eval_eventual(env)?);
                Eventual::new(a.from.max(b.from), a.value.add(b.value))
            }
            IntExpr::Sub(a, b) => {
                let (a, b) = (a.eval_eventual(env)?, b.eval_eventual(env)?);
                Eventual::new(a.from.max(b.from), a.value.sub(b.value))
            }
            IntExpr::Mul(k, a) => a.eval_eventual(env)?.map(|v| v.mul(*k)),
            IntExpr::Abs(a) => {
                let a = a.eval_eventual(env)?;
                let (sign, from) = a.value.eventual_sign();
                let v = if sign == Ordering::Less { a.value.mul(-1) } else { a.value };
                Eventual::new(a.from.max(from), v)
            }
            IntExpr::Min(a, b) | IntExpr::Max(a, b) => {
                let (ea, eb) = (a.eval_eventual(env)?, b.eval_eventual(env)?);
                let (sign, from) = ea.value.sub(eb.value).eventual_sign();
                let a_wins = match self {
                    IntExpr::Min(..) => sign != Ordering::Greater,
                    _ => sign != Ordering::Less,
                };
                let v = if a_wins { ea.value } else { eb.value };
                Eventual::new(ea.from.max(eb.from).max(from), v)
            }
            IntExpr::If(c, a, b) => {
                let c = c.eval_eventual(env)?;
                let branch = if c.value { a } else { b }.eval_eventual(env)?;
                Eventual::new(c.from.max(branch.from), branch.value)
            }
        })
    }
}

impl Cond {
    pub fn eval(&self, env: &Env) -> Result<bool> {
        Ok(match self {
            Cond::True => true,
            Cond::Eq(a, b) => a.eval(env)? == b.eval(env)?,
            Cond::Le(a, b) => a.eval(env)? <= b.eval(env)?,
            Cond::Lt(a, b) => a.eval(env)? < b.eval(env)?,
            Cond::Not(c) => !c.eval(env)?,
            Cond::And(a, b) => a.eval(env)? && b.eval(env)?,
            Cond::Or(a, b) => a.eval(env)? || b.eval(env)?,
        })
    }

    pub fn eval_eventual(&self, env: &SymEnv) -> Result<Eventual<bool>> {
        let cmp = |a: &IntExpr, b: &IntExpr| -> Result<(Ordering, i64)> {
            let (a, b) = (a.eval_eventual(env)?, b.eval_eventual(env)?);
            let (sign, from) = a.value.sub(b.value).eventual_sign();
            Ok((sign, from.max(a.from).max(b.from)))
        };
        Ok(match self {
            Cond::True => Eventual::new(i64::MIN, true),
            Cond::Eq(a, b) => {
                let (s, from) = cmp(a, b)?;
                Eventual::new(from, s == Ordering::Equal)
            }
            Cond::Le(a, b) => {
                let (s, from) = cmp(a, b)?;
                Eventual::new(from, s != Ordering::Greater)
            }
            Cond::Lt(a, b) => {
                let (s, from) = cmp(a, b)?;
                Eventual::new(from, s == Ordering::Less)
            }
            Cond::Not(c) => c.eval_eventual(env)?.map(|b| !b),
            Cond::And(a, b) | Cond::Or(a, b) => {
                let (a, b) = (a.eval_eventual(env)?, b.eval_eventual(env)?);
                let v = match self {
                    Cond::And(..) => a.value && b.value,
                    _ => a.value || b.value,
                };
                Eventual::new(a.from.max(b.from), v)
            }
        })
    }
}

/// Result of concretely evaluating a [`DistExpr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistValue {
    Ord { tau1: i64, tau0: i64 },
    Unreachable,
}

impl DistExpr {
    pub fn finite(e: IntExpr) -> Self {
        DistExpr::Ord { tau1: IntExpr::Const(0), tau0: e }
    }

    pub fn eval(&self, env: &Env) -> Result<DistValue> {
        match self {
            DistExpr::Ord { tau1, tau0 } => Ok(DistValue::Ord { tau1: tau1.eval(env)?, tau0: tau0.eval(env)? }),
            DistExpr::Unreachable => Ok(DistValue::Unreachable),
            DistExpr::If(c, a, b) => {
                if c.eval(env)? {
                    a.eval(env)
                } else {
                    b.eval(env)
                }
            }
        }
    }

    /// `None` inside means unreachable for every large index.
    pub fn eval_eventual(&self, env: &SymEnv) -> Result<Eventual<Option<(Affine, Affine)>>> {
        match self {
            DistExpr::Ord { tau1, tau0 } => {
                let (a, b) = (tau1.eval_eventual(env)?, tau0.eval_eventual(env)?);
                Ok(Eventual::new(a.from.max(b.from), Some((a.value, b.value))))
            }
            DistExpr::Unreachable => Ok(Eventual::new(i64::MIN, None)),
            DistExpr::If(c, a, b) => {
                let c = c.eval_eventual(env)?;
                let v = if c.value { a } else { b }.eval_eventual(env)?;
                Ok(Eventual::new(c.from.max(v.from), v.value))
            }
        }
    }
}

impl NodeExpr {
    pub fn eval(&self, env: &Env) -> Result<(String, Vec<i64>)> {
        match self {
            NodeExpr::Node { family, params } => {
                Ok((family.clone(), params.iter().map(|p| p.eval(env)).collect::<Result<_>>()?))
            }
            NodeExpr::If(c, a, b) => {
                if c.eval(env)? {
                    a.eval(env)
                } else {
                    b.eval(env)
                }
            }
        }
    }

    pub fn eval_eventual(&self, env: &SymEnv) -> Result<Eventual<(String, Vec<Affine>)>> {
        match self {
            NodeExpr::Node { family, params } => {
                let mut from = i64::MIN;
                let mut out = Vec::with_capacity(params.len());
                for p in params {
                    let e = p.eval_eventual(env)?;
                    from = from.max(e.from);
                    out.push(e.value);
                }
                Ok(Eventual::new(from, (family.clone(), out)))
            }
            NodeExpr::If(c, a, b) => {
                let c = c.eval_eventual(env)?;
                let v = if c.value { a } else { b }.eval_eventual(env)?;
                Ok(Eventual::new(c.from.max(v.from), v.value))
            }
        }
    }
}

/// Terse constructors used by the builtin catalogs.
pub mod build {
    use super::*;

    pub fn c(v: i64) -> IntExpr {
        IntExpr::Const(v)
    }
    pub fn x(i: usize) -> IntExpr {
        IntExpr::X(i)
    }
    pub fn y(i: usize) -> IntExpr {
        IntExpr::Y(i)
    }
    pub fn t() -> IntExpr {
        IntExpr::T
    }
    pub fn add(a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(k: i64, a: IntExpr) -> IntExpr {
        IntExpr::Mul(k, Box::new(a))
    }
    pub fn abs(a: IntExpr) -> IntExpr {
        IntExpr::Abs(Box::new(a))
    }
    pub fn min(a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::Min(Box::new(a), Box::new(b))
    }
    pub fn max(a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::Max(Box::new(a), Box::new(b))
    }
    pub fn ite(cond: Cond, a: IntExpr, b: IntExpr) -> IntExpr {
        IntExpr::If(Box::new(cond), Box::new(a), Box::new(b))
    }
    pub fn eq(a: IntExpr, b: IntExpr) -> Cond {
        Cond::Eq(a, b)
    }
    pub fn le(a: IntExpr, b: IntExpr) -> Cond {
        Cond::Le(a, b)
    }
    pub fn lt(a: IntExpr, b: IntExpr) -> Cond {
        Cond::Lt(a, b)
    }
    pub fn and(a: Cond, b: Cond) -> Cond {
        Cond::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Cond, b: Cond) -> Cond {
        Cond::Or(Box::new(a), Box::new(b))
    }
    pub fn not(a: Cond) -> Cond {
        Cond::Not(Box::new(a))
    }
    pub fn fin(e: IntExpr) -> DistExpr {
        DistExpr::finite(e)
    }
    pub fn ord(tau1: IntExpr, tau0: IntExpr) -> DistExpr {
        DistExpr::Ord { tau1, tau0 }
    }
    pub fn dif(cond: Cond, a: DistExpr, b: DistExpr) -> DistExpr {
        DistExpr::If(Box::new(cond), Box::new(a), Box::new(b))
    }
    pub fn node(family: &str, params: Vec<IntExpr>) -> NodeExpr {
        NodeExpr::Node { family: family.to_string(), params }
    }
    pub fn nif(cond: Cond, a: NodeExpr, b: NodeExpr) -> NodeExpr {
        NodeExpr::If(Box::new(cond), Box::new(a), Box::new(b))
    }
}

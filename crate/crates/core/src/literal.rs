//! Text form of definable node sequences, as accepted on the command line.
//!
//! ```text
//! literal := "const(" NODE ")"
//!          | "seq(" FAM [ "(" pexpr { "," pexpr } ")" ] ")"
//!          | "seq(k=" pexpr ")@" ( FAM | "family(" FAM ")" )
//!          | "table[" NODE { "," NODE } ";then " tail "]"
//!          | "cycle[" NODE { "," NODE } "]"
//!          | JSON object with the fields prefix, period, tail
//! tail    := "k=" pexpr | literal
//! pexpr   := [ "-" ] pterm { ("+" | "-") pterm }
//! pterm   := INT [ "*" base ] | base
//! base    := "n" | "n/" INT | "floor(n/" INT ")" | "ceil(n/" INT ")"
//! ```
//!
//! `n` is the absolute index, also inside the tail of a table. `n/c` rounds
//! down. `k=` fills the single parameter of a one-parameter family; after a
//! table the family is that of the table's nodes.

use crate::error::{Error, Result};
use crate::expr::Affine;
use crate::filters::lcm;
use crate::node::NodeRef;
use crate::seq::{DefSeq, NodeSeq, NodeTerm};

/// One summand of a parameter expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Base {
    One,
    N,
    Floor(i64),
    Ceil(i64),
}

/// `Σ coeff·base`, evaluated per residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ParamExpr(Vec<(i64, Base)>);

impl ParamExpr {
    fn period(&self) -> usize {
        self.0
            .iter()
            .map(|(_, b)| match b {
                Base::Floor(c) | Base::Ceil(c) => *c as usize,
                _ => 1,
            })
            .fold(1, lcm)
    }

    /// The clause for indices `n = p·q + r`.
    fn clause(&self, p: usize, r: usize) -> Affine {
        let (p, r) = (p as i64, r as i64);
        self.0.iter().fold(Affine::constant(0), |acc, (k, b)| {
            let a = match b {
                Base::One => Affine::constant(1),
                Base::N => Affine::new(p, r),
                Base::Floor(c) => Affine::new(p / c, r.div_euclid(*c)),
                Base::Ceil(c) => Affine::new(p / c, (r + c - 1).div_euclid(*c)),
            };
            acc.add(a.mul(*k))
        })
    }
}

fn bad(s: &str, why: &str) -> Error {
    Error::Parse(format!("bad hypernode literal {s:?}: {why}"))
}

fn parse_pexpr(src: &str) -> Result<ParamExpr> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad(src, "empty parameter"));
    }
    let mut terms = vec![];
    let mut rest = s.as_str();
    let mut sign = 1;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    }
    loop {
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (t, next) = rest.split_at(end);
        let (k, b) = parse_pterm(src, t)?;
        terms.push((sign * k, b));
        if next.is_empty() {
            break;
        }
        sign = if next.starts_with('-') { -1 } else { 1 };
        rest = &next[1..];
    }
    Ok(ParamExpr(terms))
}

fn parse_pterm(src: &str, t: &str) -> Result<(i64, Base)> {
    let int = |v: &str| v.parse::<i64>().map_err(|_| bad(src, &format!("{v:?} is not an integer")));
    let (k, base) = match t.split_once('*') {
        Some((k, b)) => (int(k)?, b),
        None if t.starts_with(|c: char| c.is_ascii_digit()) => return Ok((int(t)?, Base::One)),
        None => (1, t),
    };
    let divisor = |v: &str| -> Result<i64> {
        let c = int(v)?;
        if c <= 0 {
            return Err(bad(src, "divisors must be positive"));
        }
        Ok(c)
    };
    let b = if base == "n" {
        Base::N
    } else if let Some(c) = base.strip_prefix("floor(n/").and_then(|r| r.strip_suffix(')')) {
        Base::Floor(divisor(c)?)
    } else if let Some(c) = base.strip_prefix("ceil(n/").and_then(|r| r.strip_suffix(')')) {
        Base::Ceil(divisor(c)?)
    } else if let Some(c) = base.strip_prefix("n/") {
        Base::Floor(divisor(c)?)
    } else {
        return Err(bad(src, &format!("unknown term {t:?}")));
    };
    Ok((k, b))
}

/// Splits on `sep` outside parentheses and brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = vec![];
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn family_term(family: &str, params: &[ParamExpr]) -> NodeSeq {
    let p = params.iter().map(ParamExpr::period).fold(1, lcm);
    let tail = (0..p).map(|r| NodeTerm::new(family, params.iter().map(|e| e.clause(p, r)).collect())).collect();
    DefSeq { prefix: vec![], period: p, tail }
}

fn nodes(src: &str, list: &str) -> Result<Vec<NodeRef>> {
    let vals = split_top(list, ',').into_iter().map(|t| t.parse()).collect::<Result<Vec<NodeRef>>>()?;
    if vals.is_empty() {
        return Err(bad(src, "empty node list"));
    }
    Ok(vals)
}

pub fn parse_hypernode_literal(src: &str) -> Result<NodeSeq> {
    let s = src.trim();
    if s.starts_with('{') {
        let seq: NodeSeq = serde_json::from_str(s)?;
        seq.validate()?;
        return Ok(seq);
    }
    if let Some(inner) = s.strip_prefix("const(").and_then(|r| r.strip_suffix(')')) {
        return Ok(DefSeq::constant(&inner.parse()?));
    }
    if let Some(inner) = s.strip_prefix("cycle[").and_then(|r| r.strip_suffix(']')) {
        return DefSeq::cycle(&nodes(src, inner)?);
    }
    if let Some(inner) = s.strip_prefix("table[").and_then(|r| r.strip_suffix(']')) {
        let (pre, tail) = inner.split_once(';').ok_or_else(|| bad(src, "a table needs ';then'"))?;
        let tail = tail.trim().strip_prefix("then").ok_or_else(|| bad(src, "a table needs ';then'"))?.trim();
        let prefix = nodes(src, pre)?;
        let rest = match tail.strip_prefix("k=") {
            Some(e) => {
                let fam = &prefix[0].family;
                if prefix.iter().any(|v| v.family != *fam || v.params.len() != 1) {
                    return Err(bad(src, "'then k=' needs table nodes of one one-parameter family"));
                }
                family_term(fam, &[parse_pexpr(e)?])
            }
            None => parse_hypernode_literal(tail)?,
        };
        let mut out = rest.with_prefix_len(0)?;
        out.prefix = prefix;
        if rest.prefix.len() > out.prefix.len() {
            out.prefix.extend(rest.prefix[out.prefix.len()..].iter().cloned());
        }
        return Ok(out);
    }
    if let Some(inner) = s.strip_prefix("seq(") {
        if let Some(rest) = inner.strip_prefix("k=") {
            let (e, fam) = rest.split_once(")@").ok_or_else(|| bad(src, "expected seq(k=EXPR)@FAMILY"))?;
            let fam = fam.strip_prefix("family(").and_then(|f| f.strip_suffix(')')).unwrap_or(fam).trim();
            if !crate::node::is_ident(fam) {
                return Err(bad(src, &format!("{fam:?} is not a family name")));
            }
            return Ok(family_term(fam, &[parse_pexpr(e)?]));
        }
        let body = inner.strip_suffix(')').ok_or_else(|| bad(src, "unbalanced parentheses"))?.trim();
        let (fam, params) = match body.split_once('(') {
            None => (body, vec![]),
            Some((f, ps)) => {
                let ps = ps.strip_suffix(')').ok_or_else(|| bad(src, "unbalanced parentheses"))?;
                (f.trim(), split_top(ps, ',').into_iter().map(parse_pexpr).collect::<Result<Vec<_>>>()?)
            }
        };
        if !crate::node::is_ident(fam) {
            return Err(bad(src, &format!("{fam:?} is not a family name")));
        }
        return Ok(family_term(fam, &params));
    }
    Err(bad(src, "expected const(...), seq(...), table[...], cycle[...] or a JSON sequence"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(s: &str, count: usize) -> Vec<String> {
        parse_hypernode_literal(s).unwrap().values(count).unwrap().iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn forms() {
        assert_eq!(vals("const(x_g)", 3), ["x_g"; 3]);
        assert_eq!(vals("const(x(4))", 2), ["x(4)"; 2]);
        assert_eq!(vals("seq(k=n)@x", 3), ["x(0)", "x(1)", "x(2)"]);
        assert_eq!(vals("seq(k=2*n+1)@family(x)", 3), ["x(1)", "x(3)", "x(5)"]);
        assert_eq!(vals("table[x(7),x(9);then k=n]", 4), ["x(7)", "x(9)", "x(2)", "x(3)"]);
        assert_eq!(vals("cycle[a,b(1)]", 3), ["a", "b(1)", "a"]);
        assert_eq!(vals("seq(grid(n, -n + 3))", 2), ["grid(0,3)", "grid(1,2)"]);
        assert_eq!(vals("table[g;then seq(n1(n/2))]", 4), ["g", "n1(0)", "n1(1)", "n1(1)"]);
    }

    #[test]
    fn rounding() {
        for n in 0..50i64 {
            let s = parse_hypernode_literal("seq(x(floor(n/3), ceil(n/3), n/4 - 2*n))").unwrap();
            let v = s.at(n as usize).unwrap();
            assert_eq!(v.params, vec![n.div_euclid(3), (n + 2).div_euclid(3), n.div_euclid(4) - 2 * n]);
        }
    }

    #[test]
    fn json_form_round_trips() {
        let s = parse_hypernode_literal("table[x(1);then seq(x(ceil(n/3)))]").unwrap();
        let back = parse_hypernode_literal(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "seq(", "const(", "seq(k=n)@", "table[;then k=n]", "seq(x(n/0))", "seq(x(m))", "nonsense"] {
            assert!(matches!(parse_hypernode_literal(s), Err(Error::Parse(_) | Error::Json(_) | Error::Config(_))), "{s}");
        }
    }
}

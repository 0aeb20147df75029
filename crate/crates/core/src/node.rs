//! Concrete node names shared by 0-graphs and 1-graphs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A node `family(p0, p1, ...)`. Parameterless nodes print as the bare family
/// name. The derived order is lexicographic on (family, params), which is the
/// tie-break used by every canonical choice in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeRef {
    pub family: String,
    pub params: Vec<i64>,
}

impl NodeRef {
    pub fn new(family: impl Into<String>, params: Vec<i64>) -> Self {
        NodeRef { family: family.into(), params }
    }

    pub fn single(family: impl Into<String>) -> Self {
        NodeRef::new(family, vec![])
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            return f.write_str(&self.family);
        }
        let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.family, ps.join(","))
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for NodeRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad node reference {s:?}"));
        let (family, params) = match s.split_once('(') {
            None => (s, vec![]),
            Some((fam, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(bad)?;
                let params = if inner.trim().is_empty() {
                    vec![]
                } else {
                    inner.split(',').map(|p| p.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<_>>()?
                };
                (fam.trim(), params)
            }
        };
        if !is_ident(family) {
            return Err(bad());
        }
        Ok(NodeRef::new(family, params))
    }
}

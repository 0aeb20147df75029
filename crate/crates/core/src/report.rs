//! Chain reports: a serializable summary of a validated chain of galaxies,
//! with per-pair witness tables, and a plain-text rendering of it.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::filters::FilterVerdict;
use crate::galaxies0::{Chain, Closeness, Limited, Principal, Scale};
use crate::seq::NodeSeq;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandleRow {
    pub index: usize,
    /// Position relative to the starting hypernode: negative is closer.
    pub offset: i64,
    pub representative: NodeSeq,
    pub rank: u8,
    pub first_values: Vec<String>,
    pub principal: Principal,
    /// Distance to the standard node at the first indices.
    pub to_standard: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub near: usize,
    pub far: usize,
    pub answer: Closeness,
    /// Verdict on `{n : d(far) − d(near) >= unit(m)}` for `m = 1..=m_max`.
    pub witnesses: Vec<(u64, FilterVerdict)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub graph: String,
    pub scale: Scale,
    pub base: NodeSeq,
    pub handles: Vec<HandleRow>,
    pub adjacent: Vec<PairRow>,
    pub distinct: Vec<(usize, usize, Limited)>,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ChainReport {
    pub fn from_chain(graph: &str, chain: &Chain, sample: usize) -> Result<Self> {
        let mut handles = vec![];
        for (i, h) in chain.handles.iter().enumerate() {
            let r = &h.representative;
            handles.push(HandleRow {
                index: i,
                offset: i as i64 - chain.center as i64,
                representative: r.seq.clone(),
                rank: r.rank,
                first_values: r.seq.values(sample)?.iter().map(|v| v.to_string()).collect(),
                principal: h.principal,
                to_standard: (0..sample).map(|n| h.to_standard.at(n).map(|d| d.to_string())).collect::<Result<_>>()?,
            });
        }
        let adjacent = chain
            .adjacent
            .iter()
            .enumerate()
            .map(|(i, a)| PairRow { near: i, far: i + 1, answer: a.answer, witnesses: a.witnesses.clone() })
            .collect();
        Ok(ChainReport {
            graph: graph.to_string(),
            scale: chain.scale,
            base: chain.base.seq.clone(),
            handles,
            adjacent,
            distinct: chain.distinct.clone(),
            valid: chain.valid,
            notes: chain.notes.clone(),
        })
    }

    /// Consistency of the recorded verdicts with the `valid` flag.
    pub fn recheck(&self) -> bool {
        let ordered = self.adjacent.len() + 1 == self.handles.len().max(1)
            && self.adjacent.iter().all(|a| a.answer == Closeness::Closer && a.witnesses.iter().all(|(_, v)| v.is_in()));
        let apart = self.distinct.iter().all(|(_, _, l)| *l == Limited::No);
        let off = self.handles.iter().all(|h| h.principal == Principal::No);
        (ordered && apart && off) == self.valid
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let unit = match self.scale {
            Scale::Finite => "m",
            Scale::Omega => "w*m",
        };
        let _ = writeln!(s, "chain on {} from {} ({} galaxies, thresholds {unit})", self.graph, self.base, self.handles.len());
        for h in &self.handles {
            let _ = writeln!(
                s,
                "  [{:+}] {}  principal={}  first: {}  d: {}",
                h.offset,
                h.representative,
                h.principal,
                h.first_values.join(" "),
                h.to_standard.join(" ")
            );
        }
        for a in &self.adjacent {
            let ins = a.witnesses.iter().filter(|(_, v)| v.is_in()).count();
            let _ = writeln!(s, "  {} < {}: {} ({ins}/{} witnesses in the ultrafilter)", a.near, a.far, a.answer, a.witnesses.len());
        }
        let _ = writeln!(s, "valid: {}", self.valid);
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Affine;
    use crate::filters::UltrafilterOracle;
    use crate::galaxies0::{chain_thm42, Budgets};
    use crate::graphzero::builtins::builtin;
    use crate::seq::{DefSeq, NodeTerm};
    use crate::ultrapower::Hypernode;

    #[test]
    fn report_round_trips_and_rechecks() {
        let g = builtin("one_ended_path").unwrap();
        let o = UltrafilterOracle::Frechet;
        let x = Hypernode::constant(&g, &"x(0)".parse().unwrap()).unwrap();
        let v = Hypernode::new(&g, DefSeq::affine(NodeTerm::new("x", vec![Affine::new(1, 0)])), &o).unwrap();
        let ch = chain_thm42(&g, &x, &v, 1, &o, &Budgets::default()).unwrap();
        let r = ChainReport::from_chain("one_ended_path", &ch, 6).unwrap();
        assert!(r.valid && r.recheck());
        assert_eq!(r.handles[1].first_values, ["x(0)", "x(1)", "x(2)", "x(3)", "x(4)", "x(5)"]);
        let back: ChainReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_text().contains("valid: true"));
        let mut forged = r.clone();
        forged.adjacent[0].answer = Closeness::NotCloser;
        assert!(!forged.recheck());
    }
}

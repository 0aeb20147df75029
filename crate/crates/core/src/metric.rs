//! What the hypernode and galaxy layers need from a graph of either rank.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::{DistExpr, DistValue, Env};
use crate::node::NodeRef;
use crate::ordinals::Ordinal;

/// Closed-form distance between a node of `families[0]` (variables `x`) and
/// a node of `families[1]` (variables `y`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistCase {
    pub families: [String; 2],
    pub expr: DistExpr,
}

impl DistCase {
    pub fn new(a: &str, b: &str, expr: DistExpr) -> Self {
        DistCase { families: [a.to_string(), b.to_string()], expr }
    }
}

/// Finds the case for `(fa, fb)`. The flag is true when the case was stored
/// the other way round, so the caller must swap `x` and `y`.
pub fn lookup<'a>(cases: &'a [DistCase], fa: &str, fb: &str) -> Option<(&'a DistExpr, bool)> {
    cases
        .iter()
        .find(|c| c.families[0] == fa && c.families[1] == fb)
        .map(|c| (&c.expr, false))
        .or_else(|| cases.iter().find(|c| c.families[0] == fb && c.families[1] == fa).map(|c| (&c.expr, true)))
}

/// Evaluates the oracle on two concrete nodes. `None` when no case applies.
pub fn eval_case(cases: &[DistCase], a: &NodeRef, b: &NodeRef) -> Result<Option<DistValue>> {
    let Some((expr, swapped)) = lookup(cases, &a.family, &b.family) else {
        return Ok(None);
    };
    let (x, y) = if swapped { (b, a) } else { (a, b) };
    expr.eval(&Env { x: &x.params, y: &y.params, t: 0 }).map(Some)
}

pub trait Metric {
    /// 0 for a 0-graph, 1 for a 1-graph.
    fn rank(&self) -> u8;
    fn name(&self) -> &str;
    fn check_node(&self, n: &NodeRef) -> Result<()>;
    /// Rank of the node family: 0-node or 1-node.
    fn node_rank(&self, family: &str) -> Option<u8>;
    /// Exact distance, or `Err(Unresolved)` when the budget runs out.
    fn dist(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<Ordinal>;
    /// Distance by search alone, never consulting the oracle.
    fn dist_search(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<Ordinal> {
        self.dist(a, b, budget)
    }
    fn oracle(&self) -> &[DistCase];
    /// The node used as "the" standard hypernode.
    fn standard_node(&self) -> NodeRef;
    /// A few further nodes, used for standardness cross-checks and sampling.
    fn sample_nodes(&self, count: usize) -> Vec<NodeRef>;
}

/// A metric whose distances all come from search. Its oracle is empty, so
/// hyperdistances are only available between constant hypernodes.
pub struct SearchOnly<'a>(pub &'a dyn Metric);

impl Metric for SearchOnly<'_> {
    fn rank(&self) -> u8 {
        self.0.rank()
    }

    fn name(&self) -> &str {
        self.0.name()
    }

    fn check_node(&self, n: &NodeRef) -> Result<()> {
        self.0.check_node(n)
    }

    fn node_rank(&self, family: &str) -> Option<u8> {
        self.0.node_rank(family)
    }

    fn dist(&self, a: &NodeRef, b: &NodeRef, budget: usize) -> Result<Ordinal> {
        self.0.dist_search(a, b, budget)
    }

    fn oracle(&self) -> &[DistCase] {
        &[]
    }

    fn standard_node(&self) -> NodeRef {
        self.0.standard_node()
    }

    fn sample_nodes(&self, count: usize) -> Vec<NodeRef> {
        self.0.sample_nodes(count)
    }
}

//! The cost measure that decreases under every translation rewrite.
//!
//! `c(B(a)) = 1`, `c(N(a,b)) = 1`, `c(true) = 1`, `c(!f) = 1 + c(f)`,
//! `c(f & g) = 1 + max(c(f), c(g))`, `c(X f) = 2 c(f)`, and a majority atom
//! costs `2 n²` for `n` agents. A `B(a)` that sits anywhere beneath an `X`
//! weighs `2 + n²` instead of 1, so that `c(X B(a)) = 4 + 2 n²` and the
//! doubling rule for `X` stays uniform across conjunction and negation.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::formula::{node_key, Formula};

/// A saturating cost value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CostValue(pub u128);

impl CostValue {
    pub const SATURATED: CostValue = CostValue(u128::MAX);

    pub fn is_saturated(self) -> bool {
        self == Self::SATURATED
    }

    fn plus(self, k: u128) -> Self {
        CostValue(self.0.saturating_add(k))
    }

    pub(crate) fn plus_one(self) -> Self {
        self.plus(1)
    }

    fn double(self) -> Self {
        CostValue(self.0.saturating_mul(2))
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_saturated() {
            f.write_str("saturated")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Memoizing cost evaluator for one agent count.
///
/// Memo entries are keyed by node address, so every node queried must stay
/// alive for as long as the evaluator is used.
#[derive(Debug)]
pub(crate) struct CostModel {
    n: u128,
    memo: BTreeMap<(usize, bool), CostValue>,
}

impl CostModel {
    pub(crate) fn new(n_agents: usize) -> Self {
        CostModel { n: n_agents as u128, memo: BTreeMap::new() }
    }

    pub(crate) fn majority(&self) -> CostValue {
        CostValue(2 * self.n * self.n)
    }

    /// Cost of `f`, where `under_next` says whether `f` occurs beneath an `X`.
    pub(crate) fn cost_in(&mut self, f: &Formula, under_next: bool) -> CostValue {
        let key = (node_key(f), under_next);
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let c = match f {
            Formula::Top | Formula::Nbr(..) => CostValue(1),
            Formula::Beh(_) if under_next => CostValue(2 + self.n * self.n),
            Formula::Beh(_) => CostValue(1),
            Formula::MajorityGE { .. } => self.majority(),
            Formula::Not(g) => self.cost_in(g, under_next).plus(1),
            Formula::And(l, r) | Formula::Until(l, r) => {
                let (l, r) = (self.cost_in(l, under_next), self.cost_in(r, under_next));
                l.max(r).plus(1)
            }
            Formula::Next(g) => self.cost_in(g, true).double(),
        };
        self.memo.insert(key, c);
        c
    }

    /// Cost of `X f` without building the node.
    pub(crate) fn cost_of_next(&mut self, f: &Formula) -> CostValue {
        self.cost_in(f, true).double()
    }
}

/// Cost of `f` in a model with `n_agents` agents.
pub fn cost(f: &Formula, n_agents: usize) -> CostValue {
    CostModel::new(n_agents).cost_in(f, false)
}

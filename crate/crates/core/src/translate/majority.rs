//! The majority abbreviation as an explicit propositional formula.
//!
//! For target `a` it is the disjunction, over every pair `G ⊆ M ⊆ agents`
//! with `M` nonempty and `|G|/|M|` meeting the threshold, of
//! `⋀_{b∈M} N(a,b) ∧ ⋀_{b∉M} ¬N(a,b) ∧ ⋀_{b∈G} B(b)`.
//! The number of terms grows as `3^n`, so expansion is guarded by an agent
//! count limit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::TranslateError;
use crate::formula::Formula;
use crate::model::AgentId;
use crate::rational::Threshold;

/// Largest agent set expanded by default.
pub const DEFAULT_EXPANSION_GUARD: usize = 10;

/// One disjunct: the exact neighborhood `M` of the target and the behaving
/// part `G` of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorityTerm {
    pub neighborhood: BTreeSet<AgentId>,
    pub behaving: BTreeSet<AgentId>,
}

fn check_guard(n: usize, guard: usize) -> Result<(), TranslateError> {
    if n > guard {
        Err(TranslateError::ExpansionGuard { agents: n, guard })
    } else {
        Ok(())
    }
}

/// Qualifying `(M, G)` pairs in binary-counting order over the sorted
/// agents (agent `i` is bit `i`), first by `M`, then by `G`.
pub fn majority_terms(
    agents: &BTreeSet<AgentId>,
    threshold: Threshold,
    guard: usize,
) -> Result<Vec<MajorityTerm>, TranslateError> {
    check_guard(agents.len(), guard)?;
    let list: Vec<&AgentId> = agents.iter().collect();
    let subset = |mask: u32| -> BTreeSet<AgentId> {
        list.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| (*a).clone()).collect()
    };
    let mut out = Vec::new();
    for m in 1u32..(1 << list.len()) {
        for g in 0..=m {
            if g & !m != 0 {
                continue;
            }
            if threshold.is_met(g.count_ones() as usize, m.count_ones() as usize) {
                out.push(MajorityTerm { neighborhood: subset(m), behaving: subset(g) });
            }
        }
    }
    Ok(out)
}

/// Conjunction of `items` as a balanced tree; `true` when empty.
pub(crate) fn balanced_and(items: &[Arc<Formula>]) -> Arc<Formula> {
    match items {
        [] => Arc::new(Formula::Top),
        [one] => one.clone(),
        _ => {
            let (l, r) = items.split_at(items.len() / 2);
            Arc::new(Formula::And(balanced_and(l), balanced_and(r)))
        }
    }
}

/// Disjunction of `items` as a balanced tree; `false` when empty.
pub(crate) fn balanced_or(items: &[Arc<Formula>]) -> Arc<Formula> {
    match items {
        [] => Arc::new(Formula::bottom()),
        [one] => one.clone(),
        _ => {
            let (l, r) = items.split_at(items.len() / 2);
            Arc::new(Formula::or(balanced_or(l), balanced_or(r)))
        }
    }
}

/// Builds majority formulas, sharing atoms and earlier expansions.
pub(crate) struct MajorityBuilder {
    agents: BTreeSet<AgentId>,
    terms: Vec<MajorityTerm>,
    nbr_literals: BTreeMap<(AgentId, AgentId), (Arc<Formula>, Arc<Formula>)>,
    /// `behaves[k][b]`: formula for "`b` behaves `k` frames ahead".
    behaves: Vec<BTreeMap<AgentId, Arc<Formula>>>,
    /// `expanded[k][a]`: expansion of `MAJ^k(a)`.
    expanded: Vec<BTreeMap<AgentId, Arc<Formula>>>,
}

impl MajorityBuilder {
    pub(crate) fn new(agents: &BTreeSet<AgentId>, threshold: Threshold, guard: usize) -> Result<Self, TranslateError> {
        let terms = majority_terms(agents, threshold, guard)?;
        let beh0 = agents.iter().map(|a| (a.clone(), Arc::new(Formula::Beh(a.clone())))).collect();
        Ok(MajorityBuilder {
            agents: agents.clone(),
            terms,
            nbr_literals: BTreeMap::new(),
            behaves: alloc::vec![beh0],
            expanded: Vec::new(),
        })
    }

    fn nbr(&mut self, a: &AgentId, b: &AgentId, positive: bool) -> Arc<Formula> {
        let (pos, neg) = self.nbr_literals.entry((a.clone(), b.clone())).or_insert_with(|| {
            let pos = Arc::new(Formula::Nbr(a.clone(), b.clone()));
            let neg = Arc::new(Formula::Not(pos.clone()));
            (pos, neg)
        });
        if positive {
            pos.clone()
        } else {
            neg.clone()
        }
    }

    /// Expansion of `MAJ^ahead(target)`: the majority formula with each
    /// `B(b)` replaced by "`b` behaves `ahead` frames from now", which is
    /// `B(b)` or-ed with the majority of every earlier step.
    pub(crate) fn expand(&mut self, target: &AgentId, ahead: u32) -> Result<Arc<Formula>, TranslateError> {
        if !self.agents.contains(target) {
            return Err(TranslateError::UnknownAgent(target.clone()));
        }
        let k = ahead as usize;
        while self.expanded.len() <= k {
            let level = self.expanded.len();
            // Expansions at `level` need behaviour at `level`, which needs
            // expansions at `level - 1`.
            while self.behaves.len() <= level {
                let prev = self.behaves.len() - 1;
                let agents: Vec<AgentId> = self.agents.iter().cloned().collect();
                let mut next = BTreeMap::new();
                for b in agents {
                    let was = self.behaves[prev][&b].clone();
                    let adopts = self.expanded[prev][&b].clone();
                    next.insert(b, Arc::new(Formula::or(was, adopts)));
                }
                self.behaves.push(next);
            }
            let agents: Vec<AgentId> = self.agents.iter().cloned().collect();
            let mut row = BTreeMap::new();
            for a in &agents {
                row.insert(a.clone(), self.build(a, level));
            }
            self.expanded.push(row);
        }
        Ok(self.expanded[k][target].clone())
    }

    fn build(&mut self, target: &AgentId, level: usize) -> Arc<Formula> {
        let terms = core::mem::take(&mut self.terms);
        let agents: Vec<AgentId> = self.agents.iter().cloned().collect();
        let mut disjuncts = Vec::with_capacity(terms.len());
        for term in &terms {
            let mut literals = Vec::with_capacity(agents.len() + term.behaving.len());
            for b in &agents {
                literals.push(self.nbr(target, b, term.neighborhood.contains(b)));
            }
            for b in &term.behaving {
                literals.push(self.behaves[level][b].clone());
            }
            disjuncts.push(balanced_and(&literals));
        }
        self.terms = terms;
        balanced_or(&disjuncts)
    }
}

/// The explicit majority formula for `target`.
pub fn majority_formula(
    agents: &BTreeSet<AgentId>,
    target: &AgentId,
    threshold: Threshold,
    guard: usize,
) -> Result<Formula, TranslateError> {
    let mut builder = MajorityBuilder::new(agents, threshold, guard)?;
    Ok(Arc::unwrap_or_clone(builder.expand(target, 0)?))
}

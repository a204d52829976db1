//! Next elimination and propositional evaluation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::cost::{CostModel, CostValue};
use super::majority::{MajorityBuilder, DEFAULT_EXPANSION_GUARD};
use super::{PropFormula, TranslateError};
use crate::formula::{node_key, Formula};
use crate::model::{AgentId, BehaviorSet, Network};
use crate::rational::Threshold;
use crate::semantics::EvalError;

/// The rewrite applied to `X f`, named by the shape of `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// `X true -> true`
    NextTop,
    /// `X N(a,b) -> N(a,b)`
    NextNbr,
    /// `X B(a) -> B(a) | MAJ(a)`
    NextBeh,
    /// `X MAJ^k(a) -> MAJ^(k+1)(a)`
    NextMajority,
    /// `X !f -> !X f`
    NextNot,
    /// `X (f & g) -> X f & X g`
    NextAnd,
    /// `X X f -> X t(X f)`
    NextNext,
}

impl Clause {
    pub const ALL: [Clause; 7] = [
        Clause::NextTop,
        Clause::NextNbr,
        Clause::NextBeh,
        Clause::NextMajority,
        Clause::NextNot,
        Clause::NextAnd,
        Clause::NextNext,
    ];
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::NextTop => "X true",
            Clause::NextNbr => "X N",
            Clause::NextBeh => "X B",
            Clause::NextMajority => "X MAJ",
            Clause::NextNot => "X !",
            Clause::NextAnd => "X &",
            Clause::NextNext => "X X",
        })
    }
}

/// How many times each clause fired and whether each firing was checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteStats {
    pub applied: BTreeMap<Clause, u64>,
    /// Rewrites whose cost decrease was confirmed.
    pub checked: u64,
    /// Rewrites whose left side saturated the cost counter.
    pub unchecked: u64,
}

impl RewriteStats {
    pub fn total(&self) -> u64 {
        self.applied.values().sum()
    }

    pub fn count(&self, clause: Clause) -> u64 {
        self.applied.get(&clause).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Replace majority atoms by their explicit propositional expansion.
    pub expand_majority: bool,
    /// Largest agent count for which expansion is attempted.
    pub guard: usize,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions { expand_majority: false, guard: DEFAULT_EXPANSION_GUARD }
    }
}

#[derive(Clone, Debug)]
pub struct Translation {
    pub formula: PropFormula,
    pub stats: RewriteStats,
}

type Memo = BTreeMap<usize, Arc<Formula>>;

struct Translator {
    costs: CostModel,
    /// `t(f)` by node.
    plain: Memo,
    /// `t(X f)` by the node `f`.
    next: Memo,
    stats: RewriteStats,
}

impl Translator {
    fn new(n_agents: usize) -> Self {
        Translator {
            costs: CostModel::new(n_agents),
            plain: Memo::new(),
            next: Memo::new(),
            stats: RewriteStats::default(),
        }
    }

    /// Confirms that rewriting `X f` into something of cost `after` is a
    /// strict decrease.
    fn record(&mut self, clause: Clause, f: &Formula, after: CostValue) -> Result<(), TranslateError> {
        *self.stats.applied.entry(clause).or_default() += 1;
        let before = self.costs.cost_of_next(f);
        if before.is_saturated() {
            self.stats.unchecked += 1;
            return Ok(());
        }
        if before <= after {
            return Err(TranslateError::CostIncrease { clause, before, after });
        }
        self.stats.checked += 1;
        Ok(())
    }

    fn plain(&mut self, f: &Arc<Formula>) -> Result<Arc<Formula>, TranslateError> {
        if let Some(done) = self.plain.get(&node_key(f)) {
            return Ok(done.clone());
        }
        let out = match &**f {
            Formula::Top | Formula::Nbr(..) | Formula::Beh(_) | Formula::MajorityGE { .. } => f.clone(),
            Formula::Not(g) => {
                let tg = self.plain(g)?;
                if Arc::ptr_eq(g, &tg) {
                    f.clone()
                } else {
                    Arc::new(Formula::Not(tg))
                }
            }
            Formula::And(l, r) => {
                let (tl, tr) = (self.plain(l)?, self.plain(r)?);
                if Arc::ptr_eq(l, &tl) && Arc::ptr_eq(r, &tr) {
                    f.clone()
                } else {
                    Arc::new(Formula::And(tl, tr))
                }
            }
            Formula::Next(g) => self.next(g)?,
            Formula::Until(..) => return Err(TranslateError::UntilPresent),
        };
        self.plain.insert(node_key(f), out.clone());
        Ok(out)
    }

    /// `t(X f)`.
    fn next(&mut self, f: &Arc<Formula>) -> Result<Arc<Formula>, TranslateError> {
        if let Some(done) = self.next.get(&node_key(f)) {
            return Ok(done.clone());
        }
        let out = match &**f {
            Formula::Top => {
                let out = Arc::new(Formula::Top);
                self.record(Clause::NextTop, f, CostValue(1))?;
                out
            }
            Formula::Nbr(..) => {
                self.record(Clause::NextNbr, f, CostValue(1))?;
                f.clone()
            }
            Formula::Beh(a) => {
                let out = Arc::new(Formula::or(f.clone(), Formula::majority(a.clone())));
                let after = self.costs.cost_in(&out, false);
                self.record(Clause::NextBeh, f, after)?;
                out
            }
            Formula::MajorityGE { agent, ahead } => {
                let out = Arc::new(Formula::MajorityGE { agent: agent.clone(), ahead: ahead.saturating_add(1) });
                self.record(Clause::NextMajority, f, self.costs.majority())?;
                out
            }
            Formula::Not(g) => {
                let after = self.costs.cost_of_next(g).plus_one();
                self.record(Clause::NextNot, f, after)?;
                Arc::new(Formula::Not(self.next(g)?))
            }
            Formula::And(l, r) => {
                let after = self.costs.cost_of_next(l).max(self.costs.cost_of_next(r)).plus_one();
                self.record(Clause::NextAnd, f, after)?;
                let (tl, tr) = (self.next(l)?, self.next(r)?);
                Arc::new(Formula::And(tl, tr))
            }
            Formula::Next(g) => {
                let inner = self.next(g)?;
                let after = self.costs.cost_of_next(&inner);
                self.record(Clause::NextNext, f, after)?;
                self.next(&inner)?
            }
            Formula::Until(..) => return Err(TranslateError::UntilPresent),
        };
        self.next.insert(node_key(f), out.clone());
        Ok(out)
    }
}

/// Replaces every majority atom by its explicit expansion.
fn expand_majorities(
    f: &Arc<Formula>,
    builder: &mut MajorityBuilder,
    memo: &mut Memo,
) -> Result<Arc<Formula>, TranslateError> {
    if let Some(done) = memo.get(&node_key(f)) {
        return Ok(done.clone());
    }
    let out = match &**f {
        Formula::MajorityGE { agent, ahead } => builder.expand(agent, *ahead)?,
        Formula::Not(g) => Arc::new(Formula::Not(expand_majorities(g, builder, memo)?)),
        Formula::And(l, r) => {
            let l = expand_majorities(l, builder, memo)?;
            Arc::new(Formula::And(l, expand_majorities(r, builder, memo)?))
        }
        _ => f.clone(),
    };
    memo.insert(node_key(f), out.clone());
    Ok(out)
}

/// Translates an Until-free formula, reporting the rewrites performed.
pub fn to_propositional_with(
    f: &Formula,
    agents: &BTreeSet<AgentId>,
    threshold: Threshold,
    options: TranslateOptions,
) -> Result<Translation, TranslateError> {
    let root = Arc::new(f.clone());
    let mut translator = Translator::new(agents.len());
    let mut out = translator.plain(&root)?;
    if options.expand_majority {
        let mut builder = MajorityBuilder::new(agents, threshold, options.guard)?;
        out = expand_majorities(&out, &mut builder, &mut Memo::new())?;
    }
    let stats = translator.stats;
    // The memo tables key on nodes of `root` and `out`; drop them first.
    drop(translator.plain);
    drop(translator.next);
    Ok(Translation { formula: PropFormula(Arc::unwrap_or_clone(out)), stats })
}

/// Translates an Until-free formula, keeping majority atoms.
pub fn to_propositional(
    f: &Formula,
    agents: &BTreeSet<AgentId>,
    threshold: Threshold,
) -> Result<PropFormula, TranslateError> {
    to_propositional_with(f, agents, threshold, TranslateOptions::default()).map(|t| t.formula)
}

/// Evaluates a propositional formula on one behavior set.
///
/// `MAJ^k(a)` asks whether `a`'s behaving-neighbor fraction meets the
/// threshold after `k` adoption rounds starting from `b`.
pub fn eval_prop(f: &Formula, b: &BehaviorSet, network: &Network, threshold: Threshold) -> Result<bool, EvalError> {
    PropEval { network, threshold, rounds: alloc::vec![b.as_set().clone()], memo: BTreeMap::new() }.eval(f)
}

struct PropEval<'a> {
    network: &'a Network,
    threshold: Threshold,
    /// `rounds[k]`: agents behaving after `k` rounds.
    rounds: Vec<BTreeSet<AgentId>>,
    memo: BTreeMap<usize, bool>,
}

impl PropEval<'_> {
    fn known(&self, a: &AgentId) -> Result<(), EvalError> {
        if self.network.contains_agent(a) {
            Ok(())
        } else {
            Err(EvalError::UnknownAgent(a.clone()))
        }
    }

    fn majority(&self, behaving: &BTreeSet<AgentId>, a: &AgentId) -> bool {
        let nbrs = self.network.neighbors(a).map(|n| n.iter()).into_iter().flatten();
        let (mut total, mut count) = (0, 0);
        for c in nbrs {
            total += 1;
            if behaving.contains(c) {
                count += 1;
            }
        }
        self.threshold.is_met(count, total)
    }

    fn round(&mut self, k: usize) -> &BTreeSet<AgentId> {
        while self.rounds.len() <= k {
            let prev = self.rounds.last().expect("round 0 is present");
            let next: BTreeSet<AgentId> =
                self.network.agents().filter(|c| prev.contains(*c) || self.majority(prev, c)).cloned().collect();
            self.rounds.push(next);
        }
        &self.rounds[k]
    }

    fn eval(&mut self, f: &Formula) -> Result<bool, EvalError> {
        if let Some(&v) = self.memo.get(&node_key(f)) {
            return Ok(v);
        }
        let v = match f {
            Formula::Top => true,
            Formula::Beh(a) => {
                self.known(a)?;
                self.rounds[0].contains(a)
            }
            Formula::Nbr(a, b) => {
                self.known(a)?;
                self.known(b)?;
                self.network.is_neighbor(a, b)
            }
            Formula::MajorityGE { agent, ahead } => {
                self.known(agent)?;
                let behaving = self.round(*ahead as usize).clone();
                self.majority(&behaving, agent)
            }
            Formula::Not(g) => !self.eval(g)?,
            Formula::And(l, r) => self.eval(l)? && self.eval(r)?,
            Formula::Next(_) | Formula::Until(..) => return Err(EvalError::TemporalNode),
        };
        self.memo.insert(node_key(f), v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{agents, behavior, figure1, model};
    use crate::formula::parse_formula;
    use crate::model::trace;
    use crate::semantics::Semantics;
    use crate::translate::{cost, eliminate_until};

    fn p(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn id(name: &str) -> AgentId {
        AgentId::new(name).unwrap()
    }

    fn half() -> Threshold {
        Threshold::at_least("1/2".parse().unwrap())
    }

    fn translate(text: &str) -> Translation {
        to_propositional_with(&p(text), &agents(&["a", "b", "c"]), half(), TranslateOptions::default()).unwrap()
    }

    #[test]
    fn stated_rewrites() {
        assert_eq!(translate("X N(a,b)").formula.into_formula(), p("N(a,b)"));
        assert_eq!(
            translate("X B(a)").formula.into_formula(),
            Formula::or(Formula::beh(id("a")), Formula::majority(id("a")))
        );
        assert_eq!(translate("X X N(a,b)").formula.into_formula(), p("N(a,b)"));
        assert_eq!(translate("X true").formula.into_formula(), Formula::Top);
        assert_eq!(translate("B(a) & !N(a,b)").formula.into_formula(), p("B(a) & !N(a,b)"));
    }

    #[test]
    fn next_next_uses_lookahead_majority() {
        let t = translate("X X B(a)").formula.into_formula();
        let a = id("a");
        let first = Formula::or(Formula::beh(a.clone()), Formula::majority(a.clone()));
        let expected =
            Formula::not(Formula::and(Formula::not(first), Formula::not(Formula::MajorityGE { agent: a, ahead: 1 })));
        assert_eq!(t, expected);
    }

    #[test]
    fn every_clause_is_checked() {
        let t = translate("X X (B(a) & !X N(a,b) & X true)");
        for clause in Clause::ALL {
            assert!(t.stats.count(clause) > 0, "{clause} never fired");
        }
        assert_eq!(t.stats.unchecked, 0);
        assert_eq!(t.stats.checked, t.stats.total());
    }

    #[test]
    fn until_is_rejected() {
        let r = to_propositional(&p("B(a) U B(b)"), &agents(&["a", "b"]), half());
        assert_eq!(r.unwrap_err(), TranslateError::UntilPresent);
    }

    #[test]
    fn translation_does_not_grow_cost() {
        for text in ["X B(a)", "X X B(a)", "X !(B(a) & X B(b))", "X X X N(a,b)"] {
            let f = p(text);
            let t = translate(text).formula.into_formula();
            assert!(cost(&t, 3) < cost(&f, 3), "{text}");
        }
    }

    #[test]
    fn two_agent_lookahead() {
        let m = model(&["a", "b"], &[("a", "b")], "1/2", &["a"], false);
        let t = trace(&m).unwrap();
        let f = eliminate_until(&p("X B(b)"), 2);
        let prop = to_propositional(&f, m.agents(), m.threshold()).unwrap();
        assert!(eval_prop(prop.as_formula(), t.frame(0), m.network(), m.threshold()).unwrap());
    }

    #[test]
    fn atoms() {
        let m = figure1();
        let b = behavior(&["a"]);
        let eval = |f: &Formula| eval_prop(f, &b, m.network(), m.threshold());
        assert!(eval(&Formula::Top).unwrap());
        assert!(eval(&p("B(a)")).unwrap());
        assert!(!eval(&p("B(c)")).unwrap());
        assert!(eval(&p("N(c,a)")).unwrap());
        assert!(eval(&Formula::majority(id("c"))).unwrap());
        assert!(!eval(&Formula::majority(id("d"))).unwrap());
        assert_eq!(eval(&p("X B(a)")), Err(EvalError::TemporalNode));
        assert!(matches!(eval(&p("B(z)")), Err(EvalError::UnknownAgent(_))));
    }

    #[test]
    fn lookahead_majority_matches_frames() {
        let m = figure1();
        let t = trace(&m).unwrap();
        let sem = Semantics::new(&m, &t).with_majority();
        for agent in m.agents() {
            for ahead in 0..6 {
                let f = Formula::MajorityGE { agent: agent.clone(), ahead };
                for i in t.positions() {
                    let prop = eval_prop(&f, t.frame(i), m.network(), m.threshold()).unwrap();
                    assert_eq!(prop, sem.eval_at(i, &f).unwrap(), "{f} at {i}");
                }
            }
        }
    }

    #[test]
    fn expanded_and_atomic_majority_agree() {
        let m = figure1();
        let t = trace(&m).unwrap();
        for text in ["X B(d)", "X X B(e)", "X X X !(B(f) & B(b))", "G (B(b) -> F B(d))"] {
            let f = eliminate_until(&p(text), m.agent_count());
            let atomic = to_propositional(&f, m.agents(), m.threshold()).unwrap();
            let options = TranslateOptions { expand_majority: true, ..TranslateOptions::default() };
            let expanded = to_propositional_with(&f, m.agents(), m.threshold(), options).unwrap().formula;
            assert!(!expanded.as_formula().any_node(|g| matches!(g, Formula::MajorityGE { .. })));
            for i in t.positions() {
                let frame = t.frame(i);
                assert_eq!(
                    eval_prop(atomic.as_formula(), frame, m.network(), m.threshold()).unwrap(),
                    eval_prop(expanded.as_formula(), frame, m.network(), m.threshold()).unwrap(),
                    "{text} at {i}"
                );
            }
        }
    }
}

//! Direct evaluation of formulas over the diffusion path.
//!
//! This is the reference engine: each connective is evaluated exactly as
//! its satisfaction clause reads, recursing on positions. Positions past
//! the fixed point are clamped to it, since every later frame equals it.

use alloc::collections::BTreeSet;
use core::fmt;

use crate::formula::{node_key, Formula};
use crate::model::{meets_threshold, AgentId, Model, Trace};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("formula names unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("majority atoms are not accepted here")]
    MajorityNotAllowed,
    #[error("temporal operator in a propositional formula")]
    TemporalNode,
}

/// The set of positions where a formula holds.
///
/// The path is stationary from the fixed point `f` on, so the infinite set
/// is captured by its members up to `f` plus whether it holds at `f`
/// (and therefore everywhere after).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SatSet {
    pub prefix_positions: BTreeSet<usize>,
    pub holds_at_tail: bool,
}

impl SatSet {
    /// Membership for any position, including those past the fixed point.
    pub fn contains(&self, i: usize, fixed_point: usize) -> bool {
        if i >= fixed_point {
            self.holds_at_tail
        } else {
            self.prefix_positions.contains(&i)
        }
    }
}

impl fmt::Display for SatSet {
    /// `{0,2,3} (+tail)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.prefix_positions.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")?;
        if self.holds_at_tail {
            f.write_str(" (+tail)")?;
        }
        Ok(())
    }
}

/// Rejects formulas naming agents outside the model, and majority atoms
/// unless `allow_majority` is set.
pub(crate) fn check_formula(model: &Model, f: &Formula, allow_majority: bool) -> Result<(), EvalError> {
    fn go(model: &Model, f: &Formula, allow_majority: bool, seen: &mut BTreeSet<usize>) -> Result<(), EvalError> {
        if !seen.insert(node_key(f)) {
            return Ok(());
        }
        let known = |a: &AgentId| {
            if model.agents().contains(a) {
                Ok(())
            } else {
                Err(EvalError::UnknownAgent(a.clone()))
            }
        };
        match f {
            Formula::Top => Ok(()),
            Formula::Beh(a) => known(a),
            Formula::Nbr(a, b) => known(a).and(known(b)),
            Formula::MajorityGE { agent, .. } => {
                if allow_majority {
                    known(agent)
                } else {
                    Err(EvalError::MajorityNotAllowed)
                }
            }
            _ => f.children().try_for_each(|c| go(model, c, allow_majority, seen)),
        }
    }
    go(model, f, allow_majority, &mut BTreeSet::new())
}

/// Evaluator bound to one model and its trace.
#[derive(Clone, Copy)]
pub struct Semantics<'a> {
    model: &'a Model,
    trace: &'a Trace,
    allow_majority: bool,
}

impl<'a> Semantics<'a> {
    pub fn new(model: &'a Model, trace: &'a Trace) -> Self {
        Semantics { model, trace, allow_majority: false }
    }

    /// Also evaluate `MAJ^k(a)` as the threshold test on frame `i + k`.
    pub fn with_majority(mut self) -> Self {
        self.allow_majority = true;
        self
    }

    pub fn eval_at(&self, i: usize, f: &Formula) -> Result<bool, EvalError> {
        check_formula(self.model, f, self.allow_majority)?;
        Ok(self.holds(self.trace.clamp(i), f))
    }

    pub fn satisfaction_set(&self, f: &Formula) -> Result<SatSet, EvalError> {
        check_formula(self.model, f, self.allow_majority)?;
        let last = self.trace.fixed_point_index();
        Ok(SatSet {
            prefix_positions: (0..=last).filter(|&i| self.holds(i, f)).collect(),
            holds_at_tail: self.holds(last, f),
        })
    }

    /// `i` is already clamped and `f` checked.
    fn holds(&self, i: usize, f: &Formula) -> bool {
        let last = self.trace.fixed_point_index();
        match f {
            Formula::Top => true,
            Formula::Beh(a) => self.trace.frame(i).contains(a),
            Formula::Nbr(a, b) => self.model.network().is_neighbor(a, b),
            Formula::Not(g) => !self.holds(i, g),
            Formula::And(l, r) => self.holds(i, l) && self.holds(i, r),
            Formula::Next(g) => self.holds((i + 1).min(last), g),
            Formula::Until(l, r) => {
                // Past `last` every position looks like `last`, so if the
                // search reaches it without a witness there is none.
                for k in i..=last {
                    if self.holds(k, r) {
                        return true;
                    }
                    if !self.holds(k, l) {
                        return false;
                    }
                }
                false
            }
            Formula::MajorityGE { agent, ahead } => {
                let frame = self.trace.frame(i.saturating_add(*ahead as usize));
                meets_threshold(self.model.network(), self.model.threshold(), frame, agent)
            }
        }
    }
}

pub fn eval_at(model: &Model, trace: &Trace, i: usize, f: &Formula) -> Result<bool, EvalError> {
    Semantics::new(model, trace).eval_at(i, f)
}

pub fn satisfaction_set(model: &Model, trace: &Trace, f: &Formula) -> Result<SatSet, EvalError> {
    Semantics::new(model, trace).satisfaction_set(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{figure1, figure2};
    use crate::formula::parse_formula;
    use crate::model::trace;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    fn holds(model: &Model, i: usize, text: &str) -> bool {
        let t = trace(model).unwrap();
        eval_at(model, &t, i, &parse_formula(text).unwrap()).unwrap()
    }

    fn sat(model: &Model, text: &str) -> SatSet {
        let t = trace(model).unwrap();
        satisfaction_set(model, &t, &parse_formula(text).unwrap()).unwrap()
    }

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn figure_examples() {
        let (m1, m2) = (figure1(), figure2());
        assert!(holds(&m1, 0, "F B(d)"));
        assert!(!holds(&m2, 0, "F B(d)"));
        assert!(holds(&m2, 0, "G !B(d)"));
        assert!(!holds(&m1, 0, "G !B(d)"));
        assert!(holds(&m1, 0, "!(B(d) & B(e) & B(f)) U B(d)"));
        assert!(!holds(&m2, 0, "!(B(d) & B(e) & B(f)) U B(d)"));
    }

    #[test]
    fn diffusion_rule_for_d_holds_everywhere() {
        let rule = "(N(b,d) & B(b)) | (N(f,d) & B(f)) -> X B(d)";
        for m in [figure1(), figure2()] {
            let s = sat(&m, rule);
            let f = trace(&m).unwrap().fixed_point_index();
            assert_eq!(s.prefix_positions, (0..=f).collect());
            assert!(s.holds_at_tail);
        }
    }

    #[test]
    fn satisfaction_sets() {
        assert_eq!(sat(&figure1(), "B(c)"), SatSet { prefix_positions: set(&[1, 2, 3, 4]), holds_at_tail: true });
        assert_eq!(sat(&figure1(), "true"), SatSet { prefix_positions: set(&[0, 1, 2, 3, 4]), holds_at_tail: true });
        assert_eq!(sat(&figure2(), "B(d)"), SatSet::default());
        assert_eq!(sat(&figure1(), "B(c)").to_string(), "{1,2,3,4} (+tail)");
        assert_eq!(sat(&figure2(), "B(d)").to_string(), "{}");
    }

    #[test]
    fn positions_clamp_past_fixed_point() {
        let m = figure1();
        let t = trace(&m).unwrap();
        for text in ["X B(d)", "B(a) U B(d)", "!B(b)", "G B(d)"] {
            let f = parse_formula(text).unwrap();
            let at_f = eval_at(&m, &t, 4, &f).unwrap();
            for i in 5..9 {
                assert_eq!(eval_at(&m, &t, i, &f).unwrap(), at_f, "{text} at {i}");
            }
        }
    }

    #[test]
    fn next_at_each_position() {
        let m = figure1();
        let t = trace(&m).unwrap();
        let f = parse_formula("X B(b)").unwrap();
        let got: Vec<bool> = t.positions().map(|i| eval_at(&m, &t, i, &f).unwrap()).collect();
        assert_eq!(got, [false, false, true, true, true]);
    }

    #[test]
    fn unknown_agents_and_majority_are_rejected() {
        let m = figure1();
        let t = trace(&m).unwrap();
        let f = parse_formula("B(z)").unwrap();
        assert!(matches!(eval_at(&m, &t, 0, &f), Err(EvalError::UnknownAgent(_))));
        let maj = Formula::majority(AgentId::new("c").unwrap());
        assert_eq!(eval_at(&m, &t, 0, &maj), Err(EvalError::MajorityNotAllowed));
        let sem = Semantics::new(&m, &t).with_majority();
        assert!(sem.eval_at(0, &maj).unwrap());
        let ahead = Formula::MajorityGE { agent: AgentId::new("d").unwrap(), ahead: 2 };
        assert!(!sem.eval_at(0, &ahead).unwrap());
        assert!(sem.eval_at(1, &ahead).unwrap());
    }
}

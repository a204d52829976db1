//! Labeling model checker.
//!
//! Every position of the trace gets the set of subformulas that hold there.
//! Atoms are labeled from the frames and the network; compound subformulas
//! are then labeled bottom-up, one pass per subformula. The last position
//! is its own successor, since the path never changes after it.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::{subformulas, Formula};
use crate::model::{Model, Trace};
use crate::semantics::{check_formula, EvalError, SatSet};

/// Per-position labels: which registered formulas hold where.
#[derive(Clone, Debug)]
pub struct LabelMap {
    formulas: Vec<Formula>,
    index: BTreeMap<Formula, usize>,
    /// `columns[k][i]`: formula `k` holds at position `i`.
    columns: Vec<Vec<bool>>,
    positions: usize,
    visits: usize,
}

impl LabelMap {
    fn new(positions: usize) -> Self {
        LabelMap { formulas: Vec::new(), index: BTreeMap::new(), columns: Vec::new(), positions, visits: 0 }
    }

    fn slot(&mut self, f: &Formula) -> usize {
        if let Some(&k) = self.index.get(f) {
            return k;
        }
        let k = self.formulas.len();
        self.formulas.push(f.clone());
        self.index.insert(f.clone(), k);
        self.columns.push(vec![false; self.positions]);
        k
    }

    fn column(&self, f: &Formula) -> &[bool] {
        &self.columns[self.index[f]]
    }

    /// Number of positions `0..=f`.
    pub fn positions(&self) -> usize {
        self.positions
    }

    /// Whether `f` was labeled at position `i`. Unregistered formulas are
    /// never labeled.
    pub fn holds(&self, i: usize, f: &Formula) -> bool {
        self.index.get(f).is_some_and(|&k| self.columns[k].get(i).copied().unwrap_or(false))
    }

    /// Formulas labeled at position `i`, in registration order.
    pub fn labels_at(&self, i: usize) -> impl Iterator<Item = &Formula> + '_ {
        self.formulas.iter().zip(&self.columns).filter(move |(_, col)| col[i]).map(|(f, _)| f)
    }

    /// (subformula, position) pairs processed by the labeling pass.
    pub fn visits(&self) -> usize {
        self.visits
    }
}

/// Labels every position with its true `B` atoms and true `N` atoms.
///
/// Atoms of `f` that are false everywhere are registered too, so that the
/// labeling pass can look them up.
pub fn init_labels(model: &Model, trace: &Trace, f: &Formula) -> Result<LabelMap, EvalError> {
    check_formula(model, f, false)?;
    let mut lm = LabelMap::new(trace.fixed_point_index() + 1);
    for a in model.agents() {
        let k = lm.slot(&Formula::Beh(a.clone()));
        for (i, frame) in trace.frames().iter().enumerate() {
            lm.columns[k][i] = frame.contains(a);
        }
    }
    for (a, b) in model.network().pairs() {
        let k = lm.slot(&Formula::Nbr(a.clone(), b.clone()));
        lm.columns[k].fill(true);
    }
    for g in subformulas(f) {
        if matches!(g, Formula::Nbr(..)) {
            lm.slot(&g);
        }
    }
    Ok(lm)
}

/// Runs the labeling checker for `f`.
pub fn check(model: &Model, trace: &Trace, f: &Formula) -> Result<LabelMap, EvalError> {
    let mut lm = init_labels(model, trace, f)?;
    let last = lm.positions - 1;
    for g in subformulas(f) {
        if matches!(g, Formula::Beh(_) | Formula::Nbr(..)) {
            continue;
        }
        let column: Vec<bool> = match &g {
            Formula::Top => vec![true; lm.positions],
            Formula::Not(c) => lm.column(c).iter().map(|v| !v).collect(),
            Formula::And(l, r) => {
                let (l, r) = (lm.column(l), lm.column(r));
                l.iter().zip(r).map(|(a, b)| *a && *b).collect()
            }
            Formula::Next(c) => {
                let c = lm.column(c);
                (0..=last).map(|i| c[(i + 1).min(last)]).collect()
            }
            Formula::Until(l, r) => {
                let (l, r) = (lm.column(l), lm.column(r));
                let mut out = vec![false; lm.positions];
                out[last] = r[last];
                for i in (0..last).rev() {
                    out[i] = r[i] || (l[i] && out[i + 1]);
                }
                out
            }
            Formula::Beh(_) | Formula::Nbr(..) => unreachable!("atoms are labeled at init"),
            Formula::MajorityGE { .. } => return Err(EvalError::MajorityNotAllowed),
        };
        lm.visits += lm.positions;
        let k = lm.slot(&g);
        lm.columns[k] = column;
    }
    Ok(lm)
}

/// Reads `S(f)` off the labels.
pub fn s_set_from_labels(lm: &LabelMap, f: &Formula) -> SatSet {
    let last = lm.positions - 1;
    SatSet { prefix_positions: (0..=last).filter(|&i| lm.holds(i, f)).collect(), holds_at_tail: lm.holds(last, f) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{figure1, figure2, model};
    use crate::formula::parse_formula;
    use crate::model::{trace, AgentId};
    use crate::semantics::Semantics;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;

    fn labeled(model: &Model, text: &str) -> SatSet {
        let t = trace(model).unwrap();
        let f = parse_formula(text).unwrap();
        s_set_from_labels(&check(model, &t, &f).unwrap(), &f)
    }

    fn all(n: usize) -> BTreeSet<usize> {
        (0..n).collect()
    }

    #[test]
    fn initial_atoms() {
        let m = figure1();
        let t = trace(&m).unwrap();
        let lm = init_labels(&m, &t, &Formula::Top).unwrap();
        let at0: Vec<_> = lm.labels_at(0).collect();
        let beh: Vec<_> = at0.iter().filter(|f| matches!(f, Formula::Beh(_))).collect();
        assert_eq!(beh, [&&Formula::Beh(AgentId::new("a").unwrap())]);
        let nbrs = at0.iter().filter(|f| matches!(f, Formula::Nbr(..))).count();
        assert_eq!(nbrs, 16);

        let m2 = figure2();
        let t2 = trace(&m2).unwrap();
        let lm = init_labels(&m2, &t2, &Formula::Top).unwrap();
        let beh: Vec<_> = lm.labels_at(1).filter(|f| matches!(f, Formula::Beh(_))).map(|f| f.to_string()).collect();
        assert_eq!(beh, ["B(a)", "B(c)"]);
        assert_eq!(lm.labels_at(1).filter(|f| matches!(f, Formula::Nbr(..))).count(), 18);
    }

    #[test]
    fn empty_initial_has_only_network_atoms() {
        let m = model(&["a", "b", "c"], &[("a", "b"), ("b", "c")], "1/2", &[], false);
        let t = trace(&m).unwrap();
        let lm = init_labels(&m, &t, &Formula::Top).unwrap();
        assert!(lm.labels_at(0).all(|f| matches!(f, Formula::Nbr(..))));
        assert_eq!(lm.labels_at(0).count(), 4);
    }

    #[test]
    fn figure_examples() {
        let s = labeled(&figure1(), "X B(c)");
        assert_eq!(s.prefix_positions, all(5));
        assert!(s.holds_at_tail);
        assert_eq!(labeled(&figure2(), "G !B(d)").prefix_positions, all(2));
        assert_eq!(labeled(&figure1(), "true").prefix_positions, all(5));
        assert_eq!(labeled(&figure1(), "B(c)").prefix_positions, [1, 2, 3, 4].into_iter().collect());
        assert_eq!(labeled(&figure2(), "B(d)"), SatSet::default());
    }

    #[test]
    fn next_b_c_matches_direct_semantics() {
        let m = figure1();
        let t = trace(&m).unwrap();
        let f = parse_formula("X B(c)").unwrap();
        let sem = Semantics::new(&m, &t);
        let lm = check(&m, &t, &f).unwrap();
        for i in t.positions() {
            assert_eq!(lm.holds(i, &f), sem.eval_at(i, &f).unwrap());
        }
    }

    #[test]
    fn until_figure_formula() {
        assert!(labeled(&figure1(), "!(B(d) & B(e) & B(f)) U B(d)").prefix_positions.contains(&0));
        assert!(!labeled(&figure2(), "!(B(d) & B(e) & B(f)) U B(d)").holds_at_tail);
    }

    #[test]
    fn absent_neighbor_atom_is_false() {
        let s = labeled(&figure1(), "N(a,b)");
        assert_eq!(s, SatSet::default());
        let s = labeled(&figure1(), "!N(a,b)");
        assert_eq!(s.prefix_positions, all(5));
    }

    #[test]
    fn visit_count_is_linear() {
        let m = figure1();
        let t = trace(&m).unwrap();
        let f = parse_formula("G (B(a) -> F B(d))").unwrap();
        let lm = check(&m, &t, &f).unwrap();
        let compound = subformulas(&f).iter().filter(|g| !matches!(g, Formula::Beh(_) | Formula::Nbr(..))).count();
        assert_eq!(lm.visits(), compound * 5);
    }

    #[test]
    fn errors() {
        let m = figure1();
        let t = trace(&m).unwrap();
        assert!(matches!(check(&m, &t, &parse_formula("B(q)").unwrap()), Err(EvalError::UnknownAgent(_))));
        let maj = Formula::majority(AgentId::new("a").unwrap());
        assert_eq!(check(&m, &t, &maj).unwrap_err(), EvalError::MajorityNotAllowed);
    }
}

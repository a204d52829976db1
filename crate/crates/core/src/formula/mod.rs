//! LTL-SN formulas.
//!
//! Only the core connectives are represented; `false`, `|`, `->`, `F` and
//! `G` are expanded by the parser and the helper constructors. Children are
//! reference-counted so that translations which repeat a subformula many
//! times (Until expansion in particular) share it instead of copying it.

mod parser;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::model::AgentId;

pub use parser::{parse_formula, parse_formula_with, FormulaError, ParseOptions};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    /// `N(a,b)`: `b` is a neighbor of `a`.
    Nbr(AgentId, AgentId),
    /// `B(a)`: `a` exhibits the behavior.
    Beh(AgentId),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Next(Arc<Formula>),
    Until(Arc<Formula>, Arc<Formula>),
    /// `agent`'s behaving-neighbor fraction meets the threshold `ahead`
    /// frames from now. Produced only by translation; `ahead = 0` is the
    /// plain majority abbreviation.
    MajorityGE {
        agent: AgentId,
        ahead: u32,
    },
}

impl Formula {
    pub fn beh(agent: AgentId) -> Formula {
        Formula::Beh(agent)
    }

    pub fn nbr(a: AgentId, b: AgentId) -> Formula {
        Formula::Nbr(a, b)
    }

    pub fn majority(agent: AgentId) -> Formula {
        Formula::MajorityGE { agent, ahead: 0 }
    }

    pub fn not(f: impl Into<Arc<Formula>>) -> Formula {
        Formula::Not(f.into())
    }

    pub fn and(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Formula {
        Formula::And(l.into(), r.into())
    }

    pub fn next(f: impl Into<Arc<Formula>>) -> Formula {
        Formula::Next(f.into())
    }

    pub fn until(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Formula {
        Formula::Until(l.into(), r.into())
    }

    /// `¬⊤`
    pub fn bottom() -> Formula {
        Formula::not(Formula::Top)
    }

    /// `¬(¬l ∧ ¬r)`
    pub fn or(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Formula {
        Formula::not(Formula::and(Formula::Not(l.into()), Formula::Not(r.into())))
    }

    /// `¬(l ∧ ¬r)`
    pub fn implies(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Formula {
        Formula::not(Formula::and(l, Formula::Not(r.into())))
    }

    /// `⊤ U f`
    pub fn eventually(f: impl Into<Arc<Formula>>) -> Formula {
        Formula::until(Formula::Top, f)
    }

    /// `¬(⊤ U ¬f)`
    pub fn always(f: impl Into<Arc<Formula>>) -> Formula {
        Formula::not(Formula::eventually(Formula::Not(f.into())))
    }

    /// `l ↔ r`, as `(l → r) ∧ (r → l)`.
    pub fn iff(l: impl Into<Arc<Formula>>, r: impl Into<Arc<Formula>>) -> Formula {
        let (l, r) = (l.into(), r.into());
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Top | Formula::Nbr(..) | Formula::Beh(_) | Formula::MajorityGE { .. })
    }

    pub fn children(&self) -> impl Iterator<Item = &Arc<Formula>> {
        let (a, b) = match self {
            Formula::Not(c) | Formula::Next(c) => (Some(c), None),
            Formula::And(l, r) | Formula::Until(l, r) => (Some(l), Some(r)),
            _ => (None, None),
        };
        a.into_iter().chain(b)
    }

    /// Agents named anywhere in the formula.
    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        collect_agents(self, &mut seen, &mut out);
        out
    }

    /// Whether any node satisfies `pred`. Shared nodes are visited once.
    pub fn any_node(&self, pred: impl Fn(&Formula) -> bool) -> bool {
        fn go(f: &Formula, pred: &dyn Fn(&Formula) -> bool, seen: &mut BTreeSet<usize>) -> bool {
            if !seen.insert(node_key(f)) {
                return false;
            }
            pred(f) || f.children().any(|c| go(c, pred, seen))
        }
        go(self, &pred, &mut BTreeSet::new())
    }

    pub fn is_temporal(&self) -> bool {
        self.any_node(|f| matches!(f, Formula::Next(_) | Formula::Until(..)))
    }
}

/// Identity of a node for memoization over shared subterms.
pub(crate) fn node_key(f: &Formula) -> usize {
    f as *const Formula as usize
}

fn collect_agents(f: &Formula, seen: &mut BTreeSet<usize>, out: &mut BTreeSet<AgentId>) {
    if !seen.insert(node_key(f)) {
        return;
    }
    match f {
        Formula::Nbr(a, b) => {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        Formula::Beh(a) | Formula::MajorityGE { agent: a, .. } => {
            out.insert(a.clone());
        }
        _ => f.children().for_each(|c| collect_agents(c, seen, out)),
    }
}

/// Number of nodes in the formula read as a tree; atoms count 1.
/// Saturates at `usize::MAX` for heavily shared formulas.
pub fn size(f: &Formula) -> usize {
    fn go(f: &Formula, memo: &mut BTreeMap<usize, usize>) -> usize {
        if let Some(&n) = memo.get(&node_key(f)) {
            return n;
        }
        let n = f.children().fold(1usize, |acc, c| acc.saturating_add(go(c, memo)));
        memo.insert(node_key(f), n);
        n
    }
    go(f, &mut BTreeMap::new())
}

/// All distinct subformulas (including `f`), children before parents and
/// in ascending size.
pub fn subformulas(f: &Formula) -> Vec<Formula> {
    fn go<'a>(
        f: &'a Formula,
        visited: &mut BTreeSet<usize>,
        distinct: &mut BTreeSet<&'a Formula>,
        out: &mut Vec<&'a Formula>,
    ) {
        if !visited.insert(node_key(f)) {
            return;
        }
        for c in f.children() {
            go(c, visited, distinct, out);
        }
        if distinct.insert(f) {
            out.push(f);
        }
    }
    let mut out = Vec::new();
    go(f, &mut BTreeSet::new(), &mut BTreeSet::new(), &mut out);
    let mut sized: Vec<(usize, Formula)> = out.into_iter().map(|g| (size(g), g.clone())).collect();
    // Stable: post-order already puts children first among equal sizes.
    sized.sort_by_key(|(n, _)| *n);
    sized.into_iter().map(|(_, g)| g).collect()
}

/// Fully parenthesized concrete syntax; `parse_formula(render(f)) == f`
/// for every formula without majority atoms.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, None).expect("writing to a String");
    out
}

fn write_formula(out: &mut String, f: &Formula, names: Option<&BTreeMap<usize, usize>>) -> fmt::Result {
    if let Some(id) = names.and_then(|n| n.get(&node_key(f))) {
        return write!(out, "#{id}");
    }
    match f {
        Formula::Top => out.write_str("true"),
        Formula::Nbr(a, b) => write!(out, "N({a},{b})"),
        Formula::Beh(a) => write!(out, "B({a})"),
        Formula::MajorityGE { agent, ahead: 0 } => write!(out, "MAJ({agent})"),
        Formula::MajorityGE { agent, ahead } => write!(out, "MAJ^{ahead}({agent})"),
        Formula::Not(c) => {
            out.write_str("!")?;
            write_formula(out, c, names)
        }
        Formula::Next(c) => {
            out.write_str("X ")?;
            write_formula(out, c, names)
        }
        Formula::And(l, r) => {
            out.write_str("(")?;
            write_formula(out, l, names)?;
            out.write_str(" & ")?;
            write_formula(out, r, names)?;
            out.write_str(")")
        }
        Formula::Until(l, r) => {
            out.write_str("(")?;
            write_formula(out, l, names)?;
            out.write_str(" U ")?;
            write_formula(out, r, names)?;
            out.write_str(")")
        }
    }
}

/// Renders with every compound node that is referenced more than once
/// bound to a name: one `#k := ...` line per shared node, children first,
/// followed by the root expression. Linear in the number of distinct nodes.
pub fn render_shared(f: &Formula) -> String {
    fn count<'a>(f: &'a Formula, refs: &mut BTreeMap<usize, (usize, &'a Formula)>, order: &mut Vec<usize>) {
        let key = node_key(f);
        if let Some(entry) = refs.get_mut(&key) {
            entry.0 += 1;
            return;
        }
        refs.insert(key, (1, f));
        for c in f.children() {
            count(c, refs, order);
        }
        order.push(key);
    }
    let mut refs = BTreeMap::new();
    let mut order = Vec::new();
    count(f, &mut refs, &mut order);

    let mut names: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = String::new();
    for key in order {
        let (uses, node) = refs[&key];
        if uses > 1 && !node.is_atom() && key != node_key(f) {
            let mut line = format!("#{} := ", names.len() + 1);
            write_formula(&mut line, node, Some(&names)).expect("writing to a String");
            names.insert(key, names.len() + 1);
            out.push_str(&line);
            out.push('\n');
        }
    }
    write_formula(&mut out, f, Some(&names)).expect("writing to a String");
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn id(name: &str) -> AgentId {
        AgentId::new(name).unwrap()
    }

    fn b(name: &str) -> Formula {
        Formula::beh(id(name))
    }

    #[test]
    fn sizes() {
        assert_eq!(size(&b("a")), 1);
        assert_eq!(size(&Formula::not(b("a"))), 2);
        assert_eq!(size(&Formula::and(b("a"), Formula::nbr(id("a"), id("b")))), 3);
    }

    #[test]
    fn size_counts_shared_nodes_per_occurrence() {
        let shared = Arc::new(Formula::and(b("a"), b("b")));
        let f = Formula::and(shared.clone(), shared);
        assert_eq!(size(&f), 7);
    }

    #[test]
    fn subformula_order() {
        let and = Formula::and(b("a"), b("b"));
        assert_eq!(subformulas(&and), vec![b("a"), b("b"), and.clone()]);
        assert_eq!(subformulas(&b("a")), vec![b("a")]);
        let until = Formula::until(b("a"), b("b"));
        assert_eq!(subformulas(&until), vec![b("a"), b("b"), until.clone()]);
    }

    #[test]
    fn subformulas_are_distinct() {
        let f = Formula::and(b("a"), Formula::not(b("a")));
        assert_eq!(subformulas(&f), vec![b("a"), Formula::not(b("a")), f.clone()]);
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&b("a")), "B(a)");
        assert_eq!(render(&Formula::until(b("a"), b("b"))), "(B(a) U B(b))");
        assert_eq!(render(&Formula::majority(id("a"))), "MAJ(a)");
        assert_eq!(render(&Formula::MajorityGE { agent: id("a"), ahead: 2 }), "MAJ^2(a)");
        assert_eq!(render(&Formula::not(Formula::next(Formula::Top))), "!X true");
    }

    #[test]
    fn shared_rendering_names_repeated_nodes() {
        let shared = Arc::new(Formula::and(b("a"), b("b")));
        let f = Formula::and(shared.clone(), Formula::not(shared));
        assert_eq!(render_shared(&f), "#1 := (B(a) & B(b))\n(#1 & !#1)");
        assert_eq!(render_shared(&b("a")), "B(a)");
    }

    #[test]
    fn agents_of_formula() {
        let f = Formula::and(Formula::nbr(id("b"), id("a")), Formula::next(b("c")));
        let names: Vec<_> = f.agents().into_iter().map(|a| a.as_str().into()).collect::<Vec<String>>();
        assert_eq!(names, ["a", "b", "c"]);
        assert!(f.is_temporal());
        assert!(!Formula::not(b("a")).is_temporal());
    }
}

//! Bounded unrolling of Until.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;

use crate::formula::{node_key, Formula};

/// `u⁰ ∨ u¹ ∨ … ∨ u^bound`, left-nested, where `u⁰ = psi` and
/// `uⁱ = phi ∧ X uⁱ⁻¹`. Each step shares the previous one.
pub fn until_expansion(phi: impl Into<Arc<Formula>>, psi: impl Into<Arc<Formula>>, bound: usize) -> Formula {
    Arc::unwrap_or_clone(expand(phi.into(), psi.into(), bound))
}

fn expand(phi: Arc<Formula>, psi: Arc<Formula>, bound: usize) -> Arc<Formula> {
    let mut step = psi.clone();
    let mut acc = psi;
    for _ in 0..bound {
        step = Arc::new(Formula::and(phi.clone(), Formula::next(step)));
        acc = Arc::new(Formula::or(acc, step.clone()));
    }
    acc
}

/// Replaces every `l U r` by the expansion of its translated operands.
/// Shared subformulas are translated once.
pub fn eliminate_until(f: &Formula, bound: usize) -> Formula {
    let mut memo = BTreeMap::new();
    match f {
        // The root is not behind an Arc; handle it without wrapping a copy.
        Formula::Until(l, r) => {
            let (l, r) = (go(l, bound, &mut memo), go(r, bound, &mut memo));
            Arc::unwrap_or_clone(expand(l, r, bound))
        }
        _ => rebuild(f, bound, &mut memo).unwrap_or_else(|| f.clone()),
    }
}

fn go(f: &Arc<Formula>, bound: usize, memo: &mut BTreeMap<usize, Arc<Formula>>) -> Arc<Formula> {
    let key = node_key(f);
    if let Some(done) = memo.get(&key) {
        return done.clone();
    }
    let out = match &**f {
        Formula::Until(l, r) => {
            let (l, r) = (go(l, bound, memo), go(r, bound, memo));
            expand(l, r, bound)
        }
        _ => rebuild(f, bound, memo).map_or_else(|| f.clone(), Arc::new),
    };
    memo.insert(key, out.clone());
    out
}

/// The node with translated children, or `None` when nothing changed.
fn rebuild(f: &Formula, bound: usize, memo: &mut BTreeMap<usize, Arc<Formula>>) -> Option<Formula> {
    let same = |old: &Arc<Formula>, new: &Arc<Formula>| Arc::ptr_eq(old, new);
    match f {
        Formula::Not(c) => {
            let n = go(c, bound, memo);
            (!same(c, &n)).then_some(Formula::Not(n))
        }
        Formula::Next(c) => {
            let n = go(c, bound, memo);
            (!same(c, &n)).then_some(Formula::Next(n))
        }
        Formula::And(l, r) => {
            let (nl, nr) = (go(l, bound, memo), go(r, bound, memo));
            (!same(l, &nl) || !same(r, &nr)).then_some(Formula::And(nl, nr))
        }
        Formula::Until(..) => unreachable!("handled by the caller"),
        _ => None,
    }
}

//! Translation of temporal formulas into propositional ones.
//!
//! Two stages: [`eliminate_until`] unrolls every Until into a bounded
//! disjunction of Next-chains, then [`to_propositional`] pushes each Next
//! down to the atoms using the reduction clauses, where `X B(a)` becomes
//! `B(a) | MAJ(a)`. The result is evaluated on a single behavior set by
//! [`eval_prop`].

mod cost;
mod majority;
mod prop;
mod until;

use core::fmt;

use crate::formula::Formula;
use crate::model::AgentId;

pub use cost::{cost, CostValue};
pub use majority::{majority_formula, majority_terms, MajorityTerm, DEFAULT_EXPANSION_GUARD};
pub use prop::{
    eval_prop, to_propositional, to_propositional_with, Clause, RewriteStats, TranslateOptions, Translation,
};
pub use until::{eliminate_until, until_expansion};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("Until must be eliminated before translation")]
    UntilPresent,
    #[error("majority expansion over {agents} agents exceeds the limit of {guard}")]
    ExpansionGuard { agents: usize, guard: usize },
    #[error("rewrite `{clause}` does not decrease cost ({before} -> {after})")]
    CostIncrease { clause: Clause, before: CostValue, after: CostValue },
    #[error("formula contains a temporal operator")]
    NotPropositional,
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
}

/// A formula without Next and Until nodes. Majority atoms may remain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropFormula(Formula);

impl PropFormula {
    pub fn new(f: Formula) -> Result<Self, TranslateError> {
        if f.is_temporal() {
            Err(TranslateError::NotPropositional)
        } else {
            Ok(PropFormula(f))
        }
    }

    pub fn as_formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl AsRef<Formula> for PropFormula {
    fn as_ref(&self) -> &Formula {
        &self.0
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

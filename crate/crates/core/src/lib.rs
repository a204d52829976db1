//! Linear temporal logic over threshold-diffusion social networks.
//!
//! A [`model::Model`] fixes a set of agents, a symmetric network and an
//! adoption threshold; from an initial behavior set it determines a unique
//! diffusion path. Formulas are evaluated on that path by three engines
//! that can be checked against each other: [`semantics`] (direct
//! evaluation), [`checker`] (bottom-up labeling) and [`translate`]
//! (reduction to a propositional formula on a single frame).

#![no_std]

extern crate alloc;

pub mod checker;
pub mod formula;
pub mod model;
pub mod rational;
pub mod semantics;
pub mod translate;

#[cfg(any(test, feature = "random"))]
pub mod random;

#[cfg(test)]
mod fixtures;

pub use checker::{check, init_labels, s_set_from_labels, LabelMap};
pub use formula::{
    parse_formula, parse_formula_with, render, render_shared, size, subformulas, Formula, FormulaError, ParseOptions,
};
pub use model::{step, trace, validate, AgentId, BehaviorSet, Model, ModelError, Network, Trace, Violation};
pub use rational::{Rational, RationalError, Threshold};
pub use semantics::{eval_at, satisfaction_set, EvalError, SatSet, Semantics};
pub use translate::{
    cost, eliminate_until, eval_prop, majority_formula, to_propositional, to_propositional_with, until_expansion,
    CostValue, PropFormula, TranslateError, TranslateOptions,
};

//! Social network models and their diffusion path.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;

use crate::rational::Threshold;

/// Agent name: a nonempty token of ASCII letters, digits and underscores.
///
/// Ordering is lexicographic on the name; every iteration over agents in
/// this crate follows it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(Arc<str>);

impl AgentId {
    pub fn new(name: &str) -> Result<Self, ModelError> {
        if Self::is_valid_name(name) {
            Ok(AgentId(Arc::from(name)))
        } else {
            Err(ModelError::InvalidAgentName(name.into()))
        }
    }

    pub fn is_valid_name(name: &str) -> bool {
        !name.is_empty() && name.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl core::ops::Deref for AgentId {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for AgentId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid agent name `{0}`")]
    InvalidAgentName(String),
    #[error("a model needs at least 2 agents, got {0}")]
    TooFewAgents(usize),
    #[error("threshold {0} is outside [0, 1]")]
    ThresholdOutOfRange(crate::rational::Rational),
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("network agents do not match the model's agent set")]
    NetworkAgentsMismatch,
    #[error("network violates its axioms: {}", DisplayList(.0))]
    InvalidNetwork(Vec<Violation>),
    #[error("no fixed point within {0} steps")]
    NoFixedPoint(usize),
}

struct DisplayList<'a, T>(&'a [T]);

impl<T: fmt::Display> fmt::Display for DisplayList<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

/// A violated network axiom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// `a` is its own neighbor.
    Irreflexivity(AgentId),
    /// `b` is a neighbor of `a` but not the other way round.
    Symmetry(AgentId, AgentId),
    /// `a` has no neighbors.
    Seriality(AgentId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Irreflexivity(a) => write!(f, "irreflexivity({a})"),
            Violation::Symmetry(a, b) => write!(f, "symmetry({a},{b})"),
            Violation::Seriality(a) => write!(f, "seriality({a})"),
        }
    }
}

/// Neighborhood map. Has no mutators; diffusion never touches it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Network {
    neighbors: BTreeMap<AgentId, BTreeSet<AgentId>>,
}

impl Network {
    /// Takes the map as given, without closing or checking it.
    pub fn from_adjacency(neighbors: BTreeMap<AgentId, BTreeSet<AgentId>>) -> Self {
        Network { neighbors }
    }

    /// Builds the symmetric closure of undirected `edges` over `agents`.
    /// Every agent gets an entry, possibly empty.
    pub fn from_edges<'a, I>(agents: &BTreeSet<AgentId>, edges: I) -> Self
    where
        I: IntoIterator<Item = (&'a AgentId, &'a AgentId)>,
    {
        let mut neighbors: BTreeMap<AgentId, BTreeSet<AgentId>> =
            agents.iter().map(|a| (a.clone(), BTreeSet::new())).collect();
        for (a, b) in edges {
            neighbors.entry(a.clone()).or_default().insert(b.clone());
            neighbors.entry(b.clone()).or_default().insert(a.clone());
        }
        Network { neighbors }
    }

    pub fn neighbors(&self, agent: &str) -> Option<&BTreeSet<AgentId>> {
        self.neighbors.get(agent)
    }

    pub fn is_neighbor(&self, a: &str, b: &str) -> bool {
        self.neighbors.get(a).is_some_and(|n| n.contains(b))
    }

    pub fn agents(&self) -> impl Iterator<Item = &AgentId> {
        self.neighbors.keys()
    }

    pub fn contains_agent(&self, agent: &str) -> bool {
        self.neighbors.contains_key(agent)
    }

    /// Every ordered pair `(a, b)` with `b ∈ N(a)`.
    pub fn pairs(&self) -> impl Iterator<Item = (&AgentId, &AgentId)> {
        self.neighbors.iter().flat_map(|(a, ns)| ns.iter().map(move |b| (a, b)))
    }

    /// Checks irreflexivity, symmetry and seriality, reporting every
    /// violation in agent order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (a, ns) in &self.neighbors {
            if ns.contains(a) {
                out.push(Violation::Irreflexivity(a.clone()));
            }
            for b in ns {
                if b != a && !self.is_neighbor(b, a) {
                    out.push(Violation::Symmetry(a.clone(), b.clone()));
                }
            }
            if ns.is_empty() {
                out.push(Violation::Seriality(a.clone()));
            }
        }
        out
    }
}

/// The agents exhibiting the behavior at some path position.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BehaviorSet(BTreeSet<AgentId>);

impl BehaviorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, agent: &str) -> bool {
        self.0.contains(agent)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AgentId> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &BehaviorSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn as_set(&self) -> &BTreeSet<AgentId> {
        &self.0
    }
}

impl From<BTreeSet<AgentId>> for BehaviorSet {
    fn from(set: BTreeSet<AgentId>) -> Self {
        BehaviorSet(set)
    }
}

impl FromIterator<AgentId> for BehaviorSet {
    fn from_iter<T: IntoIterator<Item = AgentId>>(iter: T) -> Self {
        BehaviorSet(iter.into_iter().collect())
    }
}

impl fmt::Display for BehaviorSet {
    /// `{a,b,c}` in agent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// A diffusion model `(agents, network, threshold, initial)`.
///
/// Construction checks the structural constraints (agent count, threshold
/// range, initial set and network keys against the agent set). The network
/// axioms are left to [`validate`] so that broken networks can be reported
/// rather than rejected outright.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    agents: BTreeSet<AgentId>,
    network: Network,
    threshold: Threshold,
    initial: BehaviorSet,
}

impl Model {
    pub fn new(
        agents: BTreeSet<AgentId>,
        network: Network,
        threshold: Threshold,
        initial: BehaviorSet,
    ) -> Result<Self, ModelError> {
        if agents.len() < 2 {
            return Err(ModelError::TooFewAgents(agents.len()));
        }
        if !threshold.theta.is_within_unit_interval() {
            return Err(ModelError::ThresholdOutOfRange(threshold.theta));
        }
        if let Some(a) = initial.iter().find(|a| !agents.contains(*a)) {
            return Err(ModelError::UnknownAgent(a.clone()));
        }
        if !network.agents().eq(agents.iter()) {
            return Err(ModelError::NetworkAgentsMismatch);
        }
        if let Some((_, b)) = network.pairs().find(|(_, b)| !agents.contains(*b)) {
            return Err(ModelError::UnknownAgent(b.clone()));
        }
        Ok(Model { agents, network, threshold, initial })
    }

    pub fn agents(&self) -> &BTreeSet<AgentId> {
        &self.agents
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn initial(&self) -> &BehaviorSet {
        &self.initial
    }

    pub fn agent(&self, name: &str) -> Option<&AgentId> {
        self.agents.get(name)
    }
}

pub fn validate(model: &Model) -> Vec<Violation> {
    model.network.violations()
}

/// Whether `agent`'s behaving-neighbor fraction in `b` meets the model's
/// threshold.
pub fn meets_threshold(network: &Network, threshold: Threshold, b: &BehaviorSet, agent: &str) -> bool {
    match network.neighbors(agent) {
        Some(ns) => {
            let behaving = ns.iter().filter(|n| b.contains(n)).count();
            threshold.is_met(behaving, ns.len())
        }
        None => false,
    }
}

/// Agents whose behaving-neighbor fraction in `b` meets the threshold.
/// May overlap `b`.
pub fn adopters(model: &Model, b: &BehaviorSet) -> BTreeSet<AgentId> {
    model.agents.iter().filter(|a| meets_threshold(&model.network, model.threshold, b, a)).cloned().collect()
}

/// One diffusion step: `b ∪ adopters(b)`.
pub fn step(model: &Model, b: &BehaviorSet) -> BehaviorSet {
    let mut next = b.0.clone();
    next.extend(adopters(model, b));
    BehaviorSet(next)
}

/// The unique path from the initial set up to its fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    frames: Vec<BehaviorSet>,
}

impl Trace {
    pub fn frames(&self) -> &[BehaviorSet] {
        &self.frames
    }

    /// Index `f` of the first frame with `step(b_f) = b_f`.
    pub fn fixed_point_index(&self) -> usize {
        self.frames.len() - 1
    }

    /// Positions past the fixed point clamp to it.
    pub fn clamp(&self, i: usize) -> usize {
        i.min(self.fixed_point_index())
    }

    pub fn frame(&self, i: usize) -> &BehaviorSet {
        &self.frames[self.clamp(i)]
    }

    pub fn positions(&self) -> core::ops::RangeInclusive<usize> {
        0..=self.fixed_point_index()
    }
}

/// Iterates [`step`] from the initial set until it stops changing.
///
/// Fails on models whose network breaks an axiom. The path always
/// stabilizes within `|agents|` steps since frames only grow; exceeding
/// that is reported as [`ModelError::NoFixedPoint`].
pub fn trace(model: &Model) -> Result<Trace, ModelError> {
    let violations = validate(model);
    if !violations.is_empty() {
        return Err(ModelError::InvalidNetwork(violations));
    }
    let bound = model.agent_count();
    let mut frames = alloc::vec![model.initial.clone()];
    loop {
        let current = frames.last().expect("nonempty");
        let next = step(model, current);
        if &next == current {
            break;
        }
        if frames.len() > bound {
            return Err(ModelError::NoFixedPoint(bound));
        }
        frames.push(next);
    }
    debug_assert!(frames.len() <= bound);
    Ok(Trace { frames })
}

//! Hand-built models shared by the unit tests.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::model::{AgentId, BehaviorSet, Model, Network};
use crate::rational::Threshold;

pub fn agents(names: &[&str]) -> BTreeSet<AgentId> {
    names.iter().map(|n| AgentId::new(n).unwrap()).collect()
}

pub fn behavior(names: &[&str]) -> BehaviorSet {
    agents(names).into()
}

pub fn model(names: &[&str], edges: &[(&str, &str)], theta: &str, initial: &[&str], strict: bool) -> Model {
    let set = agents(names);
    let pairs: Vec<(AgentId, AgentId)> =
        edges.iter().map(|(a, b)| (AgentId::new(a).unwrap(), AgentId::new(b).unwrap())).collect();
    let network = Network::from_edges(&set, pairs.iter().map(|(a, b)| (a, b)));
    let theta = theta.parse().unwrap();
    let threshold = if strict { Threshold::above(theta) } else { Threshold::at_least(theta) };
    Model::new(set, network, threshold, behavior(initial)).unwrap()
}

pub const FIGURE1_EDGES: &[(&str, &str)] =
    &[("a", "c"), ("b", "c"), ("b", "d"), ("b", "e"), ("b", "f"), ("c", "e"), ("d", "f"), ("e", "f")];

pub fn figure1_with(strict: bool) -> Model {
    model(&["a", "b", "c", "d", "e", "f"], FIGURE1_EDGES, "1/3", &["a"], strict)
}

pub fn figure1() -> Model {
    figure1_with(false)
}

pub fn figure2() -> Model {
    let mut edges = FIGURE1_EDGES.to_vec();
    edges.push(("d", "e"));
    model(&["a", "b", "c", "d", "e", "f"], &edges, "1/3", &["a"], false)
}

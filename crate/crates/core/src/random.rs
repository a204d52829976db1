//! Random models and formulas for property tests.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::formula::Formula;
use crate::model::{AgentId, BehaviorSet, Model, Network};
use crate::rational::{Rational, Threshold};

/// The threshold values exercised by the property suites.
pub fn standard_thetas() -> Vec<Rational> {
    ["0", "1/4", "1/3", "1/2", "2/3", "1"].iter().map(|s| s.parse().expect("valid literal")).collect()
}

/// A model on `a0, a1, …` with a random serial network, a threshold drawn
/// from `thetas` and a random initial set.
///
/// Edge density is drawn per model, so both sparse paths that spread
/// slowly and dense ones appear; an agent left without neighbors is then
/// joined to a random other agent.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, min_agents: usize, max_agents: usize, thetas: &[Rational]) -> Model {
    let n = rng.random_range(min_agents.max(2)..=max_agents.max(min_agents).max(2));
    let names: Vec<AgentId> = (0..n).map(|i| AgentId::new(&format!("a{i}")).expect("valid name")).collect();
    let density = rng.random_range(0.15..0.7);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                edges.push((i, j));
            }
        }
    }
    for i in 0..n {
        if !edges.iter().any(|&(x, y)| x == i || y == i) {
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            edges.push((i.min(j), i.max(j)));
        }
    }
    let agents: BTreeSet<AgentId> = names.iter().cloned().collect();
    let network = Network::from_edges(&agents, edges.iter().map(|&(i, j)| (&names[i], &names[j])));
    let theta = *thetas.choose(rng).expect("at least one threshold");
    let initial: BehaviorSet = names.iter().filter(|_| rng.random_bool(0.2)).cloned().collect();
    Model::new(agents, network, Threshold::at_least(theta), initial).expect("generated model is well formed")
}

/// A random formula over `agents` with at most `max_size` nodes and at
/// most two Until nodes.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, agents: &[AgentId], max_size: usize) -> Formula {
    let target = rng.random_range(1..=max_size.max(1));
    let mut untils = 2;
    build(rng, agents, target, &mut untils)
}

fn atom<R: Rng + ?Sized>(rng: &mut R, agents: &[AgentId]) -> Formula {
    let pick = |rng: &mut R| agents.choose(rng).expect("at least one agent").clone();
    match rng.random_range(0..10) {
        0 => Formula::Top,
        1..=2 => Formula::nbr(pick(rng), pick(rng)),
        _ => Formula::beh(pick(rng)),
    }
}

/// Exactly `size` nodes.
fn build<R: Rng + ?Sized>(rng: &mut R, agents: &[AgentId], size: usize, untils: &mut u32) -> Formula {
    if size <= 1 {
        return atom(rng, agents);
    }
    if size == 2 {
        let c = atom(rng, agents);
        return if rng.random_bool(0.5) { Formula::not(c) } else { Formula::next(c) };
    }
    match rng.random_range(0..4) {
        0 => Formula::not(build(rng, agents, size - 1, untils)),
        1 => Formula::next(build(rng, agents, size - 1, untils)),
        k => {
            let left = rng.random_range(1..size - 1);
            let l = build(rng, agents, left, untils);
            let r = build(rng, agents, size - 1 - left, untils);
            if k == 3 && *untils > 0 {
                *untils -= 1;
                Formula::until(l, r)
            } else {
                Formula::and(l, r)
            }
        }
    }
}

use std::collections::BTreeSet;

use rand::Rng;

use super::{ProtocolKind, ProtocolSetup};
use crate::heterogeneity::{eligibility_window, weighted_probability, HeterogeneityConfig, NodeClass};
use crate::node::{NodeId, NodeState};

/// `p / (1 − p·(r mod window))`, capped at 1.
///
/// With `window = round(1/p)` the product `p·(window − 1)` stays below 1, so
/// the denominator is always positive.
pub fn rotation_threshold(p: f64, r: u64, window: u64) -> f64 {
    let denom = 1.0 - p * (r % window) as f64;
    debug_assert!(denom > 0.0, "rotation denominator {denom} for p={p} window={window}");
    (p / denom).min(1.0)
}

/// Class-weighted threshold with the residual-energy factor on normal nodes.
/// Zero for dead nodes and nodes that already served this window.
pub fn election_threshold(node: &NodeState, c: &HeterogeneityConfig, r: u64) -> f64 {
    let Ok(p) = weighted_probability(c, node.class) else {
        return 0.0;
    };
    let window = eligibility_window(p);
    if !node.alive || !node.eligible(r, window) {
        return 0.0;
    }
    let base = rotation_threshold(p, r, window);
    match node.class {
        NodeClass::Normal => base * (node.energy / node.initial_energy),
        NodeClass::Advanced | NodeClass::Super => base,
    }
}

pub fn leach_threshold(node: &NodeState, p: f64, r: u64) -> f64 {
    let window = eligibility_window(p);
    if !node.alive || !node.eligible(r, window) {
        return 0.0;
    }
    rotation_threshold(p, r, window)
}

fn threshold_for(setup: &ProtocolSetup, node: &NodeState, r: u64) -> f64 {
    let e = setup.election(node.class);
    let base = rotation_threshold(e.probability, r, e.window);
    if setup.kind.residual_weighted() && node.class == NodeClass::Normal {
        base * (node.energy / node.initial_energy)
    } else {
        base
    }
}

/// Draws one uniform number per alive, eligible node in ascending id order
/// and elects the node when the draw falls below its threshold. Elected
/// nodes have `rounds_since_ch` reset to 0.
///
/// Sleeping nodes take part: winning the election is one way out of sleep.
pub fn elect_cluster_heads<R: Rng + ?Sized>(
    world: &mut [NodeState],
    setup: &ProtocolSetup,
    r: u64,
    rng: &mut R,
) -> BTreeSet<NodeId> {
    let mut heads = BTreeSet::new();
    for node in world.iter_mut() {
        let window = setup.election(node.class).window;
        if !node.alive || !node.eligible(r, window) {
            continue;
        }
        let u: f64 = rng.random();
        if u < threshold_for(setup, node, r) {
            node.rounds_since_ch = 0;
            heads.insert(node.id);
        }
    }
    heads
}

impl ProtocolKind {
    /// Threshold this protocol gives `node` in round `r`.
    pub fn threshold(self, node: &NodeState, c: &HeterogeneityConfig, r: u64) -> f64 {
        match self {
            ProtocolKind::Meecda => election_threshold(node, c, r),
            ProtocolKind::EecdaApprox => match weighted_probability(c, node.class) {
                Ok(p) => leach_threshold(node, p, r),
                Err(_) => 0.0,
            },
            ProtocolKind::LeachStyle => leach_threshold(node, c.p_opt, r),
        }
    }
}

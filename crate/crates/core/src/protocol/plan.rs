use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::{elect_cluster_heads, select_relay, sleep_decision, wake_or_continue, ProtocolSetup, WakeAction};
use crate::heterogeneity::NodeClass;
use crate::node::{NodeId, NodeState, Point};

/// Setup-phase result: who leads, who follows, who forwards, who sleeps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundPlan {
    pub round_index: u64,
    pub cluster_heads: BTreeSet<NodeId>,
    /// member id → head id
    pub memberships: BTreeMap<NodeId, NodeId>,
    /// normal head id → relay id
    pub relays: BTreeMap<NodeId, NodeId>,
    pub sleepers: BTreeSet<NodeId>,
    pub direct_senders: BTreeSet<NodeId>,
}

impl RoundPlan {
    /// Members of each head, in ascending member id.
    pub fn clusters(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut out: BTreeMap<NodeId, Vec<NodeId>> =
            self.cluster_heads.iter().map(|&h| (h, Vec::new())).collect();
        for (&member, &head) in &self.memberships {
            out.entry(head).or_default().push(member);
        }
        out
    }

    /// Structural checks against the node states the plan was built from.
    /// Returns a description of every violated invariant.
    pub fn violations(&self, world: &[NodeState], bs: Point) -> Vec<String> {
        let mut out = Vec::new();
        let r = self.round_index;
        for node in world {
            let roles = [
                self.cluster_heads.contains(&node.id),
                self.memberships.contains_key(&node.id),
                self.sleepers.contains(&node.id),
                self.direct_senders.contains(&node.id),
            ]
            .iter()
            .filter(|&&b| b)
            .count();
            match (node.alive, roles) {
                (true, 1) | (false, 0) => {}
                (true, k) => out.push(format!("round {r}: alive node {} has {k} roles", node.id)),
                (false, k) => out.push(format!("round {r}: dead node {} has {k} roles", node.id)),
            }
        }
        for (&member, &head) in &self.memberships {
            if !self.cluster_heads.contains(&head) || !world[head].alive {
                out.push(format!("round {r}: member {member} attached to non-head {head}"));
            }
        }
        for (&head, &relay) in &self.relays {
            let h = &world[head];
            let rl = &world[relay];
            if h.class != NodeClass::Normal || !self.cluster_heads.contains(&head) {
                out.push(format!("round {r}: relay assigned to non-normal-head {head}"));
            }
            if !rl.alive || !rl.class.can_relay() {
                out.push(format!("round {r}: relay {relay} is not an alive advanced/super node"));
            }
            if self.cluster_heads.contains(&relay) {
                out.push(format!("round {r}: relay {relay} is itself a head"));
            }
            if h.pos.distance_sq(&rl.pos) >= h.pos.distance_sq(&bs) {
                out.push(format!("round {r}: relay {relay} not closer to head {head} than the base station"));
            }
        }
        out
    }
}

/// Nearest head to `pos` among `heads`, lowest id on ties.
pub fn nearest_cluster_head(pos: Point, heads: &[(NodeId, Point)]) -> Option<(NodeId, f64)> {
    heads
        .iter()
        .map(|&(id, p)| (id, pos.distance_sq(&p)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(id, d2)| (id, d2.sqrt()))
}

/// Runs the setup phase of round `r`.
///
/// `world[i].id` must equal `i`. Node counters (`rounds_since_ch`,
/// `sleep_rounds_remaining`) are updated in place; energies are untouched.
pub fn plan_round<R: Rng + ?Sized>(
    world: &mut [NodeState],
    setup: &ProtocolSetup,
    r: u64,
    rng: &mut R,
) -> RoundPlan {
    debug_assert!(world.iter().enumerate().all(|(i, n)| n.id == i));
    let cluster_heads = elect_cluster_heads(world, setup, r, rng);
    let head_positions: Vec<(NodeId, Point)> =
        cluster_heads.iter().map(|&h| (h, world[h].pos)).collect();
    let radio = &setup.radio;
    let sleep_enabled = setup.kind.uses_sleep() && setup.max_sleep_rounds > 0;

    let mut plan = RoundPlan {
        round_index: r,
        cluster_heads,
        ..RoundPlan::default()
    };

    for node in world.iter_mut().filter(|n| n.alive) {
        let is_head = plan.cluster_heads.contains(&node.id);
        if is_head {
            if node.is_sleeping() {
                wake_or_continue(node, true, false);
            }
            continue;
        }
        let to_bs = node.pos.distance(&setup.bs);
        let nearest = nearest_cluster_head(node.pos, &head_positions);

        if node.is_sleeping() {
            let cheaper = nearest.is_some_and(|(_, d)| radio.tx_packet(d) < radio.tx_packet(to_bs));
            match wake_or_continue(node, false, cheaper) {
                WakeAction::WakeAsMember => {
                    let (head, _) = nearest.expect("cheaper head exists");
                    plan.memberships.insert(node.id, head);
                }
                WakeAction::KeepSleeping => {
                    plan.sleepers.insert(node.id);
                }
                WakeAction::WakeAndSendDirect => {
                    plan.direct_senders.insert(node.id);
                }
                WakeAction::WakeAsCH => unreachable!("heads handled above"),
            }
            continue;
        }

        match nearest {
            None => {
                plan.direct_senders.insert(node.id);
            }
            Some((head, d)) => {
                if sleep_enabled && sleep_decision(node, d, to_bs, radio) {
                    node.sleep_rounds_remaining = setup.max_sleep_rounds;
                    plan.sleepers.insert(node.id);
                } else {
                    plan.memberships.insert(node.id, head);
                }
            }
        }
    }

    if setup.kind.uses_relays() {
        for &head in &plan.cluster_heads {
            let ch = &world[head];
            if ch.class != NodeClass::Normal {
                continue;
            }
            if let Some(relay) = select_relay(ch, world, &plan.cluster_heads, setup.bs) {
                plan.relays.insert(head, relay);
            }
        }
    }
    plan
}

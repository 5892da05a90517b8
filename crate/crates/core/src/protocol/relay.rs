use std::collections::BTreeSet;

use crate::node::{NodeId, NodeState, Point};

/// Picks the forwarding node for a normal cluster head: the nearest alive,
/// awake advanced or super node that is not a head this round and is closer
/// to the head than the base station is. Equal distances go to the lower id.
/// `None` means the head sends straight to the base station.
pub fn select_relay(
    ch: &NodeState,
    world: &[NodeState],
    current_chs: &BTreeSet<NodeId>,
    bs: Point,
) -> Option<NodeId> {
    let to_bs = ch.pos.distance_sq(&bs);
    world
        .iter()
        .filter(|n| {
            n.alive
                && n.class.can_relay()
                && !n.is_sleeping()
                && n.id != ch.id
                && !current_chs.contains(&n.id)
        })
        .map(|n| (ch.pos.distance_sq(&n.pos), n.id))
        .filter(|&(d, _)| d < to_bs)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
}

use crate::node::NodeState;
use crate::radio::RadioParams;

/// True when joining the nearest head costs strictly more than sending
/// straight to the base station. Ties join the cluster.
pub fn sleep_decision(
    _node: &NodeState,
    nearest_ch_dist: f64,
    bs_dist: f64,
    radio: &RadioParams,
) -> bool {
    let via_head = radio.tx_packet(nearest_ch_dist);
    let direct = radio.tx_packet(bs_dist);
    via_head > direct
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WakeAction {
    WakeAsCH,
    WakeAsMember,
    KeepSleeping,
    WakeAndSendDirect,
}

/// Advances a sleeping node by one round and updates its counter.
pub fn wake_or_continue(
    node: &mut NodeState,
    this_round_is_ch: bool,
    found_cheaper_ch: bool,
) -> WakeAction {
    debug_assert!(node.sleep_rounds_remaining > 0);
    let action = if this_round_is_ch {
        WakeAction::WakeAsCH
    } else if found_cheaper_ch {
        WakeAction::WakeAsMember
    } else if node.sleep_rounds_remaining <= 1 {
        WakeAction::WakeAndSendDirect
    } else {
        WakeAction::KeepSleeping
    };
    node.sleep_rounds_remaining = match action {
        WakeAction::KeepSleeping => node.sleep_rounds_remaining - 1,
        _ => 0,
    };
    action
}

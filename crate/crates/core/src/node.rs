use serde::{Deserialize, Serialize};

use crate::heterogeneity::NodeClass;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        dx * dx + dy * dy
    }
}

/// `rounds_since_ch` value for a node that has never been a cluster head.
pub const NEVER_CH: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub id: NodeId,
    pub class: NodeClass,
    pub pos: Point,
    /// Residual energy, J.
    pub energy: f64,
    pub initial_energy: f64,
    /// Rounds elapsed since the node last served as cluster head.
    pub rounds_since_ch: u64,
    pub sleep_rounds_remaining: u32,
    pub alive: bool,
}

impl NodeState {
    pub fn new(id: NodeId, class: NodeClass, pos: Point, initial_energy: f64) -> Self {
        NodeState {
            id,
            class,
            pos,
            energy: initial_energy,
            initial_energy,
            rounds_since_ch: NEVER_CH,
            sleep_rounds_remaining: 0,
            alive: initial_energy > 0.0,
        }
    }

    pub fn is_sleeping(&self) -> bool {
        self.sleep_rounds_remaining > 0
    }

    /// Whether the node may stand for election in round `r` under a window
    /// of `window` rounds: it must not have been head since the window began.
    pub fn eligible(&self, r: u64, window: u64) -> bool {
        self.rounds_since_ch > r % window
    }

    /// Draws `amount` joules. A node that cannot cover the cost drains to
    /// zero and the operation fails. Returns `(succeeded, joules_spent)`.
    pub fn debit(&mut self, amount: f64) -> (bool, f64) {
        if self.energy >= amount && self.energy > 0.0 {
            self.energy -= amount;
            (true, amount)
        } else {
            let spent = self.energy;
            self.energy = 0.0;
            (false, spent)
        }
    }
}

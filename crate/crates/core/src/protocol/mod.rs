//! Per-round clustering protocols.
//!
//! Three protocols share the same round skeleton (elect heads, form
//! clusters, route aggregated data):
//!
//! * [`ProtocolKind::Meecda`]: class-weighted election with a residual-energy
//!   factor for normal nodes, a sleep state for nodes whose nearest head costs
//!   more than the base station, and relaying of normal heads' data through
//!   idle advanced/super nodes.
//! * [`ProtocolKind::EecdaApprox`]: an approximation of the EECDA baseline.
//!   Same class-weighted probabilities, plain rotation threshold, heads send
//!   straight to the base station. It does not implement EECDA's
//!   maximum-residual-energy path routing.
//! * [`ProtocolKind::LeachStyle`]: uniform probability `p_opt` for every node.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heterogeneity::{eligibility_window, weighted_probability, HeterogeneityConfig, NodeClass};
use crate::node::Point;
use crate::radio::RadioParams;

mod election;
mod plan;
mod relay;
mod sleep;

pub use election::{elect_cluster_heads, election_threshold, leach_threshold, rotation_threshold};
pub use plan::{nearest_cluster_head, plan_round, RoundPlan};
pub use relay::select_relay;
pub use sleep::{sleep_decision, wake_or_continue, WakeAction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProtocolKind {
    #[serde(rename = "meecda")]
    Meecda,
    #[serde(rename = "eecda-approx")]
    EecdaApprox,
    #[serde(rename = "leach")]
    LeachStyle,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 3] = [
        ProtocolKind::Meecda,
        ProtocolKind::EecdaApprox,
        ProtocolKind::LeachStyle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Meecda => "meecda",
            ProtocolKind::EecdaApprox => "eecda-approx",
            ProtocolKind::LeachStyle => "leach",
        }
    }

    pub fn uses_sleep(self) -> bool {
        matches!(self, ProtocolKind::Meecda)
    }

    pub fn uses_relays(self) -> bool {
        matches!(self, ProtocolKind::Meecda)
    }

    /// Whether normal nodes' thresholds are scaled by residual/initial energy.
    pub fn residual_weighted(self) -> bool {
        matches!(self, ProtocolKind::Meecda)
    }

    /// Election probability this protocol assigns to `class`.
    pub fn class_probability(self, het: &HeterogeneityConfig, class: NodeClass) -> Result<f64> {
        match self {
            ProtocolKind::Meecda | ProtocolKind::EecdaApprox => weighted_probability(het, class),
            ProtocolKind::LeachStyle => Ok(het.p_opt),
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "meecda" | "m-eecda" => Ok(ProtocolKind::Meecda),
            "eecda-approx" | "eecda" => Ok(ProtocolKind::EecdaApprox),
            "leach" | "leach-style" => Ok(ProtocolKind::LeachStyle),
            other => Err(Error::config(
                "protocol",
                format!("unknown protocol `{other}` (expected meecda, eecda-approx or leach)"),
            )),
        }
    }
}

/// Per-class election probability and eligibility window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassElection {
    pub probability: f64,
    pub window: u64,
}

/// Everything the setup phase needs besides the node states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSetup {
    pub kind: ProtocolKind,
    pub het: HeterogeneityConfig,
    pub radio: RadioParams,
    pub bs: Point,
    pub max_sleep_rounds: u32,
    classes: [ClassElection; 3],
}

impl ProtocolSetup {
    pub fn new(
        kind: ProtocolKind,
        het: HeterogeneityConfig,
        radio: RadioParams,
        bs: Point,
        max_sleep_rounds: u32,
    ) -> Result<Self> {
        let mut classes = [ClassElection {
            probability: 0.0,
            window: 1,
        }; 3];
        for class in NodeClass::ALL {
            let probability = kind.class_probability(&het, class)?;
            classes[class_index(class)] = ClassElection {
                probability,
                window: eligibility_window(probability),
            };
        }
        Ok(ProtocolSetup {
            kind,
            het,
            radio,
            bs,
            max_sleep_rounds,
            classes,
        })
    }

    pub fn election(&self, class: NodeClass) -> ClassElection {
        self.classes[class_index(class)]
    }
}

fn class_index(class: NodeClass) -> usize {
    match class {
        NodeClass::Normal => 0,
        NodeClass::Advanced => 1,
        NodeClass::Super => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for kind in ProtocolKind::ALL {
            assert_eq!(kind.name().parse::<ProtocolKind>().unwrap(), kind);
        }
        assert!("pegasis".parse::<ProtocolKind>().is_err());
    }

    #[test]
    fn leach_uses_uniform_probability() {
        let s = ProtocolSetup::new(
            ProtocolKind::LeachStyle,
            HeterogeneityConfig::case1(),
            RadioParams::standard(),
            Point::new(50.0, 50.0),
            8,
        )
        .unwrap();
        for class in NodeClass::ALL {
            assert_eq!(s.election(class).probability, 0.1);
            assert_eq!(s.election(class).window, 10);
        }
    }
}

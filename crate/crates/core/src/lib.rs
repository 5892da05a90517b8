//! Round-based simulator for three-level heterogeneous wireless sensor
//! networks.
//!
//! The crate implements the M-EECDA clustering protocol (residual-energy
//! weighted election, sleep state, relaying of normal cluster heads through
//! advanced/super nodes) next to two baselines, on top of a first-order
//! radio energy model. Runs are fully determined by their configuration and
//! seed.
//!
//! ```
//! use meecda_sim::{run_simulation, ProtocolKind, SimulationConfig};
//!
//! let mut cfg = SimulationConfig::case1(ProtocolKind::Meecda, 42);
//! cfg.max_rounds = 200;
//! let trace = run_simulation(&cfg).unwrap();
//! assert_eq!(trace.rows.len(), 200);
//! ```

pub mod cli;
pub mod compare;
pub mod engine;
pub mod error;
pub mod heterogeneity;
pub mod metrics;
pub mod node;
pub mod protocol;
pub mod radio;
pub mod scenario;

pub use compare::{aggregate, compare_summaries, sweep, ComparisonReport, RunResult};
pub use engine::{init_world, run_round, run_simulation, RoundOutcome, Simulation, SimulationConfig};
pub use error::{Error, Result};
pub use heterogeneity::{HeterogeneityConfig, NodeClass};
pub use metrics::{lifetime_summary, MetricsTrace, TraceRow};
pub use node::{NodeId, NodeState, Point};
pub use protocol::{plan_round, ProtocolKind, ProtocolSetup, RoundPlan};
pub use radio::RadioParams;

//! World construction and the round loop.
//!
//! Each round runs the protocol's setup phase ([`plan_round`]) and then a
//! steady phase in which every scheduled transmission is charged through the
//! radio model. Energy is debited one operation at a time: a node that
//! cannot afford an operation spends what it has left, dies at the end of
//! the round, and whatever packet it was carrying is lost.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heterogeneity::{class_counts, initial_energy, HeterogeneityConfig, NodeClass};
use crate::metrics::{MetricsTrace, TraceRow};
use crate::node::{NodeId, NodeState, Point};
use crate::protocol::{plan_round, ProtocolKind, ProtocolSetup, RoundPlan};
use crate::radio::RadioParams;

/// Runs with the table radio constants routinely last past 40,000 rounds.
pub const DEFAULT_MAX_ROUNDS: u64 = 100_000;
pub const DEFAULT_MAX_SLEEP_ROUNDS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub het: HeterogeneityConfig,
    pub radio: RadioParams,
    /// Side of the square deployment field, m.
    pub area_side: f64,
    pub bs_pos: Point,
    pub max_rounds: u64,
    pub seed: u64,
    pub protocol: ProtocolKind,
    pub max_sleep_rounds: u32,
}

impl SimulationConfig {
    /// 100 × 100 m field, base station in the middle, table radio constants
    /// with the derived crossover distance.
    pub fn with_het(het: HeterogeneityConfig, protocol: ProtocolKind, seed: u64) -> Self {
        SimulationConfig {
            het,
            radio: RadioParams::standard(),
            area_side: 100.0,
            bs_pos: Point::new(50.0, 50.0),
            max_rounds: DEFAULT_MAX_ROUNDS,
            seed,
            protocol,
            max_sleep_rounds: DEFAULT_MAX_SLEEP_ROUNDS,
        }
    }

    pub fn case1(protocol: ProtocolKind, seed: u64) -> Self {
        Self::with_het(HeterogeneityConfig::case1(), protocol, seed)
    }

    pub fn case2(protocol: ProtocolKind, seed: u64) -> Self {
        Self::with_het(HeterogeneityConfig::case2(), protocol, seed)
    }

    pub fn validate(&self) -> Result<()> {
        self.het.validate()?;
        self.radio.validate()?;
        if !(self.area_side > 0.0 && self.area_side.is_finite()) {
            return Err(Error::config(
                "area_side",
                format!("must be finite and > 0, got {}", self.area_side),
            ));
        }
        if !(self.bs_pos.x.is_finite() && self.bs_pos.y.is_finite()) {
            return Err(Error::config("bs", "coordinates must be finite"));
        }
        Ok(())
    }

    pub fn setup(&self) -> Result<ProtocolSetup> {
        ProtocolSetup::new(
            self.protocol,
            self.het,
            self.radio,
            self.bs_pos,
            self.max_sleep_rounds,
        )
    }
}

/// Steady-phase result of one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub round_index: u64,
    pub plan: RoundPlan,
    /// Joules spent this round, indexed by node id.
    pub energy_spent_per_node: Vec<f64>,
    pub packets_to_bs: u64,
    pub deaths: BTreeSet<NodeId>,
    pub total_residual: f64,
}

impl RoundOutcome {
    pub fn total_spent(&self) -> f64 {
        self.energy_spent_per_node.iter().sum()
    }
}

/// Builds the node population: class blocks in id order (normal, advanced,
/// super), positions i.i.d. uniform over the field.
pub fn init_world<R: Rng + ?Sized>(cfg: &SimulationConfig, rng: &mut R) -> Result<Vec<NodeState>> {
    let counts = class_counts(&cfg.het)?;
    let classes = NodeClass::ALL
        .iter()
        .flat_map(|&c| std::iter::repeat_n(c, counts.of(c)));
    Ok(classes
        .enumerate()
        .map(|(id, class)| {
            let x = rng.random::<f64>() * cfg.area_side;
            let y = rng.random::<f64>() * cfg.area_side;
            NodeState::new(id, class, Point::new(x, y), initial_energy(&cfg.het, class))
        })
        .collect())
}

struct Ledger<'a> {
    world: &'a mut [NodeState],
    spent: Vec<f64>,
}

impl Ledger<'_> {
    fn charge(&mut self, id: NodeId, amount: f64) -> bool {
        let (ok, spent) = self.world[id].debit(amount);
        self.spent[id] += spent;
        ok
    }
}

/// Runs round `r`: setup via [`plan_round`], then steady-phase accounting.
pub fn run_round<R: Rng + ?Sized>(
    world: &mut [NodeState],
    setup: &ProtocolSetup,
    r: u64,
    rng: &mut R,
) -> RoundOutcome {
    let plan = plan_round(world, setup, r, rng);
    let radio = &setup.radio;
    let bs = setup.bs;
    let mut ledger = Ledger {
        spent: vec![0.0; world.len()],
        world,
    };
    let mut packets = 0u64;

    let mut received = vec![0u64; ledger.world.len()];
    for (&member, &head) in &plan.memberships {
        let d = ledger.world[member].pos.distance(&ledger.world[head].pos);
        if ledger.charge(member, radio.tx_packet(d)) {
            received[head] += 1;
        }
    }

    for &sender in &plan.direct_senders {
        let d = ledger.world[sender].pos.distance(&bs);
        if ledger.charge(sender, radio.tx_packet(d)) {
            packets += 1;
        }
    }

    for &head in &plan.cluster_heads {
        let incoming = received[head];
        let mut ok = (0..incoming).all(|_| ledger.charge(head, radio.rx_packet()));
        ok = ok && ledger.charge(head, radio.aggregate(incoming + 1));
        if !ok {
            continue;
        }
        let head_pos = ledger.world[head].pos;
        match plan.relays.get(&head) {
            Some(&relay) => {
                let relay_pos = ledger.world[relay].pos;
                if ledger.charge(head, radio.tx_packet(head_pos.distance(&relay_pos)))
                    && ledger.charge(relay, radio.rx_packet())
                    && ledger.charge(relay, radio.tx_packet(relay_pos.distance(&bs)))
                {
                    packets += 1;
                }
            }
            None => {
                if ledger.charge(head, radio.tx_packet(head_pos.distance(&bs))) {
                    packets += 1;
                }
            }
        }
    }

    let spent = ledger.spent;
    let mut deaths = BTreeSet::new();
    // alive flags only change here, so they still describe the round start
    for node in world.iter_mut() {
        if node.alive && node.energy <= 0.0 {
            node.energy = 0.0;
            node.alive = false;
            node.sleep_rounds_remaining = 0;
            deaths.insert(node.id);
        }
        if node.alive {
            node.rounds_since_ch = node.rounds_since_ch.saturating_add(1);
        }
    }

    RoundOutcome {
        round_index: r,
        plan,
        energy_spent_per_node: spent,
        packets_to_bs: packets,
        deaths,
        total_residual: world.iter().map(|n| n.energy).sum(),
    }
}

/// A single seeded run, advanced one round at a time.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: SimulationConfig,
    setup: ProtocolSetup,
    world: Vec<NodeState>,
    rng: ChaCha8Rng,
    round: u64,
    packets_cum: u64,
}

impl Simulation {
    pub fn new(cfg: SimulationConfig) -> Result<Self> {
        cfg.validate()?;
        let setup = cfg.setup()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let world = init_world(&cfg, &mut rng)?;
        Ok(Simulation {
            cfg,
            setup,
            world,
            rng,
            round: 0,
            packets_cum: 0,
        })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.cfg
    }

    pub fn world(&self) -> &[NodeState] {
        &self.world
    }

    /// Index of the next round to run.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn alive_count(&self) -> usize {
        self.world.iter().filter(|n| n.alive).count()
    }

    pub fn total_residual(&self) -> f64 {
        self.world.iter().map(|n| n.energy).sum()
    }

    pub fn is_finished(&self) -> bool {
        self.round >= self.cfg.max_rounds || self.alive_count() == 0
    }

    /// Runs the next round. Returns `None` once the run is finished.
    pub fn step(&mut self) -> Option<(RoundOutcome, TraceRow)> {
        if self.is_finished() {
            return None;
        }
        let outcome = run_round(&mut self.world, &self.setup, self.round, &mut self.rng);
        self.packets_cum += outcome.packets_to_bs;
        let alive = |class| {
            self.world
                .iter()
                .filter(|n| n.alive && n.class == class)
                .count()
        };
        let row = TraceRow {
            round: self.round,
            alive_normal: alive(NodeClass::Normal),
            alive_advanced: alive(NodeClass::Advanced),
            alive_super: alive(NodeClass::Super),
            ch_count: outcome.plan.cluster_heads.len(),
            sleeping: outcome.plan.sleepers.len(),
            packets_round: outcome.packets_to_bs,
            packets_cum: self.packets_cum,
            residual_j: outcome.total_residual,
        };
        self.round += 1;
        Some((outcome, row))
    }

    /// Runs to completion and returns the trace.
    pub fn run(mut self) -> MetricsTrace {
        let mut rows = Vec::new();
        while let Some((_, row)) = self.step() {
            rows.push(row);
        }
        MetricsTrace::from_rows(self.world.len(), rows)
    }
}

/// Runs `cfg` from round 0 until every node is dead or `max_rounds` is hit.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<MetricsTrace> {
    Ok(Simulation::new(cfg.clone())?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heterogeneity::total_initial_energy;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn case1_world() {
        let cfg = SimulationConfig::case1(ProtocolKind::Meecda, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let world = init_world(&cfg, &mut rng).unwrap();
        assert_eq!(world.len(), 100);
        let count = |c| world.iter().filter(|n| n.class == c).count();
        assert_eq!(count(NodeClass::Normal), 50);
        assert_eq!(count(NodeClass::Advanced), 30);
        assert_eq!(count(NodeClass::Super), 20);
        for n in &world {
            let e = match n.class {
                NodeClass::Normal => 0.5,
                NodeClass::Advanced => 1.0,
                NodeClass::Super => 1.5,
            };
            assert_eq!(n.energy, e);
            assert!((0.0..=100.0).contains(&n.pos.x) && (0.0..=100.0).contains(&n.pos.y));
        }
        let sum: f64 = world.iter().map(|n| n.energy).sum();
        assert!(rel(sum, total_initial_energy(&cfg.het)) < 1e-12);
        assert!(rel(sum, 85.0) < 1e-12);
    }

    #[test]
    fn same_seed_same_positions() {
        let cfg = SimulationConfig::case2(ProtocolKind::Meecda, 77);
        let a = Simulation::new(cfg.clone()).unwrap();
        let b = Simulation::new(cfg).unwrap();
        assert_eq!(a.world(), b.world());
    }

    #[test]
    fn empty_population_ends_immediately() {
        let mut cfg = SimulationConfig::case1(ProtocolKind::Meecda, 0);
        cfg.het.n = 0;
        let trace = run_simulation(&cfg).unwrap();
        assert!(trace.rows.is_empty());
    }

    #[test]
    fn zero_rounds_gives_empty_trace() {
        let mut cfg = SimulationConfig::case1(ProtocolKind::Meecda, 0);
        cfg.max_rounds = 0;
        assert!(run_simulation(&cfg).unwrap().rows.is_empty());
    }

    fn single_node_setup() -> (Vec<NodeState>, ProtocolSetup) {
        let setup = ProtocolSetup::new(
            ProtocolKind::Meecda,
            HeterogeneityConfig::case1(),
            RadioParams::standard(),
            Point::new(50.0, 50.0),
            8,
        )
        .unwrap();
        let mut n = NodeState::new(0, NodeClass::Normal, Point::new(20.0, 10.0), 0.5);
        n.rounds_since_ch = 0; // cannot be elected
        (vec![n], setup)
    }

    #[test]
    fn lone_node_sends_direct() {
        let (mut world, setup) = single_node_setup();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = run_round(&mut world, &setup, 3, &mut rng);
        assert_eq!(out.packets_to_bs, 1);
        let d = Point::new(20.0, 10.0).distance(&Point::new(50.0, 50.0));
        let want = crate::radio::tx_energy(&setup.radio, 4000, d).unwrap();
        assert!(rel(out.energy_spent_per_node[0], want) < 1e-15);
        assert!(rel(world[0].energy, 0.5 - want) < 1e-12);
    }

    #[test]
    fn all_asleep_spends_nothing() {
        let (mut world, setup) = single_node_setup();
        world[0].sleep_rounds_remaining = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = run_round(&mut world, &setup, 3, &mut rng);
        assert_eq!(out.packets_to_bs, 0);
        assert_eq!(out.total_spent(), 0.0);
        assert_eq!(out.plan.sleepers, BTreeSet::from([0]));
    }

    #[test]
    fn broke_sender_dies_and_loses_packet() {
        let (mut world, setup) = single_node_setup();
        world[0].energy = 1e-6;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = run_round(&mut world, &setup, 3, &mut rng);
        assert_eq!(out.packets_to_bs, 0);
        assert_eq!(out.deaths, BTreeSet::from([0]));
        assert_eq!(out.energy_spent_per_node[0], 1e-6);
        assert!(!world[0].alive);
        assert_eq!(out.total_residual, 0.0);
    }

    #[test]
    fn relayed_cluster_accounting() {
        // Normal head 0 at (10,10) with four members; super 5 relays.
        let radio = RadioParams::standard();
        let bs = Point::new(50.0, 50.0);
        let setup =
            ProtocolSetup::new(ProtocolKind::Meecda, HeterogeneityConfig::case1(), radio, bs, 8).unwrap();
        let positions = [
            (NodeClass::Normal, 10.0, 10.0),
            (NodeClass::Normal, 12.0, 10.0),
            (NodeClass::Normal, 10.0, 13.0),
            (NodeClass::Normal, 8.0, 9.0),
            (NodeClass::Normal, 11.0, 7.0),
            (NodeClass::Super, 20.0, 20.0),
        ];
        let mut world: Vec<NodeState> = positions
            .iter()
            .enumerate()
            .map(|(i, &(c, x, y))| {
                let mut n = NodeState::new(i, c, Point::new(x, y), 1.0);
                n.rounds_since_ch = 0;
                n
            })
            .collect();
        // round 16 is the last of the 17-round normal window; node 0 is the
        // only eligible node and its threshold is 1.
        world[0].rounds_since_ch = crate::node::NEVER_CH;
        let before = world.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = run_round(&mut world, &setup, 16, &mut rng);
        let plan = &out.plan;
        assert_eq!(plan.cluster_heads, BTreeSet::from([0]));
        assert_eq!(plan.relays.get(&0), Some(&5));
        // super at 14.1 m from head and 42.4 m from BS joins rather than sleeps
        assert_eq!(plan.memberships.len(), 5);

        let head = before[0].pos;
        let relay = before[5].pos;
        let members = 5u64;
        let want_head = members as f64 * radio.rx_packet()
            + (members + 1) as f64 * 4000.0 * radio.e_da
            + radio.tx_packet(head.distance(&relay));
        assert!(rel(out.energy_spent_per_node[0], want_head) < 1e-12);
        let want_relay = radio.tx_packet(relay.distance(&head))
            + radio.rx_packet()
            + radio.tx_packet(relay.distance(&bs));
        assert!(rel(out.energy_spent_per_node[5], want_relay) < 1e-12);
        assert_eq!(out.packets_to_bs, 1);
    }

    #[test]
    fn round_conserves_energy() {
        let mut sim = Simulation::new(SimulationConfig::case1(ProtocolKind::Meecda, 5)).unwrap();
        for _ in 0..500 {
            let before = sim.total_residual();
            let (out, _) = sim.step().unwrap();
            let after = sim.total_residual();
            assert!(((before - after) - out.total_spent()).abs() <= 1e-12 * before);
        }
    }
}

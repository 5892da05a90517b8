use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use meecda_sim::metrics::{parse_csv, TraceRow};
use meecda_sim::{plan_round, run_simulation, HeterogeneityConfig, MetricsTrace, ProtocolKind, Simulation, SimulationConfig};

fn protocol() -> impl Strategy<Value = ProtocolKind> {
    prop_oneof![
        Just(ProtocolKind::Meecda),
        Just(ProtocolKind::EecdaApprox),
        Just(ProtocolKind::LeachStyle)
    ]
}

fn small_config() -> impl Strategy<Value = SimulationConfig> {
    (5usize..60, 0.0f64..=1.0, 0.0f64..=1.0, 0.5f64..2.0, 1.0f64..4.0, protocol(), any::<u64>(), 30.0f64..200.0)
        .prop_map(|(n, m, m0, alpha, extra, protocol, seed, side)| {
            let het = HeterogeneityConfig {
                n,
                m,
                m0,
                alpha,
                beta: alpha + extra,
                e0: 0.01,
                p_opt: 0.1,
            };
            let mut cfg = SimulationConfig::with_het(het, protocol, seed);
            cfg.area_side = side;
            cfg.bs_pos = meecda_sim::Point::new(side / 2.0, side / 2.0);
            cfg.max_rounds = 3_000;
            cfg
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn run_invariants(cfg in small_config()) {
        let bs = cfg.bs_pos;
        let mut sim = Simulation::new(cfg).unwrap();
        // class counts are rounded, so this can differ from n E0 (1 + ...)
        let initial: f64 = sim.world().iter().map(|n| n.initial_energy).sum();
        let mut spent = 0.0;
        let mut alive = sim.alive_count();
        let mut dead = vec![false; sim.world().len()];
        loop {
            let before = sim.world().to_vec();
            let Some((out, row)) = sim.step() else { break };
            spent += out.total_spent();
            prop_assert!(out.plan.violations(&before, bs).is_empty());
            for id in out.plan.cluster_heads.iter().chain(out.plan.memberships.keys()).chain(&out.plan.direct_senders) {
                prop_assert!(!dead[*id], "dead node {id} planned");
            }
            prop_assert!(row.alive() <= alive);
            prop_assert!(out.packets_to_bs as usize <= alive);
            alive = row.alive();
            for n in sim.world() {
                prop_assert!(n.energy >= 0.0 && n.energy <= n.initial_energy);
                dead[n.id] = !n.alive;
            }
        }
        prop_assert!((spent + sim.total_residual() - initial).abs() <= 1e-9 * initial);
    }

    #[test]
    fn same_seed_same_trace(cfg in small_config()) {
        let a = run_simulation(&cfg).unwrap().to_csv();
        let b = run_simulation(&cfg).unwrap().to_csv();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(row(), 0..60), n in 1usize..500) {
        let mut cum = 0;
        let rows: Vec<TraceRow> = rows
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.round = i as u64;
                cum += r.packets_round;
                r.packets_cum = cum;
                r
            })
            .collect();
        let trace = MetricsTrace::from_rows(n, rows);
        let csv = trace.to_csv();
        let back = MetricsTrace::from_rows(n, parse_csv(&csv, "mem".as_ref()).unwrap());
        prop_assert_eq!(&back, &trace);
        prop_assert_eq!(back.to_csv(), csv);
    }
}

fn row() -> impl Strategy<Value = TraceRow> {
    (0usize..100, 0usize..100, 0usize..100, 0usize..20, 0usize..50, 0u64..50, 1e-12f64..1e3).prop_map(
        |(alive_normal, alive_advanced, alive_super, ch_count, sleeping, packets_round, residual)| TraceRow {
            round: 0,
            alive_normal,
            alive_advanced,
            alive_super,
            ch_count,
            sleeping,
            packets_round,
            packets_cum: 0,
            residual_j: meecda_sim::metrics::format_sig9(residual).parse().unwrap(),
        },
    )
}

#[test]
fn plans_ignore_energy_scale() {
    let mut sim = Simulation::new(SimulationConfig::case1(ProtocolKind::Meecda, 5)).unwrap();
    for _ in 0..3_000 {
        sim.step();
    }
    let setup = sim.config().setup().unwrap();
    let base = sim.world().to_vec();
    let r = sim.round();
    let mut reference = base.clone();
    let want = plan_round(&mut reference, &setup, r, &mut ChaCha8Rng::seed_from_u64(99));
    assert!(!want.relays.is_empty() || !want.memberships.is_empty());
    for k in [0.5, 3.0, 1000.0] {
        let mut scaled = base.clone();
        for n in &mut scaled {
            n.energy *= k;
            n.initial_energy *= k;
        }
        let got = plan_round(&mut scaled, &setup, r, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(got.memberships, want.memberships, "scale {k}");
        assert_eq!(got.relays, want.relays, "scale {k}");
        assert_eq!(got.sleepers, want.sleepers, "scale {k}");
    }
}

#[test]
fn presets_run_to_extinction() {
    for cfg in [
        SimulationConfig::case1(ProtocolKind::EecdaApprox, 3),
        SimulationConfig::case2(ProtocolKind::LeachStyle, 3),
    ] {
        let trace = run_simulation(&cfg).unwrap();
        let s = trace.summary;
        let (fnd, hnd, lnd) = (s.fnd.unwrap(), s.hnd.unwrap(), s.lnd.unwrap());
        assert!(fnd <= hnd && hnd <= lnd);
        assert_eq!(trace.rows.last().unwrap().alive(), 0);
        assert_eq!(trace.rows.len() as u64, lnd + 1);
    }
}

#[test]
fn different_seeds_differ() {
    let a = run_simulation(&SimulationConfig::case1(ProtocolKind::Meecda, 1)).unwrap();
    let b = run_simulation(&SimulationConfig::case1(ProtocolKind::Meecda, 2)).unwrap();
    assert_ne!(a.to_csv(), b.to_csv());
}

//! One seeded run to extinction, with lifetime milestones and a CSV trace.
//!
//! cargo run --release --example single_run -- [seed] [out.csv]

use meecda_sim::metrics::export_csv;
use meecda_sim::{run_simulation, ProtocolKind, SimulationConfig};

fn main() -> meecda_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let cfg = SimulationConfig::case1(ProtocolKind::Meecda, seed);
    let trace = run_simulation(&cfg)?;
    let s = &trace.summary;
    println!("meecda, case1, seed {seed}");
    println!("  first death  {:?}", s.fnd);
    println!("  half dead    {:?}", s.hnd);
    println!("  last death   {:?}", s.lnd);
    println!("  packets      {}", s.total_packets);

    for r in [0usize, 1000, 5000, 10_000, 20_000, 40_000] {
        if let Some(row) = trace.rows.get(r) {
            println!(
                "  round {r:>6}: alive {:>3} ({}/{}/{}), heads {:>2}, asleep {:>2}, residual {:.3} J",
                row.alive(),
                row.alive_normal,
                row.alive_advanced,
                row.alive_super,
                row.ch_count,
                row.sleeping,
                row.residual_j
            );
        }
    }
    if let Some(path) = args.next() {
        export_csv(&trace, &path)?;
        println!("trace written to {path}");
    }
    Ok(())
}

//! Same seed, same field, three protocols.
//!
//! cargo run --release --example protocol_comparison -- [seed]

use meecda_sim::compare::residual_dominance;
use meecda_sim::{compare_summaries, ProtocolKind, RunResult, SimulationConfig};

fn main() -> meecda_sim::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let runs: Vec<RunResult> = ProtocolKind::ALL
        .into_iter()
        .map(|p| RunResult::run(SimulationConfig::case2(p, seed)))
        .collect::<Result<_, _>>()?;

    println!("{:<14} {:>7} {:>7} {:>7} {:>9}", "case2", "FND", "HND", "LND", "packets");
    for r in &runs {
        let s = &r.trace.summary;
        let show = |v: Option<u64>| v.map_or("-".into(), |v| v.to_string());
        println!(
            "{:<14} {:>7} {:>7} {:>7} {:>9}",
            r.config.protocol.name(),
            show(s.fnd),
            show(s.hnd),
            show(s.lnd),
            s.total_packets
        );
    }

    let report = compare_summaries(&runs[0], &runs[1])?;
    print!("\n{}", report.render());
    match residual_dominance(&runs[0].trace, &runs[1].trace) {
        Some(r) => println!("meecda keeps more residual energy from round {r} on"),
        None => println!("no residual dominance for this seed"),
    }
    Ok(())
}

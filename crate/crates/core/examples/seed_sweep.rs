//! Multi-seed sweep with mean ± std of the lifetime milestones and a mean
//! alive-nodes curve written as plot data.
//!
//! cargo run --release --example seed_sweep -- [seeds] [out_dir]

use std::path::PathBuf;

use meecda_sim::compare::{mean_curve, write_columns, MeanStd};
use meecda_sim::metrics::format_sig9;
use meecda_sim::{aggregate, sweep, MetricsTrace, ProtocolKind, SimulationConfig};

fn stat(s: Option<MeanStd>) -> String {
    s.map_or("-".into(), |s| format!("{:.0} ± {:.0}", s.mean, s.std))
}

fn main() -> meecda_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "target/seed_sweep".into()));
    std::fs::create_dir_all(&out).map_err(|e| meecda_sim::Error::Io { path: out.clone(), source: e })?;

    let seeds: Vec<u64> = (0..n).collect();
    let protocols = [ProtocolKind::Meecda, ProtocolKind::EecdaApprox];
    let cells = sweep(&SimulationConfig::case1(ProtocolKind::Meecda, 0), &protocols, &seeds);

    let mut curves = Vec::new();
    for p in protocols {
        let traces: Vec<&MetricsTrace> = cells
            .iter()
            .filter(|(q, _, _)| *q == p)
            .filter_map(|(_, _, r)| r.as_ref().ok().map(|r| &r.trace))
            .collect();
        let agg = aggregate(traces.iter().copied());
        println!(
            "{:<13} FND {:>13}  HND {:>13}  LND {:>13}  packets {:>15}",
            p.name(),
            stat(agg.fnd),
            stat(agg.hnd),
            stat(agg.lnd),
            stat(agg.total_packets)
        );
        let rounds = traces.iter().map(|t| t.rows.len()).max().unwrap_or(0);
        curves.push(mean_curve(&traces, rounds));
    }

    let len = curves.iter().map(|c| c.alive.len()).max().unwrap_or(0);
    let rows = (0..len).step_by(50).map(|r| {
        let mut row = vec![r.to_string()];
        row.extend(curves.iter().map(|c| format_sig9(c.alive.get(r).copied().unwrap_or(0.0))));
        row
    });
    let path = out.join("alive.dat");
    write_columns(&path, &["round", "meecda", "eecda-approx"], rows)?;
    println!("mean alive curve written to {}", path.display());
    Ok(())
}

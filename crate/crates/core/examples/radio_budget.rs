//! Per-packet and per-round energy costs under the first-order radio model.
//!
//! cargo run --example radio_budget

use meecda_sim::radio::{
    ch_round_energy, crossover_distance, non_ch_round_energy, optimal_clusters, optimal_probability,
    total_round_energy, tx_energy,
};
use meecda_sim::RadioParams;

fn main() -> meecda_sim::Result<()> {
    let p = RadioParams::standard();
    let d0 = crossover_distance(&p);
    println!("crossover distance d0 = {d0:.4} m");

    println!("{:>8} {:>14} {:>14}", "d (m)", "tx 4000 b (J)", "tx, d0=70 (J)");
    let fixed = RadioParams::standard_fixed_d0();
    for d in [0.0, 25.0, 50.0, 70.0, 87.7, 100.0, 150.0] {
        println!(
            "{d:>8.1} {:>14.4e} {:>14.4e}",
            tx_energy(&p, p.packet_bits, d)?,
            tx_energy(&fixed, p.packet_bits, d)?
        );
    }

    let (n, k) = (100, 10);
    println!();
    println!("head, 10 members/cluster, 30 m to sink: {:.4e} J", ch_round_energy(&p, n, k, 30.0)?);
    println!("member, 20 m to head:                  {:.4e} J", non_ch_round_energy(&p, 20.0)?);
    println!("whole network per round:               {:.4e} J", total_round_energy(&p, n, k, 30.0, 20.0)?);

    let k_opt = optimal_clusters(&p, n, 100.0, 50.0)?;
    println!("k_opt for a 100 m field = {k_opt:.2}, p_opt = {:.3}", optimal_probability(k_opt, n)?);
    Ok(())
}

//! Steps a network round by round and shows what the setup phase decided:
//! heads, their members, relays for normal heads, and nodes that chose to sleep.
//!
//! cargo run --example relay_and_sleep

use meecda_sim::{ProtocolKind, Simulation, SimulationConfig};

fn main() -> meecda_sim::Result<()> {
    let mut sim = Simulation::new(SimulationConfig::case1(ProtocolKind::Meecda, 3))?;
    let mut shown = 0;
    while shown < 3 {
        let world = sim.world().to_vec();
        let Some((out, _)) = sim.step() else { break };
        let plan = &out.plan;
        if plan.relays.is_empty() {
            continue;
        }
        shown += 1;
        println!("round {}: {} heads, {} asleep, {} direct", plan.round_index, plan.cluster_heads.len(), plan.sleepers.len(), plan.direct_senders.len());
        for (head, members) in plan.clusters() {
            let h = &world[head];
            let route = match plan.relays.get(&head) {
                Some(&r) => format!("via {} #{r}", world[r].class),
                None => "direct".into(),
            };
            println!("  {:<8} #{head:<3} ({:5.1},{:5.1})  {:>2} members  {route}", h.class, h.pos.x, h.pos.y, members.len());
        }
        let sleepers: Vec<_> = plan.sleepers.iter().collect();
        println!("  sleeping: {sleepers:?}");
        println!("  spent {:.4e} J, {} packets reached the sink", out.total_spent(), out.packets_to_bs);
    }
    Ok(())
}

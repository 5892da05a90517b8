//! Class sizes, budgets and election parameters for the two built-in parameter sets.
//!
//! cargo run --example heterogeneity_classes

use meecda_sim::heterogeneity::{class_counts, epoch_length, initial_energy, total_initial_energy};
use meecda_sim::{HeterogeneityConfig, NodeClass, ProtocolKind, SimulationConfig};

fn main() -> meecda_sim::Result<()> {
    for (name, het) in [("case1", HeterogeneityConfig::case1()), ("case2", HeterogeneityConfig::case2())] {
        let counts = class_counts(&het)?;
        let setup = SimulationConfig::with_het(het, ProtocolKind::Meecda, 0).setup()?;
        println!(
            "{name}: m={} m0={} alpha={} beta={}  total {:.1} J, epoch {} rounds",
            het.m,
            het.m0,
            het.alpha,
            het.beta,
            total_initial_energy(&het),
            epoch_length(&het)
        );
        for class in NodeClass::ALL {
            let e = setup.election(class);
            println!(
                "  {class:<9} {:>3} nodes  {:.2} J each  p={:.4}  window {}",
                counts.of(class),
                initial_energy(&het, class),
                e.probability,
                e.window
            );
        }
    }
    Ok(())
}

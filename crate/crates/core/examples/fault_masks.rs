//! Fault scenarios, effective RIS profiles and sub-array bookkeeping.
//!
//! cargo run --example fault_masks

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risfaultsim::channelgeom::UpaGeometry;
use risfaultsim::fault::{effective_profile, sa_isolation_mask, sa_partition, sa_statuses, sample_fault_scenario, PhaseProfile};

fn main() -> risfaultsim::Result<()> {
    let geom = UpaGeometry::half_wavelength(9, 9, 90e9)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let statuses = sample_fault_scenario(&mut rng, geom.len(), 15)?;
    println!("{} faulty elements: {:?}", statuses.fault_count(), statuses.faulty_indices());

    let phases = PhaseProfile::from_angles(&(0..geom.len()).map(|i| 0.1 * i as f64).collect::<Vec<_>>());
    let profile = effective_profile(&phases, &statuses)?;
    let zeros = profile.as_vector().iter().filter(|v| v.norm() == 0.0).count();
    println!("effective profile has {zeros} zero entries");

    // K = 9 tiles of 3x3 elements, numbered row-major
    let partition = sa_partition(&geom, 9)?;
    println!("layout {:?}, {} elements per SA", partition.layout(), partition.sa_size());
    for m in 0..9 {
        let row: Vec<String> = (0..9).map(|n| partition.sa_of(geom.index(m, n)).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    let sa = sa_statuses(&statuses, &partition)?;
    println!("faulty SAs: {:?}", sa.faulty_sas());

    let isolated = sa_isolation_mask(&partition, 4, &statuses)?;
    println!(
        "isolating SA 4 leaves {} active elements (of {})",
        isolated.len() - isolated.fault_count(),
        partition.sa_size()
    );
    Ok(())
}

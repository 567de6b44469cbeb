//! RIS and BS received signals, the linear operator A, and AWGN.
//!
//! cargo run --example signal_model

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risfaultsim::channelgeom::Position3D;
use risfaultsim::fault::{effective_profile, FaultStatusVector, PhaseProfile};
use risfaultsim::scene::SceneConfig;
use risfaultsim::signal::{bs_received, effective_bs_matrix, ris_received, NoiseSpec, Pilot};

fn main() -> risfaultsim::Result<()> {
    let scene = SceneConfig::default();
    let user = Position3D::new(30.0, 6.0, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ch = scene.draw_environment(&mut rng, user)?.realize(&scene, user)?;
    let n = ch.g_ur.len();

    let pilot = Pilot::new(Complex64::new(0.0, 1.0))?;
    let statuses = FaultStatusVector::with_faults(n, &[3, 40, 77])?;
    let profile = effective_profile(&PhaseProfile::unity(n), &statuses)?;

    let y_r = ris_received(&ch.g_ur, pilot);
    let clean = bs_received::<ChaCha8Rng>(&ch.h_rb, &profile, &ch.g_ur, pilot, None)?;
    let a = effective_bs_matrix(&ch.h_rb, &ch.g_ur, pilot)?;
    let via_a = &a * profile.as_vector();
    println!("RIS signal: {} entries; BS signal: {} entries", y_r.0.len(), clean.0.len());
    println!("||y - A w|| = {:.2e}", (&clean.0 - via_a).norm());

    for snr in [0.0, 10.0, 30.0] {
        let noisy = bs_received(&ch.h_rb, &profile, &ch.g_ur, pilot, Some((NoiseSpec::new(snr)?, &mut rng)))?;
        let measured = clean.0.norm_squared() / (&noisy.0 - &clean.0).norm_squared();
        println!("target {snr:>4} dB -> realized {:.2} dB", 10.0 * measured.log10());
    }
    Ok(())
}
